import time

import numpy as np
import pytest

from src.components.retrieval import (
    RetrievalQuery,
    RetrievalResult,
    brute_force_retrieve,
    resolve_exemplars,
    retrieve,
    score_all,
    topk_indices,
)
from src.components.similarity import ReferenceEmbedder
from src.components.state import InternalState
from src.core.exceptions import ContractViolation

from .helpers import TableEmbedder, env, make_entries


def query(tokens, directive="buy shoes", k=3, tau=0.5, progress=""):
    return RetrievalQuery(
        query_env=env(*tokens),
        query_internal=InternalState(directive=directive, progress_note=progress),
        k=k,
        tau=tau,
    )


@pytest.fixture
def fixture_store():
    """Four entries; entry 3 shares the query directive, entry 0 does not"""
    return make_entries(
        [
            {"env_pre": ("a", "b"), "directive": "read news"},
            {"env_pre": ("a", "b", "c"), "directive": "buy shoes"},
            {"env_pre": ("x", "y"), "directive": "buy shoes"},
            {"env_pre": ("a", "b"), "directive": "buy shoes"},
        ]
    )


class TestTopK:
    def test_picks_largest(self):
        assert topk_indices([0.2, 0.9, 0.5], 2) == [1, 2]

    def test_tie_prefers_smaller_index(self):
        assert topk_indices([0.5, 0.5], 1) == [0]

    def test_k_beyond_length_returns_all(self):
        assert sorted(topk_indices([0.1, 0.3, 0.2], 10)) == [0, 1, 2]

    def test_k_must_be_positive(self):
        with pytest.raises(ContractViolation):
            topk_indices([0.1], 0)


class TestScoreAll:
    def test_empty_store(self, embedder):
        assert score_all([], query(["a"]), embedder) == []

    def test_identity(self, embedder):
        entries = make_entries([{"env_pre": ("a", "b"), "directive": "buy shoes"}])
        [(s_env, s_int)] = score_all(entries, query(["a", "b"]), embedder)
        assert s_env == 1.0
        assert s_int == pytest.approx(1.0, abs=1e-12)

    def test_fixture_scores(self, fixture_store):
        table = TableEmbedder({"buy shoes": [1.0, 0.0], "read news": [0.6, 0.8]})
        pairs = score_all(fixture_store, query(["a", "b"]), table)
        assert [p.s_env for p in pairs] == pytest.approx([1.0, 4 / 9, 0.0, 1.0], abs=1e-12)
        assert [p.s_int for p in pairs] == pytest.approx([0.6, 1.0, 1.0, 1.0], abs=1e-12)

    def test_embeds_each_internal_state_once_per_call(self, fixture_store):
        table = TableEmbedder({"buy shoes": [1.0, 0.0]})
        score_all(fixture_store, query(["a"]), table)
        assert table.calls == 1


class TestRetrieve:
    def test_fixture_gives_three_then_zero(self, fixture_store, embedder):
        result = retrieve(fixture_store, query(["a", "b"]), embedder)
        assert result.indices == [3, 0]

    def test_oracle_agrees_on_fixture(self, fixture_store, embedder):
        assert brute_force_retrieve(fixture_store, query(["a", "b"]), embedder).indices == [3, 0]

    def test_threshold_applies_after_top_k(self, embedder):
        # entry 2 clears tau but is pushed out of the env top-2 by two exact matches
        entries = make_entries(
            [
                {"env_pre": ("a", "b", "c"), "directive": "other task"},
                {"env_pre": ("a", "b", "c"), "directive": "buy shoes"},
                {"env_pre": ("a", "b"), "directive": "buy shoes"},
            ]
        )
        q = query(["a", "b", "c"], k=2, tau=0.3)
        assert retrieve(entries, q, embedder).indices == [1, 0]
        assert 2 not in brute_force_retrieve(entries, q, embedder).indices

    def test_order_is_non_increasing_in_internal_score(self, embedder):
        directives = ["x y", "open cart", "buy shoes", "pay now"]
        entries = make_entries(
            [{"env_pre": ("a", f"t{i}"), "directive": d} for i, d in enumerate(directives)]
        )
        result = retrieve(entries, query(["a"], k=4, tau=0.0), embedder)
        s_int = [pair.s_int for pair in result.scores]
        assert s_int == sorted(s_int, reverse=True)
        assert result.indices[0] == 2

    def test_tau_zero_returns_everything(self, embedder):
        entries = make_entries([{"env_pre": (t,)} for t in "abcd"])
        assert sorted(retrieve(entries, query(["z"], k=10, tau=0.0), embedder).indices) == [0, 1, 2, 3]

    def test_tau_one_without_exact_match_is_empty(self, embedder):
        entries = make_entries([{"env_pre": ("a", "b")}, {"env_pre": ("a",)}])
        assert len(retrieve(entries, query(["a", "c"], k=5, tau=1.0), embedder)) == 0

    def test_exact_match_comes_first(self, embedder):
        entries = make_entries(
            [{"env_pre": ("a", "b")}, {"env_pre": ("p", "q", "r")}, {"env_pre": ("a", "c")}]
        )
        result = retrieve(entries, query(["p", "q", "r"], k=1, tau=0.9), embedder)
        assert result.indices == [1]

    def test_empty_store(self, embedder):
        assert retrieve([], query(["a"]), embedder) == RetrievalResult()
        assert brute_force_retrieve([], query(["a"]), embedder) == RetrievalResult()

    def test_resolve_keeps_result_order(self, fixture_store, embedder):
        result = retrieve(fixture_store, query(["a", "b"]), embedder)
        exemplars = resolve_exemplars(fixture_store, result)
        assert [ex.entry.id for ex in exemplars] == [3, 0]
        assert exemplars[0].s_env == 1.0


def test_query_validates_ranges():
    with pytest.raises(ValueError):
        query(["a"], k=0)
    with pytest.raises(ValueError):
        query(["a"], tau=1.5)


def test_result_rejects_duplicate_ids():
    with pytest.raises(ValueError):
        RetrievalResult(indices=[1, 1], scores=[(1.0, 1.0), (1.0, 1.0)])


def test_matches_brute_force_on_random_instances():
    rng = np.random.default_rng(2024)
    embedder = ReferenceEmbedder(dim=32)
    vocabulary = [f"tok{i}" for i in range(10)]
    directives = ["open cart", "open page", "pay now", "find shoes", "open shoes page"]

    elapsed = 0.0
    for _ in range(1000):
        size = int(rng.integers(0, 201))
        specs = [
            {
                "env_pre": tuple(rng.choice(vocabulary, size=int(rng.integers(0, 6)), replace=False).tolist()),
                "directive": directives[int(rng.integers(len(directives)))],
            }
            for _ in range(size)
        ]
        entries = make_entries(specs)
        q = query(
            rng.choice(vocabulary, size=int(rng.integers(0, 6)), replace=False).tolist(),
            directive=directives[int(rng.integers(len(directives)))],
            k=int(rng.integers(1, 12)),
            tau=float(rng.choice([0.0, 0.2, 0.5, 1.0])),
        )
        started = time.perf_counter()
        fast = retrieve(entries, q, embedder)
        slow = brute_force_retrieve(entries, q, embedder)
        elapsed += time.perf_counter() - started
        assert fast.indices == slow.indices
    assert elapsed < 30


def random_instance(rng, vocabulary, directives):
    specs = [
        {
            "env_pre": tuple(rng.choice(vocabulary, size=int(rng.integers(0, 5)), replace=False).tolist()),
            "directive": directives[int(rng.integers(len(directives)))],
        }
        for _ in range(int(rng.integers(0, 40)))
    ]
    tokens = rng.choice(vocabulary, size=int(rng.integers(0, 5)), replace=False).tolist()
    return make_entries(specs), tokens, directives[int(rng.integers(len(directives)))]


class TestRetrievalProperties:
    vocabulary = [f"tok{i}" for i in range(6)]
    directives = ["open cart", "pay now", "find shoes", "open shoes page"]

    def test_raising_tau_only_removes_entries(self):
        rng = np.random.default_rng(31)
        embedder = ReferenceEmbedder(dim=32)
        for _ in range(200):
            entries, tokens, directive = random_instance(rng, self.vocabulary, self.directives)
            k = int(rng.integers(1, 10))
            low, high = sorted(float(t) for t in rng.uniform(0.0, 1.0, size=2))
            loose = retrieve(entries, query(tokens, directive=directive, k=k, tau=low), embedder)
            strict = retrieve(entries, query(tokens, directive=directive, k=k, tau=high), embedder)
            assert set(strict.indices) <= set(loose.indices)

    def test_growing_k_only_adds_entries(self):
        rng = np.random.default_rng(32)
        embedder = ReferenceEmbedder(dim=32)
        for _ in range(200):
            entries, tokens, directive = random_instance(rng, self.vocabulary, self.directives)
            k = int(rng.integers(1, 10))
            tau = float(rng.choice([0.0, 0.3, 0.6]))
            narrow = retrieve(entries, query(tokens, directive=directive, k=k, tau=tau), embedder)
            wide = retrieve(entries, query(tokens, directive=directive, k=k + 1, tau=tau), embedder)
            assert set(narrow.indices) <= set(wide.indices)

    def test_exact_matches_always_win(self):
        rng = np.random.default_rng(33)
        embedder = ReferenceEmbedder(dim=32)
        for _ in range(200):
            entries, tokens, directive = random_instance(rng, self.vocabulary, self.directives)
            exact = sorted(e.id for e in entries if e.env_pre.features == frozenset(tokens))
            k = int(rng.integers(1, 10))
            tau = float(rng.choice([0.0, 0.5, 1.0]))
            result = retrieve(entries, query(tokens, directive=directive, k=k, tau=tau), embedder)
            if len(exact) <= k:
                assert set(exact) <= set(result.indices)
            else:
                assert sorted(result.indices) == exact[:k]

    def test_same_inputs_give_same_result(self):
        rng = np.random.default_rng(34)
        for _ in range(100):
            entries, tokens, directive = random_instance(rng, self.vocabulary, self.directives)
            q = query(tokens, directive=directive, k=int(rng.integers(1, 10)), tau=float(rng.uniform()))
            first = retrieve(entries, q, ReferenceEmbedder(dim=32))
            assert retrieve(entries, q, ReferenceEmbedder(dim=32)) == first
            assert retrieve(list(entries), q, ReferenceEmbedder(dim=32)) == first
