import itertools
from fractions import Fraction

import numpy as np
import pytest

from src.components.similarity import (
    EmbedderKind,
    EmbedderSettings,
    FallbackEmbedder,
    ReferenceEmbedder,
    build_embedder,
    embed_text,
    env_score,
    inner_product,
    iou,
    length_overlap,
    reference_embed,
    token_bucket,
)
from src.components.state import InternalState
from src.core.exceptions import ContractViolation, EmbeddingTransportError

from .helpers import env


class TestKernels:
    def test_iou_identity(self):
        assert iou(env("a", "b"), env("a", "b")) == 1.0

    def test_iou_disjoint(self):
        assert iou(env("a"), env("b", "c")) == 0.0

    def test_iou_partial_overlap(self):
        assert iou(env("a", "b", "c"), env("b", "c", "d")) == 0.5

    def test_iou_both_empty(self):
        assert iou(env(), env()) == 1.0

    def test_iou_one_empty(self):
        assert iou(env(), env("a")) == 0.0

    @pytest.mark.parametrize(
        "lm, lq, expected",
        [(7, 7, 1.0), (10, 5, 0.5), (5, 10, 0.5), (0, 4, 0.0), (0, 0, 1.0)],
    )
    def test_length_overlap(self, lm, lq, expected):
        assert length_overlap(lm, lq) == expected

    def test_length_overlap_rejects_negative(self):
        with pytest.raises(ContractViolation):
            length_overlap(-1, 3)

    def test_env_score_examples(self):
        assert env_score(env("a", "b"), env("a", "b")) == 1.0
        assert env_score(env("a", "b", "c"), env("b", "c", "d")) == 0.5
        assert env_score(env("a"), env("b", "c")) == 0.0

    def test_env_score_matches_exact_rationals(self):
        rng = np.random.default_rng(7)
        vocabulary = [f"t{i}" for i in range(12)]
        for _ in range(300):
            a = set(rng.choice(vocabulary, size=int(rng.integers(0, 8)), replace=False).tolist())
            b = set(rng.choice(vocabulary, size=int(rng.integers(0, 8)), replace=False).tolist())
            union = len(a | b)
            jaccard = Fraction(len(a & b), union) if union else Fraction(1)
            longest = max(len(a), len(b))
            overlap = 1 - Fraction(abs(len(a) - len(b)), longest) if longest else Fraction(1)
            assert env_score(env(*a), env(*b)) == pytest.approx(float(jaccard * overlap), abs=1e-12)

    def test_iou_is_symmetric_and_grows_with_shared_tokens(self):
        rng = np.random.default_rng(21)
        vocabulary = [f"t{i}" for i in range(12)]
        for _ in range(300):
            a = set(rng.choice(vocabulary, size=int(rng.integers(0, 8)), replace=False).tolist())
            b = set(rng.choice(vocabulary, size=int(rng.integers(0, 8)), replace=False).tolist())
            assert iou(env(*a), env(*b)) == iou(env(*b), env(*a))
            fresh = f"shared{len(a)}{len(b)}"
            assert iou(env(*a, fresh), env(*b, fresh)) >= iou(env(*a), env(*b))

    def test_env_score_bounds_and_symmetry(self):
        a, b = env("x", "y", "z"), env("y")
        assert 0.0 <= env_score(a, b) <= 1.0
        assert env_score(a, b) == env_score(b, a)

    def test_inner_product_examples(self):
        e1, e2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        assert inner_product(e1, e1) == 1.0
        assert inner_product(e1, e2) == 0.0
        assert inner_product(np.array([0.6, 0.8]), np.array([0.8, 0.6])) == pytest.approx(0.96, abs=1e-12)

    def test_inner_product_dimension_mismatch(self):
        with pytest.raises(ContractViolation):
            inner_product(np.zeros(2), np.zeros(3))


class TestReferenceEmbedder:
    def test_deterministic(self):
        state = InternalState(directive="open cart", progress_note="logged in")
        assert np.array_equal(reference_embed(state), reference_embed(state))
        assert np.array_equal(ReferenceEmbedder().embed(state), reference_embed(state))

    def test_unit_norm(self):
        vector = reference_embed(InternalState(directive="open the checkout page"))
        assert inner_product(vector, vector) == pytest.approx(1.0, abs=1e-12)

    def test_unit_norm_on_random_texts(self):
        rng = np.random.default_rng(22)
        words = ["open", "cart", "checkout", "shoes", "page", "pay", "now", "logged", "in"]
        for _ in range(200):
            directive = " ".join(rng.choice(words, size=int(rng.integers(1, 6))).tolist())
            progress = " ".join(rng.choice(words, size=int(rng.integers(0, 4))).tolist())
            state = InternalState(directive=directive, progress_note=progress)
            vector = reference_embed(state)
            counts = np.zeros(vector.shape)
            for token in state.text.split():
                bucket, sign = token_bucket(token)
                counts[bucket] += sign
            if counts.any():
                assert inner_product(vector, vector) == pytest.approx(1.0, abs=1e-9)
            else:
                assert not vector.any()

    def test_empty_text_is_zero_vector(self):
        vector = embed_text("")
        assert vector.shape == (256,)
        assert not vector.any()

    def test_case_and_spacing_do_not_matter(self):
        assert np.array_equal(embed_text("Open  Cart"), embed_text("open cart"))

    def test_collision_free_pair_is_orthogonal(self):
        vocabulary = [f"w{i}" for i in range(40)]
        buckets = {}
        for word in vocabulary:
            buckets.setdefault(token_bucket(word)[0], []).append(word)
        singles = [words[0] for words in buckets.values() if len(words) == 1]
        left, right = singles[:2], singles[2:4]
        assert len(right) == 2
        score = inner_product(embed_text(" ".join(left)), embed_text(" ".join(right)))
        assert score == 0.0

    def test_vectors_are_read_only(self):
        vector = embed_text("buy shoes")
        with pytest.raises(ValueError):
            vector[0] = 1.0

    def test_rejects_bad_dimension(self):
        with pytest.raises(ContractViolation):
            ReferenceEmbedder(dim=0)


class _BrokenRemote(ReferenceEmbedder):
    def __init__(self):
        super().__init__()
        self.calls = 0

    def embed_texts(self, texts):
        self.calls += 1
        raise EmbeddingTransportError("service down")


class TestEmbedderSelection:
    def test_reference_kind(self):
        assert isinstance(build_embedder(EmbedderSettings(kind=EmbedderKind.REFERENCE)), ReferenceEmbedder)

    def test_auto_without_endpoint_uses_reference(self, monkeypatch):
        monkeypatch.delenv("PRAXIS_EMBED_URL", raising=False)
        monkeypatch.setattr("src.components.similarity.service.settings.PRAXIS_EMBED_URL", None)
        assert isinstance(build_embedder(EmbedderSettings()), ReferenceEmbedder)

    def test_remote_without_endpoint_is_rejected(self, monkeypatch):
        monkeypatch.delenv("PRAXIS_EMBED_URL", raising=False)
        monkeypatch.setattr("src.components.similarity.service.settings.PRAXIS_EMBED_URL", None)
        with pytest.raises(ContractViolation):
            build_embedder(EmbedderSettings(kind=EmbedderKind.REMOTE))

    def test_environment_endpoint_selects_remote(self, monkeypatch):
        monkeypatch.setenv("PRAXIS_EMBED_URL", "http://embed.invalid/v1")
        built = build_embedder(EmbedderSettings(fallback=True))
        assert isinstance(built, FallbackEmbedder)
        assert built.remote.endpoint == "http://embed.invalid/v1"

    def test_config_endpoint_wins_over_environment(self, monkeypatch):
        monkeypatch.setenv("PRAXIS_EMBED_URL", "http://env.invalid")
        built = build_embedder(EmbedderSettings(endpoint="http://config.invalid", fallback=False))
        assert built.endpoint == "http://config.invalid"

    def test_fallback_switches_once_and_stays(self):
        remote = _BrokenRemote()
        fallback = FallbackEmbedder(remote, ReferenceEmbedder())
        first = fallback.embed_texts(["buy shoes"])
        second = fallback.embed_texts(["buy shoes"])
        assert fallback.degraded
        assert remote.calls == 1
        assert np.array_equal(first[0], embed_text("buy shoes"))
        assert np.array_equal(second[0], first[0])
