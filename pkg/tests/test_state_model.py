import numpy as np
import pytest
from pydantic import ValidationError

from src.components.state import (
    ActionKind,
    ActionRecord,
    EnvState,
    InternalState,
    canonicalize_token,
    env_state_from_observation,
)
from src.core.exceptions import EmptyTokenError


def test_canonicalize_collapses_case_and_whitespace():
    assert canonicalize_token("  Submit   Button ") == "submit button"


def test_canonicalize_is_idempotent():
    assert canonicalize_token("submit button") == "submit button"
    assert canonicalize_token(canonicalize_token("\tCart\nTotal ")) == "cart total"


ALPHABET = list("abcXYZ\u00df\u00c9 \t\n-_")


def random_text(rng, longest=12):
    return "".join(rng.choice(ALPHABET, size=int(rng.integers(0, longest + 1))).tolist())


def test_canonicalize_is_idempotent_on_random_text():
    rng = np.random.default_rng(11)
    for _ in range(500):
        raw = random_text(rng)
        try:
            once = canonicalize_token(raw)
        except EmptyTokenError:
            assert not raw.strip()
            continue
        assert canonicalize_token(once) == once
        assert once == once.strip()
        assert "  " not in once


def test_canonicalize_rejects_blank():
    with pytest.raises(EmptyTokenError):
        canonicalize_token("   ")


def test_observation_dedups_after_case_fold():
    state = env_state_from_observation(["A", "a", "B"])
    assert state.features == frozenset({"a", "b"})
    assert state.length == 2


def test_observation_empty():
    state = env_state_from_observation([])
    assert state.features == frozenset()
    assert state.length == 0


def test_observation_strips_before_union():
    state = env_state_from_observation(["x", " y ", "y"])
    assert state.features == frozenset({"x", "y"})
    assert state.length == 2


def test_observation_skips_blank_tokens():
    assert env_state_from_observation(["ok", "  ", ""]).features == frozenset({"ok"})


def test_env_state_canonicalizes_direct_construction():
    assert EnvState(features=frozenset({"Page  Home"})).features == frozenset({"page home"})


def test_env_state_serializes_sorted():
    state = EnvState(features=frozenset({"c", "a", "b"}))
    assert state.model_dump_json() == '{"features":["a","b","c"]}'


def test_internal_state_text():
    assert InternalState(directive="buy shoes").text == "buy shoes"
    assert InternalState(directive="buy shoes", progress_note="cart open").text == "buy shoes cart open"


def test_internal_state_needs_directive():
    with pytest.raises(ValidationError):
        InternalState(directive="  ")


def test_action_record_kind_and_target():
    action = ActionRecord(kind="click", target=" Submit ")
    assert action.kind is ActionKind.CLICK
    assert action.target == "submit"
    assert action.describe() == 'click "submit"'
    with pytest.raises(ValidationError):
        ActionRecord(kind="hover", target="x")


def test_action_records_are_hashable_values():
    assert len({ActionRecord(kind="click", target="a"), ActionRecord(kind="click", target="A")}) == 1


def test_observation_ignores_order_and_never_grows():
    rng = np.random.default_rng(12)
    for _ in range(300):
        raw = [random_text(rng, longest=6) for _ in range(int(rng.integers(0, 10)))]
        state = env_state_from_observation(raw)
        shuffled = env_state_from_observation(rng.permutation(raw).tolist() if raw else [])
        assert state == shuffled
        assert state.length <= len(raw)
