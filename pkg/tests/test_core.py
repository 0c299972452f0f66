import math

import pytest
from hypothesis import given, strategies as st

from roseentropy import GroupSample, RoseLengths, ValidationError, validate_lengths


def test_pass_through():
    r = validate_lengths([1.0, 2.0])
    assert r.k == 2
    assert r.lengths == (1.0, 2.0)


@pytest.mark.parametrize(
    "raw, message",
    [
        ([1.0, 0.0], "nonpositive length at index 1"),
        ([], "empty length list"),
        ([1.0, -3.0, 2.0], "nonpositive length at index 1"),
        ([math.inf], "non-finite length at index 0"),
        ([1.0, math.nan], "non-finite length at index 1"),
        (["x"], "non-numeric length at index 0"),
    ],
)
def test_rejects(raw, message):
    with pytest.raises(ValidationError, match=message):
        validate_lengths(raw)


def test_duplicates_keep_multiplicity():
    assert validate_lengths([2, 2, 2]).k == 3


@given(st.lists(st.floats(min_value=1e-6, max_value=1e6), min_size=1, max_size=10))
def test_idempotent(raw):
    once = validate_lengths(raw)
    assert validate_lengths(once) == once
    assert validate_lengths(list(once.lengths)) == once


def test_value_equality():
    assert RoseLengths((1, 2)) == RoseLengths((1.0, 2.0))
    assert RoseLengths((1, 2)) != RoseLengths((2, 1))
    assert GroupSample((1, 2), 0.5) == GroupSample((1.0, 2.0), 0.5)


def test_group_sample_validation():
    with pytest.raises(ValidationError, match="nonpositive displacement at index 0"):
        GroupSample((0.0,), 1.0)
    with pytest.raises(ValidationError, match="delta"):
        GroupSample((1.0,), -1.0)
    assert GroupSample((1.0,), 0).delta == 0.0
