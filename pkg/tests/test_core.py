import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from attrmetric.core import (
    AttributeMatrix,
    AttributeVector,
    DuplicateNameError,
    NonBinaryEntryError,
    RaggedColumnsError,
    ShapeMismatchError,
    SubspaceSplit,
    from_zero_one,
    to_zero_one,
    validate,
)
from attrmetric.reconstruct import delta_cvx, delta_jp


def test_validate_accepts_well_formed():
    validate(np.array([[1, 1], [-1, 1]]))


def test_validate_rejects_zero():
    with pytest.raises(NonBinaryEntryError):
        validate(np.array([[1, 0], [-1, 1]]))


def test_validate_rejects_ragged_columns():
    with pytest.raises(RaggedColumnsError):
        validate([[1, -1, 1], [1, 1, 1, -1]])


def test_duplicate_names():
    with pytest.raises(DuplicateNameError):
        AttributeMatrix(np.ones((3, 2), dtype=int), ("a", "a"))


def test_names_length_must_match():
    with pytest.raises(ShapeMismatchError):
        AttributeMatrix(np.ones((3, 2), dtype=int), ("a",))


def test_matrix_is_read_only():
    M = AttributeMatrix(np.ones((2, 2), dtype=int))
    with pytest.raises(ValueError):
        M.values[0, 0] = -1


def test_from_zero_one_mapping():
    M = from_zero_one([[0, 1], [1, 1]])
    np.testing.assert_array_equal(M.values, [[-1, 1], [1, 1]])
    np.testing.assert_array_equal(from_zero_one(np.zeros((3, 2), dtype=int)).values, -np.ones((3, 2)))


def test_from_zero_one_rejects_pm1():
    with pytest.raises(NonBinaryEntryError):
        from_zero_one(np.array([[-1, 1]]))


@given(arrays(np.int8, st.tuples(st.integers(1, 12), st.integers(1, 6)), elements=st.sampled_from([0, 1])))
def test_zero_one_round_trip(x):
    np.testing.assert_array_equal(to_zero_one(from_zero_one(x)), x)


@given(arrays(np.int8, st.tuples(st.integers(1, 12), st.integers(1, 6)), elements=st.sampled_from([-1, 1])))
def test_pm1_round_trip(x):
    M = AttributeMatrix(x)
    assert from_zero_one(to_zero_one(M)) == M


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 10).flatmap(
        lambda n: st.tuples(
            arrays(np.int8, st.tuples(st.just(n), st.integers(1, 5)), elements=st.sampled_from([-1, 1])),
            arrays(np.int8, st.tuples(st.just(n), st.integers(1, 5)), elements=st.sampled_from([-1, 1])),
        )
    )
)
def test_valid_matrices_never_break_downstream(pair):
    A, B = (AttributeMatrix(x) for x in pair)
    assert delta_cvx(A, B).distance >= 0
    assert delta_jp(A, B).distance >= 0


def test_mismatched_exemplars_rejected():
    A = AttributeMatrix(np.ones((3, 2), dtype=int))
    B = AttributeMatrix(np.ones((4, 2), dtype=int))
    with pytest.raises(ShapeMismatchError):
        delta_jp(A, B)
    with pytest.raises(ShapeMismatchError):
        A.hstack(B)


def test_take_drop_and_names():
    M = AttributeMatrix(np.array([[1, -1, 1], [1, 1, -1]]), ("x", "y", "z"))
    assert M.take([2, 0]).names == ("z", "x")
    assert M.drop(1).names == ("x", "z")
    assert M.column(1) == AttributeVector(np.array([-1, 1]), "y")
    assert AttributeMatrix(M.values).column_names() == ["a0", "a1", "a2"]


def test_split_invariants():
    S = AttributeMatrix(np.ones((2, 3), dtype=int))
    with pytest.raises(ShapeMismatchError):
        SubspaceSplit(S.take([0, 1]), S.take([1, 2]), (0, 1), (1, 2), frozenset(), 0)
    with pytest.raises(ShapeMismatchError):
        SubspaceSplit(S.take([0]), S.take([1, 2]), (0,), (1, 2), frozenset({2}), 0)
