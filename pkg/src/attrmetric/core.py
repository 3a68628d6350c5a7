"""Attribute vectors, attribute matrices and the shared error types.

An attribute is the sign pattern of a binary classifier over a fixed set of
``N`` exemplars, stored as a vector in {-1, +1}^N.  A set of attributes is an
``N x M`` matrix whose columns are attributes.  The {0, 1} encoding is only
accepted at the I/O boundary (see :func:`from_zero_one`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np


class MeaningfulnessError(ValueError):
    """Base class for every error raised by this package."""


class NonBinaryEntryError(MeaningfulnessError):
    pass


class RaggedColumnsError(MeaningfulnessError):
    pass


class DuplicateNameError(MeaningfulnessError):
    pass


class ShapeMismatchError(MeaningfulnessError):
    pass


class EmptyVectorError(MeaningfulnessError):
    pass


class TooFewAttributesError(MeaningfulnessError):
    pass


class ForcedSetTooLargeError(MeaningfulnessError):
    pass


class UnknownForcedNameError(MeaningfulnessError):
    pass


class EmptyCurveError(MeaningfulnessError):
    pass


class OutOfRangeError(MeaningfulnessError):
    pass


class SolverDidNotConvergeError(MeaningfulnessError):
    pass


class Kind(str, enum.Enum):
    """Regularization used when reconstructing one attribute set from another."""

    CVX = "cvx"  # convex hull of the meaningful columns
    JP = "jp"  # one-to-one matching by greedy correlation

    @classmethod
    def parse(cls, value: "Kind | str") -> "Kind":
        if isinstance(value, cls):
            return value
        aliases = {"cvx": cls.CVX, "convexhull": cls.CVX, "jp": cls.JP, "jointl0": cls.JP}
        try:
            return aliases[str(value).lower().replace("_", "")]
        except KeyError:
            raise ValueError(f"unknown distance kind {value!r}") from None


def _check_binary(values: np.ndarray, allowed: tuple[int, int]) -> None:
    bad = ~np.isin(values, allowed)
    if bad.any():
        row, col = (int(i) for i in np.argwhere(bad)[0])
        raise NonBinaryEntryError(
            f"entry {values[row, col]!r} at row {row}, column {col} is not in {set(allowed)}"
        )


def _as_2d(matrix) -> np.ndarray:
    """Accept a 2-D array or a sequence of equal-length columns."""
    if isinstance(matrix, AttributeMatrix):
        return matrix.values
    if isinstance(matrix, np.ndarray):
        if matrix.ndim == 1:
            return matrix.reshape(-1, 1)
        if matrix.ndim != 2:
            raise ShapeMismatchError(f"expected a 2-D matrix, got {matrix.ndim} dimensions")
        return matrix
    columns = [np.asarray(c.values if isinstance(c, AttributeVector) else c) for c in matrix]
    if not columns:
        return np.zeros((0, 0), dtype=np.int8)
    lengths = {len(c) for c in columns}
    if len(lengths) > 1:
        raise RaggedColumnsError(f"columns have differing lengths {sorted(lengths)}")
    return np.column_stack(columns)


def validate(matrix, names: Optional[Sequence[str]] = None) -> None:
    """Raise if ``matrix`` is not a well-formed ±1 attribute matrix.

    ``matrix`` may be an :class:`AttributeMatrix`, a 2-D array (rows are
    exemplars) or a sequence of columns.
    """
    values = _as_2d(matrix)
    _check_binary(values, (-1, 1))
    if names is None and isinstance(matrix, AttributeMatrix):
        names = matrix.names
    if names is not None:
        if len(names) != values.shape[1]:
            raise ShapeMismatchError(
                f"{len(names)} names given for {values.shape[1]} columns"
            )
        seen = set()
        for name in names:
            if name in seen:
                raise DuplicateNameError(f"attribute name {name!r} appears more than once")
            seen.add(name)


@dataclass(frozen=True)
class AttributeVector:
    values: np.ndarray
    name: Optional[str] = None

    def __post_init__(self):
        arr = np.asarray(self.values)
        if arr.ndim != 1:
            raise ShapeMismatchError("an attribute vector must be one-dimensional")
        _check_binary(arr.reshape(-1, 1), (-1, 1))
        arr = arr.astype(np.int8)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AttributeVector):
            return NotImplemented
        return self.name == other.name and np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash((self.values.tobytes(), self.name))

    def __neg__(self) -> "AttributeVector":
        return AttributeVector(-self.values, self.name)


@dataclass(frozen=True)
class AttributeMatrix:
    """Immutable ``N x M`` matrix of ±1 classifier outcomes.

    Rows are exemplars, columns are attributes.  ``names`` is optional; when
    omitted every column is anonymous.
    """

    values: np.ndarray
    names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        arr = _as_2d(self.values)
        names = None if self.names is None else tuple(str(n) for n in self.names)
        validate(arr, names)
        arr = np.array(arr, dtype=np.int8, copy=True)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "names", names)

    @classmethod
    def from_columns(cls, columns: Iterable, names: Optional[Sequence[str]] = None) -> "AttributeMatrix":
        columns = list(columns)
        if names is None and columns and all(isinstance(c, AttributeVector) for c in columns):
            if all(c.name is not None for c in columns):
                names = [c.name for c in columns]
        return cls(_as_2d(columns), None if names is None else tuple(names))

    @classmethod
    def empty(cls, n_exemplars: int) -> "AttributeMatrix":
        return cls(np.zeros((n_exemplars, 0), dtype=np.int8))

    @property
    def n_exemplars(self) -> int:
        return self.values.shape[0]

    @property
    def n_attributes(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def __len__(self) -> int:
        return self.n_attributes

    def __eq__(self, other) -> bool:
        if not isinstance(other, AttributeMatrix):
            return NotImplemented
        return self.names == other.names and np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash((self.values.shape, self.values.tobytes(), self.names))

    def column(self, j: int) -> AttributeVector:
        return AttributeVector(self.values[:, j], None if self.names is None else self.names[j])

    def columns(self) -> list[AttributeVector]:
        return [self.column(j) for j in range(self.n_attributes)]

    def column_names(self) -> list[str]:
        """Names, with anonymous columns labelled ``a0, a1, ...``."""
        if self.names is not None:
            return list(self.names)
        return [f"a{j}" for j in range(self.n_attributes)]

    def take(self, indices: Sequence[int]) -> "AttributeMatrix":
        idx = np.asarray(list(indices), dtype=int)
        names = None if self.names is None else tuple(self.names[i] for i in idx)
        return AttributeMatrix(self.values[:, idx], names)

    def drop(self, j: int) -> "AttributeMatrix":
        return self.take([i for i in range(self.n_attributes) if i != j])

    def hstack(self, *others: "AttributeMatrix") -> "AttributeMatrix":
        """Concatenate columns.  Names survive only if every part is named."""
        parts = (self,) + others
        check_same_exemplars(*parts)
        values = np.hstack([p.values for p in parts])
        if all(p.names is not None for p in parts):
            names = tuple(n for p in parts for n in p.names)
            if len(set(names)) == len(names):
                return AttributeMatrix(values, names)
        return AttributeMatrix(values)

    def negate(self) -> "AttributeMatrix":
        return AttributeMatrix(-self.values, self.names)


@dataclass(frozen=True)
class SubspaceSplit:
    """Partition of a labelled attribute set into representation and holdout.

    ``s1_indices``/``s2_indices`` index the columns of the original set.
    """

    s1: AttributeMatrix
    s2: AttributeMatrix
    s1_indices: tuple[int, ...]
    s2_indices: tuple[int, ...]
    forced_indices: frozenset[int]
    seed: int

    def __post_init__(self):
        if set(self.s1_indices) & set(self.s2_indices):
            raise ShapeMismatchError("s1 and s2 share columns")
        missing = set(self.forced_indices) - set(self.s1_indices)
        if missing:
            raise ShapeMismatchError(f"forced columns {sorted(missing)} are not in s1")


def check_same_exemplars(*matrices) -> int:
    """Return the shared exemplar count or raise :class:`ShapeMismatchError`."""
    counts = set()
    for m in matrices:
        if isinstance(m, (AttributeMatrix, AttributeVector)):
            counts.add(len(m.values))
        else:
            counts.add(np.shape(m)[0])
    if len(counts) > 1:
        raise ShapeMismatchError(f"exemplar counts differ: {sorted(counts)}")
    return counts.pop() if counts else 0


def as_matrix(x) -> AttributeMatrix:
    if isinstance(x, AttributeMatrix):
        return x
    if isinstance(x, AttributeVector):
        return AttributeMatrix(x.values.reshape(-1, 1), None if x.name is None else (x.name,))
    return AttributeMatrix(np.asarray(x))


def from_zero_one(matrix, names: Optional[Sequence[str]] = None) -> AttributeMatrix:
    """Map a {0, 1} matrix to the canonical ±1 encoding (0 -> -1, 1 -> +1)."""
    values = _as_2d(matrix if isinstance(matrix, AttributeMatrix) else np.asarray(matrix))
    _check_binary(values, (0, 1))
    return AttributeMatrix(2 * values.astype(np.int8) - 1, names)


def to_zero_one(matrix: AttributeMatrix) -> np.ndarray:
    """Inverse of :func:`from_zero_one`; returns an int8 array of 0/1."""
    return ((as_matrix(matrix).values + 1) // 2).astype(np.int8)
