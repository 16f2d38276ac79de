"""Exact rational linear algebra over sparse rows.

Vectors are plain ``dict[int, Fraction]`` mappings with no stored zeros.
Every matrix the engine assembles (prolongation constraints, span tests,
structure-constant solves) goes through the echelon routine below.
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union


SparseVector = Dict[int, Fraction]


class DimensionMismatchError(Exception):
    """Raised when operands have incompatible shapes."""
    pass


def to_scalar(value: Any) -> Fraction:
    """Convert ints, strings like ``"3/2"`` and Fractions to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("Floating point values are not accepted, use Fraction or int")
    return Fraction(value)


def as_sparse(vector: Union[Mapping[int, Any], Sequence[Any]]) -> SparseVector:
    """Normalize a dense sequence or a mapping into a sparse vector."""
    if isinstance(vector, Mapping):
        items = vector.items()
    else:
        items = enumerate(vector)
    result: SparseVector = {}
    for index, value in items:
        value = to_scalar(value)
        if value:
            result[int(index)] = value
    return result


def to_dense(vector: Mapping[int, Fraction], length: int) -> List[Fraction]:
    """Expand a sparse vector to a list of the given length."""
    dense = [Fraction(0)] * length
    for index, value in vector.items():
        if index >= length:
            raise DimensionMismatchError(f"Index {index} outside vector of length {length}")
        dense[index] = value
    return dense


def add_scaled(target: SparseVector, source: Mapping[int, Fraction], coef: Fraction) -> SparseVector:
    """In-place ``target += coef * source``; zero entries are dropped."""
    if not coef:
        return target
    for key, value in source.items():
        updated = target.get(key, 0) + coef * value
        if updated:
            target[key] = updated
        else:
            target.pop(key, None)
    return target


def scaled(vector: Mapping[int, Fraction], coef: Fraction) -> SparseVector:
    if not coef:
        return {}
    return {key: coef * value for key, value in vector.items()}


def linear_combination(terms: Iterable[Tuple[Fraction, Mapping[int, Fraction]]]) -> SparseVector:
    result: SparseVector = {}
    for coef, vector in terms:
        add_scaled(result, vector, coef)
    return result


class ExactMatrix:
    """Immutable rows x cols matrix of Fractions stored as sparse rows."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Optional[Mapping[Tuple[int, int], Any]] = None):
        if rows < 0 or cols < 0:
            raise DimensionMismatchError(f"Invalid shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        data: Dict[int, SparseVector] = {}
        for (i, j), value in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise DimensionMismatchError(f"Entry ({i}, {j}) outside {rows}x{cols} matrix")
            value = to_scalar(value)
            if value:
                data.setdefault(i, {})[j] = value
        self._data = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], cols: Optional[int] = None) -> ExactMatrix:
        """Build from dense rows; ``cols`` is required only for an empty row list."""
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise DimensionMismatchError(f"Row {i} has length {len(row)}, expected {cols}")
            for j, value in enumerate(row):
                entries[(i, j)] = value
        return cls(len(rows), cols, entries)

    @classmethod
    def from_sparse_rows(cls, rows: Sequence[Mapping[int, Any]], cols: int) -> ExactMatrix:
        entries = {}
        for i, row in enumerate(rows):
            for j, value in row.items():
                entries[(i, j)] = value
        return cls(len(rows), cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Mapping[int, Any]], rows: int) -> ExactMatrix:
        entries = {}
        for j, column in enumerate(columns):
            for i, value in column.items():
                entries[(i, j)] = value
        return cls(rows, len(columns), entries)

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> ExactMatrix:
        return cls(rows, cols)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        i, j = key
        return self._data.get(i, {}).get(j, Fraction(0))

    def row(self, i: int) -> SparseVector:
        return dict(self._data.get(i, {}))

    def column(self, j: int) -> SparseVector:
        return {i: row[j] for i, row in self._data.items() if j in row}

    def sparse_rows(self) -> List[SparseVector]:
        return [self.row(i) for i in range(self.rows)]

    def to_rows(self) -> List[List[Fraction]]:
        return [to_dense(self._data.get(i, {}), self.cols) for i in range(self.rows)]

    def items(self) -> Iterator[Tuple[Tuple[int, int], Fraction]]:
        for i in sorted(self._data):
            row = self._data[i]
            for j in sorted(row):
                yield (i, j), row[j]

    def is_zero(self) -> bool:
        return not self._data

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.items()})

    def apply(self, vector: Union[Mapping[int, Any], Sequence[Any]]) -> SparseVector:
        """Return ``self @ vector`` as a sparse vector."""
        if not isinstance(vector, Mapping) and len(vector) != self.cols:
            raise DimensionMismatchError(f"Vector of length {len(vector)} for {self.cols} columns")
        vector = as_sparse(vector)
        result: SparseVector = {}
        for i, row in self._data.items():
            total = sum((value * vector[j] for j, value in row.items() if j in vector), Fraction(0))
            if total:
                result[i] = total
        return result

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows:
            raise DimensionMismatchError(f"Cannot multiply {self.shape} by {other.shape}")
        entries: Dict[Tuple[int, int], Fraction] = {}
        for i, row in self._data.items():
            acc: SparseVector = {}
            for k, value in row.items():
                add_scaled(acc, other._data.get(k, {}), value)
            for j, value in acc.items():
                entries[(i, j)] = value
        return ExactMatrix(self.rows, other.cols, entries)

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        return self.combine(other, Fraction(1))

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        return self.combine(other, Fraction(-1))

    def combine(self, other: ExactMatrix, coef: Fraction) -> ExactMatrix:
        """Return ``self + coef * other``."""
        if self.shape != other.shape:
            raise DimensionMismatchError(f"Shapes differ: {self.shape} vs {other.shape}")
        rows = {i: dict(row) for i, row in self._data.items()}
        for i, row in other._data.items():
            add_scaled(rows.setdefault(i, {}), row, coef)
        return ExactMatrix(self.rows, self.cols, {(i, j): v for i, row in rows.items() for j, v in row.items()})

    def scale(self, coef: Any) -> ExactMatrix:
        coef = to_scalar(coef)
        return ExactMatrix(self.rows, self.cols, {key: coef * value for key, value in self.items()})

    def masked(self, keep) -> ExactMatrix:
        """Copy keeping only entries for which ``keep(i, j)`` is true."""
        return ExactMatrix(self.rows, self.cols, {(i, j): v for (i, j), v in self.items() if keep(i, j)})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, tuple(self.items())))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols}, nonzero={sum(len(r) for r in self._data.values())})"


class EchelonBasis:
    """Incrementally maintained reduced row echelon basis.

    Each pivot row has a 1 at its lead column and zeros at every other lead
    column. With ``track=True`` every pivot row also remembers the
    combination of accepted input vectors it came from, so vectors in the
    span can be expressed in terms of those inputs.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self._pivots: Dict[int, SparseVector] = {}
        self._combos: Dict[int, SparseVector] = {}
        self.accepted: List[SparseVector] = []

    def __len__(self) -> int:
        return len(self._pivots)

    @property
    def pivot_columns(self) -> List[int]:
        return sorted(self._pivots)

    def has_pivot(self, column: int) -> bool:
        return column in self._pivots

    def rows(self) -> List[SparseVector]:
        return [dict(self._pivots[c]) for c in sorted(self._pivots)]

    def reduce(self, vector: Mapping[int, Fraction]) -> Tuple[SparseVector, SparseVector]:
        """Return ``(remainder, combination)`` with vector = combination.accepted + remainder."""
        remainder = dict(vector)
        combo: SparseVector = {}
        for column in [c for c in remainder if c in self._pivots]:
            coef = remainder.get(column)
            if not coef:
                continue
            add_scaled(remainder, self._pivots[column], -coef)
            if self.track:
                add_scaled(combo, self._combos[column], coef)
        return remainder, combo

    def contains(self, vector: Mapping[int, Fraction]) -> bool:
        remainder, _ = self.reduce(vector)
        return not remainder

    def add(self, vector: Mapping[int, Any]) -> bool:
        """Insert a vector; returns True when it enlarged the span."""
        vector = as_sparse(vector)
        remainder, combo = self.reduce(vector)
        if not remainder:
            return False
        lead = min(remainder)
        inverse = 1 / remainder[lead]
        row = scaled(remainder, inverse)
        row_combo: SparseVector = {}
        if self.track:
            index = len(self.accepted)
            row_combo = {index: Fraction(1)}
            add_scaled(row_combo, combo, Fraction(-1))
            row_combo = scaled(row_combo, inverse)
        self.accepted.append(vector)
        for column, other in self._pivots.items():
            coef = other.get(lead)
            if coef:
                add_scaled(other, row, -coef)
                if self.track:
                    add_scaled(self._combos[column], row_combo, -coef)
        self._pivots[lead] = row
        if self.track:
            self._combos[lead] = row_combo
        return True

    def coordinates(self, vector: Mapping[int, Any]) -> Optional[SparseVector]:
        """Express ``vector`` over the accepted inputs, or None outside the span."""
        if not self.track:
            raise ValueError("coordinates() needs an EchelonBasis created with track=True")
        remainder, combo = self.reduce(as_sparse(vector))
        if remainder:
            return None
        return combo


@dataclass(frozen=True)
class Inconsistent:
    """Marker returned by :func:`solve` when the system has no solution."""
    pivot_row: int

    def __bool__(self) -> bool:
        return False


def _echelon_of_rows(rows: Iterable[Mapping[int, Fraction]], limit: Optional[int] = None) -> EchelonBasis:
    basis = EchelonBasis()
    for row in rows:
        basis.add(row)
        if limit is not None and len(basis) >= limit:
            break
    return basis


def rref(m: ExactMatrix) -> Tuple[ExactMatrix, List[int]]:
    """Reduced row echelon form and the strictly increasing pivot columns."""
    basis = _echelon_of_rows(m.sparse_rows(), limit=m.cols)
    pivots = basis.pivot_columns
    rows = basis.rows()
    entries = {(i, j): v for i, row in enumerate(rows) for j, v in row.items()}
    return ExactMatrix(m.rows, m.cols, entries), pivots


def rank(m: ExactMatrix) -> int:
    return len(_echelon_of_rows(m.sparse_rows(), limit=m.cols))


def rank_of_vectors(vectors: Iterable[Mapping[int, Fraction]]) -> int:
    return len(_echelon_of_rows(vectors))


def nullspace_of_rows(rows: Iterable[Mapping[int, Fraction]], cols: int) -> List[SparseVector]:
    """Canonical nullspace basis: one vector per free column, in increasing order."""
    basis = _echelon_of_rows(rows, limit=cols)
    pivots = {c: row for c, row in zip(basis.pivot_columns, basis.rows())}
    result = []
    for free in range(cols):
        if free in pivots:
            continue
        vector: SparseVector = {free: Fraction(1)}
        for column, row in pivots.items():
            value = row.get(free)
            if value:
                vector[column] = -value
        result.append(vector)
    return result


def nullspace(m: ExactMatrix) -> List[List[Fraction]]:
    return [to_dense(v, m.cols) for v in nullspace_of_rows(m.sparse_rows(), m.cols)]


def solve(m: ExactMatrix, b: Sequence[Any]) -> Union[List[Fraction], Inconsistent]:
    """Solve ``m x = b``; free variables are set to zero."""
    if len(b) != m.rows:
        raise DimensionMismatchError(f"Right-hand side has length {len(b)}, expected {m.rows}")
    augmented_column = m.cols
    basis = EchelonBasis()
    for i in range(m.rows):
        row = m.row(i)
        value = to_scalar(b[i])
        if value:
            row[augmented_column] = value
        basis.add(row)
        if basis.has_pivot(augmented_column):
            return Inconsistent(pivot_row=i)
    solution = [Fraction(0)] * m.cols
    for column, row in zip(basis.pivot_columns, basis.rows()):
        solution[column] = row.get(augmented_column, Fraction(0))
    return solution


def independent_subset(vectors: Sequence[Mapping[int, Fraction]]) -> List[int]:
    """Indices of a greedy maximal independent subset, in input order."""
    basis = EchelonBasis()
    return [i for i, vector in enumerate(vectors) if basis.add(vector)]


def row_space_basis(vectors: Iterable[Any]) -> List[SparseVector]:
    """Fully reduced basis of the span, ordered by pivot column."""
    return _echelon_of_rows(vectors).rows()
