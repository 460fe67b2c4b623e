"""Dense matrices over the rationals.

Entries are stored as ``gmpy2.mpq`` (arbitrary precision numerator and
denominator), so every operation is exact.  Instances are immutable.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

_ZERO = mpq(0)
_ONE = mpq(1)


def to_rational(value) -> mpq:
    """Convert ints, Fractions, decimal/ratio strings and floats to ``mpq``.

    Floats are converted through their exact binary value, never rounded.
    """
    if isinstance(value, mpq):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, (Fraction, Rational)):
        return mpq(int(value.numerator), int(value.denominator))
    if isinstance(value, float):
        if not np.isfinite(value):
            raise ValueError(f"non-finite entry {value!r}")
        return mpq(Fraction(value))
    if isinstance(value, str):
        return mpq(Fraction(value.strip()))
    if isinstance(value, np.integer):
        return mpq(int(value))
    if isinstance(value, np.floating):
        return to_rational(float(value))
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rational(x) -> str:
    x = to_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _norm_index(idx, size: int) -> list[int]:
    if isinstance(idx, slice):
        return list(range(*idx.indices(size)))
    if isinstance(idx, (int, np.integer)):
        i = int(idx)
        if i < 0:
            i += size
        if not 0 <= i < size:
            raise IndexError(idx)
        return [i]
    return [int(i) for i in idx]


class ExactMatrix:
    """Immutable dense rational matrix, row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Sequence] = (), shape: tuple[int, int] | None = None):
        rows = tuple(tuple(to_rational(x) for x in row) for row in data)
        if shape is None:
            if not rows:
                raise ValueError("shape is required for a matrix with no rows")
            shape = (len(rows), len(rows[0]))
        r, c = shape
        if len(rows) != r or any(len(row) != c for row in rows):
            raise ValueError(f"entries do not match shape {shape}")
        self.rows = r
        self.cols = c
        self._data = rows

    @classmethod
    def _raw(cls, rows: tuple, r: int, c: int) -> ExactMatrix:
        # trusted constructor: rows already a tuple of tuples of mpq
        m = object.__new__(cls)
        m.rows, m.cols, m._data = r, c, rows
        return m

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> ExactMatrix:
        return cls._raw(tuple((_ZERO,) * cols for _ in range(rows)), rows, cols)

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls.diag([_ONE] * n)

    @classmethod
    def diag(cls, values: Sequence) -> ExactMatrix:
        vals = [to_rational(v) for v in values]
        n = len(vals)
        rows = tuple(tuple(vals[i] if i == j else _ZERO for j in range(n)) for i in range(n))
        return cls._raw(rows, n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> ExactMatrix:
        cols = [[to_rational(x) for x in col] for col in columns]
        if any(len(col) != nrows for col in cols):
            raise ValueError("column length mismatch")
        rows = tuple(tuple(col[i] for col in cols) for i in range(nrows))
        return cls._raw(rows, nrows, len(cols))

    @classmethod
    def hstack(cls, blocks: Sequence[ExactMatrix]) -> ExactMatrix:
        r = blocks[0].rows
        if any(b.rows != r for b in blocks):
            raise ValueError("hstack: row counts differ")
        rows = tuple(sum((b._data[i] for b in blocks), ()) for i in range(r))
        return cls._raw(rows, r, sum(b.cols for b in blocks))

    @classmethod
    def vstack(cls, blocks: Sequence[ExactMatrix]) -> ExactMatrix:
        c = blocks[0].cols
        if any(b.cols != c for b in blocks):
            raise ValueError("vstack: column counts differ")
        return cls._raw(sum((b._data for b in blocks), ()), sum(b.rows for b in blocks), c)

    @classmethod
    def block_diag(cls, a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
        top = cls.hstack([a, cls.zeros(a.rows, b.cols)])
        bottom = cls.hstack([cls.zeros(b.rows, a.cols), b])
        return cls.vstack([top, bottom])

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key):
        if not isinstance(key, tuple) or len(key) != 2:
            raise TypeError("index with M[i, j], slices or index lists")
        ri, ci = key
        if isinstance(ri, (int, np.integer)) and isinstance(ci, (int, np.integer)):
            return self._data[ri][ci]
        rows = _norm_index(ri, self.rows)
        cols = _norm_index(ci, self.cols)
        data = tuple(tuple(self._data[i][j] for j in cols) for i in rows)
        return ExactMatrix._raw(data, len(rows), len(cols))

    def row(self, i: int) -> tuple:
        return self._data[i]

    def col(self, j: int) -> tuple:
        return tuple(row[j] for row in self._data)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list[mpq]]:
        return [list(row) for row in self._data]

    def diagonal(self) -> list[mpq]:
        return [self._data[i][i] for i in range(min(self.rows, self.cols))]

    # -- arithmetic -------------------------------------------------------

    @property
    def T(self) -> ExactMatrix:
        if self.rows:
            data = tuple(zip(*self._data))
        else:
            data = tuple(() for _ in range(self.cols))
        return ExactMatrix._raw(data, self.cols, self.rows)

    def _check_same(self, other: ExactMatrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_same(other)
        data = tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self._data, other._data))
        return ExactMatrix._raw(data, self.rows, self.cols)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_same(other)
        data = tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(self._data, other._data))
        return ExactMatrix._raw(data, self.rows, self.cols)

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix._raw(tuple(tuple(-a for a in r) for r in self._data), self.rows, self.cols)

    def __mul__(self, scalar) -> ExactMatrix:
        if isinstance(scalar, ExactMatrix):
            raise TypeError("use @ for matrix products")
        s = to_rational(scalar)
        return ExactMatrix._raw(tuple(tuple(s * a for a in r) for r in self._data), self.rows, self.cols)

    __rmul__ = __mul__

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows:
            raise ValueError(f"matmul shape mismatch {self.shape} @ {other.shape}")
        other_cols = other.T._data
        data = []
        for row in self._data:
            nz = [(k, a) for k, a in enumerate(row) if a]
            if not nz:
                data.append((_ZERO,) * other.cols)
                continue
            out = []
            for col in other_cols:
                s = _ZERO
                for k, a in nz:
                    b = col[k]
                    if b:
                        s += a * b
                out.append(s)
            data.append(tuple(out))
        return ExactMatrix._raw(tuple(data), self.rows, other.cols)

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactMatrix):
            return self.shape == other.shape and self._data == other._data
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def is_zero(self) -> bool:
        return all(not a for row in self._data for a in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    def trace(self) -> mpq:
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        return sum(self.diagonal(), _ZERO)

    # -- elimination ------------------------------------------------------

    def rref(self) -> tuple[ExactMatrix, list[int]]:
        """Reduced row echelon form and the list of pivot columns."""
        m = [list(r) for r in self._data]
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            if r == self.rows:
                break
            p = next((i for i in range(r, self.rows) if m[i][c]), None)
            if p is None:
                continue
            m[r], m[p] = m[p], m[r]
            inv = 1 / m[r][c]
            pivot_row = [a * inv for a in m[r]]
            m[r] = pivot_row
            for i in range(self.rows):
                if i != r and m[i][c]:
                    factor = m[i][c]
                    row_i = m[i]
                    for j in range(c, self.cols):
                        if pivot_row[j]:
                            row_i[j] -= factor * pivot_row[j]
            pivots.append(c)
            r += 1
        return ExactMatrix._raw(tuple(tuple(row) for row in m), self.rows, self.cols), pivots

    def inverse(self) -> ExactMatrix:
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = ExactMatrix.hstack([self, ExactMatrix.identity(n)])
        red, pivots = aug.rref()
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise ZeroDivisionError("matrix is singular")
        return red[:, n:]

    def det(self) -> mpq:
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        m = [list(r) for r in self._data]
        n = self.rows
        d = _ONE
        for c in range(n):
            p = next((i for i in range(c, n) if m[i][c]), None)
            if p is None:
                return _ZERO
            if p != c:
                m[c], m[p] = m[p], m[c]
                d = -d
            d *= m[c][c]
            inv = 1 / m[c][c]
            for i in range(c + 1, n):
                if m[i][c]:
                    factor = m[i][c] * inv
                    for j in range(c, n):
                        m[i][j] -= factor * m[c][j]
        return d

    def solve(self, rhs: ExactMatrix) -> ExactMatrix:
        """Solve ``self @ X = rhs`` for a square invertible ``self``."""
        return self.inverse() @ rhs

    # -- conversion -------------------------------------------------------

    def to_float(self) -> np.ndarray:
        return np.array([[float(a) for a in row] for row in self._data], dtype=float).reshape(self.rows, self.cols)

    def to_fractions(self) -> list[list[Fraction]]:
        return [[Fraction(int(a.numerator), int(a.denominator)) for a in row] for row in self._data]

    def to_json(self) -> list[list[str]]:
        return [[format_rational(a) for a in row] for row in self._data]

    @classmethod
    def from_json(cls, data: Sequence[Sequence], cols: int | None = None) -> ExactMatrix:
        data = list(data)
        if not data:
            return cls.zeros(0, cols or 0)
        return cls(data)

    def __repr__(self) -> str:
        if not self.rows or not self.cols:
            return f"ExactMatrix.zeros({self.rows}, {self.cols})"
        body = ", ".join("[" + ", ".join(format_rational(a) for a in row) + "]" for row in self._data)
        return f"ExactMatrix([{body}])"
