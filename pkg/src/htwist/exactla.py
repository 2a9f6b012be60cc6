"""
Exact linear algebra over the rationals.

Matrices are stored as sparse rows (dict column -> Fraction).  Elimination
is fraction-free: every row is scaled to primitive integers and rows are
combined as ``p*r - a*s`` followed by content removal, so no intermediate
fractions appear.  Pivot choice is the entry of smallest absolute value in
the current column, ties broken by lowest row index, which makes every
returned basis reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import CompositionNonzero, ShapeError

Rational = Fraction


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class RMatrix:
    """Immutable rows x cols matrix of Fractions with sparse row storage."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: dict | None = None):
        if rows < 0 or cols < 0:
            raise ShapeError("negative matrix shape")
        self.rows = rows
        self.cols = cols
        store: list[dict[int, Fraction]] = [dict() for _ in range(rows)]
        if data:
            for (i, j), v in data.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise ShapeError(f"entry {(i, j)} outside {rows}x{cols}")
                v = Fraction(v)
                if v:
                    store[i][j] = v
        self._data = store

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RMatrix":
        nrows = len(rows)
        if cols is None:
            cols = len(rows[0]) if nrows else 0
        data = {}
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise ShapeError("ragged row list")
            for j, v in enumerate(row):
                if v:
                    data[i, j] = v
        return cls(nrows, cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "RMatrix":
        data = {}
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ShapeError("column of wrong length")
            for i, v in enumerate(col):
                if v:
                    data[i, j] = v
        return cls(rows, len(columns), data)

    @classmethod
    def _from_sparse_rows(cls, rows: int, cols: int, store) -> "RMatrix":
        m = cls.__new__(cls)
        m.rows, m.cols, m._data = rows, cols, store
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "RMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    # -- access -----------------------------------------------------------
    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self._data[i].get(j, Fraction(0))

    def row(self, i: int) -> dict[int, Fraction]:
        return dict(self._data[i])

    def items(self):
        for i, r in enumerate(self._data):
            for j, v in r.items():
                yield (i, j), v

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.items():
            out[i][j] = v
        return out

    def column(self, j: int) -> list[Fraction]:
        return [r.get(j, Fraction(0)) for r in self._data]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_zero(self) -> bool:
        return not any(self._data)

    def max_abs(self) -> Fraction:
        return max((abs(v) for _, v in self.items()), default=Fraction(0))

    # -- arithmetic -------------------------------------------------------
    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for r in self._data:
            acc: dict[int, Fraction] = {}
            for k, a in r.items():
                for j, b in other._data[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            out.append({j: v for j, v in acc.items() if v})
        return RMatrix._from_sparse_rows(self.rows, other.cols, out)

    def apply(self, vec: Sequence) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ShapeError("vector length mismatch")
        return [sum((a * vec[j] for j, a in r.items()), Fraction(0)) for r in self._data]

    def __add__(self, other: "RMatrix") -> "RMatrix":
        if self.shape != other.shape:
            raise ShapeError("shape mismatch in addition")
        out = []
        for r, s in zip(self._data, other._data):
            acc = dict(r)
            for j, v in s.items():
                acc[j] = acc.get(j, 0) + v
            out.append({j: v for j, v in acc.items() if v})
        return RMatrix._from_sparse_rows(self.rows, self.cols, out)

    def __neg__(self) -> "RMatrix":
        return RMatrix._from_sparse_rows(
            self.rows, self.cols, [{j: -v for j, v in r.items()} for r in self._data])

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        return self + (-other)

    def transpose(self) -> "RMatrix":
        return RMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, RMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted(self.items()))))

    def __repr__(self) -> str:
        return f"RMatrix({self.rows}x{self.cols}, nnz={sum(len(r) for r in self._data)})"


# ---------------------------------------------------------------------------
# fraction-free elimination


def _primitive(row: dict) -> dict[int, int]:
    """Scale a rational sparse row to coprime integers (sign preserved)."""
    if not row:
        return {}
    den = 1
    for v in row.values():
        den = _lcm(den, Fraction(v).denominator)
    ints = {j: int(Fraction(v) * den) for j, v in row.items() if v}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    return {j: v // g for j, v in ints.items()}


def _combine(r: dict[int, int], s: dict[int, int], c: int) -> dict[int, int]:
    """Return primitive(p*r - a*s) where p = s[c], a = r[c]; kills column c."""
    p, a = s[c], r[c]
    out = {j: p * v for j, v in r.items()}
    for j, v in s.items():
        w = out.get(j, 0) - a * v
        if w:
            out[j] = w
        else:
            out.pop(j, None)
    g = 0
    for v in out.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        out = {j: v // g for j, v in out.items()}
    return out


def _echelon(rows: Iterable[dict], ncols: int, reduced: bool):
    """Row echelon form of integer rows; returns (pivot rows, pivot columns)."""
    active = [(k, r) for k, r in enumerate(rows) if r]
    piv_rows: list[dict[int, int]] = []
    piv_cols: list[int] = []
    for c in range(ncols):
        if not active:
            break
        best = None
        for pos, (k, r) in enumerate(active):
            v = r.get(c)
            if v:
                key = (abs(v), k)
                if best is None or key < best[0]:
                    best = (key, pos)
        if best is None:
            continue
        _, pos = best
        _, prow = active.pop(pos)
        nxt = []
        for k, r in active:
            if c in r:
                r = _combine(r, prow, c)
                if not r:
                    continue
            nxt.append((k, r))
        active = nxt
        if reduced:
            for i, q in enumerate(piv_rows):
                if c in q:
                    piv_rows[i] = _combine(q, prow, c)
        piv_rows.append(prow)
        piv_cols.append(c)
    return piv_rows, piv_cols


def _int_rows(m: RMatrix) -> list[dict[int, int]]:
    return [_primitive(m._data[i]) for i in range(m.rows)]


def rank(m: RMatrix) -> int:
    """Rank over Q."""
    # eliminate along the shorter side
    if m.cols > m.rows:
        m = m.transpose()
    piv, _ = _echelon(_int_rows(m), m.cols, reduced=False)
    return len(piv)


def rref(m: RMatrix) -> tuple[RMatrix, list[int]]:
    """Reduced row echelon form (pivots normalised to 1) and pivot columns."""
    piv, cols = _echelon(_int_rows(m), m.cols, reduced=True)
    data = {}
    for i, (r, c) in enumerate(zip(piv, cols)):
        p = r[c]
        for j, v in r.items():
            data[i, j] = Fraction(v, p)
    return RMatrix(len(piv), m.cols, data), cols


def kernel_basis(m: RMatrix) -> list[list[Fraction]]:
    """Basis of {v : m v = 0}, one vector per free column, in column order."""
    piv, cols = _echelon(_int_rows(m), m.cols, reduced=True)
    pivset = set(cols)
    basis = []
    for f in range(m.cols):
        if f in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, c in zip(piv, cols):
            a = r.get(f)
            if a:
                v[c] = Fraction(-a, r[c])
        basis.append(v)
    return basis


def solve(m: RMatrix, rhs: Sequence) -> list[Fraction] | None:
    """One solution x of m x = rhs (free variables set to 0), or None."""
    if len(rhs) != m.rows:
        raise ShapeError("rhs length mismatch")
    aug = []
    for i in range(m.rows):
        r = dict(m._data[i])
        if rhs[i]:
            r[m.cols] = Fraction(rhs[i])
        aug.append(_primitive(r))
    piv, cols = _echelon(aug, m.cols + 1, reduced=True)
    if cols and cols[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for r, c in zip(piv, cols):
        x[c] = Fraction(r.get(m.cols, 0), r[c])
    return x


def coordinates(basis: Sequence[Sequence], vectors: Sequence[Sequence]) -> list[list[Fraction]] | None:
    """Coordinates of each vector in the (independent) basis, or None if some vector escapes the span."""
    if not basis:
        return [[] for _ in vectors] if all(not any(v) for v in vectors) else None
    dim = len(basis[0])
    bmat = RMatrix.from_columns(basis, dim)
    # one elimination for all right hand sides
    k = len(basis)
    aug = []
    for i in range(dim):
        r = dict(bmat._data[i])
        for t, v in enumerate(vectors):
            if v[i]:
                r[k + t] = Fraction(v[i])
        aug.append(_primitive(r))
    piv, cols = _echelon(aug, k + len(vectors), reduced=True)
    if any(c >= k for c in cols):
        return None
    if len(cols) != k:
        raise ShapeError("basis vectors are linearly dependent")
    out = [[Fraction(0)] * k for _ in vectors]
    for r, c in zip(piv, cols):
        for t in range(len(vectors)):
            a = r.get(k + t)
            if a:
                out[t][c] = Fraction(a, r[c])
    return out


def cohomology_dim(d_in: RMatrix, d_out: RMatrix) -> int:
    """dim ker(d_out) - rank(d_in) for a composable pair with d_out . d_in = 0."""
    if d_out.cols != d_in.rows:
        raise ShapeError(f"d_in {d_in.shape} and d_out {d_out.shape} are not composable")
    if not (d_out @ d_in).is_zero():
        raise CompositionNonzero("d_out . d_in != 0")
    return (d_out.cols - rank(d_out)) - rank(d_in)
