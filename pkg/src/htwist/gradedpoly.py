"""
Free graded-commutative polynomial algebras.

Generators carry a nonnegative integer degree; odd-degree generators
anticommute and square to zero.  Monomials are exponent tuples in the fixed
generator order, and every Koszul sign in this module is produced by
:func:`koszul_sign`, which counts transpositions of odd generators.

Poisson brackets are constant-coefficient biderivations of a fixed (negative)
degree ``d``:

    {f, g} = sum_{i,j} (f d<_i) w_ij (d>_j g)

with the right derivative on the left factor and the left derivative on the
right factor.  With this choice

    {f, gh}  = {f, g} h + (-1)^{(|f|+d)|g|} g {f, h}
    {f, g}   = -(-1)^{(|f|+d)(|g|+d)} {g, f}

and the Jacobi identity holds; the test-suite checks all three.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import AlgebraMismatch, InfiniteSlice, NonHomogeneous, ShapeError

Monomial = tuple  # exponent per generator


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    degree: int
    index: int

    @property
    def parity(self) -> int:
        return self.degree % 2


class GradedAlgebra:
    """Free graded-commutative algebra on named generators of given degree."""

    def __init__(self, generators: Sequence[tuple[str, int]]):
        names = [g for g, _ in generators]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        for name, deg in generators:
            if deg < 0:
                raise ValueError(f"generator {name} has negative degree")
        self.gens = tuple(GeneratorSpec(n, d, i) for i, (n, d) in enumerate(generators))
        self.ngens = len(self.gens)
        self.degrees = tuple(g.degree for g in self.gens)
        self.odd = tuple(g.degree % 2 == 1 for g in self.gens)
        self._index = {g.name: g.index for g in self.gens}

    def index(self, name: str) -> int:
        return self._index[name]

    def __eq__(self, other):
        return isinstance(other, GradedAlgebra) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def __repr__(self):
        return "GradedAlgebra(%s)" % ", ".join(f"{g.name}:{g.degree}" for g in self.gens)

    # -- elements ---------------------------------------------------------
    def zero(self) -> "GPoly":
        return GPoly(self, {})

    def one(self) -> "GPoly":
        return GPoly(self, {(0,) * self.ngens: Fraction(1)})

    def const(self, c) -> "GPoly":
        return GPoly(self, {(0,) * self.ngens: Fraction(c)})

    def gen(self, name_or_index) -> "GPoly":
        i = name_or_index if isinstance(name_or_index, int) else self._index[name_or_index]
        e = [0] * self.ngens
        e[i] = 1
        return GPoly(self, {tuple(e): Fraction(1)})

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def monomial_str(self, m: Monomial) -> str:
        parts = []
        for g, e in zip(self.gens, m):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"


def koszul_sign(odd: Sequence[bool], left: Monomial, right: Monomial) -> int:
    """Sign of reordering left*right into generator order; 0 if an odd generator repeats."""
    swaps = 0
    seen_odd_left = 0
    # walk generators from the highest index down; count odd left factors
    # sitting to the right (in index) of each odd right factor
    for i in range(len(odd) - 1, -1, -1):
        if not odd[i]:
            continue
        if right[i] and left[i]:
            return 0
        if right[i]:
            swaps += seen_odd_left
        if left[i]:
            seen_odd_left += 1
    return -1 if swaps % 2 else 1


def _odd_count(odd, m, lo: int, hi: int) -> int:
    return sum(1 for i in range(lo, hi) if odd[i] and m[i])


class GPoly:
    """Sparse polynomial: dict monomial -> nonzero Fraction."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: GradedAlgebra, terms: Mapping | None = None):
        self.alg = alg
        clean = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    if len(m) != alg.ngens:
                        raise ShapeError("monomial length does not match algebra")
                    if any(m[i] > 1 for i in range(alg.ngens) if alg.odd[i]):
                        continue
                    clean[tuple(m)] = c
        self.terms = clean

    def _check(self, other: "GPoly"):
        if self.alg is not other.alg and self.alg != other.alg:
            raise AlgebraMismatch("polynomials live in different algebras")

    # -- basic structure -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set[int]:
        return {self.alg.monomial_degree(m) for m in self.terms}

    def degree(self) -> int | None:
        """Homogeneous degree, None for zero; raises on inhomogeneous input."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise NonHomogeneous(f"polynomial has degrees {sorted(ds)}")
        return ds.pop()

    def homogeneous_part(self, k: int) -> "GPoly":
        return GPoly(self.alg, {m: c for m, c in self.terms.items()
                                if self.alg.monomial_degree(m) == k})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self == self.alg.const(other)
        if not isinstance(other, GPoly):
            return NotImplemented
        return self.alg == other.alg and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            parts.append(f"{self.terms[m]}*{self.alg.monomial_str(m)}")
        return " + ".join(parts)

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GPoly):
            other = self.alg.const(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return GPoly(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return GPoly(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "GPoly":
        c = Fraction(c)
        return GPoly(self.alg, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    # -- derivatives ---------------------------------------------------------
    def left_derivative(self, k: int) -> "GPoly":
        """d>/dz_k: move z_k to the front, then strip it."""
        alg = self.alg
        out: dict = {}
        for m, c in self.terms.items():
            e = m[k]
            if not e:
                continue
            s = -1 if alg.odd[k] and _odd_count(alg.odd, m, 0, k) % 2 else 1
            n = list(m)
            n[k] -= 1
            n = tuple(n)
            out[n] = out.get(n, 0) + s * e * c
        return GPoly(alg, out)

    def right_derivative(self, k: int) -> "GPoly":
        """f d</dz_k: move z_k to the back, then strip it."""
        alg = self.alg
        out: dict = {}
        for m, c in self.terms.items():
            e = m[k]
            if not e:
                continue
            s = -1 if alg.odd[k] and _odd_count(alg.odd, m, k + 1, alg.ngens) % 2 else 1
            n = list(m)
            n[k] -= 1
            n = tuple(n)
            out[n] = out.get(n, 0) + s * e * c
        return GPoly(alg, out)

    def substitute_constants(self, values: Mapping[int, Fraction]) -> "GPoly":
        """Evaluate even generators at rational values (used for polynomial bases)."""
        out: dict = {}
        for m, c in self.terms.items():
            n = list(m)
            for k, v in values.items():
                if n[k]:
                    c = c * Fraction(v) ** n[k]
                    n[k] = 0
            n = tuple(n)
            out[n] = out.get(n, 0) + c
        return GPoly(self.alg, out)


def multiply(f: GPoly, g: GPoly) -> GPoly:
    f._check(g)
    alg = f.alg
    odd = alg.odd
    out: dict = {}
    for m1, c1 in f.terms.items():
        for m2, c2 in g.terms.items():
            s = koszul_sign(odd, m1, m2)
            if not s:
                continue
            m = tuple(a + b for a, b in zip(m1, m2))
            out[m] = out.get(m, 0) + s * c1 * c2
    return GPoly(alg, out)


# ---------------------------------------------------------------------------
# Poisson structures


class PoissonSpec:
    """Constant graded Poisson tensor of degree ``bracket_degree``.

    ``pairings`` maps (i, j) generator pairs to {z_i, z_j}; the value for
    (j, i) is filled in by graded antisymmetry.  Generators may be given by
    name or index.
    """

    def __init__(self, alg: GradedAlgebra, bracket_degree: int, pairings: Mapping):
        if bracket_degree >= 0:
            raise ValueError("bracket degree must be negative")
        self.alg = alg
        self.bracket_degree = d = bracket_degree
        table: dict[tuple[int, int], Fraction] = {}
        for (a, b), v in pairings.items():
            i = a if isinstance(a, int) else alg.index(a)
            j = b if isinstance(b, int) else alg.index(b)
            v = Fraction(v)
            if not v:
                continue
            if alg.degrees[i] + alg.degrees[j] + d != 0:
                raise ShapeError(f"pairing {(a, b)} violates the degree condition")
            sym = -v if ((alg.degrees[i] + d) * (alg.degrees[j] + d)) % 2 == 0 else v
            for key, val in (((i, j), v), ((j, i), sym)):
                if key in table and table[key] != val:
                    raise ShapeError(f"inconsistent pairing table at {key}")
                table[key] = val
        self.table = table
        self._by_left: dict[int, list[tuple[int, Fraction]]] = {}
        for (i, j), v in sorted(table.items()):
            self._by_left.setdefault(i, []).append((j, v))

    def pairing(self, i: int, j: int) -> Fraction:
        return self.table.get((i, j), Fraction(0))


def poisson_bracket(f: GPoly, g: GPoly, p: PoissonSpec) -> GPoly:
    f._check(g)
    if f.alg != p.alg:
        raise AlgebraMismatch("Poisson spec belongs to another algebra")
    if not f.terms or not g.terms:
        return f.alg.zero()
    acc: dict = {}
    for i, row in p._by_left.items():
        fi = f.right_derivative(i)
        if not fi.terms:
            continue
        for j, w in row:
            gj = g.left_derivative(j)
            if not gj.terms:
                continue
            for m, c in multiply(fi, gj).terms.items():
                acc[m] = acc.get(m, 0) + w * c
    return GPoly(f.alg, acc)


# ---------------------------------------------------------------------------
# vector fields


class GVectorField:
    """Graded (left) derivation determined by its values on generators."""

    __slots__ = ("alg", "images", "degree")

    def __init__(self, alg: GradedAlgebra, images: Mapping, degree: int):
        self.alg = alg
        self.degree = degree
        clean: dict[int, GPoly] = {}
        for k, v in images.items():
            i = k if isinstance(k, int) else alg.index(k)
            if v.alg != alg:
                raise AlgebraMismatch("image lives in another algebra")
            if v.terms:
                for m in v.terms:
                    if alg.monomial_degree(m) - alg.degrees[i] != degree:
                        raise ShapeError(
                            f"image of {alg.gens[i].name} has wrong degree for a field of degree {degree}")
                clean[i] = v
        self.images = clean

    @property
    def parity(self) -> int:
        return self.degree % 2

    def image(self, i: int) -> GPoly:
        return self.images.get(i, self.alg.zero())

    def __call__(self, f: GPoly) -> GPoly:
        if f.alg != self.alg:
            raise AlgebraMismatch("vector field applied to foreign polynomial")
        acc: dict = {}
        for k, v in self.images.items():
            dk = f.left_derivative(k)
            if not dk.terms:
                continue
            for m, c in multiply(v, dk).terms.items():
                acc[m] = acc.get(m, 0) + c
        return GPoly(self.alg, acc)

    def is_zero(self) -> bool:
        return not self.images

    def __eq__(self, other):
        if not isinstance(other, GVectorField):
            return NotImplemented
        if self.alg != other.alg:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.images == other.images

    def __add__(self, other: "GVectorField") -> "GVectorField":
        if self.alg != other.alg:
            raise AlgebraMismatch("vector fields on different algebras")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise NonHomogeneous("adding vector fields of different degree")
        keys = set(self.images) | set(other.images)
        return GVectorField(self.alg, {k: self.image(k) + other.image(k) for k in keys}, self.degree)

    def scale(self, c) -> "GVectorField":
        return GVectorField(self.alg, {k: v.scale(c) for k, v in self.images.items()}, self.degree)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self):
        parts = [f"({v})*d/d{self.alg.gens[k].name}" for k, v in sorted(self.images.items())]
        return f"GVectorField[deg {self.degree}](" + " + ".join(parts) + ")"


def coordinate_field(alg: GradedAlgebra, name_or_index) -> GVectorField:
    """The constant derivation d/dz (a left derivative)."""
    i = name_or_index if isinstance(name_or_index, int) else alg.index(name_or_index)
    return GVectorField(alg, {i: alg.one()}, -alg.degrees[i])


def vf_commutator(V: GVectorField, W: GVectorField) -> GVectorField:
    """[V, W] = V o W - (-1)^{|V||W|} W o V."""
    if V.alg != W.alg:
        raise AlgebraMismatch("vector fields on different algebras")
    alg = V.alg
    sign = -1 if (V.degree * W.degree) % 2 else 1
    images = {}
    for k in set(V.images) | set(W.images):
        val = V(W.image(k)) - W(V.image(k)).scale(sign)
        if val.terms:
            images[k] = val
    return GVectorField(alg, images, V.degree + W.degree)


def hamiltonian_vf(f: GPoly, p: PoissonSpec) -> GVectorField:
    """The left derivation g -> {f, g}."""
    deg = f.degree()
    if deg is None:
        return GVectorField(f.alg, {}, 0)
    images = {}
    for k in range(f.alg.ngens):
        v = poisson_bracket(f, f.alg.gen(k), p)
        if v.terms:
            images[k] = v
    return GVectorField(f.alg, images, deg + p.bracket_degree)


# ---------------------------------------------------------------------------
# degree slices


def degree_monomials(alg: GradedAlgebra, k: int, x_cap: int | None = None) -> list[Monomial]:
    """All monomials of total degree k in a deterministic (lexicographic) order.

    Degree-0 generators make the slice infinite; ``x_cap`` bounds their
    combined polynomial degree.
    """
    zero_deg = [i for i in range(alg.ngens) if alg.degrees[i] == 0]
    if zero_deg and x_cap is None:
        raise InfiniteSlice("degree-0 generators present; pass x_cap")
    if k < 0:
        return []
    out: list[Monomial] = []
    n = alg.ngens

    def rec(i: int, remaining: int, xleft: int, cur: list):
        if i == n:
            if remaining == 0:
                out.append(tuple(cur))
            return
        d = alg.degrees[i]
        if d == 0:
            top = xleft
        else:
            top = remaining // d
            if alg.odd[i]:
                top = min(top, 1)
        for e in range(top, -1, -1):
            cur.append(e)
            rec(i + 1, remaining - e * d, xleft - (e if d == 0 else 0), cur)
            cur.pop()

    rec(0, k, x_cap or 0, [])
    return out
