"""
Split structures and their degree-3 symplectic (PQ3) realization.

Generators, in this order: x^i (degree 0), xi^a (1), b_a (2), theta_i (3),
with the degree -3 Poisson tensor {b_a, xi^a} = 1, {theta_i, x^i} = 1.
The Hamiltonian is

    Theta = rho^i_a theta_i xi^a + 1/2 C^c_ab xi^a xi^b b_c
            + 1/24 h_abcd xi^a xi^b xi^c xi^d + 1/2 B^ab b_a b_b

Coefficients may be polynomials in x.  Index conventions are 0-based;
C[(a, b, c)] is C^c_ab, h is alternating, B symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Mapping

from .errors import (BNotClosed, CourantAxiomFail, InfiniteSlice, NoSolution, NotDegree4,
                     NotNilpotent, ShapeError)
from .exactla import RMatrix, cohomology_dim, solve
from .gradedpoly import GPoly, GradedAlgebra, PoissonSpec, degree_monomials, poisson_bracket
from .twistcore import (MultiForm, TwistedLieAlgebra, _perm_sign, check_axioms,
                        exterior_derivative, jacobiator, transform)

Z = Fraction(0)

# H^d_abc = KAPPA * h_abce B^ed makes check_split equivalent to {Theta,Theta} = 0
KAPPA = Fraction(-1)
# derived brackets return NORM[...] times the input coefficient
NORM = {"C": Fraction(-1), "rho": Fraction(-1), "B": Fraction(1), "h": Fraction(1)}


# ---------------------------------------------------------------------------
# data containers


def _alt_completion(data: Mapping, arity: int, what: str) -> dict:
    """Store an alternating tensor by sorted keys; reject inconsistent input."""
    out = {}
    for key, v in data.items():
        key = tuple(key)
        if len(key) != arity:
            raise ShapeError(f"{what} keys need {arity} indices")
        if len(set(key)) < arity:
            if v:
                raise ShapeError(f"{what} must be alternating")
            continue
        order = sorted(range(arity), key=lambda i: key[i])
        s = _perm_sign(tuple(order))
        k = tuple(sorted(key))
        val = v.scale(s) if hasattr(v, "scale") else s * v
        if k in out and out[k] != val:
            raise ShapeError(f"{what} not alternating at {key}")
        out[k] = val
    return out


def _sym_completion(data: Mapping, what: str) -> dict:
    out = {}
    for (a, b), v in data.items():
        k = (min(a, b), max(a, b))
        if k in out and out[k] != v:
            raise ShapeError(f"{what} not symmetric at {(a, b)}")
        out[k] = v
    return out


def _skew_bracket(data: Mapping, what: str = "C") -> dict:
    """C[(a, b, c)] = C^c_ab, stored with a < b."""
    out = {}
    for (a, b, c), v in data.items():
        if a == b:
            if v:
                raise ShapeError(f"{what} must be skew in the lower indices")
            continue
        k, val = ((a, b, c), v) if a < b else ((b, a, c), -v)
        if k in out and out[k] != val:
            raise ShapeError(f"{what} not skew at {(a, b, c)}")
        out[k] = val
    return out


@dataclass
class SplitData:
    """Point-base split data (C, h, B) of rank n with rational coefficients."""

    n: int
    C: dict = field(default_factory=dict)
    h: dict = field(default_factory=dict)
    B: dict = field(default_factory=dict)

    def __post_init__(self):
        n = self.n
        for name, arity in (("C", 3), ("h", 4), ("B", 2)):
            for key in getattr(self, name):
                if len(key) != arity or any(not 0 <= i < n for i in key):
                    raise ShapeError(f"{name} index {key} out of range for n={n}")
        self.C = {k: Fraction(v) for k, v in _skew_bracket(self.C).items() if v}
        self.h = {k: Fraction(v) for k, v in _alt_completion(self.h, 4, "h").items() if v}
        self.B = {k: Fraction(v) for k, v in _sym_completion(self.B, "B").items() if v}

    def c(self, a, b, c) -> Fraction:
        if a == b:
            return Z
        return self.C.get((a, b, c), Z) if a < b else -self.C.get((b, a, c), Z)

    def hval(self, key) -> Fraction:
        if len(set(key)) < 4:
            return Z
        order = sorted(range(4), key=lambda i: key[i])
        return _perm_sign(tuple(order)) * self.h.get(tuple(sorted(key)), Z)

    def bval(self, a, b) -> Fraction:
        return self.B.get((min(a, b), max(a, b)), Z)

    def bracket_algebra(self) -> TwistedLieAlgebra:
        """The bracket alone, with zero twist."""
        return TwistedLieAlgebra(self.n, self.C)

    def twist(self) -> dict:
        """H^d_abc = KAPPA h_abce B^ed for a < b < c."""
        n = self.n
        out = {}
        for a, b, c in combinations(range(n), 3):
            for d in range(n):
                v = sum((self.hval((a, b, c, e)) * self.bval(e, d) for e in range(n)), Z)
                if v:
                    out[(a, b, c, d)] = KAPPA * v
        return out

    def algebra(self) -> TwistedLieAlgebra:
        return TwistedLieAlgebra(self.n, self.C, self.twist())

    def to_pq3(self) -> "PQ3Data":
        return PQ3Data(0, self.n, {}, dict(self.C), dict(self.h), dict(self.B))


@dataclass
class PQ3Data:
    """Split data over an m-dimensional polynomial base.

    Every coefficient is a rational number or a dict mapping exponent
    tuples (length m) to rationals, i.e. a polynomial in x^1..x^m.
    ``rho[(i, a)]`` is rho^i_a.
    """

    m: int
    n: int
    rho: dict = field(default_factory=dict)
    C: dict = field(default_factory=dict)
    h: dict = field(default_factory=dict)
    B: dict = field(default_factory=dict)

    def __post_init__(self):
        m, n = self.m, self.n
        if m < 0 or n < 0:
            raise ShapeError("negative dimension")
        for (i, a) in self.rho:
            if not (0 <= i < m and 0 <= a < n):
                raise ShapeError(f"rho index {(i, a)} out of range")
        for name, arity in (("C", 3), ("h", 4), ("B", 2)):
            for key in getattr(self, name):
                if len(key) != arity or any(not 0 <= i < n for i in key):
                    raise ShapeError(f"{name} index {key} out of range for n={n}")
        self.rho = {k: _xpoly_spec(v, m) for k, v in self.rho.items()}
        self.C = _skew_bracket({k: _xpoly_spec(v, m) for k, v in self.C.items()})
        self.h = _alt_completion({k: _xpoly_spec(v, m) for k, v in self.h.items()}, 4, "h")
        self.B = _sym_completion({k: _xpoly_spec(v, m) for k, v in self.B.items()}, "B")


class _XPoly(dict):
    """Polynomial in x as {exponents: Fraction}; hashable-free helper with arithmetic."""

    def __neg__(self):
        return _XPoly({k: -v for k, v in self.items()})

    def scale(self, s):
        return _XPoly({k: s * v for k, v in self.items() if s * v})

    def __bool__(self):
        return any(self.values())


def _xpoly_spec(v, m: int) -> _XPoly:
    if isinstance(v, Mapping):
        out = _XPoly()
        for e, c in v.items():
            e = tuple(e)
            if len(e) != m or any(k < 0 for k in e):
                raise ShapeError(f"bad exponent {e} for m={m}")
            c = Fraction(c)
            if c:
                out[e] = out.get(e, Z) + c
        return _XPoly({k: c for k, c in out.items() if c})
    c = Fraction(v)
    return _XPoly({(0,) * m: c}) if c else _XPoly()


# ---------------------------------------------------------------------------
# the graded symplectic space


@dataclass
class PQ3Space:
    m: int
    n: int
    alg: GradedAlgebra
    spec: PoissonSpec

    def x(self, i):
        return i

    def xi(self, a):
        return self.m + a

    def b(self, a):
        return self.m + self.n + a

    def theta(self, i):
        return self.m + 2 * self.n + i

    def gen(self, k) -> GPoly:
        return self.alg.gen(k)

    def xpoly(self, p: Mapping) -> GPoly:
        terms = {}
        for e, c in p.items():
            terms[tuple(e) + (0,) * (2 * self.n + self.m)] = c
        return GPoly(self.alg, terms)


_SPACES: dict = {}


def pq3_space(m: int, n: int) -> PQ3Space:
    key = (m, n)
    if key not in _SPACES:
        gens = ([(f"x{i + 1}", 0) for i in range(m)] + [(f"xi{a + 1}", 1) for a in range(n)]
                + [(f"b{a + 1}", 2) for a in range(n)] + [(f"theta{i + 1}", 3) for i in range(m)])
        alg = GradedAlgebra(gens)
        pairs = {(m + n + a, m + a): 1 for a in range(n)}
        pairs.update({(m + 2 * n + i, i): 1 for i in range(m)})
        _SPACES[key] = PQ3Space(m, n, alg, PoissonSpec(alg, -3, pairs))
    return _SPACES[key]


def space_of(theta: GPoly) -> PQ3Space:
    """Recover (m, n) from the generator degrees of a PQ3 algebra."""
    degs = theta.alg.degrees
    m = sum(1 for d in degs if d == 0)
    n = sum(1 for d in degs if d == 1)
    sp = pq3_space(m, n)
    if sp.alg != theta.alg:
        raise ShapeError("polynomial does not live on a PQ3 generator set")
    return sp


def build_theta(P: PQ3Data | SplitData) -> GPoly:
    if isinstance(P, SplitData):
        P = P.to_pq3()
    sp = pq3_space(P.m, P.n)
    xi, b, th = sp.xi, sp.b, sp.theta
    g = sp.gen
    out = sp.alg.zero()
    for (i, a), p in P.rho.items():
        out = out + sp.xpoly(p) * g(th(i)) * g(xi(a))
    for (a, bb, c), p in P.C.items():
        out = out + sp.xpoly(p) * g(xi(a)) * g(xi(bb)) * g(b(c))
    for (a, bb, c, d), p in P.h.items():
        out = out + sp.xpoly(p) * g(xi(a)) * g(xi(bb)) * g(xi(c)) * g(xi(d))
    for (a, bb), p in P.B.items():
        mono = g(b(a)) * g(b(bb))
        out = out + sp.xpoly(p) * (mono if a != bb else mono.scale(Fraction(1, 2)))
    return out


COMPONENTS = ("theta_xi_xi", "xi3_b", "xi5", "xi_b_b", "theta_b")


def _component(sp: PQ3Space, mono) -> str:
    m, n = sp.m, sp.n
    nxi = sum(mono[m:m + n])
    nb = sum(mono[m + n:m + 2 * n])
    nth = sum(mono[m + 2 * n:])
    key = (nth, nxi, nb)
    return {(1, 2, 0): "theta_xi_xi", (0, 3, 1): "xi3_b", (0, 5, 0): "xi5",
            (0, 1, 2): "xi_b_b", (1, 0, 1): "theta_b"}.get(key, "other")


@dataclass
class NilpotenceResidual:
    total: GPoly
    components: dict  # name -> GPoly

    @property
    def is_zero(self) -> bool:
        return self.total.is_zero()

    def nonzero_components(self) -> list[str]:
        return [k for k, v in self.components.items() if not v.is_zero()]


def nilpotence_residual(theta: GPoly) -> NilpotenceResidual:
    """1/2 {Theta, Theta}, split by (theta, xi, b) content of each monomial."""
    sp = space_of(theta)
    if not theta.is_zero() and theta.degree() != 4:
        raise NotDegree4("Theta must be homogeneous of degree 4")
    total = poisson_bracket(theta, theta, sp.spec).scale(Fraction(1, 2))
    comps = {k: {} for k in COMPONENTS + ("other",)}
    for mono, c in total.terms.items():
        comps[_component(sp, mono)][mono] = c
    parts = {k: GPoly(sp.alg, v) for k, v in comps.items()}
    if parts["other"].is_zero():
        del parts["other"]
    return NilpotenceResidual(total, parts)


# ---------------------------------------------------------------------------
# point-base equations


@dataclass
class SplitReport:
    jacobi: dict  # (a, b, c) -> {d: residual}
    dh: dict  # sorted 5-tuple -> residual
    dB: dict  # (a, b, c) -> residual of nabla_a B^{bc}
    vacuous: tuple = ("anchor-morphism", "rho-B")
    algebra: TwistedLieAlgebra | None = None
    cross_check: bool | None = None

    @property
    def valid(self) -> bool:
        return not (self.jacobi or self.dh or self.dB)


def _db_residual(n: int, c, bval) -> dict:
    out = {}
    for a in range(n):
        for b_, cc in combinations_with_replacement_n(n):
            v = sum((c(a, d, b_) * bval(d, cc) + c(a, d, cc) * bval(b_, d) for d in range(n)), Z)
            if v:
                out[(a, b_, cc)] = v
    return out


def combinations_with_replacement_n(n: int):
    return [(i, j) for i in range(n) for j in range(i, n)]


def check_split(S: SplitData) -> SplitReport:
    if not isinstance(S, SplitData):
        raise ShapeError("expected SplitData")
    n = S.n
    T0 = S.bracket_algebra()
    H = S.twist()
    jac = {}
    for abc in combinations(range(n), 3):
        r = dict(jacobiator(T0, *abc))
        for d in range(n):
            v = H.get((*abc, d), Z)
            if v:
                r[d] = r.get(d, Z) - v
        r = {d: v for d, v in r.items() if v}
        if r:
            jac[abc] = r
    hform = MultiForm(n, 4, 0, {(k, ()): v for k, v in S.h.items()})
    dh = {I: v for (I, _), v in exterior_derivative(T0, hform).coeffs.items() if v}
    dB = _db_residual(n, S.c, S.bval)
    rep = SplitReport(jac, dh, dB)
    if rep.valid:
        T = S.algebra()
        rep.algebra = T
        rep.cross_check = check_axioms(T).valid
    return rep


def solve_h_given_B(T: TwistedLieAlgebra, B: Mapping) -> dict:
    """Find an alternating h with D h = 0 and H = KAPPA B#(h~).

    Returns {sorted 4-tuple: value}; raises NoSolution if none exists and
    BNotClosed if B is not invariant.
    """
    n = T.n
    Bs = {k: Fraction(v) for k, v in _sym_completion(B, "B").items() if v}

    def bval(a, b):
        return Bs.get((min(a, b), max(a, b)), Z)

    if _db_residual(n, T.C, bval):
        raise BNotClosed("D B != 0")
    unknowns = list(combinations(range(n), 4))
    uidx = {k: i for i, k in enumerate(unknowns)}
    rows, rhs = [], []

    def hcoef(key):
        if len(set(key)) < 4:
            return None, 0
        order = sorted(range(4), key=lambda i: key[i])
        return uidx[tuple(sorted(key))], _perm_sign(tuple(order))

    for a, b, c in combinations(range(n), 3):
        for d in range(n):
            row = {}
            for e in range(n):
                w = bval(e, d)
                if not w:
                    continue
                j, s = hcoef((a, b, c, e))
                if j is not None:
                    row[j] = row.get(j, Z) + KAPPA * s * w
            rows.append(row)
            rhs.append(T.H(a, b, c, d))
    T0 = TwistedLieAlgebra(n, T.bracket_dict())
    dcols = []
    for k in unknowns:
        dcols.append(exterior_derivative(T0, MultiForm(n, 4, 0, {(k, ()): 1})).coeffs)
    for I in combinations(range(n), 5):
        row = {}
        for j, col in enumerate(dcols):
            v = col.get((I, ()), Z)
            if v:
                row[j] = v
        rows.append(row)
        rhs.append(Z)
    A = RMatrix(len(rows), len(unknowns), {(i, j): v for i, r in enumerate(rows) for j, v in r.items()})
    sol = solve(A, rhs)
    if sol is None:
        raise NoSolution("no D-closed h reproduces the twist")
    return {k: v for k, v in zip(unknowns, sol) if v}


# ---------------------------------------------------------------------------
# derived brackets


@dataclass
class DerivedStructures:
    """Raw derived-bracket values and the same values divided by NORM."""

    C: dict  # (a, b, c) -> C^c_ab, a < b
    rho: dict  # (i, a) -> polynomial (as GPoly in x)
    B: dict  # (a, b) -> value, a <= b
    h: dict  # sorted 4-tuple -> value
    raw: dict
    n: int = 0

    def split_data(self) -> SplitData:
        """Point-base split data; only meaningful when rho vanishes."""
        return SplitData(self.n, self.C, self.h, self.B)


def _const_or_poly(p: GPoly, sp: PQ3Space):
    """Coefficient of a degree-0 function: a Fraction when constant."""
    if p.is_zero():
        return Z
    if all(not any(mono) for mono in p.terms):
        return next(iter(p.terms.values()))
    return p


def derived_structures(theta: GPoly) -> DerivedStructures:
    sp = space_of(theta)
    if not nilpotence_residual(theta).is_zero:
        raise NotNilpotent("{Theta, Theta} != 0")
    m, n, spec, g = sp.m, sp.n, sp.spec, sp.gen

    def pb(f, h):
        return poisson_bracket(f, h, spec)

    with_b = {a: pb(theta, g(sp.b(a))) for a in range(n)}
    rawC, rawrho, rawB, rawh = {}, {}, {}, {}
    for a in range(n):
        for bb in range(n):
            if a >= bb:
                continue
            f = pb(with_b[a], g(sp.b(bb)))
            for mono, c in f.terms.items():
                # b-linear part: a single b, nothing else except x
                bs = [k for k in range(n) if mono[sp.b(k)]]
                if len(bs) == 1 and sum(mono[m:]) == 1:
                    rawC[(a, bb, bs[0])] = rawC.get((a, bb, bs[0]), Z) + c
        for i in range(m):
            v = _const_or_poly(pb(with_b[a], g(sp.x(i))), sp)
            if v:
                rawrho[(i, a)] = v
    for a in range(n):
        ta = pb(theta, g(sp.xi(a)))
        for bb in range(a, n):
            v = _const_or_poly(pb(ta, g(sp.xi(bb))), sp)
            if v:
                rawB[(a, bb)] = v
    for key in combinations(range(n), 4):
        f = theta
        for k in key:
            f = pb(f, g(sp.b(k)))
        v = _const_or_poly(f, sp)
        if v:
            rawh[key] = v

    def norm(d, k):
        return {key: (v / NORM[k] if isinstance(v, Fraction) else v.scale(1 / NORM[k])) for key, v in d.items()}

    raw = {"C": rawC, "rho": rawrho, "B": rawB, "h": rawh}
    return DerivedStructures(norm(rawC, "C"), norm(rawrho, "rho"), norm(rawB, "B"), norm(rawh, "h"), raw, n)


# ---------------------------------------------------------------------------
# polynomial helpers for x-dependent coefficients


def _xadd(p: Mapping, q: Mapping, s=1) -> _XPoly:
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, Z) + s * c
    return _XPoly({e: c for e, c in out.items() if c})


def _xmul(p: Mapping, q: Mapping) -> _XPoly:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, Z) + c1 * c2
    return _XPoly({e: c for e, c in out.items() if c})


def _xderiv(p: Mapping, j: int) -> _XPoly:
    out = {}
    for e, c in p.items():
        if e[j]:
            e2 = list(e)
            e2[j] -= 1
            out[tuple(e2)] = c * e[j]
    return _XPoly(out)


# ---------------------------------------------------------------------------
# Courant algebroids and their lift


@dataclass
class CourantData:
    """Anchor rho^i_a(x), constant metric g^{ab} and C_abc(x) (alternating)."""

    m: int
    n: int
    rho: dict = field(default_factory=dict)
    g: list = field(default_factory=list)
    C: dict = field(default_factory=dict)

    def __post_init__(self):
        m, n = self.m, self.n
        self.g = [[Fraction(v) for v in row] for row in self.g] if self.g else \
            [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        if len(self.g) != n or any(len(r) != n for r in self.g):
            raise ShapeError("g must be n x n")
        if any(self.g[i][j] != self.g[j][i] for i in range(n) for j in range(n)):
            raise ShapeError("g must be symmetric")
        if RMatrix.from_rows(self.g).rows and _rank_of(self.g) < n:
            raise ShapeError("g must be invertible")
        for (i, a) in self.rho:
            if not (0 <= i < m and 0 <= a < n):
                raise ShapeError(f"rho index {(i, a)} out of range")
        self.rho = {k: _xpoly_spec(v, m) for k, v in self.rho.items()}
        self.C = _alt_completion({k: _xpoly_spec(v, m) for k, v in self.C.items()}, 3, "C")


def _rank_of(rows) -> int:
    from .exactla import rank
    return rank(RMatrix.from_rows(rows))


def courant_space(m: int, n: int, g) -> tuple[GradedAlgebra, PoissonSpec]:
    gens = ([(f"x{i + 1}", 0) for i in range(m)] + [(f"xi{a + 1}", 1) for a in range(n)]
            + [(f"b{i + 1}", 2) for i in range(m)])
    alg = GradedAlgebra(gens)
    pairs = {}
    for a in range(n):
        for b in range(a, n):
            if g[a][b]:
                pairs[(m + a, m + b)] = g[a][b]
    for i in range(m):
        pairs[(m + n + i, i)] = 1
    return alg, PoissonSpec(alg, -2, pairs)


def _poly_on(alg: GradedAlgebra, p: Mapping, m: int) -> GPoly:
    pad = (0,) * (alg.ngens - m)
    return GPoly(alg, {tuple(e) + pad: c for e, c in p.items()})


@dataclass
class CourantLift:
    theta_A: GPoly
    theta: GPoly
    data: PQ3Data
    residual: NilpotenceResidual

    @property
    def nilpotent(self) -> bool:
        return self.residual.is_zero


def courant_theta(CD: CourantData) -> tuple[GPoly, PoissonSpec]:
    m, n = CD.m, CD.n
    alg, spec = courant_space(m, n, CD.g)
    g = alg.gen
    out = alg.zero()
    for (i, a), p in CD.rho.items():
        out = out + _poly_on(alg, p, m) * g(m + a) * g(m + n + i)
    for (a, b, c), p in CD.C.items():
        out = out + _poly_on(alg, p, m) * g(m + a) * g(m + b) * g(m + c)
    return out, spec


def lift_data(CD: CourantData) -> PQ3Data:
    """Split data of rank n + m read off from the Hamiltonian lift.

    Index n + i is the odd coordinate conjugate to b_i.  Since {b_i, xi^i} = +1
    makes xi^i minus the momentum of b_i, the two terms coming from Q_A(b_i)
    (the d rho and dC terms) enter with a minus sign; with a plus sign the
    lift fails to be nilpotent as soon as rho depends on x.
    """
    m, n, gm = CD.m, CD.n, CD.g
    rho, C, h, B = {}, {}, {}, {}
    for (i, a), p in CD.rho.items():
        rho[(i, a)] = p
    for (a, b, c), p in CD.C.items():
        # C_abc g^{cd} and the two other placements of the free index
        for (x, y, z), s in (((a, b, c), 1), ((b, c, a), 1), ((c, a, b), 1)):
            for d in range(n):
                if gm[z][d]:
                    C[(x, y, d)] = _xadd(C.get((x, y, d), {}), p.scale(s * gm[z][d]))
        for i in range(m):
            dp = _xderiv(p, i)
            if dp:
                h[(a, b, c, n + i)] = -dp
    for (i, a), p in CD.rho.items():
        for j in range(m):
            dp = _xderiv(p, j)
            if dp:
                C[(a, n + j, n + i)] = _xadd(C.get((a, n + j, n + i), {}), dp, -1)
        for b in range(n):
            if gm[a][b]:
                B[(n + i, b)] = _xadd(B.get((n + i, b), {}), p.scale(gm[a][b]))
    clean = lambda d: {k: v for k, v in d.items() if v}
    return PQ3Data(m, n + m, clean(rho), clean(C), clean(h), clean(B))


def lift_courant(CD: CourantData) -> CourantLift:
    theta_A, spec = courant_theta(CD)
    if not poisson_bracket(theta_A, theta_A, spec).is_zero():
        raise CourantAxiomFail("{Theta_A, Theta_A} != 0")
    P = lift_data(CD)
    theta = build_theta(P)
    return CourantLift(theta_A, theta, P, nilpotence_residual(theta))


# ---------------------------------------------------------------------------
# split cohomology and the tangent complex


def split_d_matrix(theta: GPoly, k: int) -> RMatrix:
    sp = space_of(theta)
    src = degree_monomials(sp.alg, k)
    tgt = degree_monomials(sp.alg, k + 1)
    index = {mono: i for i, mono in enumerate(tgt)}
    data = {}
    for j, mono in enumerate(src):
        image = poisson_bracket(theta, GPoly(sp.alg, {mono: 1}), sp.spec)
        for mm, c in image.terms.items():
            data[(index[mm], j)] = c
    return RMatrix(len(tgt), len(src), data)


def split_cohomology(S: SplitData | PQ3Data, N: int) -> dict[int, int]:
    """dim H^k(O(M), {Theta, .}) for 0 <= k <= N at a point base."""
    if isinstance(S, PQ3Data) and S.m > 0:
        raise InfiniteSlice("split cohomology needs a point base (m = 0)")
    theta = build_theta(S)
    if not nilpotence_residual(theta).is_zero:
        raise NotNilpotent("{Theta, Theta} != 0")
    mats = {-1: RMatrix.zeros(1, 0)}
    for k in range(0, N + 1):
        mats[k] = split_d_matrix(theta, k)
    return {k: cohomology_dim(mats[k - 1], mats[k]) for k in range(0, N + 1)}


@dataclass
class TangentComplexReport:
    rho_B: dict  # (i, b) -> nonzero polynomial entries of rho . B#
    B_rhoT: dict  # (a, i) -> entries of B# . rho^T

    @property
    def valid(self) -> bool:
        return not self.rho_B and not self.B_rhoT


def tangent_complex_check(P: PQ3Data) -> TangentComplexReport:
    if not isinstance(P, PQ3Data):
        raise ShapeError("expected PQ3Data")
    m, n = P.m, P.n

    def Bv(a, b):
        return P.B.get((min(a, b), max(a, b)), {})

    rb, br = {}, {}
    for i in range(m):
        for b in range(n):
            acc = _XPoly()
            for a in range(n):
                acc = _xadd(acc, _xmul(P.rho.get((i, a), {}), Bv(a, b)))
            if acc:
                rb[(i, b)] = acc
    for a in range(n):
        for i in range(m):
            acc = _XPoly()
            for b in range(n):
                acc = _xadd(acc, _xmul(Bv(a, b), P.rho.get((i, b), {})))
            if acc:
                br[(a, i)] = acc
    return TangentComplexReport(rb, br)


def transform_split(S: SplitData, g, ginv) -> SplitData:
    """Rewrite split data in the basis f_a = sum_b g[b][a] e_b."""
    n = S.n
    G = [[Fraction(v) for v in row] for row in g]
    Gi = [[Fraction(v) for v in row] for row in ginv]
    T = transform(S.bracket_algebra(), G, Gi)
    h = {}
    for key in combinations(range(n), 4):
        v = Z
        for src, hv in S.h.items():
            for perm in permutations(src):
                t = _perm_sign(perm)
                w = G[perm[0]][key[0]] * G[perm[1]][key[1]] * G[perm[2]][key[2]] * G[perm[3]][key[3]]
                if w:
                    v += t * hv * w
        if v:
            h[key] = v
    B = {}
    for a in range(n):
        for b in range(a, n):
            v = sum((Gi[a][i] * Gi[b][j] * S.bval(i, j) for i in range(n) for j in range(n)), Z)
            if v:
                B[(a, b)] = v
    return SplitData(n, T.bracket_dict(), h, B)
