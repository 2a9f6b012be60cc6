"""
The degree-1 homological vector field on E[1] (+) ker(rho)[2] and the
cohomology of graded vector fields under [Q, .].

Over a point the anchor term is absent and ker(rho) = E, so both sets of
fibre coordinates are indexed by the same basis:

    Q = -1/2 C^c_ab xi^a xi^b d/dxi^c + b^a d/dxi^a
        - C^c_ab xi^a b^b d/db^c + 1/6 H^d_abc xi^a xi^b xi^c d/db^d
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import InvalidInput, NilpotenceFail
from .exactla import RMatrix, cohomology_dim
from .gradedpoly import (GPoly, GradedAlgebra, GVectorField, coordinate_field, degree_monomials,
                         vf_commutator)
from .twistcore import TwistedLieAlgebra, check_axioms, connection, unit


def regular_algebra(n: int) -> GradedAlgebra:
    return GradedAlgebra([(f"xi{a + 1}", 1) for a in range(n)] + [(f"b{a + 1}", 2) for a in range(n)])


@dataclass
class RegularRealization:
    algebra: TwistedLieAlgebra
    alg: GradedAlgebra
    Q: GVectorField

    @property
    def n(self) -> int:
        return self.algebra.n

    def xi(self, a: int) -> int:
        return a

    def b(self, a: int) -> int:
        return self.algebra.n + a

    def l(self, a: int) -> GVectorField:
        return coordinate_field(self.alg, self.xi(a))

    def lprime(self, a: int) -> GVectorField:
        # minus sign: with the Q above, +d/db would give -H in the triple commutator
        return coordinate_field(self.alg, self.b(a)).scale(-1)

    def l_vec(self, v) -> GVectorField:
        out = GVectorField(self.alg, {}, -1)
        for a, c in enumerate(v):
            if c:
                out = out + self.l(a).scale(c)
        return out

    def lprime_vec(self, v) -> GVectorField:
        out = GVectorField(self.alg, {}, -2)
        for a, c in enumerate(v):
            if c:
                out = out + self.lprime(a).scale(c)
        return out


def assemble_q(T: TwistedLieAlgebra) -> RegularRealization:
    """Assemble Q from the structure constants without any validity check."""
    n = T.n
    alg = regular_algebra(n)
    xi = [alg.gen(a) for a in range(n)]
    b = [alg.gen(n + a) for a in range(n)]
    images = {}
    for c in range(n):
        f = b[c]
        for a, bb in combinations(range(n), 2):
            v = T.C(a, bb, c)
            if v:
                f = f - (xi[a] * xi[bb]).scale(v)
        images[c] = f
    for c in range(n):
        g = alg.zero()
        for a in range(n):
            for B in range(n):
                v = T.C(a, B, c)
                if v:
                    g = g - (xi[a] * b[B]).scale(v)
        for a, bb, cc, d, v in T.twist_items():
            if d == c:
                g = g + (xi[a] * xi[bb] * xi[cc]).scale(v)
        if g:
            images[n + c] = g
    return RegularRealization(T, alg, GVectorField(alg, images, 1))


def build_regular_q(T: TwistedLieAlgebra) -> RegularRealization:
    if not check_axioms(T).valid:
        raise InvalidInput("algebra fails the twisted Lie axioms")
    R = assemble_q(T)
    if not vf_commutator(R.Q, R.Q).is_zero():
        raise NilpotenceFail("[Q,Q] != 0 for a valid algebra")
    return R


def _field_coeffs(R: RegularRealization, V: GVectorField) -> tuple[list, list]:
    """Constant coefficients of a degree -1 / -2 field: (d/dxi part, d/db part)."""
    n = R.n
    one = (0,) * R.alg.ngens

    def const(p: GPoly) -> Fraction:
        return p.terms.get(one, Fraction(0))

    return [const(V.image(R.xi(a))) for a in range(n)], [const(V.image(R.b(a))) for a in range(n)]


@dataclass
class DerivedIdentityReport:
    bracket: dict
    twist: dict
    connection: dict
    anchor: str = "vacuous"

    @property
    def valid(self) -> bool:
        return not (self.bracket or self.twist or self.connection)


def derived_identity_check(R: RegularRealization) -> DerivedIdentityReport:
    """Check

        l[psi1, psi2]        = pr_xi [[l psi1, Q], l psi2]
        l' H(psi1,psi2,psi3) = [[[Q, l psi1], l psi2], l psi3]
        l' nabla_psi phi     = [[Q, l psi], l' phi]

    on all basis tuples, with l(e_a) = d/dxi^a and l'(e_a) = -d/db^a.
    Residuals are the constant coefficients of the difference fields.
    """
    T, n, Q = R.algebra, R.n, R.Q
    br_res, tw_res, cn_res = {}, {}, {}

    def flat(V):
        xs, bs = _field_coeffs(R, V)
        return xs + bs

    for a in range(n):
        la_Q = vf_commutator(R.l(a), Q)
        Q_la = vf_commutator(Q, R.l(a))
        for bb in range(n):
            xs, _ = _field_coeffs(R, vf_commutator(la_Q, R.l(bb)) - R.l_vec(T.bracket(unit(n, a), unit(n, bb))))
            if any(xs):
                br_res[(a, bb)] = xs
            W = vf_commutator(Q_la, R.l(bb))
            for cc in range(n):
                r = flat(vf_commutator(W, R.l(cc)) - R.lprime_vec(T.twist(unit(n, a), unit(n, bb), unit(n, cc))))
                if any(r):
                    tw_res[(a, bb, cc)] = r
            r = flat(vf_commutator(Q_la, R.lprime(bb)) - R.lprime_vec(connection(T, a, unit(n, bb))))
            if any(r):
                cn_res[(a, bb)] = r
    return DerivedIdentityReport(br_res, tw_res, cn_res)


# ---------------------------------------------------------------------------
# regular cohomology


def field_slice(R: RegularRealization, k: int) -> list[tuple[tuple, int]]:
    """Basis of degree-k vector fields: (coefficient monomial, generator index)."""
    out = []
    for g in range(R.alg.ngens):
        for m in degree_monomials(R.alg, k + R.alg.degrees[g]):
            out.append((m, g))
    return out


def _field_of(R: RegularRealization, m: tuple, g: int, k: int) -> GVectorField:
    return GVectorField(R.alg, {g: GPoly(R.alg, {m: 1})}, k)


def regular_d_matrix(R: RegularRealization, k: int) -> RMatrix:
    """Matrix of V -> [Q, V] from degree k to degree k+1 fields."""
    src = field_slice(R, k)
    tgt = field_slice(R, k + 1)
    index = {key: i for i, key in enumerate(tgt)}
    data = {}
    for j, (m, g) in enumerate(src):
        W = vf_commutator(R.Q, _field_of(R, m, g, k))
        for h, poly in W.images.items():
            for mm, c in poly.terms.items():
                data[(index[(mm, h)], j)] = c
    return RMatrix(len(tgt), len(src), data)


def regular_cohomology(T: TwistedLieAlgebra, kmin: int = -2, kmax: int = 2,
                       R: RegularRealization | None = None) -> dict[int, int]:
    """dim H^k of (X_.(M), [Q, .]) for kmin <= k <= kmax."""
    if kmin < -2:
        kmin = -2
    R = R or build_regular_q(T)
    mats = {k: regular_d_matrix(R, k) for k in range(kmin - 1, kmax + 1)}
    return {k: cohomology_dim(mats[k - 1], mats[k]) for k in range(kmin, kmax + 1)}
