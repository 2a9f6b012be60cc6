"""
Two-term L-infinity algebras and L-infinity morphisms between twisted algebras.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from .errors import DimError, InvalidInput, ShapeError
from .exactla import RMatrix
from .twistcore import TwistedLieAlgebra, _perm_sign, check_axioms, unit

Z = Fraction(0)


def _vec(d: int) -> list[Fraction]:
    return [Z] * d


def _nz(v) -> dict:
    return {i: x for i, x in enumerate(v) if x}


@dataclass
class L2Algebra:
    """Complex V1 -del-> V0 with bracket on V0, action V0 x V1 -> V1 and l3: Lambda^3 V0 -> V1.

    ``bracket[(a, b)]``, ``action[(a, f)]`` and ``l3[(a, b, c)]`` hold
    coefficient lists; missing keys are zero.  bracket is completed by
    skew-symmetry and l3 by alternation on construction.
    """

    dimV1: int
    dimV0: int
    del_: RMatrix
    bracket: dict = field(default_factory=dict)
    action: dict = field(default_factory=dict)
    l3: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.del_.shape != (self.dimV0, self.dimV1):
            raise ShapeError("del must be a dimV0 x dimV1 matrix")
        br = {}
        for (a, b), v in self.bracket.items():
            v = [Fraction(x) for x in v]
            if a == b:
                if any(v):
                    raise ShapeError("bracket not skew")
                continue
            br[(a, b)] = v
            neg = [-x for x in v]
            if (b, a) in self.bracket and [Fraction(x) for x in self.bracket[(b, a)]] != neg:
                raise ShapeError(f"bracket not skew at {(a, b)}")
            br[(b, a)] = neg
        self.bracket = br
        l3 = {}
        for key, v in self.l3.items():
            v = [Fraction(x) for x in v]
            for perm in permutations(range(3)):
                k2 = tuple(key[i] for i in perm)
                s = _perm_sign(perm)
                if _perm_sign(key) == 0:
                    if any(v):
                        raise ShapeError("l3 not alternating")
                    break
                w = [s * x for x in v]
                if k2 in l3 and l3[k2] != w:
                    raise ShapeError(f"l3 not alternating at {key}")
                l3[k2] = w
        self.l3 = l3
        self.action = {k: [Fraction(x) for x in v] for k, v in self.action.items()}

    # bilinear extensions
    def br(self, x, y) -> list[Fraction]:
        out = _vec(self.dimV0)
        for a, xa in _nz(x).items():
            for b, yb in _nz(y).items():
                v = self.bracket.get((a, b))
                if v:
                    for c, w in enumerate(v):
                        out[c] += xa * yb * w
        return out

    def act(self, x, f) -> list[Fraction]:
        out = _vec(self.dimV1)
        for a, xa in _nz(x).items():
            for i, fi in _nz(f).items():
                v = self.action.get((a, i))
                if v:
                    for c, w in enumerate(v):
                        out[c] += xa * fi * w
        return out

    def L3(self, x, y, z) -> list[Fraction]:
        out = _vec(self.dimV1)
        for a, xa in _nz(x).items():
            for b, yb in _nz(y).items():
                for c, zc in _nz(z).items():
                    v = self.l3.get((a, b, c))
                    if v:
                        for d, w in enumerate(v):
                            out[d] += xa * yb * zc * w
        return out

    def d(self, f) -> list[Fraction]:
        return self.del_.apply(f)


def from_twisted(T: TwistedLieAlgebra) -> L2Algebra:
    """V1 = ker(rho) = E embedded in V0 = E; bracket, action = nabla, l3 = H."""
    if not check_axioms(T).valid:
        raise InvalidInput("algebra fails the twisted Lie axioms")
    n = T.n
    bracket, action, l3 = {}, {}, {}
    for a in range(n):
        for b in range(n):
            v = T.bracket_vec(a, b)
            if v:
                full = [v.get(c, Z) for c in range(n)]
                action[(a, b)] = full
                if a < b:
                    bracket[(a, b)] = full
    for a, b, c in combinations(range(n), 3):
        v = T.twist_vec(a, b, c)
        if v:
            l3[(a, b, c)] = [v.get(d, Z) for d in range(n)]
    return L2Algebra(n, n, RMatrix.identity(n), bracket, action, l3)


AXIOMS = ("n=2", "n=2b", "n=3", "n=3b", "n=4")


@dataclass
class L2Report:
    residuals: dict  # axiom name -> {basis tuple: nonzero residual vector}

    @property
    def valid(self) -> bool:
        return not any(self.residuals.values())

    def max_abs(self, axiom: str) -> Fraction:
        return max((abs(x) for r in self.residuals[axiom].values() for x in r), default=Z)


def _sub(u, v):
    return [a - b for a, b in zip(u, v)]


def _add(u, v):
    return [a + b for a, b in zip(u, v)]


def check_l2_axioms(L: L2Algebra) -> L2Report:
    n0, n1 = L.dimV0, L.dimV1
    e0 = [unit(n0, i) for i in range(n0)]
    e1 = [unit(n1, i) for i in range(n1)]
    res = {k: {} for k in AXIOMS}

    def put(name, key, v):
        if any(v):
            res[name][key] = v

    for a in range(n0):
        for f in range(n1):
            # [phi, del f] = del(phi |> f)
            put("n=2", (a, f), _sub(L.br(e0[a], L.d(e1[f])), L.d(L.act(e0[a], e1[f]))))
    for f in range(n1):
        for g in range(f, n1):
            put("n=2b", (f, g), _add(L.act(L.d(e1[f]), e1[g]), L.act(L.d(e1[g]), e1[f])))
    for a, b, c in combinations(range(n0), 3):
        x, y, z = e0[a], e0[b], e0[c]
        jac = _add(_add(L.br(x, L.br(y, z)), L.br(y, L.br(z, x))), L.br(z, L.br(x, y)))
        put("n=3", (a, b, c), _sub(jac, L.d(L.L3(x, y, z))))
    for a, b in combinations(range(n0), 2):
        x, y = e0[a], e0[b]
        for f in range(n1):
            lhs = _sub(_sub(L.act(x, L.act(y, e1[f])), L.act(y, L.act(x, e1[f]))),
                       L.act(L.br(x, y), e1[f]))
            put("n=3b", (a, b, f), _sub(lhs, L.L3(x, y, L.d(e1[f]))))
    for idx in combinations(range(n0), 4):
        ph = [e0[i] for i in idx]
        acc = _vec(n1)
        for i in range(4):
            rest = ph[:i] + ph[i + 1:]
            t = L.act(ph[i], L.L3(*rest))
            acc = _sub(acc, t) if i % 2 else _add(acc, t)
        for i, j in combinations(range(4), 2):
            rest = [ph[k] for k in range(4) if k not in (i, j)]
            t = L.L3(L.br(ph[i], ph[j]), *rest)
            acc = _sub(acc, t) if (i + j) % 2 else _add(acc, t)
        put("n=4", idx, acc)
    return L2Report(res)


# ---------------------------------------------------------------------------
# morphisms


@dataclass
class L2Morphism:
    """phi1: E1 -> E2 (an n2 x n1 matrix) and phi2: Lambda^2 E1 -> E2.

    ``phi2`` maps (a, b) with a < b to a coefficient list of length n2.
    """

    phi1: RMatrix
    phi2: dict = field(default_factory=dict)

    def __post_init__(self):
        n2 = self.phi1.rows
        clean = {}
        for (a, b), v in self.phi2.items():
            v = [Fraction(x) for x in v]
            if len(v) != n2:
                raise ShapeError("phi2 values must live in the target")
            if a == b:
                if any(v):
                    raise ShapeError("phi2 must be alternating")
                continue
            if a > b:
                a, b, v = b, a, [-x for x in v]
            if (a, b) in clean and clean[(a, b)] != v:
                raise ShapeError(f"phi2 contradictory at {(a, b)}")
            if any(v):
                clean[(a, b)] = v
        self.phi2 = clean

    @property
    def source_dim(self) -> int:
        return self.phi1.cols

    @property
    def target_dim(self) -> int:
        return self.phi1.rows

    @property
    def strict(self) -> bool:
        return not self.phi2

    def P2(self, x, y) -> list[Fraction]:
        out = _vec(self.target_dim)
        for a, xa in _nz(x).items():
            for b, yb in _nz(y).items():
                if a == b:
                    continue
                v = self.phi2.get((min(a, b), max(a, b)))
                if v:
                    s = xa * yb * (1 if a < b else -1)
                    for c, w in enumerate(v):
                        out[c] += s * w
        return out

    def P1(self, x) -> list[Fraction]:
        return self.phi1.apply(x)

    def __eq__(self, other):
        return isinstance(other, L2Morphism) and self.phi1 == other.phi1 and self.phi2 == other.phi2


def identity_morphism(n: int) -> L2Morphism:
    return L2Morphism(RMatrix.identity(n), {})


@dataclass
class MorphismReport:
    bracket: dict  # (a, b) -> residual of rule 3
    twist: dict  # (a, b, c) -> residual of rule 5
    vacuous: tuple = ("ring", "ring-bilinear", "anchor")

    @property
    def valid(self) -> bool:
        return not self.bracket and not self.twist


def check_morphism(A: TwistedLieAlgebra, B: TwistedLieAlgebra, m: L2Morphism) -> MorphismReport:
    """Residuals of the bracket and twist rules for an L-infinity morphism A -> B.

    Rules involving the base ring or the anchor hold trivially over constants.
    """
    if m.source_dim != A.n or m.target_dim != B.n:
        raise DimError(f"morphism {m.source_dim}->{m.target_dim} does not fit {A.n}->{B.n}")
    n1 = A.n
    e = [unit(n1, i) for i in range(n1)]
    br_res, tw_res = {}, {}
    for a, b in combinations(range(n1), 2):
        r = _sub(_sub(m.P1(A.bracket(e[a], e[b])), B.bracket(m.P1(e[a]), m.P1(e[b]))),
                 m.P2(e[a], e[b]))
        if any(r):
            br_res[(a, b)] = r
    for a, b, c in combinations(range(n1), 3):
        lhs = _sub(m.P1(A.twist(e[a], e[b], e[c])),
                   B.twist(m.P1(e[a]), m.P1(e[b]), m.P1(e[c])))
        rhs = _vec(B.n)
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            rhs = _add(rhs, B.bracket(m.P1(e[x]), m.P2(e[y], e[z])))
            rhs = _sub(rhs, m.P2(A.bracket(e[x], e[y]), e[z]))
        r = _sub(lhs, rhs)
        if any(r):
            tw_res[(a, b, c)] = r
    return MorphismReport(br_res, tw_res)


def compose_morphisms(outer: L2Morphism, inner: L2Morphism) -> L2Morphism:
    """(outer o inner)_1 = outer_1 inner_1,
    (outer o inner)_2 = outer_2 o Lambda^2 inner_1 + outer_1 o inner_2."""
    if outer.source_dim != inner.target_dim:
        raise DimError("morphisms are not composable")
    n = inner.source_dim
    e = [unit(n, i) for i in range(n)]
    phi2 = {}
    for a, b in combinations(range(n), 2):
        v = _add(outer.P2(inner.P1(e[a]), inner.P1(e[b])), outer.P1(inner.P2(e[a], e[b])))
        if any(v):
            phi2[(a, b)] = v
    return L2Morphism(outer.phi1 @ inner.phi1, phi2)
