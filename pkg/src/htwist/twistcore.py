"""
H-twisted Lie algebras over a point and the calculus of E-forms.

An algebra of dimension n is given by bracket constants C^c_{ab}
([e_a, e_b] = C^c_{ab} e_c) and twist constants H^d_{abc}
(H(e_a, e_b, e_c) = H^d_{abc} e_d).  Over a point the anchor vanishes, so
ker(rho) = E and the bracket-induced connection is simply
nabla_a psi = [e_a, psi].

Forms with values in symmetric powers, Lambda^p E* (x) S^q E, are stored as
:class:`MultiForm` objects keyed by (strictly increasing p-tuple, weakly
increasing q-tuple).  Pairing convention: <xi^{i_1..i_p}, e_{j_1}..e_{j_p}> is
the determinant of Kronecker deltas (no 1/p! factors).  Indices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Callable, Mapping, Sequence

from .errors import DimError, JacobiFail, ShapeError

Vec = dict  # sparse vector index -> Fraction
SymElt = dict  # weakly increasing tuple -> Fraction


def _perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (0 if an entry repeats)."""
    s = 1
    a = list(seq)
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if a[i] == a[j]:
                return 0
            if a[i] > a[j]:
                s = -s
    return s


def _add_into(acc: dict, key, val):
    v = acc.get(key, 0) + val
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def wedge_indices(I: tuple, K: tuple) -> tuple[int, tuple]:
    """xi^I ^ xi^K = sign * xi^{sorted}; sign 0 when an index repeats."""
    if not K:
        return 1, I
    if not I:
        return 1, K
    s = _perm_sign(I + K)
    if not s:
        return 0, ()
    return s, tuple(sorted(I + K))


def _sym_mul(J: tuple, L: tuple) -> tuple:
    return tuple(sorted(J + L))


# ---------------------------------------------------------------------------
# MultiForm


class MultiForm:
    """Element of Lambda^p E* (x) S^q E with sparse rational coefficients."""

    __slots__ = ("n", "p", "q", "coeffs")

    def __init__(self, n: int, p: int, q: int, coeffs: Mapping | None = None):
        if p < 0 or q < 0:
            raise ShapeError("negative form degrees")
        self.n, self.p, self.q = n, p, q
        clean = {}
        if coeffs:
            for (I, J), c in coeffs.items():
                c = Fraction(c)
                if not c:
                    continue
                I, J = tuple(I), tuple(J)
                if len(I) != p or len(J) != q:
                    raise ShapeError(f"key {(I, J)} does not have shape ({p},{q})")
                if any(not 0 <= i < n for i in I + J):
                    raise ShapeError(f"index out of range in {(I, J)}")
                s = _perm_sign(I)
                if not s:
                    continue
                key = (tuple(sorted(I)), tuple(sorted(J)))
                _add_into(clean, key, s * c)
        self.coeffs = clean

    @classmethod
    def zero(cls, n: int, p: int, q: int) -> "MultiForm":
        return cls(n, p, q)

    @classmethod
    def _raw(cls, n, p, q, coeffs) -> "MultiForm":
        m = cls.__new__(cls)
        m.n, m.p, m.q, m.coeffs = n, p, q, coeffs
        return m

    def is_zero(self) -> bool:
        return not self.coeffs

    def max_abs(self) -> Fraction:
        return max((abs(v) for v in self.coeffs.values()), default=Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, MultiForm):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.n == other.n
        return (self.n, self.p, self.q, self.coeffs) == (other.n, other.p, other.q, other.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return f"MultiForm({self.p},{self.q}; 0)"
        parts = []
        for (I, J), c in sorted(self.coeffs.items()):
            xi = "".join(f"xi{i + 1}" for i in I) or "1"
            xs = "".join(f"X{j + 1}" for j in J)
            parts.append(f"{c}*{xi}" + (f"(x){xs}" if xs else ""))
        return f"MultiForm({self.p},{self.q}; " + " + ".join(parts) + ")"

    def _same_shape(self, other):
        if (self.n, self.p, self.q) != (other.n, other.p, other.q):
            raise ShapeError(f"shape mismatch ({self.p},{self.q}) vs ({other.p},{other.q})")

    def __add__(self, other: "MultiForm") -> "MultiForm":
        self._same_shape(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            _add_into(out, k, v)
        return MultiForm._raw(self.n, self.p, self.q, out)

    def scale(self, c) -> "MultiForm":
        c = Fraction(c)
        if not c:
            return MultiForm.zero(self.n, self.p, self.q)
        return MultiForm._raw(self.n, self.p, self.q, {k: c * v for k, v in self.coeffs.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def by_form_index(self) -> dict[tuple, SymElt]:
        out: dict[tuple, SymElt] = {}
        for (I, J), c in self.coeffs.items():
            out.setdefault(I, {})[J] = c
        return out

    def evaluate(self, args: Sequence[int]) -> SymElt:
        """<Psi, e_{args[0]} ^ ... > as an element of S^q E."""
        s = _perm_sign(args)
        if not s:
            return {}
        key = tuple(sorted(args))
        return {J: s * c for (I, J), c in self.coeffs.items() if I == key}


def wedge(a: MultiForm, b: MultiForm) -> MultiForm:
    """(alpha (x) s) ^ (beta (x) t) = (alpha ^ beta) (x) (s t)."""
    if a.n != b.n:
        raise ShapeError("dimension mismatch")
    p, q = a.p + b.p, a.q + b.q
    if p > a.n:
        return MultiForm.zero(a.n, p, q)
    out: dict = {}
    for (I, J), c in a.coeffs.items():
        for (K, L), d in b.coeffs.items():
            s, IK = wedge_indices(I, K)
            if s:
                _add_into(out, (IK, _sym_mul(J, L)), s * c * d)
    return MultiForm._raw(a.n, p, q, out)


def form_basis(n: int, p: int, q: int) -> list[tuple[tuple, tuple]]:
    """Deterministic basis of Lambda^p (x) S^q: lexicographic in I, then J."""
    if p > n:
        return []
    return [(I, J) for I in combinations(range(n), p)
            for J in combinations_with_replacement(range(n), q)]


def form_to_vector(f: MultiForm, index: Mapping) -> list[Fraction]:
    v = [Fraction(0)] * len(index)
    for k, c in f.coeffs.items():
        v[index[k]] = c
    return v


def vector_to_form(n: int, p: int, q: int, basis: Sequence, vec: Sequence) -> MultiForm:
    return MultiForm._raw(n, p, q, {basis[i]: Fraction(c) for i, c in enumerate(vec) if c})


# ---------------------------------------------------------------------------
# the algebra


class TwistedLieAlgebra:
    """Finite-dimensional H-twisted Lie algebra over a point (rho = 0).

    ``bracket`` maps (a, b, c) -> C^c_{ab} and ``twist`` maps
    (a, b, c, d) -> H^d_{abc}.  Entries are completed by skew-symmetry
    (resp. alternation in the first three slots); contradictory entries
    raise ShapeError.
    """

    def __init__(self, n: int, bracket: Mapping | None = None, twist: Mapping | None = None,
                 anchor=None):
        if anchor is not None and any(Fraction(v) for v in _flat(anchor)):
            raise ShapeError("nonzero anchors are not representable over a point")
        if n < 0:
            raise ShapeError("negative dimension")
        self.n = n
        self._C: list[list[Vec]] = [[{} for _ in range(n)] for _ in range(n)]
        seen: dict = {}
        for (a, b, c), v in (bracket or {}).items():
            v = Fraction(v)
            for x in (a, b, c):
                if not 0 <= x < n:
                    raise ShapeError(f"bracket index {(a, b, c)} out of range")
            if a == b:
                if v:
                    raise ShapeError(f"bracket not skew at {(a, b, c)}")
                continue
            for key, val in (((a, b, c), v), ((b, a, c), -v)):
                if key in seen and seen[key] != val:
                    raise ShapeError(f"contradictory bracket entries at {key}")
                seen[key] = val
        for (a, b, c), v in seen.items():
            if v:
                self._C[a][b][c] = v
        self._H: dict[tuple, Vec] = {}
        hseen: dict = {}
        for (a, b, c, d), v in (twist or {}).items():
            v = Fraction(v)
            for x in (a, b, c, d):
                if not 0 <= x < n:
                    raise ShapeError(f"twist index {(a, b, c, d)} out of range")
            s = _perm_sign((a, b, c))
            if not s:
                if v:
                    raise ShapeError(f"twist not alternating at {(a, b, c, d)}")
                continue
            key = (tuple(sorted((a, b, c))), d)
            if key in hseen and hseen[key] != s * v:
                raise ShapeError(f"contradictory twist entries at {(a, b, c, d)}")
            hseen[key] = s * v
        for (abc, d), v in hseen.items():
            if v:
                self._H.setdefault(abc, {})[d] = v

    # -- raw data -------------------------------------------------------------
    def bracket_vec(self, a: int, b: int) -> Vec:
        return self._C[a][b]

    def C(self, a: int, b: int, c: int) -> Fraction:
        return self._C[a][b].get(c, Fraction(0))

    def twist_vec(self, a: int, b: int, c: int) -> Vec:
        s = _perm_sign((a, b, c))
        if not s:
            return {}
        v = self._H.get(tuple(sorted((a, b, c))), {})
        return v if s == 1 else {d: -x for d, x in v.items()}

    def H(self, a: int, b: int, c: int, d: int) -> Fraction:
        return self.twist_vec(a, b, c).get(d, Fraction(0))

    def bracket_items(self):
        """(a, b, c, C^c_ab) for a < b."""
        for a in range(self.n):
            for b in range(a + 1, self.n):
                for c, v in sorted(self._C[a][b].items()):
                    yield a, b, c, v

    def twist_items(self):
        """(a, b, c, d, H^d_abc) for a < b < c."""
        for abc in sorted(self._H):
            for d, v in sorted(self._H[abc].items()):
                yield (*abc, d, v)

    def bracket_dict(self) -> dict:
        return {(a, b, c): v for a, b, c, v in self.bracket_items()}

    def twist_dict(self) -> dict:
        return {(a, b, c, d): v for a, b, c, d, v in self.twist_items()}

    def twist_form(self) -> MultiForm:
        """H as a (3,1)-MultiForm."""
        return MultiForm._raw(self.n, 3, 1, {(abc, (d,)): v for abc, dv in self._H.items()
                                             for d, v in dv.items()})

    def is_untwisted(self) -> bool:
        return not self._H

    def __eq__(self, other):
        if not isinstance(other, TwistedLieAlgebra):
            return NotImplemented
        return (self.n == other.n and self.bracket_dict() == other.bracket_dict()
                and self.twist_dict() == other.twist_dict())

    def __repr__(self):
        return f"TwistedLieAlgebra(n={self.n}, |C|={len(self.bracket_dict())}, |H|={len(self.twist_dict())})"

    # -- vectors -----------------------------------------------------------------
    def bracket(self, x: Sequence, y: Sequence) -> list[Fraction]:
        out = [Fraction(0)] * self.n
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if not yb:
                    continue
                for c, v in self._C[a][b].items():
                    out[c] += xa * yb * v
        return out

    def twist(self, x: Sequence, y: Sequence, z: Sequence) -> list[Fraction]:
        out = [Fraction(0)] * self.n
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if not yb:
                    continue
                for c, zc in enumerate(z):
                    if not zc:
                        continue
                    for d, v in self.twist_vec(a, b, c).items():
                        out[d] += xa * yb * zc * v
        return out


def _flat(x):
    if isinstance(x, (list, tuple)):
        for y in x:
            yield from _flat(y)
    elif isinstance(x, dict):
        for y in x.values():
            yield from _flat(y)
    else:
        yield x


def unit(n: int, i: int) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


def jacobiator(T: TwistedLieAlgebra, a: int, b: int, c: int) -> Vec:
    """[a,[b,c]] + [b,[c,a]] + [c,[a,b]] on basis vectors."""
    out: Vec = {}
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        for e, v in T.bracket_vec(y, z).items():
            for d, w in T.bracket_vec(x, e).items():
                _add_into(out, d, v * w)
    return out


def jacobiator_form(T: TwistedLieAlgebra) -> MultiForm:
    """The Jacobiator of the bracket as a (3,1)-form."""
    out = {}
    for abc in combinations(range(T.n), 3):
        for d, v in jacobiator(T, *abc).items():
            out[(abc, (d,))] = v
    return MultiForm._raw(T.n, 3, 1, out)


# ---------------------------------------------------------------------------
# connection and exterior covariant derivative


def connection(T: TwistedLieAlgebra, phi: int, psi: Sequence) -> list[Fraction]:
    """nabla_{e_phi} psi = [e_phi, psi]."""
    return T.bracket(unit(T.n, phi), psi)


def _nabla_sym(T: TwistedLieAlgebra, a: int, s: SymElt) -> SymElt:
    """Leibniz extension of nabla_{e_a} to S^q E."""
    out: SymElt = {}
    for J, c in s.items():
        for k, j in enumerate(J):
            rest = J[:k] + J[k + 1:]
            for e, v in T.bracket_vec(a, j).items():
                _add_into(out, _sym_mul(rest, (e,)), c * v)
    return out


def exterior_derivative(T: TwistedLieAlgebra, psi: MultiForm) -> MultiForm:
    """D Psi via the evaluation formula

        <D Psi, psi_0..psi_p> = sum_i (-1)^i nabla_{psi_i} <Psi, ..^i..>
                              + sum_{i<j} (-1)^{i+j} <Psi, [psi_i, psi_j], ..^i..^j..>
    """
    if psi.n != T.n:
        raise ShapeError("form and algebra have different dimensions")
    n, p, q = T.n, psi.p, psi.q
    if p + 1 > n:
        return MultiForm.zero(n, p + 1, q)
    table = psi.by_form_index()
    if not table:
        return MultiForm.zero(n, p + 1, q)
    out: dict = {}
    for Ip in combinations(range(n), p + 1):
        acc: SymElt = {}
        if q:
            for k, a in enumerate(Ip):
                s = table.get(Ip[:k] + Ip[k + 1:])
                if s:
                    sign = -1 if k % 2 else 1
                    for J, v in _nabla_sym(T, a, s).items():
                        _add_into(acc, J, sign * v)
        for k in range(p + 1):
            for l in range(k + 1, p + 1):
                br = T.bracket_vec(Ip[k], Ip[l])
                if not br:
                    continue
                rest = Ip[:k] + Ip[k + 1:l] + Ip[l + 1:]
                sign = -1 if (k + l) % 2 else 1
                for c, v in br.items():
                    if c in rest:
                        continue
                    pos = sum(1 for r in rest if r < c)
                    key = rest[:pos] + (c,) + rest[pos:]
                    s = table.get(key)
                    if not s:
                        continue
                    sg = sign * (-1 if pos % 2 else 1) * v
                    for J, w in s.items():
                        _add_into(acc, J, sg * w)
        for J, v in acc.items():
            out[(Ip, J)] = v
    return MultiForm._raw(n, p + 1, q, out)


# ---------------------------------------------------------------------------
# derivations of Lambda E* (x) S E determined on generators


def extend_derivation(psi: MultiForm, on_covector: Callable[[int], MultiForm],
                      on_vector: Callable[[int], MultiForm], parity: int,
                      p_shift: int) -> MultiForm:
    """Apply the derivation with the given images of xi^i and X_j.

    ``on_covector(i)`` is a (1 + p_shift, 0)-form, ``on_vector(j)`` a
    (p_shift, 1)-form.  For an odd derivation the usual Koszul sign is
    picked up when passing 1-form factors.
    """
    n, p, q = psi.n, psi.p, psi.q
    P = p + p_shift
    if P > n or P < 0:
        return MultiForm.zero(n, max(P, 0), q)
    out: dict = {}
    cov_cache: dict = {}
    vec_cache: dict = {}
    for (I, J), c in psi.coeffs.items():
        for k, i in enumerate(I):
            img = cov_cache.get(i)
            if img is None:
                img = cov_cache[i] = on_covector(i)
            sign = -1 if (parity and k % 2) else 1
            left, right = I[:k], I[k + 1:]
            for (K, _), v in img.coeffs.items():
                s1, LK = wedge_indices(left, K)
                if not s1:
                    continue
                s2, full = wedge_indices(LK, right)
                if not s2:
                    continue
                _add_into(out, (full, J), sign * s1 * s2 * c * v)
        vsign = -1 if (parity and p % 2) else 1
        for k, j in enumerate(J):
            img = vec_cache.get(j)
            if img is None:
                img = vec_cache[j] = on_vector(j)
            rest = J[:k] + J[k + 1:]
            for (K, L), v in img.coeffs.items():
                s, IK = wedge_indices(I, K)
                if not s:
                    continue
                _add_into(out, (IK, _sym_mul(L, rest)), vsign * s * c * v)
    return MultiForm._raw(n, P, q, out)


def contraction_operator(K: MultiForm) -> tuple[Callable, Callable, int, int]:
    """Generator images of K~ for a vector valued k-form K:
    K~(alpha) = -alpha o K and K~(phi) = K(., ..., ., phi)."""
    if K.q != 1:
        raise ShapeError("contraction operators need a (k,1)-form")
    n, k = K.n, K.p

    def on_cov(i: int) -> MultiForm:
        return MultiForm._raw(n, k, 0, {(I, ()): -c for (I, J), c in K.coeffs.items() if J[0] == i})

    def on_vec(j: int) -> MultiForm:
        out: dict = {}
        for (I, J), c in K.coeffs.items():
            if j not in I:
                continue
            pos = I.index(j)
            # move slot `pos` to the end: k-1-pos transpositions
            s = -1 if (k - 1 - pos) % 2 else 1
            _add_into(out, (I[:pos] + I[pos + 1:], J), s * c)
        return MultiForm._raw(n, k - 1, 1, out)

    return on_cov, on_vec, (k - 1) % 2, k - 1


def apply_contraction(K: MultiForm, psi: MultiForm) -> MultiForm:
    on_cov, on_vec, parity, shift = contraction_operator(K)
    return extend_derivation(psi, on_cov, on_vec, parity, shift)


def h_tilde(T: TwistedLieAlgebra, psi: MultiForm) -> MultiForm:
    """The even derivation extending alpha -> -alpha o H, phi -> H(phi, ., .)."""
    if psi.n != T.n:
        raise ShapeError("form and algebra have different dimensions")
    return apply_contraction(T.twist_form(), psi)


def trace(psi: MultiForm) -> MultiForm:
    """Contract one form slot with one symmetric slot:
    tr(a_0^..^a_k (x) s_1..s_m) = sum_{i,j} (-1)^i <a_i, s_j> (..^a_i..) (x) (..^s_j..)."""
    if psi.p < 1 or psi.q < 1:
        raise ShapeError("trace needs p >= 1 and q >= 1")
    out: dict = {}
    for (I, J), c in psi.coeffs.items():
        for k, i in enumerate(I):
            sign = -1 if k % 2 else 1
            Ir = I[:k] + I[k + 1:]
            for l, j in enumerate(J):
                if j == i:
                    _add_into(out, (Ir, J[:l] + J[l + 1:]), sign * c)
    return MultiForm._raw(psi.n, psi.p - 1, psi.q - 1, out)


# ---------------------------------------------------------------------------
# axioms


@dataclass
class AxiomReport:
    jacobi: dict  # (a,b,c) with a<b<c -> residual vector (nonzero entries only)
    dH: MultiForm
    jacobi_max: Fraction = Fraction(0)
    dH_max: Fraction = Fraction(0)

    @property
    def valid(self) -> bool:
        return not self.jacobi and self.dH.is_zero()

    def as_dict(self) -> dict:
        return {
            "valid": self.valid,
            "jacobi_max": str(self.jacobi_max),
            "dH_max": str(self.dH_max),
            "jacobi_residuals": {",".join(str(i + 1) for i in k): {str(d + 1): str(v) for d, v in r.items()}
                                 for k, r in sorted(self.jacobi.items())},
            "dH_residuals": {f"{''.join(str(i + 1) for i in I)}|{''.join(str(j + 1) for j in J)}": str(c)
                             for (I, J), c in sorted(self.dH.coeffs.items())},
        }


def check_axioms(T: TwistedLieAlgebra) -> AxiomReport:
    """Residuals of the twisted Jacobi identity and of D H = 0."""
    if not isinstance(T, TwistedLieAlgebra):
        raise ShapeError("expected a TwistedLieAlgebra")
    jac = {}
    for abc in combinations(range(T.n), 3):
        r = dict(jacobiator(T, *abc))
        for d, v in T.twist_vec(*abc).items():
            _add_into(r, d, -v)
        if r:
            jac[abc] = r
    dH = exterior_derivative(T, T.twist_form())
    jmax = max((abs(v) for r in jac.values() for v in r.values()), default=Fraction(0))
    return AxiomReport(jac, dH, jmax, dH.max_abs())


def is_lie(T: TwistedLieAlgebra) -> bool:
    return T.is_untwisted() and check_axioms(T).valid


# ---------------------------------------------------------------------------
# twist constructions


def _check_b(L: TwistedLieAlgebra, B: MultiForm):
    if B.n != L.n or B.p != 2 or B.q != 1:
        raise ShapeError("B must be a (2,1)-form on the algebra")


def quadratic_twist(B: MultiForm) -> MultiForm:
    """(a,b,c) -> B(a, B(b,c)) + cyclic, the part of the Jacobiator of C + B quadratic in B."""
    n = B.n
    out: dict = {}
    for abc in combinations(range(n), 3):
        a, b, c = abc
        acc: Vec = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            for J, v in B.evaluate((y, z)).items():
                for K, w in B.evaluate((x, J[0])).items():
                    _add_into(acc, K[0], v * w)
        for d, v in acc.items():
            out[(abc, (d,))] = v
    return MultiForm._raw(n, 3, 1, out)


def add_bracket(L: TwistedLieAlgebra, B: MultiForm) -> dict:
    C = {(a, b, c): v for a, b, c, v in L.bracket_items()}
    for (I, J), v in B.coeffs.items():
        key = (I[0], I[1], J[0])
        C[key] = C.get(key, 0) + v
    return C


def from_rank3_twist(L: TwistedLieAlgebra, B: MultiForm) -> TwistedLieAlgebra:
    """Twist a rank-3 Lie algebra by a vector valued 2-form B.

    The new bracket is C + B; the twist is its Jacobiator
    D_0 B + B(., B(., .)) + cyclic.  D H = 0 holds for degree reasons.
    """
    if L.n != 3:
        raise DimError("rank-3 construction needs n = 3")
    if not is_lie(L):
        raise JacobiFail("input bracket is not a Lie algebra")
    _check_b(L, B)
    H = exterior_derivative(L, B) + quadratic_twist(B)
    tw = {(*I, J[0]): v for (I, J), v in H.coeffs.items()}
    return TwistedLieAlgebra(3, add_bracket(L, B), tw)


def b_tilde(B: MultiForm) -> tuple[Callable, Callable]:
    """Generator images of the difference D_{C+B} - D_C:
    alpha -> -alpha o B and phi -> B(., phi)."""
    return contraction_operator(B)[:2]


def twist_residual(L: TwistedLieAlgebra, B: MultiForm) -> tuple[MultiForm, MultiForm]:
    """Candidate twist H for the bracket C + B and the closedness residual D H.

    H = D_0 B + B(., B(., .)) + cyclic.  The residual is computed through the
    split D = D_0 + B~, independently of the evaluation formula for the twisted
    bracket; for B with vanishing quadratic part it reduces to B~(D_0 B).
    """
    if not is_lie(L):
        raise JacobiFail("input bracket is not a Lie algebra")
    _check_b(L, B)
    H = exterior_derivative(L, B) + quadratic_twist(B)
    on_cov, on_vec = b_tilde(B)
    residual = exterior_derivative(L, H) + extend_derivation(H, on_cov, on_vec, 1, 1)
    return H, residual


def twisted_by(L: TwistedLieAlgebra, B: MultiForm) -> TwistedLieAlgebra:
    """The algebra with bracket C + B and twist equal to its Jacobiator (any rank)."""
    _check_b(L, B)
    C = add_bracket(L, B)
    T0 = TwistedLieAlgebra(L.n, C)
    J = jacobiator_form(T0)
    return TwistedLieAlgebra(L.n, C, {(*I, K[0]): v for (I, K), v in J.coeffs.items()})


# ---------------------------------------------------------------------------
# change of basis


def transform(T: TwistedLieAlgebra, g: Sequence[Sequence], ginv: Sequence[Sequence]) -> TwistedLieAlgebra:
    """Push the structure forward along the invertible matrix g (new e'_a = g e_a)."""
    n = T.n
    # [g x, g y] := g [x, y]; constants in the new basis f_a = sum_b g[b][a] e_b
    # C'^c_{ab} = sum ginv[c][k] C^k_{ij} g[i][a] g[j][b]
    cols = [[Fraction(g[i][a]) for i in range(n)] for a in range(n)]
    C = {}
    for a in range(n):
        for b in range(a + 1, n):
            v = T.bracket(cols[a], cols[b])
            for c in range(n):
                w = sum((Fraction(ginv[c][k]) * v[k] for k in range(n)), Fraction(0))
                if w:
                    C[(a, b, c)] = w
    Hd = {}
    for a, b, c in combinations(range(n), 3):
        v = T.twist(cols[a], cols[b], cols[c])
        for d in range(n):
            w = sum((Fraction(ginv[d][k]) * v[k] for k in range(n)), Fraction(0))
            if w:
                Hd[(a, b, c, d)] = w
    return TwistedLieAlgebra(n, C, Hd)
