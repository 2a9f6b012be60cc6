"""
Standard algebras and seeded random instance generators.

Everything here is deterministic given a ``random.Random`` instance; the
test-suite and the acceptance runner draw all randomized data from these
helpers.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .exactla import RMatrix, kernel_basis
from .twistcore import MultiForm, TwistedLieAlgebra, from_rank3_twist, transform, twisted_by


def su2() -> TwistedLieAlgebra:
    """[X1,X2] = X3, [X2,X3] = X1, [X3,X1] = X2."""
    return TwistedLieAlgebra(3, {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1})


def sl2() -> TwistedLieAlgebra:
    """Basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    return TwistedLieAlgebra(3, {(0, 1, 1): 2, (0, 2, 2): -2, (1, 2, 0): 1})


def heisenberg() -> TwistedLieAlgebra:
    return TwistedLieAlgebra(3, {(0, 1, 2): 1})


def abelian(n: int) -> TwistedLieAlgebra:
    return TwistedLieAlgebra(n)


def su2_b_twist() -> MultiForm:
    """B = xi^1 xi^2 (x) X_1."""
    return MultiForm(3, 2, 1, {((0, 1), (0,)): 1})


def su2_twisted() -> TwistedLieAlgebra:
    """su(2) with bracket [.,.] + B and twist H = vol (x) X_2."""
    return from_rank3_twist(su2(), su2_b_twist())


def lie_algebras_rank3() -> dict[str, TwistedLieAlgebra]:
    return {"su2": su2(), "sl2": sl2(), "heisenberg": heisenberg(), "abelian3": abelian(3)}


# ---------------------------------------------------------------------------
# randomness


def rand_rational(rng: random.Random, span: int = 3, den: int = 2) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def rand_nonzero(rng: random.Random, span: int = 3, den: int = 2) -> Fraction:
    while True:
        v = rand_rational(rng, span, den)
        if v:
            return v


def random_form(rng: random.Random, n: int, p: int, q: int, density: float = 0.5,
                span: int = 3) -> MultiForm:
    from .twistcore import form_basis
    coeffs = {}
    for key in form_basis(n, p, q):
        if rng.random() < density:
            coeffs[key] = rand_rational(rng, span)
    return MultiForm(n, p, q, coeffs)


def random_invertible(rng: random.Random, n: int) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Unimodular-ish random matrix (product of elementary moves) and its inverse."""
    g = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    gi = [row[:] for row in g]
    for _ in range(2 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        t = rand_rational(rng, 2, 2)
        # g <- g E_ij(t) (column op); gi <- E_ij(-t) gi (row op)
        for r in range(n):
            g[r][j] += t * g[r][i]
        for c in range(n):
            gi[i][c] -= t * gi[j][c]
    s = rand_nonzero(rng, 2, 1)
    k = rng.randrange(n)
    for r in range(n):
        g[r][k] *= s
    for c in range(n):
        gi[k][c] /= s
    return g, gi


def random_rank3_twist(rng: random.Random, base: str | None = None,
                       conjugate: bool = True) -> TwistedLieAlgebra:
    algs = lie_algebras_rank3()
    name = base or rng.choice(sorted(algs))
    B = random_form(rng, 3, 2, 1, density=0.4, span=2)
    T = from_rank3_twist(algs[name], B)
    if conjugate:
        g, gi = random_invertible(rng, 3)
        T = transform(T, g, gi)
    return T


def random_bracket_twist(rng: random.Random, n: int, density: float = 0.3) -> TwistedLieAlgebra:
    """Random skew bracket with twist equal to its Jacobiator (valid for any n)."""
    B = random_form(rng, n, 2, 1, density=density, span=2)
    return twisted_by(abelian(n), B)


def heisenberg5_split(lam=1, mu=1):
    """An n = 5 split instance with nonzero twist.

    Bracket [e1,e2] = mu e5, [e5,e3] = e4, B = lam e4 e4, h = (mu/lam) xi^1234.
    The twist -mu xi^123 (x) e4 is the Jacobiator of the bracket.
    """
    from .pq3 import SplitData
    lam, mu = Fraction(lam), Fraction(mu)
    return SplitData(5, {(0, 1, 4): mu, (4, 2, 3): 1}, {(0, 1, 2, 3): mu / lam}, {(3, 3): lam})


def direct_sum(T: TwistedLieAlgebra, k: int) -> TwistedLieAlgebra:
    """T plus k central abelian directions."""
    return TwistedLieAlgebra(T.n + k, T.bracket_dict(), T.twist_dict())


def split_lie_bases() -> dict[str, TwistedLieAlgebra]:
    out = dict(lie_algebras_rank3())
    out["su2+1"] = direct_sum(su2(), 1)
    out["sl2+1"] = direct_sum(sl2(), 1)
    out["heis5"] = TwistedLieAlgebra(5, {(0, 1, 4): 1, (2, 3, 4): 1})
    out["abelian4"] = abelian(4)
    return out


def _random_kernel_element(rng, vectors):
    if not vectors:
        return None
    out = [Fraction(0)] * len(vectors[0])
    for v in vectors:
        c = rand_rational(rng, 2, 1)
        out = [a + c * b for a, b in zip(out, v)]
    return out


def invariant_b_basis(T: TwistedLieAlgebra) -> list[dict]:
    """Basis of symmetric B^{ab} with nabla B = 0."""
    n = T.n
    keys = [(a, b) for a in range(n) for b in range(a, n)]
    idx = {k: i for i, k in enumerate(keys)}
    rows = []
    for a in range(n):
        for (b, c) in keys:
            row = {}
            for d in range(n):
                for (x, y, w) in ((b, c, T.C(a, d, b)), (c, b, T.C(a, d, c))):
                    if w:
                        j = idx[(min(d, y), max(d, y))]
                        row[j] = row.get(j, 0) + w
            rows.append(row)
    A = RMatrix(len(rows), len(keys), {(i, j): v for i, r in enumerate(rows) for j, v in r.items()})
    return [{k: v for k, v in zip(keys, vec) if v} for vec in kernel_basis(A)]


def closed_h_basis(T: TwistedLieAlgebra) -> list[dict]:
    """Basis of 4-forms h with D h = 0 (bracket only)."""
    from .twistcore import exterior_derivative, form_basis
    n = T.n
    keys = list(combinations(range(n), 4))
    if not keys:
        return []
    T0 = TwistedLieAlgebra(n, T.bracket_dict())
    tgt = {I: i for i, (I, _) in enumerate(form_basis(n, 5, 0))}
    cols = []
    for k in keys:
        img = exterior_derivative(T0, MultiForm(n, 4, 0, {(k, ()): 1}))
        col = [Fraction(0)] * len(tgt)
        for (I, _), v in img.coeffs.items():
            col[tgt[I]] = v
        cols.append(col)
    A = RMatrix.from_columns(cols, len(tgt)) if tgt else RMatrix.zeros(0, len(keys))
    return [{k: v for k, v in zip(keys, vec) if v} for vec in kernel_basis(A)]


def random_split(rng: random.Random, conjugate: bool = True):
    """Random valid point-base SplitData."""
    from .pq3 import SplitData, transform_split
    kind = rng.choice(["lie_B", "lie_h", "n5", "abelian"])
    if kind == "n5":
        S = heisenberg5_split(rand_nonzero(rng, 2, 2), rand_nonzero(rng, 2, 2))
    elif kind == "abelian":
        n = rng.choice([4, 5])
        h = {(0, 1, 2, 3): rand_nonzero(rng)}
        B = {(n - 1, n - 1): rand_rational(rng)} if n == 5 else {}
        S = SplitData(n, {}, h, B)
    else:
        bases = split_lie_bases()
        T = bases[rng.choice(sorted(bases))]
        if kind == "lie_B":
            vec = _random_kernel_element(rng, [list(b.get((a, c), 0) for a in range(T.n)
                                                    for c in range(a, T.n)) for b in invariant_b_basis(T)])
            keys = [(a, c) for a in range(T.n) for c in range(a, T.n)]
            B = {k: v for k, v in zip(keys, vec or []) if v}
            S = SplitData(T.n, T.bracket_dict(), {}, B)
        else:
            hb = closed_h_basis(T)
            keys = list(combinations(range(T.n), 4))
            vec = _random_kernel_element(rng, [[b.get(k, 0) for k in keys] for b in hb])
            S = SplitData(T.n, T.bracket_dict(), {k: v for k, v in zip(keys, vec or []) if v}, {})
    if conjugate:
        g, gi = random_invertible(rng, S.n)
        S = transform_split(S, g, gi)
    return S


def perturb_split(rng: random.Random, S):
    """Change one coefficient of C, h or B by a nonzero rational."""
    from .pq3 import SplitData
    n = S.n
    C, h, B = dict(S.C), dict(S.h), dict(S.B)
    choices = ["C", "B"] + (["h"] if n >= 4 else [])
    what = rng.choice(choices)
    d = rand_nonzero(rng)
    if what == "C":
        a, b = sorted(rng.sample(range(n), 2))
        k = (a, b, rng.randrange(n))
        C[k] = C.get(k, 0) + d
    elif what == "h":
        k = tuple(sorted(rng.sample(range(n), 4)))
        h[k] = h.get(k, 0) + d
    else:
        a, b = sorted((rng.randrange(n), rng.randrange(n)))
        B[(a, b)] = B.get((a, b), 0) + d
    return SplitData(n, C, h, B), what
