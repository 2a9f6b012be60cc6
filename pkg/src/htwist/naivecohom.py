"""
Naive cochains C^{p,q} = ker(H~) and the cohomology of D along p at fixed q.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ImageEscapesCochains, ShapeError
from .exactla import RMatrix, cohomology_dim, coordinates, kernel_basis, rank
from .twistcore import (MultiForm, TwistedLieAlgebra, exterior_derivative, form_basis,
                        form_to_vector, h_tilde, trace, vector_to_form)


@dataclass
class CochainBasis:
    p: int
    q: int
    vectors: list  # MultiForms spanning C^{p,q}

    @property
    def dim(self) -> int:
        return len(self.vectors)


def _slice(n, p, q):
    basis = form_basis(n, p, q)
    return basis, {k: i for i, k in enumerate(basis)}


def h_tilde_matrix(T: TwistedLieAlgebra, p: int, q: int) -> RMatrix:
    """Matrix of H~ from the (p,q) slice to the (p+2,q) slice in the standard bases."""
    src, _ = _slice(T.n, p, q)
    _, tidx = _slice(T.n, p + 2, q)
    cols = []
    for key in src:
        cols.append(form_to_vector(h_tilde(T, MultiForm(T.n, p, q, {key: 1})), tidx))
    return RMatrix.from_columns(cols, len(tidx))


def cochain_basis(T: TwistedLieAlgebra, p: int, q: int) -> CochainBasis:
    if p > T.n or p < 0 or q < 0:
        return CochainBasis(p, q, [])
    src, _ = _slice(T.n, p, q)
    ker = kernel_basis(h_tilde_matrix(T, p, q))
    return CochainBasis(p, q, [vector_to_form(T.n, p, q, src, v) for v in ker])


def _cochain_vectors(T, cb: CochainBasis):
    _, idx = _slice(T.n, cb.p, cb.q)
    return [form_to_vector(v, idx) for v in cb.vectors]


def _map_matrix(T, images, target: CochainBasis, what: str) -> RMatrix:
    _, idx = _slice(T.n, target.p, target.q)
    tvecs = _cochain_vectors(T, target)
    ivecs = [form_to_vector(f, idx) for f in images]
    coords = coordinates(tvecs, ivecs)
    if coords is None:
        raise ImageEscapesCochains(f"{what} leaves C^{{{target.p},{target.q}}}")
    return RMatrix.from_columns(coords, target.dim) if coords else RMatrix.zeros(target.dim, 0)


def naive_d_matrix(T: TwistedLieAlgebra, p: int, q: int,
                   src: CochainBasis | None = None, tgt: CochainBasis | None = None) -> RMatrix:
    """Matrix of d_E: C^{p,q} -> C^{p+1,q} in the cochain bases."""
    src = src or cochain_basis(T, p, q)
    tgt = tgt or cochain_basis(T, p + 1, q)
    images = [exterior_derivative(T, v) for v in src.vectors]
    if not src.vectors:
        return RMatrix.zeros(tgt.dim, 0)
    return _map_matrix(T, images, tgt, "D")


def delta_matrix(T: TwistedLieAlgebra, p: int, q: int) -> RMatrix:
    """Matrix of tr: C^{p,q} -> C^{p-1,q-1} in the cochain bases.

    tr only preserves naive cochains when the twist is trace free; otherwise
    ImageEscapesCochains is raised.
    """
    if p < 1 or q < 1:
        raise ShapeError("delta needs p >= 1 and q >= 1")
    src = cochain_basis(T, p, q)
    tgt = cochain_basis(T, p - 1, q - 1)
    if not src.vectors:
        return RMatrix.zeros(tgt.dim, 0)
    return _map_matrix(T, [trace(v) for v in src.vectors], tgt, "tr")


@dataclass
class NaiveTable:
    pmax: int
    qmax: int
    dims: dict  # (p, q) -> int
    cochain_dims: dict
    representatives: dict = field(default_factory=dict)  # (p, q) -> list of MultiForm

    def row(self, q: int) -> tuple:
        return tuple(self.dims[(p, q)] for p in range(self.pmax + 1))


def _complement_in_kernel(ker: list, image_cols: list) -> list:
    """Pick kernel vectors independent of the image, greedily and deterministically."""
    chosen = list(image_cols)
    r = rank(RMatrix.from_columns(chosen, len(ker[0]))) if chosen else 0
    reps = []
    for v in ker:
        trial = chosen + [v]
        r2 = rank(RMatrix.from_columns(trial, len(v)))
        if r2 > r:
            chosen, r = trial, r2
            reps.append(v)
    return reps


def naive_cohomology_table(T: TwistedLieAlgebra, pmax: int | None = None, qmax: int = 1,
                           representatives: bool = False) -> NaiveTable:
    """dim H^{p,q}_naive for 0 <= p <= pmax, 0 <= q <= qmax."""
    n = T.n
    if pmax is None:
        pmax = n
    dims, cdims, reps = {}, {}, {}
    for q in range(qmax + 1):
        bases = {p: cochain_basis(T, p, q) for p in range(-1, pmax + 2)}
        mats = {}
        for p in range(-1, pmax + 1):
            mats[p] = naive_d_matrix(T, p, q, bases[p], bases[p + 1])
        for p in range(pmax + 1):
            cdims[(p, q)] = bases[p].dim
            dims[(p, q)] = cohomology_dim(mats[p - 1], mats[p])
            if representatives:
                reps[(p, q)] = []
                if dims[(p, q)]:
                    ker = kernel_basis(mats[p])
                    im = [mats[p - 1].column(j) for j in range(mats[p - 1].cols)]
                    for v in _complement_in_kernel(ker, im):
                        f = MultiForm.zero(n, p, q)
                        for c, b in zip(v, bases[p].vectors):
                            if c:
                                f = f + b.scale(c)
                        reps[(p, q)].append(f)
    return NaiveTable(pmax, qmax, dims, cdims, reps)
