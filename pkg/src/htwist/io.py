"""
JSON input documents.

Indices are 1-based in documents and 0-based in memory.  Rationals are
strings "p/q" (plain integers are accepted).  A sparse coefficient list is
a list of [index-list, value] pairs.  Polynomial values over the named base
variables are lists of [coefficient, {variable: exponent}] terms.

    {"kind": "twisted_algebra", "n": 3,
     "bracket": [[[1, 2, 3], "1"], ...],        # C^c_ab for [e_a, e_b]
     "twist":   [[[1, 2, 3, 2], "1"]]}          # H^d_abc
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .errors import DocumentError, HTwistError
from .exactla import RMatrix
from .l2alg import L2Morphism
from .pq3 import CourantData, PQ3Data, SplitData
from .twistcore import TwistedLieAlgebra

KINDS = ("twisted_algebra", "split_data", "pq3_data", "courant_data", "l2_morphism")


def parse_rational(v, where: str) -> Fraction:
    if isinstance(v, bool):
        raise DocumentError(where, "boolean is not a rational")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise DocumentError(where, f"cannot parse rational {v!r}") from None
    raise DocumentError(where, f"expected a rational string, got {type(v).__name__}")


def fmt_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _int(doc, key, where, minimum=0) -> int:
    if key not in doc:
        raise DocumentError(f"{where}.{key}", "missing field")
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise DocumentError(f"{where}.{key}", f"expected an integer >= {minimum}")
    return v


def _entries(doc, key, arity, bound, where, value=parse_rational, required=False):
    """Sparse [indices, value] list -> {0-based tuple: value}."""
    out = {}
    if key not in doc:
        if required:
            raise DocumentError(f"{where}.{key}", "missing field")
        return out
    items = doc[key]
    if not isinstance(items, list):
        raise DocumentError(f"{where}.{key}", "expected a list of [indices, value] pairs")
    for k, item in enumerate(items):
        w = f"{where}.{key}[{k}]"
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], list)):
            raise DocumentError(w, "expected [indices, value]")
        idx = item[0]
        if len(idx) != arity or any(isinstance(i, bool) or not isinstance(i, int) for i in idx):
            raise DocumentError(w, f"expected {arity} integer indices")
        bounds = bound if isinstance(bound, (list, tuple)) else [bound] * arity
        for i, b in zip(idx, bounds):
            if not 1 <= i <= b:
                raise DocumentError(w, f"index tuple {tuple(idx)} out of range 1..{b}")
        t = tuple(i - 1 for i in idx)
        if t in out:
            raise DocumentError(w, f"duplicate index tuple {tuple(idx)}")
        out[t] = value(item[1], w)
    return out


def _poly_parser(base: list[str]):
    m = len(base)

    def parse(v, where):
        if not isinstance(v, list):
            return parse_rational(v, where)
        out = {}
        for k, term in enumerate(v):
            w = f"{where}[{k}]"
            if not (isinstance(term, list) and len(term) == 2 and isinstance(term[1], dict)):
                raise DocumentError(w, "expected [coefficient, {variable: exponent}]")
            c = parse_rational(term[0], w)
            e = [0] * m
            for name, p in term[1].items():
                if name not in base:
                    raise DocumentError(w, f"unknown base variable {name!r}")
                if isinstance(p, bool) or not isinstance(p, int) or p < 0:
                    raise DocumentError(w, "exponents must be non-negative integers")
                e[base.index(name)] = p
            out[tuple(e)] = out.get(tuple(e), Fraction(0)) + c
        return out

    return parse


def _wrap(where, fn):
    try:
        return fn()
    except DocumentError:
        raise
    except HTwistError as e:
        raise DocumentError(where, str(e)) from None


def parse_twisted(doc: dict, where: str = "$") -> TwistedLieAlgebra:
    n = _int(doc, "n", where, 1)
    C = _entries(doc, "bracket", 3, n, where)
    H = _entries(doc, "twist", 4, n, where)
    return _wrap(where, lambda: TwistedLieAlgebra(n, C, H))


def parse_split(doc: dict, where: str = "$") -> SplitData:
    n = _int(doc, "n", where, 1)
    C = _entries(doc, "bracket", 3, n, where)
    h = _entries(doc, "h", 4, n, where)
    B = _entries(doc, "B", 2, n, where)
    return _wrap(where, lambda: SplitData(n, C, h, B))


def _base(doc, where):
    base = doc.get("base", [])
    if not isinstance(base, list) or not all(isinstance(b, str) for b in base) or len(set(base)) != len(base):
        raise DocumentError(f"{where}.base", "expected a list of distinct variable names")
    return base


def parse_pq3(doc: dict, where: str = "$") -> PQ3Data:
    base = _base(doc, where)
    m, n = len(base), _int(doc, "n", where, 1)
    poly = _poly_parser(base)
    rho = _entries(doc, "rho", 2, [m, n], where, poly)
    C = _entries(doc, "bracket", 3, n, where, poly)
    h = _entries(doc, "h", 4, n, where, poly)
    B = _entries(doc, "B", 2, n, where, poly)
    return _wrap(where, lambda: PQ3Data(m, n, rho, C, h, B))


def parse_courant(doc: dict, where: str = "$") -> CourantData:
    base = _base(doc, where)
    m, n = len(base), _int(doc, "n", where, 1)
    poly = _poly_parser(base)
    rho = _entries(doc, "rho", 2, [m, n], where, poly)
    C = _entries(doc, "C", 3, n, where, poly)
    g = doc.get("g")
    if g is None:
        gm = None
    else:
        if not (isinstance(g, list) and len(g) == n and all(isinstance(r, list) and len(r) == n for r in g)):
            raise DocumentError(f"{where}.g", f"expected an {n} x {n} matrix")
        gm = [[parse_rational(v, f"{where}.g[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(g)]
    return _wrap(where, lambda: CourantData(m, n, rho, gm, C))


def parse_morphism(doc: dict, where: str = "$"):
    for key in ("source", "target"):
        if not isinstance(doc.get(key), dict):
            raise DocumentError(f"{where}.{key}", "expected a twisted_algebra object")
    A = parse_twisted(doc["source"], f"{where}.source")
    B = parse_twisted(doc["target"], f"{where}.target")
    rows = doc.get("phi1")
    if not (isinstance(rows, list) and len(rows) == B.n and all(isinstance(r, list) and len(r) == A.n for r in rows)):
        raise DocumentError(f"{where}.phi1", f"expected a {B.n} x {A.n} matrix (target x source)")
    phi1 = RMatrix.from_rows([[parse_rational(v, f"{where}.phi1[{i}][{j}]") for j, v in enumerate(r)]
                              for i, r in enumerate(rows)])

    def vec(v, w):
        if not (isinstance(v, list) and len(v) == B.n):
            raise DocumentError(w, f"expected a vector of length {B.n}")
        return [parse_rational(x, w) for x in v]

    phi2 = _entries(doc, "phi2", 2, A.n, where, vec)
    m = _wrap(where, lambda: L2Morphism(phi1, phi2))
    return A, B, m


PARSERS = {"twisted_algebra": parse_twisted, "split_data": parse_split, "pq3_data": parse_pq3,
           "courant_data": parse_courant, "l2_morphism": parse_morphism}


def load_text(text: str):
    """Parse a document; returns (kind, object, raw dict)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"line {e.lineno} column {e.colno}", e.msg) from None
    if not isinstance(doc, dict):
        raise DocumentError("$", "top level must be an object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise DocumentError("$.kind", f"expected one of {', '.join(KINDS)}")
    return kind, PARSERS[kind](doc), doc


def load_document(path):
    return load_text(Path(path).read_text(encoding="utf-8"))


def input_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


# ---------------------------------------------------------------------------
# serialization


def _sparse(d: dict) -> list:
    return [[[i + 1 for i in k], fmt_rational(v)] for k, v in sorted(d.items())]


def _poly_out(p, base):
    if isinstance(p, dict):
        if set(p) <= {(0,) * len(base)}:
            return fmt_rational(p.get((0,) * len(base), 0))
        return [[fmt_rational(c), {base[i]: e for i, e in enumerate(k) if e}] for k, c in sorted(p.items())]
    return fmt_rational(p)


def dump_twisted(T: TwistedLieAlgebra) -> dict:
    return {"kind": "twisted_algebra", "n": T.n, "bracket": _sparse(T.bracket_dict()),
            "twist": _sparse(T.twist_dict())}


def dump_split(S: SplitData) -> dict:
    return {"kind": "split_data", "n": S.n, "bracket": _sparse(S.C), "h": _sparse(S.h), "B": _sparse(S.B)}


def _poly_sparse(d, base):
    return [[[i + 1 for i in k], _poly_out(v, base)] for k, v in sorted(d.items())]


def dump_pq3(P: PQ3Data, base=None) -> dict:
    base = base or [f"x{i + 1}" for i in range(P.m)]
    return {"kind": "pq3_data", "base": base, "n": P.n, "rho": _poly_sparse(P.rho, base),
            "bracket": _poly_sparse(P.C, base), "h": _poly_sparse(P.h, base), "B": _poly_sparse(P.B, base)}


def dump_courant(CD: CourantData, base=None) -> dict:
    base = base or [f"x{i + 1}" for i in range(CD.m)]
    return {"kind": "courant_data", "base": base, "n": CD.n, "rho": _poly_sparse(CD.rho, base),
            "g": [[fmt_rational(v) for v in row] for row in CD.g], "C": _poly_sparse(CD.C, base)}


def dump_morphism(A, B, m: L2Morphism) -> dict:
    dense = m.phi1.to_dense()
    return {"kind": "l2_morphism", "source": dump_twisted(A), "target": dump_twisted(B),
            "phi1": [[fmt_rational(v) for v in row] for row in dense],
            "phi2": [[[a + 1, b + 1], [fmt_rational(x) for x in v]] for (a, b), v in sorted(m.phi2.items())]}


def dump(kind: str, obj, raw: dict | None = None) -> dict:
    base = (raw or {}).get("base")
    if kind == "twisted_algebra":
        return dump_twisted(obj)
    if kind == "split_data":
        return dump_split(obj)
    if kind == "pq3_data":
        return dump_pq3(obj, base)
    if kind == "courant_data":
        return dump_courant(obj, base)
    return dump_morphism(*obj)


def to_text(doc: dict) -> str:
    """JSON with one sparse entry per line."""
    parts = []
    for k, v in doc.items():
        if isinstance(v, list) and v:
            inner = ",\n".join("    " + json.dumps(x) for x in v)
            parts.append(f"  {json.dumps(k)}: [\n{inner}\n  ]")
        elif isinstance(v, dict):
            inner = to_text(v).replace("\n", "\n  ")
            parts.append(f"  {json.dumps(k)}: {inner}")
        else:
            parts.append(f"  {json.dumps(k)}: {json.dumps(v)}")
    return "{\n" + ",\n".join(parts) + "\n}"


def bundled(name: str) -> Path:
    """Path of a bundled example document, e.g. bundled("su2_twisted")."""
    from importlib.resources import files
    return Path(str(files("htwist") / "data" / f"{name}.json"))
