"""
Command-line front end.

    htwist validate FILE
    htwist naive-cohom FILE --pmax 3 --qmax 1
    htwist regular-cohom FILE --min-degree -2 --max-degree 2 --format json

Exit status: 0 when every residual vanishes or the computation finished,
1 when a validation fails (residual locations are printed), 2 for
malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import io
from .errors import (BNotClosed, CourantAxiomFail, DocumentError, HTwistError, ImageEscapesCochains,
                     InvalidInput, NoSolution, NotNilpotent)
from .l2alg import check_l2_axioms, check_morphism, from_twisted
from .naivecohom import naive_cohomology_table
from .pq3 import (build_theta, check_split, derived_structures, lift_courant,
                  nilpotence_residual, solve_h_given_B, split_cohomology, tangent_complex_check)
from .regq import regular_cohomology
from .twistcore import check_axioms

OK, FAIL, MALFORMED = 0, 1, 2


class Failure(Exception):
    """Validation failure carrying a structured payload."""

    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {}


def _q(v) -> str:
    if isinstance(v, Fraction) or isinstance(v, int):
        return io.fmt_rational(v)
    if hasattr(v, "terms"):  # GPoly
        return str(v)
    if isinstance(v, dict):
        return " + ".join(f"{io.fmt_rational(c)}*x^{list(e)}" for e, c in sorted(v.items())) or "0"
    return str(v)


def _one(t) -> list:
    return [i + 1 for i in t]


def _vec_out(v) -> dict:
    """{0-based index: value} or list -> {1-based index: "p/q"} of nonzeros."""
    items = v.items() if isinstance(v, dict) else enumerate(v)
    return {str(i + 1): io.fmt_rational(x) for i, x in items if x}


def _expect(kind, allowed, command):
    if kind not in allowed:
        raise DocumentError("$.kind", f"{command} expects {' or '.join(allowed)}, got {kind}")


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, payload dict, text lines)


def cmd_validate(kind, obj, args):
    if kind == "twisted_algebra":
        rep = check_axioms(obj)
        payload = {"residuals": rep.as_dict()}
        lines = [f"jacobi residual triples: {len(rep.jacobi)}", f"dH nonzero entries: {len(rep.dH.coeffs)}"]
        for k, v in payload["residuals"]["jacobi_residuals"].items():
            lines.append(f"  jacobi ({k}): {v}")
        for k, v in payload["residuals"]["dH_residuals"].items():
            lines.append(f"  dH ({k}): {v}")
        return (OK if rep.valid else FAIL), payload, lines
    if kind == "split_data":
        return cmd_split_check(kind, obj, args)
    if kind in ("pq3_data",):
        return cmd_pq3_verify(kind, obj, args)
    if kind == "courant_data":
        return cmd_courant(kind, obj, args)
    return cmd_morphism_check(kind, obj, args)


def cmd_naive(kind, obj, args):
    _expect(kind, ["twisted_algebra"], "naive-cohom")
    pmax = obj.n if args.pmax is None else args.pmax
    try:
        tab = naive_cohomology_table(obj, pmax, args.qmax)
    except ImageEscapesCochains as e:
        raise Failure(str(e))
    dims = [list(tab.row(q)) for q in range(args.qmax + 1)]
    cdims = [[tab.cochain_dims[(p, q)] for p in range(pmax + 1)] for q in range(args.qmax + 1)]
    lines = ["      " + " ".join(f"p={p:<2}" for p in range(pmax + 1))]
    for q, row in enumerate(dims):
        lines.append(f"q={q:<3} " + " ".join(f"{d:<4}" for d in row))
    lines.append("cochain dims: " + "; ".join(" ".join(map(str, r)) for r in cdims))
    return OK, {"dims": dims, "cochain_dims": cdims}, lines


def cmd_linfty(kind, obj, args):
    _expect(kind, ["twisted_algebra"], "linfty-check")
    try:
        L = from_twisted(obj)
    except InvalidInput as e:
        raise Failure(str(e))
    rep = check_l2_axioms(L)
    res = {name: {",".join(map(str, _one(k))): _vec_out(v) for k, v in r.items()}
           for name, r in rep.residuals.items()}
    lines = [f"{name}: {'ok' if not r else f'{len(r)} nonzero'}" for name, r in rep.residuals.items()]
    for name, r in res.items():
        for k, v in r.items():
            lines.append(f"  {name} ({k}): {v}")
    return (OK if rep.valid else FAIL), {"residuals": res}, lines


def cmd_morphism_check(kind, obj, args):
    _expect(kind, ["l2_morphism"], "morphism-check")
    A, B, m = obj
    rep = check_morphism(A, B, m)
    res = {"bracket": {",".join(map(str, _one(k))): _vec_out(v) for k, v in rep.bracket.items()},
           "twist": {",".join(map(str, _one(k))): _vec_out(v) for k, v in rep.twist.items()},
           "vacuous": list(rep.vacuous)}
    lines = [f"bracket rule: {'ok' if not rep.bracket else 'FAIL'}",
             f"twist rule: {'ok' if not rep.twist else 'FAIL'}",
             f"vacuous over constants: {', '.join(rep.vacuous)}"]
    for part in ("bracket", "twist"):
        for k, v in res[part].items():
            lines.append(f"  {part} ({k}): {v}")
    return (OK if rep.valid else FAIL), {"residuals": res}, lines


def cmd_split_check(kind, obj, args):
    _expect(kind, ["split_data"], "split-check")
    rep = check_split(obj)
    res = {"jacobi": {",".join(map(str, _one(k))): _vec_out(v) for k, v in rep.jacobi.items()},
           "dh": {",".join(map(str, _one(k))): io.fmt_rational(v) for k, v in rep.dh.items()},
           "dB": {",".join(map(str, _one(k))): io.fmt_rational(v) for k, v in rep.dB.items()},
           "vacuous": list(rep.vacuous)}
    lines = [f"{k}: {'ok' if not res[k] else 'FAIL'}" for k in ("jacobi", "dh", "dB")]
    for k in ("jacobi", "dh", "dB"):
        for key, v in res[k].items():
            lines.append(f"  {k} ({key}): {v}")
    if rep.valid:
        res["twist"] = io.dump_twisted(rep.algebra)["twist"]
        res["cross_check"] = rep.cross_check
        lines.append(f"twisted algebra axioms: {'ok' if rep.cross_check else 'FAIL'}")
    ok = rep.valid and rep.cross_check
    return (OK if ok else FAIL), {"residuals": res}, lines


def cmd_solve_h(kind, obj, args):
    _expect(kind, ["twisted_algebra"], "solve-h")
    raw = args._raw
    B = io._entries(raw, "B", 2, obj.n, "$")
    try:
        h = solve_h_given_B(obj, B)
    except (NoSolution, BNotClosed) as e:
        raise Failure(f"{type(e).__name__}: {e}")
    out = [[_one(k), io.fmt_rational(v)] for k, v in sorted(h.items())]
    lines = ["h:"] + [f"  {k}: {v}" for k, v in out] if out else ["h = 0"]
    return OK, {"h": out}, lines


def _theta_of(kind, obj):
    _expect(kind, ["split_data", "pq3_data"], "this command")
    return build_theta(obj)


def cmd_pq3_verify(kind, obj, args):
    theta = _theta_of(kind, obj)
    r = nilpotence_residual(theta)
    comps = {k: str(v) for k, v in r.components.items() if not v.is_zero()}
    lines = [f"Theta = {theta}"]
    lines += [f"{k}: {'0' if k not in comps else comps[k]}" for k in r.components]
    lines.append("nilpotent" if r.is_zero else "NOT nilpotent in: " + ", ".join(comps))
    return (OK if r.is_zero else FAIL), {"theta": str(theta), "residuals": comps}, lines


def cmd_derived(kind, obj, args):
    theta = _theta_of(kind, obj)
    try:
        ds = derived_structures(theta)
    except NotNilpotent as e:
        raise Failure(str(e))
    out = {"bracket": [[_one(k), _q(v)] for k, v in sorted(ds.C.items())],
           "rho": [[_one(k), _q(v)] for k, v in sorted(ds.rho.items())],
           "B": [[_one(k), _q(v)] for k, v in sorted(ds.B.items())],
           "h": [[_one(k), _q(v)] for k, v in sorted(ds.h.items())]}
    lines = []
    for name, entries in out.items():
        lines.append(f"{name}:" + ("" if entries else " 0"))
        lines += [f"  {k}: {v}" for k, v in entries]
    return OK, {"structures": out}, lines


def cmd_courant(kind, obj, args):
    _expect(kind, ["courant_data"], "courant-lift")
    try:
        L = lift_courant(obj)
    except CourantAxiomFail as e:
        raise Failure(f"Courant axiom fails: {e}")
    comps = {k: str(v) for k, v in L.residual.components.items() if not v.is_zero()}
    lifted = io.dump_pq3(L.data, args._raw.get("base"))
    lines = [f"Theta_A = {L.theta_A}", f"Theta = {L.theta}",
             "lift nilpotent" if L.nilpotent else "lift NOT nilpotent in: " + ", ".join(comps),
             "B: " + json.dumps(lifted["B"]), "h: " + json.dumps(lifted["h"])]
    return (OK if L.nilpotent else FAIL), {"theta_A": str(L.theta_A), "theta": str(L.theta),
                                           "lift": lifted, "residuals": comps}, lines


def cmd_split_cohom(kind, obj, args):
    _expect(kind, ["split_data", "pq3_data"], "split-cohom")
    try:
        dims = split_cohomology(obj, args.max_degree)
    except NotNilpotent as e:
        raise Failure(str(e))
    row = [dims[k] for k in range(args.max_degree + 1)]
    lines = ["k:   " + " ".join(f"{k:<4}" for k in range(args.max_degree + 1)),
             "dim: " + " ".join(f"{d:<4}" for d in row)]
    return OK, {"dims": row}, lines


def cmd_regular(kind, obj, args):
    _expect(kind, ["twisted_algebra"], "regular-cohom")
    try:
        dims = regular_cohomology(obj, args.min_degree, args.max_degree)
    except InvalidInput as e:
        raise Failure(str(e))
    ks = sorted(dims)
    lines = ["k:   " + " ".join(f"{k:<4}" for k in ks), "dim: " + " ".join(f"{dims[k]:<4}" for k in ks)]
    return OK, {"dims": {str(k): dims[k] for k in ks}}, lines


def cmd_tangent(kind, obj, args):
    if kind == "courant_data":
        try:
            obj = lift_courant(obj).data
        except CourantAxiomFail as e:
            raise Failure(f"Courant axiom fails: {e}")
    elif kind == "split_data":
        obj = obj.to_pq3()
    else:
        _expect(kind, ["pq3_data", "split_data", "courant_data"], "tangent-complex")
    rep = tangent_complex_check(obj)
    res = {"rho_B": {",".join(map(str, _one(k))): _q(v) for k, v in rep.rho_B.items()},
           "B_rhoT": {",".join(map(str, _one(k))): _q(v) for k, v in rep.B_rhoT.items()}}
    lines = [f"rho . B#: {'0' if not res['rho_B'] else res['rho_B']}",
             f"B# . rho^T: {'0' if not res['B_rhoT'] else res['B_rhoT']}"]
    return (OK if rep.valid else FAIL), {"residuals": res}, lines


COMMANDS = {
    "validate": cmd_validate,
    "naive-cohom": cmd_naive,
    "linfty-check": cmd_linfty,
    "morphism-check": cmd_morphism_check,
    "split-check": cmd_split_check,
    "solve-h": cmd_solve_h,
    "pq3-verify": cmd_pq3_verify,
    "derived-brackets": cmd_derived,
    "courant-lift": cmd_courant,
    "split-cohom": cmd_split_cohom,
    "regular-cohom": cmd_regular,
    "tangent-complex": cmd_tangent,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="htwist", description="Exact computations for twisted Lie algebras.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("file", help="JSON input document")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        if name == "naive-cohom":
            sp.add_argument("--pmax", type=int, default=None)
            sp.add_argument("--qmax", type=int, default=1)
        elif name == "split-cohom":
            sp.add_argument("--max-degree", type=int, default=4)
        elif name == "regular-cohom":
            sp.add_argument("--min-degree", type=int, default=-2)
            sp.add_argument("--max-degree", type=int, default=2)
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    record = {"command": args.command, "input_hash": None}
    try:
        text = Path(args.file).read_text(encoding="utf-8")
        record["input_hash"] = io.input_hash(text)
        kind, obj, raw = io.load_text(text)
        args._raw = raw
        code, payload, lines = COMMANDS[args.command](kind, obj, args)
    except OSError as e:
        code, payload, lines = MALFORMED, {"error": str(e)}, [f"error: {e}"]
    except DocumentError as e:
        code, payload, lines = MALFORMED, {"error": str(e)}, [f"malformed input: {e}"]
    except Failure as e:
        code, payload, lines = FAIL, {"error": str(e), **e.payload}, [f"FAIL: {e}"]
    except HTwistError as e:
        code, payload, lines = MALFORMED, {"error": f"{type(e).__name__}: {e}"}, [f"malformed input: {e}"]
    record.update(payload)
    record["exit"] = code
    if args.format == "json":
        out.write(json.dumps(record, indent=2, sort_keys=True) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
