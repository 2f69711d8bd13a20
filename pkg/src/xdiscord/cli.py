"""Command line front end.

Exit codes: 0 success, 1 audit tolerance exceeded, 2 invalid input.
"""
from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import operator
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import XState, validate_xstate
from .curve import EntropyCurve
from .discord import analyse, quantum_discord, reconstruct_povm
from .errors import DegenerateEllipse, InvalidState, LemmaViolation, XDiscordError
from .oracle import ensemble_oracle, random_xstates, vonneumann_oracle

EXIT_OK, EXIT_AUDIT, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "" if math.isnan(x) else f"{float(x):.12g}"
    return str(x)


def write_csv(rows, header, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    emit(buf.getvalue(), out)


def emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- coherence scaling expressions -----------------------------------------

_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}


def compile_k_expr(text: str):
    """Arithmetic in the single variable ``k``, e.g. ``"k"``, ``"0"``, ``"0.8*k"``."""
    try:
        tree = ast.parse(str(text), mode="eval")
    except SyntaxError as exc:
        raise UsageError(f"bad coherence expression {text!r}") from exc

    def ev(node, k):
        if isinstance(node, ast.Expression):
            return ev(node.body, k)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "k":
            return k
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left, k), ev(node.right, k))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand, k))
        raise UsageError(f"unsupported element in coherence expression {text!r}")

    ev(tree, 0.5)
    return lambda k: ev(tree, k)


@dataclass(frozen=True)
class FamilySpec:
    """States u = k1(k) sqrt(ad), v = k2(k) sqrt(bc) over a k grid.

    ``literal`` switches v to k2(k) sqrt(ac).
    """

    a: float
    b: float
    c: float
    d: float
    k1_expr: str = "k"
    k2_expr: str = "k"
    kmin: float = 0.0
    kmax: float = 1.0
    kstep: float = 0.01
    literal: bool = False

    def ks(self) -> np.ndarray:
        if self.kstep <= 0 or self.kmax < self.kmin:
            raise UsageError("need kstep > 0 and kmax >= kmin")
        n = int(round((self.kmax - self.kmin) / self.kstep))
        return np.round(self.kmin + self.kstep * np.arange(n + 1), 12)

    def state(self, k: float) -> XState:
        k1, k2 = compile_k_expr(self.k1_expr)(k), compile_k_expr(self.k2_expr)(k)
        v_scale = math.sqrt(self.a * self.c) if self.literal else math.sqrt(self.b * self.c)
        return validate_xstate(self.a, self.b, self.c, self.d, k1 * math.sqrt(self.a * self.d), k2 * v_scale)


# --- argument plumbing -----------------------------------------------------

def add_state_args(p):
    g = p.add_argument_group("state")
    for name in "abcd":
        g.add_argument(f"--{name}", type=float)
    g.add_argument("--u", type=float)
    g.add_argument("--v", type=float)
    g.add_argument("--k", type=float, help="family shortcut: u = k sqrt(ad), v = k sqrt(bc)")
    g.add_argument("--family-literal", action="store_true", help="with --k, use v = k sqrt(ac)")
    g.add_argument("--state-file", help="JSON with keys a,b,c,d,u,v (or a 'state' object holding them)")


def parse_state_doc(doc) -> XState:
    if isinstance(doc, dict) and "state" in doc and isinstance(doc["state"], dict):
        doc = doc["state"]
    try:
        vals = [doc[k] for k in "abcduv"]
    except (KeyError, TypeError) as exc:
        raise UsageError("state document needs keys a, b, c, d, u, v") from exc
    return validate_xstate(*vals)


def state_from_args(args) -> XState:
    if args.state_file:
        with open(args.state_file, encoding="utf-8") as fh:
            return parse_state_doc(json.load(fh))
    if any(getattr(args, n) is None for n in "abcd"):
        raise UsageError("give --a --b --c --d (with --u --v or --k) or --state-file")
    if args.k is not None:
        fam = FamilySpec(args.a, args.b, args.c, args.d, literal=args.family_literal)
        return fam.state(args.k)
    if args.u is None or args.v is None:
        raise UsageError("give --u and --v, or --k")
    return validate_xstate(args.a, args.b, args.c, args.d, args.u, args.v)


def family_from_args(args) -> FamilySpec:
    if args.family_file:
        with open(args.family_file, encoding="utf-8") as fh:
            doc = json.load(fh)
        try:
            return FamilySpec(
                doc["a"], doc["b"], doc["c"], doc["d"],
                str(doc.get("k1", "k")), str(doc.get("k2", "k")),
                float(doc.get("kmin", 0.0)), float(doc.get("kmax", 1.0)), float(doc.get("kstep", 0.01)),
                bool(doc.get("literal", False)),
            )
        except KeyError as exc:
            raise UsageError(f"family file missing key {exc}") from exc
    if any(getattr(args, n) is None for n in "abcd"):
        raise UsageError("give --a --b --c --d or --family-file")
    return FamilySpec(args.a, args.b, args.c, args.d, args.k1, args.k2,
                      args.kmin, args.kmax, args.kstep, args.family_literal)


def _map(fn, items, jobs):
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


# --- subcommands -----------------------------------------------------------

def discord_report(state: XState) -> dict:
    res = quantum_discord(state)
    dec = res.decomposition
    povm = reconstruct_povm(state, dec)
    return {
        "state": state.as_dict(),
        "mutual_information": res.mutual_information,
        "classical_correlation": res.classical_correlation,
        "discord": res.discord,
        "kind": dec.kind.value,
        "s_bar_min": dec.s_bar_min,
        "components": [[w, p[0], p[1]] for w, p in dec.components],
        "z_star": None if dec.z_star is None else float(dec.z_star),
        "p_star": None if dec.p_star is None else float(dec.p_star),
        "ellipse_class": res.ellipse_class.value,
        "lemma_violation": dec.lemma_violation,
        "povm": [[t, n[0], n[1]] for t, n in povm],
    }


def cmd_discord(args):
    rep = discord_report(state_from_args(args))
    if args.json:
        emit(json.dumps(rep, indent=2) + "\n", args.out)
        return EXIT_OK
    lines = [
        f"I = {rep['mutual_information']:.12g}",
        f"C = {rep['classical_correlation']:.12g}",
        f"Q = {rep['discord']:.12g}",
        f"kind = {rep['kind']}",
        f"ellipse_class = {rep['ellipse_class']}",
        f"s_bar_min = {rep['s_bar_min']:.12g}",
    ]
    if rep["z_star"] is not None:
        lines += [f"z_star = {rep['z_star']:.12g}", f"p_star = {rep['p_star']:.12g}"]
    lines.append("components (weight, x, z):")
    lines += [f"  {w:.12g} {x:.12g} {z:.12g}" for w, x, z in rep["components"]]
    lines.append("povm (t, n_x, n_z):")
    lines += [f"  {t:.12g} {nx:.12g} {nz:.12g}" for t, nx, nz in rep["povm"]]
    emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_classify(args):
    state = state_from_args(args)
    an = analyse(state)
    ell = an.ellipse
    rep = {
        "l1": ell.l1, "l2": ell.l2, "l3": ell.l3, "z0": ell.z0,
        "z_G": ell.z_G, "z_H": ell.z_H, "z_B": ell.z_B,
        "degeneracy": ell.degeneracy.value,
        "convexity": an.convexity.tag.value if an.convexity else None,
        "z_c": an.convexity.z_c if an.convexity else None,
        "z_star": an.z_star,
        "ellipse_class": an.ellipse_class.value,
        "kind": an.decomposition.kind.value,
    }
    rep = {k: (float(v) if isinstance(v, (float, np.floating)) else v) for k, v in rep.items()}
    if args.json:
        emit(json.dumps(rep, indent=2) + "\n", args.out)
    else:
        emit("".join(f"{k} = {fmt(v) if v is not None else '-'}\n" for k, v in rep.items()), args.out)
    return EXIT_OK


def cmd_curve(args):
    state = state_from_args(args)
    from .geometry import ellipse_from_xstate

    ell = ellipse_from_xstate(state)
    curve = EntropyCurve.from_ellipse(ell)
    if curve.flat:
        raise DegenerateEllipse("ellipse is flat (ad = bc); the curve is a single point")
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    zs = np.linspace(curve.z_H, curve.z_G, args.points)
    f, _, d2 = curve.evaluate(zs)
    from .core import binary_entropy

    s_g = binary_entropy(min(abs(curve.z_G), 1.0))
    s_h = binary_entropy(min(abs(curve.z_H), 1.0))
    p_g = (zs - curve.z_H) / (curve.z_G - curve.z_H)
    sv = p_g * s_g + (1.0 - p_g) * s_h
    rows = zip(zs, f, sv, f - sv, d2)
    write_csv(rows, ["z", "s_horizontal", "s_vertical", "delta", "d2"], args.out)
    return EXIT_OK


def _sweep_row(item):
    k, state = item
    res = quantum_discord(state)
    return (k, state.u, state.v, res.mutual_information, res.classical_correlation, res.discord,
            res.kind.value, res.z_star, res.ellipse_class.value)


def cmd_sweep(args):
    fam = family_from_args(args)
    items = [(float(k), fam.state(float(k))) for k in fam.ks()]
    rows = _map(_sweep_row, items, args.jobs)
    out, prev = [], None
    for row in rows:
        out.append(row + (int(prev is not None and row[6] != prev),))
        prev = row[6]
    header = ["k", "u", "v", "mutual_information", "classical_correlation", "discord",
              "kind", "z_star", "ellipse_class", "transition"]
    write_csv(out, header, args.out)
    return EXIT_OK


def _audit_one(item):
    state, grid, angles = item
    an = analyse(state)
    sbar = an.decomposition.s_bar_min
    ell = an.ellipse
    ens_dev = 0.0
    if not (ell.flat_z or ell.segment):
        ens_dev = abs(ensemble_oracle(ell, state.z_B, grid).s_bar_min_estimate - sbar)
    vn = vonneumann_oracle(state, angles)
    vn_gap = abs(vn - sbar) if not an.decomposition.kind.is_triangle else 0.0
    return ens_dev, sbar - vn, vn_gap, int(an.decomposition.lemma_violation)


def cmd_audit(args):
    states = random_xstates(args.states, args.seed)
    results = _map(_audit_one, [(s, args.grid, args.angles) for s in states], args.jobs)
    ens = max((r[0] for r in results), default=0.0)
    below = max((r[1] for r in results), default=0.0)
    gap = max((r[2] for r in results), default=0.0)
    lemma = sum(r[3] for r in results)
    checks = {
        "ensemble_agreement": ens <= args.tolerance,
        "vonneumann_not_below": below <= 1e-9,
        "vonneumann_equal_hv": gap <= args.vn_tolerance,
        "no_lemma_violation": lemma == 0,
    }
    rep = {
        "states": len(states), "seed": args.seed, "backend": _kernels.BACKEND,
        "max_ensemble_deviation": ens, "max_vonneumann_deficit": max(below, 0.0),
        "max_vonneumann_gap_hv": gap, "lemma_violations": lemma,
        "checks": checks, "passed": all(checks.values()),
    }
    if args.json:
        emit(json.dumps(rep, indent=2) + "\n", args.out)
    else:
        lines = [f"states = {len(states)} (seed {args.seed}, {_kernels.BACKEND} kernels)",
                 f"max |s_bar_min - ensemble oracle| = {ens:.3e} (tol {args.tolerance:g})",
                 f"max (s_bar_min - von Neumann min)  = {max(below, 0.0):.3e} (tol 1e-9)",
                 f"max von Neumann gap, H/V kinds     = {gap:.3e} (tol {args.vn_tolerance:g})",
                 f"lemma violations                   = {lemma}"]
        lines += [f"{'PASS' if ok else 'FAIL'} {name}" for name, ok in checks.items()]
        emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if rep["passed"] else EXIT_AUDIT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="xdiscord", description="Quantum discord of two-qubit X states")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("discord", help="discord, optimal decomposition and POVM of one state")
    add_state_args(sp)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_discord)

    sp = sub.add_parser("classify", help="ellipse, convexity and ellipse type of one state")
    add_state_args(sp)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("curve", help="CSV of the entropy curves over [z_H, z_G]")
    add_state_args(sp)
    sp.add_argument("--points", type=int, default=201)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("sweep", help="CSV scan of a coherence-scaled family")
    for name in "abcd":
        sp.add_argument(f"--{name}", type=float)
    sp.add_argument("--k1", default="k", help="expression in k scaling u/sqrt(ad)")
    sp.add_argument("--k2", default="k", help="expression in k scaling v/sqrt(bc)")
    sp.add_argument("--kmin", type=float, default=0.0)
    sp.add_argument("--kmax", type=float, default=1.0)
    sp.add_argument("--kstep", type=float, default=0.01)
    sp.add_argument("--family-literal", action="store_true", help="v = k2 sqrt(ac) instead of sqrt(bc)")
    sp.add_argument("--family-file")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("audit", help="oracle agreement on random states")
    sp.add_argument("--states", type=int, default=500)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tolerance", type=float, default=2e-3, help="ensemble-oracle agreement (bits)")
    sp.add_argument("--vn-tolerance", type=float, default=1e-6)
    sp.add_argument("--grid", type=int, default=4096)
    sp.add_argument("--angles", type=int, default=10_000)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_audit)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidState, UsageError, DegenerateEllipse, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LemmaViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AUDIT
    except XDiscordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
