"""Command-line interface: ``zonalspd <command> ...``.

Exit codes: 0 success (or strictly positive definite), 1 a valid but negative
domain answer (not strict, not PSD, flagged coefficients, failed self-test),
2 bad input, 3 an internal size cap was hit.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import selftest as _selftest
from .errors import CapExceeded, SpecError
from .formats import load_spec, parse_space, read_points
from .gram import (
    antipodal_rank_degeneracy,
    build_gram,
    finite_support_degeneracy,
    parity_degeneracy,
    psd_report,
    roots_of_unity_degeneracy,
)
from .kernels import (
    FiniteSupport,
    FiniteSupportWitness,
    KernelExpansion,
    MissedProgression,
    ParityWitness,
    Status,
    classify_spd,
    eval_kernel,
)
from .projection import ANALYTIC_RULES, MAX_NODES, derivative_check, recover_expansion
from .spaces import GeometryUnsupported, Point

EXIT_OK, EXIT_DOMAIN, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass
class CommandOutcome:
    code: int
    lines: list[str] = field(default_factory=list)
    report: dict | None = None


def _space_dict(s) -> dict:
    return {"family": s.family.value, "d": s.d}


def _fmt_set(values, limit: int = 12) -> str:
    values = list(values)
    body = ", ".join(str(v) for v in values[:limit])
    if len(values) > limit:
        body += ", ..."
    return "{" + body + "}"


def support_summary(e: KernelExpansion) -> str:
    sup = e.support
    if isinstance(sup, FiniteSupport):
        return f"finite {_fmt_set(sup.indices)}"
    parts = [" u ".join(f"{m}Z+{r}" for m, r in sup.aps) or "no progressions"]
    if sup.added:
        parts.append(f"added {_fmt_set(sup.added)}")
    if sup.removed:
        parts.append(f"removed {_fmt_set(sup.removed)}")
    return "; ".join(parts)


def _header(e: KernelExpansion) -> list[str]:
    a, b = e.params
    return [
        f"space      {e.space}",
        f"(alpha, beta) = ({a:g}, {b:g})",
        f"support    {support_summary(e)}",
    ]


# -- commands ----------------------------------------------------------------

def cmd_classify(args) -> CommandOutcome:
    e = load_spec(args.spec)
    v = classify_spd(e)
    lines = _header(e)
    if v.status is Status.STRICT:
        lines.append("verdict    STRICTLY POSITIVE DEFINITE")
    elif v.status is Status.ZERO_KERNEL:
        lines.append("verdict    ZERO KERNEL (positive definite, not strict)")
    else:
        lines.append(f"verdict    NOT STRICT: {v.witness.describe()}")
    if v.witness is not None:
        lines.append(f"witness    {json.dumps(v.witness.to_dict())}")
    code = EXIT_OK if v.strict else EXIT_DOMAIN
    report = {
        "space": _space_dict(e.space),
        "params": list(e.params),
        "support": support_summary(e),
        **v.to_dict(),
    }
    return CommandOutcome(code, lines, report)


def parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--t-grid: expected a:b:n, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"--t-grid: expected a:b:n, got {text!r}") from None
    if n < 1 or n > 100_000:
        raise UsageError(f"--t-grid: n must be in [1, 100000], got {n}")
    if not (-1.0 <= a <= 1.0 and -1.0 <= b <= 1.0):
        raise UsageError("--t-grid: endpoints must lie in [-1, 1]")
    return np.linspace(a, b, n)


def cmd_eval(args) -> CommandOutcome:
    e = load_spec(args.spec)
    t = parse_grid(args.t_grid)
    vals, bound = eval_kernel(e, t, args.eps)
    lines = _header(e) + [f"{'t':>12}  {'value':>22}  {'bound':>10}"]
    rows = []
    for ti, vi in zip(t, np.atleast_1d(vals)):
        lines.append(f"{ti:12.6f}  {vi:22.15e}  {bound:10.3e}")
        rows.append({"t": float(ti), "value": float(vi), "bound": float(bound)})
    return CommandOutcome(EXIT_OK, lines, {"space": _space_dict(e.space), "eps": args.eps, "rows": rows})


def cmd_gram(args) -> CommandOutcome:
    e = load_spec(args.spec)
    s, points = read_points(args.points)
    if s != e.space:
        raise UsageError(f"space mismatch: spec is on {e.space}, points on {s}")
    A = build_gram(e, points, args.eps)
    r = psd_report(A, args.tol)
    if args.matrix:
        np.savetxt(args.matrix, A, delimiter=",", fmt="%.17g")
    lines = _header(e) + [
        f"n          {r.n}",
        f"min_eig    {r.min_eig:.6e}",
        f"max_eig    {r.max_eig:.6e}",
        f"psd        {'yes' if r.psd else 'no'} (tol {r.tol:g})",
    ]
    if r.near_null is not None:
        lines.append(f"near-null  c = {np.array2string(r.near_null, precision=6, separator=', ')}")
        lines.append(f"residual   c^T A c = {r.residual:.3e}")
    return CommandOutcome(EXIT_OK if r.psd else EXIT_DOMAIN, lines, r.to_dict())


def _single_parity(e: KernelExpansion, parity: str) -> bool:
    want = 0 if parity == "even" else 1
    sup = e.support
    return all(k % 2 == want for k in sup.added if k in sup)


def construct_counterexample(e: KernelExpansion, seed=0, eps: float = 1e-10):
    """Dispatch on the classifier's witness; returns (verdict, degeneracy)."""
    v = classify_spd(e)
    if v.strict:
        raise UsageError("no counterexample exists: the kernel is strictly positive definite")
    if v.status is Status.ZERO_KERNEL:
        raise UsageError("the kernel is identically zero; every Gram matrix vanishes")
    w = v.witness
    if isinstance(w, FiniteSupportWitness):
        return v, finite_support_degeneracy(e, eps)
    if isinstance(w, ParityWitness):
        present = "even" if w.missing == "odd" else "odd"
        if _single_parity(e, present):
            return v, parity_degeneracy(e, present, seed, eps)
        return v, antipodal_rank_degeneracy(e, w.missing, eps)
    if isinstance(w, MissedProgression):
        return v, roots_of_unity_degeneracy(e, (w.modulus, w.residue), eps)
    raise AssertionError(f"unknown witness {w!r}")


def _point_text(p) -> str:
    row = p.as_row() if isinstance(p, Point) else np.atleast_1d(p)
    return np.array2string(np.asarray(row), precision=6, separator=", ")


def cmd_counterexample(args) -> CommandOutcome:
    e = load_spec(args.spec)
    v, deg = construct_counterexample(e, args.seed, args.eps)
    lines = _header(e) + [
        f"witness    {v.witness.describe()}",
        f"construction {deg.kind}, {len(deg.points)} points",
    ]
    if len(deg.points) <= 16:
        for i, (p, ci) in enumerate(zip(deg.points, deg.c)):
            lines.append(f"  x_{i:<3d} {_point_text(p)}   c = {ci:+.6f}")
    lines.append(f"residual   c^T A c = {deg.residual:.3e} (bound {deg.bound:.3e})")
    lines.append("degenerate quadratic form confirmed" if deg.ok else "residual exceeds bound")
    report = {"space": _space_dict(e.space), "witness": v.witness.to_dict(), **deg.to_dict()}
    return CommandOutcome(EXIT_OK if deg.ok else EXIT_DOMAIN, lines, report)


def cmd_project(args) -> CommandOutcome:
    if (args.spec is None) == (args.rule is None):
        raise UsageError("project needs exactly one of a spec file or --rule")
    if args.rule is not None:
        if args.space is None:
            raise UsageError("--rule needs --space family:d")
        if args.rule not in ANALYTIC_RULES:
            raise UsageError(f"unknown rule {args.rule!r}; choose from {sorted(ANALYTIC_RULES)}")
        s = parse_space(args.space)
        f = ANALYTIC_RULES[args.rule]
        source, e = f"rule:{args.rule}", None
    else:
        e = load_spec(args.spec)
        s = e.space
        source = str(args.spec)

        def f(t):
            return eval_kernel(e, t, args.eps)[0]

    if args.N < 0:
        raise UsageError("--N must be >= 0")
    nodes = args.nodes if args.nodes is not None else min(args.N + 32, MAX_NODES)
    if nodes < args.N + 1:
        raise UsageError(f"--nodes must be at least N + 1 = {args.N + 1}")
    if nodes > MAX_NODES:
        raise CapExceeded(f"{nodes} nodes exceeds the cap of {MAX_NODES}")
    rec = recover_expansion(f, s, args.N, nodes)
    a, b = s.params
    lines = [f"space      {s}", f"(alpha, beta) = ({a:g}, {b:g})", f"source     {source}", f"{'k':>5}  {'a_k':>22}"]
    for k, c in enumerate(rec.coeffs):
        flag = "  NEGATIVE" if k in rec.negative else ""
        lines.append(f"{k:5d}  {c:22.15e}{flag}")
    lines.append(f"residual   {rec.residual:.3e} (weighted L2)")
    if rec.negative:
        lines.append(f"not positive definite in the expansion sense: a_k < 0 at k = {list(rec.negative)}")
    deriv = None
    if args.derivative:
        if e is None:
            raise UsageError("--derivative needs a spec file")
        dr = derivative_check(e, eps=min(args.eps, 1e-12))
        deriv = dr.to_dict()
        lines.append(f"derivative finite-difference gap {dr.fd_gap:.3e}")
        for bp in dr.bases:
            if not bp.available:
                lines.append(f"  basis {bp.label}: unavailable ({bp.note})")
            elif bp.tail_max is None:
                lines.append(f"  basis {bp.label}: residual {bp.residual:.3e}")
            else:
                lines.append(
                    f"  basis {bp.label}: coefficients beyond {bp.degree_bound} max {bp.tail_max:.3e}, "
                    f"residual {bp.residual:.3e}"
                )
    code = EXIT_DOMAIN if rec.negative or (args.derivative and not dr.ok) else EXIT_OK
    report = {
        "space": _space_dict(s),
        "params": [a, b],
        "source": source,
        "N": args.N,
        "nodes": nodes,
        "coeffs": [float(c) for c in rec.coeffs],
        "residual": rec.residual,
        "negative": list(rec.negative),
        "derivative": deriv,
    }
    return CommandOutcome(code, lines, report)


def cmd_selftest(args) -> CommandOutcome:
    checks = _selftest.run(args.level)
    lines = [c.line() for c in checks]
    ok = all(c.passed for c in checks)
    lines.append("all identities pass" if ok else "SELF-TEST FAILED")
    report = {
        "level": args.level,
        "checks": [
            {
                "name": c.name,
                "max_residual": c.max_residual if math.isfinite(c.max_residual) else None,
                "tolerance": c.tolerance,
                "passed": c.passed,
                "seconds": c.seconds,
            }
            for c in checks
        ],
    }
    return CommandOutcome(EXIT_OK if ok else EXIT_DOMAIN, lines, report)


# -- plumbing ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for random points (default 0)")
    common.add_argument("--tol", type=float, default=1e-8, help="PSD tolerance (default 1e-8)")
    common.add_argument("--eps", type=float, default=1e-10, help="truncation target (default 1e-10)")
    common.add_argument("--json", type=Path, default=None, metavar="PATH", help="write a JSON report")

    ap = argparse.ArgumentParser(prog="zonalspd", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="decide strict positive definiteness")
    p.add_argument("spec", type=Path)

    p = sub.add_parser("eval", parents=[common], help="tabulate the kernel on a t grid")
    p.add_argument("spec", type=Path)
    p.add_argument("--t-grid", default="-1:1:11", help="a:b:n (default -1:1:11)")

    p = sub.add_parser("gram", parents=[common], help="spectral report of a Gram matrix")
    p.add_argument("spec", type=Path)
    p.add_argument("points", type=Path)
    p.add_argument("--matrix", type=Path, default=None, help="also write the matrix as CSV")

    p = sub.add_parser("counterexample", parents=[common], help="build a vanishing quadratic form")
    p.add_argument("spec", type=Path)

    p = sub.add_parser("project", parents=[common], help="recover Jacobi coefficients by quadrature")
    p.add_argument("spec", type=Path, nargs="?", default=None)
    p.add_argument("--rule", default=None, help=f"analytic function: {', '.join(ANALYTIC_RULES)}")
    p.add_argument("--space", default=None, help="family:d, required with --rule")
    p.add_argument("--N", type=int, default=10, help="max degree (default 10)")
    p.add_argument("--nodes", type=int, default=None, help="quadrature nodes (default N + 32)")
    p.add_argument("--derivative", action="store_true", help="also run the differentiability check")

    p = sub.add_parser("selftest", parents=[common], help="run the identity suite")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    return ap


COMMANDS = {
    "classify": cmd_classify,
    "eval": cmd_eval,
    "gram": cmd_gram,
    "counterexample": cmd_counterexample,
    "project": cmd_project,
    "selftest": cmd_selftest,
}


def run(argv=None) -> CommandOutcome:
    args = build_parser().parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
    except (SpecError, UsageError, GeometryUnsupported, OSError) as exc:
        return CommandOutcome(EXIT_INPUT, [f"error: {exc}"])
    except CapExceeded as exc:
        return CommandOutcome(EXIT_CAP, [f"cap exceeded: {exc}"])
    except ValueError as exc:
        return CommandOutcome(EXIT_INPUT, [f"error: {exc}"])
    if out.report is not None:
        out.report = {"command": args.command, "exit_code": out.code, **out.report}
        if args.json is not None:
            args.json.write_text(json.dumps(out.report, indent=2) + "\n")
    return out


def main(argv=None) -> int:
    out = run(argv)
    stream = sys.stderr if out.code >= EXIT_INPUT else sys.stdout
    for line in out.lines:
        print(line, file=stream)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
