"""Command-line harness: trade-off curves, optima, weak pointer reports and
the verification table.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .angles import format_angle, parse_angle
from .channels import PointerModel
from .strategies.catalog import MAX_ALPHA, Scenario, case_catalog
from .strategies.envelope import TradeoffEnvelope, build_envelope, tangent_pairs
from .strategies.optimize import optimize_double_violation
from .strategies.weak import weak_benchmark
from .verification import FAULTS, GROUPS, run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COLUMNS = ("s1", "s2", "segment_label", "case_lambda")
SQRT2 = float(np.sqrt(2.0))


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunManifest:
    command: str
    scenario: str
    alpha: str
    samples: int
    seed: int
    output_path: str

    def header(self) -> str:
        return "# manifest: " + json.dumps(asdict(self), sort_keys=True)


# --- tradeoff ----------------------------------------------------------------------------------

def _case_rows(case, samples: int, rng: np.random.Generator) -> list[tuple]:
    if case.n_free == 0:
        grid = np.zeros((1, 0))
    elif case.n_free == 1:
        lo, hi = case.domain[0]
        grid = np.linspace(lo, hi, samples).reshape(-1, 1)
    else:
        lo = np.array([d[0] for d in case.domain])
        hi = np.array([d[1] for d in case.domain])
        grid = lo + (hi - lo) * rng.random((samples, case.n_free))
    return [(float(s1), float(s2), "case", case.label) for s1, s2 in case.scores(grid)]


def _envelope_rows(env: TradeoffEnvelope, samples: int) -> list[tuple]:
    xs = np.union1d(np.linspace(env.vertices[0, 0], env.s1_max, samples), [b[0] for b in env.breakpoints])
    rows = []
    for x in xs:
        seg = env.segment_at(float(x))
        label = seg.label if seg else "point"
        lam = "+".join(seg.cases) if seg else ""
        rows.append((float(x), float(env.value_at(float(x))), label, lam))
    return rows


def _bound_rows() -> list[tuple]:
    return [(1.0, 0.0, "bound", "s1=1"), (1.0, SQRT2, "bound", "s1=1"),
            (0.0, 1.0, "bound", "s2=1"), (SQRT2, 1.0, "bound", "s2=1")]


def tradeoff_rows(scenario: Scenario, alpha: float, samples: int, seed: int,
                  mixing: str, variant: str = "auto") -> tuple[list[tuple], TradeoffEnvelope]:
    cases = case_catalog(scenario, alpha, variant)
    pairs = None
    if mixing == "tangent":
        try:
            pairs = tangent_pairs(cases)
        except ValueError:
            pairs = None
    env = build_envelope(cases, samples_per_case=samples, seed=seed, pairs=pairs)
    rng = np.random.default_rng(seed)
    rows = _envelope_rows(env, samples)
    for case in cases:
        rows += _case_rows(case, samples, rng)
    return rows + _bound_rows(), env


def render(rows: list[tuple], manifest: RunManifest, fmt: str) -> str:
    if fmt == "json":
        payload = {"manifest": asdict(manifest), "columns": list(COLUMNS),
                   "rows": [dict(zip(COLUMNS, r)) for r in rows]}
        return json.dumps(payload, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(manifest.header() + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for s1, s2, label, lam in rows:
        w.writerow((repr(s1), repr(s2), label, lam))
    return buf.getvalue()


def read_rows(text: str, fmt: str) -> list[tuple]:
    """Inverse of :func:`render` (manifest dropped)."""
    if fmt == "json":
        return [(r["s1"], r["s2"], r["segment_label"], r["case_lambda"]) for r in json.loads(text)["rows"]]
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    return [(float(r["s1"]), float(r["s2"]), r["segment_label"], r["case_lambda"]) for r in reader]


def cmd_tradeoff(args) -> int:
    alpha = _alpha(args.alpha)
    out = args.output or f"tradeoff-{args.scenario}.{args.format}"
    manifest = RunManifest("tradeoff", args.scenario, format_angle(alpha), args.samples, args.seed, str(out))
    rows, env = tradeoff_rows(Scenario(args.scenario), alpha, args.samples, args.seed, args.mixing, args.variant)
    text = render(rows, manifest, args.format)
    if out == "-":
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc}") from None
        print(f"wrote {len(rows)} rows to {out}")
    print(f"regions: {' | '.join(env.labels)}", file=sys.stderr)
    print(f"S1 = S2 crossing: {env.diagonal_crossing():.5f}", file=sys.stderr)
    return EXIT_OK


# --- optimize ------------------------------------------------------------------------------------

def cmd_optimize(args) -> int:
    pattern = [p.strip() for p in args.mix.split(",") if p.strip()]
    free = args.alpha.strip().lower() == "free"
    alpha = MAX_ALPHA if free else _alpha(args.alpha)
    variant = "general" if free else args.variant
    cases = case_catalog(args.scenario, alpha, variant)
    opt = optimize_double_violation(cases, pattern, optimize_alpha=free)
    if args.format == "json":
        print(json.dumps({"scenario": args.scenario, "value": opt.value, "alpha": opt.alpha,
                          "mix": opt.mix, "angles": opt.angles, "scores": list(opt.scores),
                          "violation": opt.violated}, indent=1, sort_keys=True))
        return EXIT_OK
    print(f"scenario  {args.scenario}")
    print(f"value     {opt.value:.6f}" + ("" if opt.violated else "   (no violation)"))
    print(f"alpha     {opt.alpha:.6f} ({format_angle(opt.alpha, 1e-6)})")
    for lab in pattern:
        angles = ", ".join(f"{k}={v:.6f}" for k, v in opt.angles[lab].items()) or "-"
        print(f"case {lab:<4} p={opt.mix[lab]:.6f}  {angles}")
    print(f"(S1, S2)  ({opt.scores[0]:.6f}, {opt.scores[1]:.6f})")
    return EXIT_OK


# --- weak -------------------------------------------------------------------------------------------

def cmd_weak(args) -> int:
    if not 0.0 <= args.g <= 1.0:
        raise UsageError(f"--g must lie in [0, 1], got {args.g}")
    pointer = PointerModel.from_family(args.family, args.g)
    print(f"family {args.family}  G={pointer.G:.6f}  F={pointer.F:.6f}")
    for sc in (Scenario.WEAK_LL, Scenario.WEAK_CL, Scenario.WEAK_BC_LL):
        s1, s2 = weak_benchmark(pointer, sc)
        print(f"{sc.value:<11} S1={s1:.5f}  S2={s2:.5f}")
    return EXIT_OK


# --- verify -----------------------------------------------------------------------------------------

def cmd_verify(args) -> int:
    only = [g.strip() for g in args.only.split(",")] if args.only else None
    failed = 0
    print(f"{'group':<9} {'check':<52} {'expected':>12} {'computed':>14} {'tol':>8}  status")
    for c in run_checks(only, args.inject_fault):
        status = "PASS" if c.passed else "FAIL"
        failed += not c.passed
        tol = "<" if c.note == "upper bound" else f"{c.tol:.0e}"
        print(f"{c.group:<9} {c.name:<52} {c.expected:>12.6f} {c.computed:>14.8g} {tol:>8}  {status}")
    print(f"{failed} failing check(s)")
    return EXIT_FAIL if failed else EXIT_OK


# --- parser -------------------------------------------------------------------------------------------

def _alpha(text: str) -> float:
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steerlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    scenarios = [s.value for s in Scenario]
    printed = [s.value for s in Scenario if not s.is_weak]

    p = sub.add_parser("tradeoff", help="write the trade-off envelope and case curves")
    p.add_argument("--scenario", required=True, choices=printed)
    p.add_argument("--alpha", default="max", help="state angle: max, 7pi/36 or radians")
    p.add_argument("--samples", type=int, default=4096)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", help="output path, '-' for stdout")
    p.add_argument("--mixing", choices=("tangent", "all"), default="tangent",
                   help="tangent: mix lambda=3 with 1 and with 2 only; all: any mixture")
    p.add_argument("--variant", choices=("auto", "maximal", "general"), default="auto")
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("optimize", help="maximise min(S1, S2) for a mixing pattern")
    p.add_argument("--scenario", required=True, choices=scenarios)
    p.add_argument("--mix", default="1,3", help="comma-separated case labels, e.g. 1,3")
    p.add_argument("--alpha", default="max", help="max, free, 7pi/36 or radians")
    p.add_argument("--variant", choices=("auto", "maximal", "general"), default="auto")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify", help="check computed values against the reference table")
    p.add_argument("--only", help=f"comma-separated groups from {', '.join(GROUPS)}")
    p.add_argument("--inject-fault", choices=FAULTS, help="corrupt one input to exercise the checks")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("weak", help="weak-pointer benchmark for the three configurations")
    p.add_argument("--family", choices=("square", "linear"), default="square")
    p.add_argument("--g", type=float, default=0.8, help="precision factor G in [0, 1]")
    p.set_defaults(func=cmd_weak)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "samples", 100) < 100:
        parser.error("--samples must be at least 100")
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"steerlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
