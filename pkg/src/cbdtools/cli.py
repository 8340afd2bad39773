"""Command-line interface.

Subcommands: analyze (trials CSV or system JSON -> report), generate
(seeded reference/random systems -> system JSON), verify (randomized
self-checks of the closed form and the jpd criterion).

Exit codes: 0 the run completed, 2 bad input, 3 solver failure.
Contextuality verdicts never affect the exit code.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .coupling import jpd_feasibility, minimize_mismatch
from .errors import CbdError, SolverFailure
from .generators import KINDS, GeneratorSpec, generate, random_system
from .measures import chsh_profile, closed_form_delta_min
from .report import (AnalysisReport, dump_json, run_analysis, system_from_dict,
                     system_to_dict)
from .systems import DEFAULT_TOL
from .trials import accumulate, normalize, read_trials_csv

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVER = 3


def _summary_lines(report: AnalysisReport) -> list[str]:
    lines = []
    for key in ("11", "12", "21", "22"):
        st = report.contexts[key]
        lines.append(f"context ({key[0]},{key[1]})  m_a={st['m_a']:+.6f}  "
                     f"m_b={st['m_b']:+.6f}  cov={st['cov']:+.6f}")
    sig = report.signaling
    lines.append(f"delta0={sig.delta0:.6f}  s_max={report.chsh.s_max:.6f}  "
                 f"delta_chsh={report.chsh.delta_chsh:+.6f}")
    if report.delta_min_lp is None:
        lines.append(f"delta_min: closed={report.delta_min_closed:.6f}  "
                     f"lp=unavailable ({report.solver_error})")
    else:
        lines.append(f"delta_min: lp={report.delta_min_lp:.6f}  "
                     f"closed={report.delta_min_closed:.6f}  "
                     f"gap={report.closed_form_gap:.2e}")
        lines.append(f"genuine={report.genuine:+.6f}  "
                     f"degenerate_coupling={report.degenerate_coupling}")
    lines.append(f"bdk_satisfied={report.bdk_satisfied}  "
                 f"jpd_exists={report.jpd_exists}")
    lines.append(f"verdict: {report.verdict}")
    return lines


def _emit_report(report: AnalysisReport, path: str | None) -> None:
    text = dump_json(report.to_dict())
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        print("\n".join(_summary_lines(report)))
        print(f"report written to {path}")
    else:
        sys.stdout.write(text)
        print("\n".join(_summary_lines(report)), file=sys.stderr)


def cmd_analyze(args) -> int:
    counts = None
    if args.trials:
        records = read_trials_csv(args.trials)
        counts = accumulate(records)
        system = normalize(counts)
    else:
        with open(args.system, encoding="utf-8") as handle:
            system = system_from_dict(json.load(handle))
        if args.bootstrap > 0:
            raise CbdError("--bootstrap needs trial-level input (--trials)")
    try:
        report = run_analysis(
            system, tol=args.tol, include_witness=args.witness,
            counts=counts, bootstrap_replicates=args.bootstrap,
            bootstrap_seed=args.seed)
    except SolverFailure as failure:
        if failure.report is not None:
            _emit_report(failure.report, args.report)
        print(f"solver failure: {failure}", file=sys.stderr)
        return EXIT_SOLVER
    _emit_report(report, args.report)
    return EXIT_OK


def _parse_params(pairs: list[str]) -> dict[str, float]:
    params = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise CbdError(f"param {pair!r} is not name=value")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise CbdError(f"param {pair!r} has a non-numeric value")
    return params


def cmd_generate(args) -> int:
    spec = GeneratorSpec(kind=args.kind, seed=args.seed,
                         params=_parse_params(args.params))
    system = generate(spec)
    text = dump_json(system_to_dict(system))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(f"system written to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    closed_pass = 0
    worst_gap = 0.0
    for k in range(args.samples):
        system = random_system(np.random.default_rng([args.seed, k]),
                               no_signaling=bool(k % 2))
        delta_min, _, _ = minimize_mismatch(system, probe_degeneracy=False)
        gap = abs(delta_min - closed_form_delta_min(system))
        worst_gap = max(worst_gap, gap)
        closed_pass += gap <= 1e-6
    print(f"closed-form identity: {closed_pass}/{args.samples} pass "
          f"(max gap {worst_gap:.3e})")

    fine_pass = 0
    for k in range(args.samples):
        system = random_system(np.random.default_rng([args.seed, args.samples + k]),
                               no_signaling=True)
        exists, _ = jpd_feasibility(system)
        s_max = chsh_profile(system).s_max
        fine_pass += (exists == (s_max <= 2.0)) or abs(s_max - 2.0) <= 1e-8
    print(f"jpd criterion (s_max <= 2): {fine_pass}/{args.samples} pass")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbdtools",
        description="Contextuality-by-Default analysis of CHSH-type systems")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze trials CSV or system JSON")
    source = analyze.add_mutually_exclusive_group(required=True)
    source.add_argument("--trials", metavar="CSV", help="trial data file")
    source.add_argument("--system", metavar="JSON", help="system file")
    analyze.add_argument("--bootstrap", type=int, default=0, metavar="N",
                         help="bootstrap replicates (trials input only)")
    analyze.add_argument("--seed", type=int, default=0, help="bootstrap seed")
    analyze.add_argument("--tol", type=float, default=DEFAULT_TOL,
                         help="boundary tolerance")
    analyze.add_argument("--witness", action="store_true",
                         help="include the optimal coupling's 256 weights")
    analyze.add_argument("--report", metavar="PATH",
                         help="write the JSON report here instead of stdout")
    analyze.set_defaults(func=cmd_analyze)

    gen = sub.add_parser("generate", help="write a reference or random system")
    gen.add_argument("--kind", required=True, choices=sorted(KINDS))
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--params", nargs="*", default=[], metavar="NAME=VALUE",
                     help="kind-specific reals, e.g. delta_a1=0.4")
    gen.add_argument("--out", metavar="JSON", help="output path (default stdout)")
    gen.set_defaults(func=cmd_generate)

    verify = sub.add_parser("verify",
                            help="randomized closed-form and jpd self-checks")
    verify.add_argument("--samples", type=int, default=200)
    verify.add_argument("--seed", type=int, default=0)
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SolverFailure as failure:
        print(f"solver failure: {failure}", file=sys.stderr)
        return EXIT_SOLVER
    except (CbdError, OSError, json.JSONDecodeError, ValueError) as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
