"""Analysis pipeline and serialization.

run_analysis takes a system, computes the closed-form measures, solves
the mismatch LP and the jpd feasibility LP, and assembles an
AnalysisReport. Reports and systems serialize to deterministic JSON:
keys sorted, reals rounded to 12 significant digits, so emit -> parse ->
emit is byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .coupling import jpd_feasibility, minimize_mismatch
from .errors import MissingContext, SolverFailure
from .measures import (ChshProfile, SignalingProfile, bdk_check, chsh_profile,
                       closed_form_delta_min, signaling_profile)
from .systems import CONTEXTS, ContextLabel, CyclicSystem, DEFAULT_TOL, PairJoint
from .trials import CountTable, bootstrap_resample

CONSISTENCY_TOL = 1e-6

#: Measures summarized per bootstrap replicate.
BOOTSTRAP_MEASURES = ("delta0", "delta_chsh", "delta_min", "genuine")

_QUANTILES = (("q025", 0.025), ("q25", 0.25), ("median", 0.5),
              ("q75", 0.75), ("q975", 0.975))


def verdict_string(signaling: bool, bdk_satisfied: bool, jpd_exists: bool) -> str:
    """Human-readable verdict; a pure function of the three flags."""
    parts = ["signaling" if signaling else "no-signaling",
             "jpd-exists" if jpd_exists else "no-jpd",
             "no-genuine-contextuality" if bdk_satisfied else "genuine-contextuality"]
    return " ".join(parts)


@dataclass(frozen=True)
class AnalysisReport:
    """Everything the analysis produced; LP-derived fields are None when
    the solver failed and only closed-form quantities are available."""

    contexts: dict[str, dict[str, float]]
    signaling: SignalingProfile
    chsh: ChshProfile
    delta_min_closed: float
    bdk_satisfied: bool
    jpd_exists: bool
    verdict: str
    delta_min_lp: float | None = None
    closed_form_gap: float | None = None
    genuine: float | None = None
    degenerate_coupling: bool | None = None
    consistent: bool | None = None
    witness: list[float] | None = None
    bootstrap: dict | None = None
    solver_error: str | None = None

    def to_dict(self) -> dict:
        return {
            "contexts": self.contexts,
            "signaling": {
                "delta_a": list(self.signaling.delta_a),
                "delta_b": list(self.signaling.delta_b),
                "delta0": self.signaling.delta0,
            },
            "chsh": {
                "expressions": {str(ctx): v for ctx, v in self.chsh.expressions.items()},
                "s_max": self.chsh.s_max,
                "delta_chsh": self.chsh.delta_chsh,
            },
            "delta_min_closed": self.delta_min_closed,
            "delta_min_lp": self.delta_min_lp,
            "closed_form_gap": self.closed_form_gap,
            "genuine": self.genuine,
            "bdk_satisfied": self.bdk_satisfied,
            "jpd_exists": self.jpd_exists,
            "degenerate_coupling": self.degenerate_coupling,
            "consistent": self.consistent,
            "verdict": self.verdict,
            "witness": self.witness,
            "bootstrap": self.bootstrap,
            "solver_error": self.solver_error,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisReport":
        signaling = SignalingProfile(
            delta_a=tuple(data["signaling"]["delta_a"]),
            delta_b=tuple(data["signaling"]["delta_b"]),
            delta0=data["signaling"]["delta0"])
        chsh = ChshProfile(
            expressions={ContextLabel(int(k[0]), int(k[1])): v
                         for k, v in data["chsh"]["expressions"].items()},
            s_max=data["chsh"]["s_max"],
            delta_chsh=data["chsh"]["delta_chsh"])
        return cls(
            contexts=data["contexts"], signaling=signaling, chsh=chsh,
            delta_min_closed=data["delta_min_closed"],
            bdk_satisfied=data["bdk_satisfied"], jpd_exists=data["jpd_exists"],
            verdict=data["verdict"], delta_min_lp=data["delta_min_lp"],
            closed_form_gap=data["closed_form_gap"], genuine=data["genuine"],
            degenerate_coupling=data["degenerate_coupling"],
            consistent=data["consistent"], witness=data["witness"],
            bootstrap=data["bootstrap"], solver_error=data["solver_error"])


def _round_reals(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {key: _round_reals(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_reals(v) for v in value]
    return value


def dump_json(data) -> str:
    """Deterministic JSON: sorted keys, 12 significant digits, newline-terminated."""
    return json.dumps(_round_reals(data), indent=2, sort_keys=True,
                      ensure_ascii=False, allow_nan=False) + "\n"


def system_to_dict(system: CyclicSystem) -> dict:
    return {"contexts": {
        str(ctx): dict(zip(("pp", "pm", "mp", "mm"),
                           system.joint(ctx.i, ctx.j).entries()))
        for ctx in CONTEXTS}}


def system_from_dict(data: dict) -> CyclicSystem:
    try:
        tables = data["contexts"]
    except (TypeError, KeyError):
        raise MissingContext("system JSON must hold a 'contexts' object")
    joints = []
    for ctx in CONTEXTS:
        key = str(ctx)
        if key not in tables:
            raise MissingContext(f"system JSON missing context {key}")
        cells = tables[key]
        try:
            joints.append(PairJoint(pp=float(cells["pp"]), pm=float(cells["pm"]),
                                    mp=float(cells["mp"]), mm=float(cells["mm"]),
                                    context=ctx))
        except KeyError as exc:
            raise MissingContext(f"context {key} missing cell {exc.args[0]!r}")
    return CyclicSystem.from_joints(joints)


def _bootstrap_block(counts: CountTable, replicates: int, seed: int) -> dict:
    samples = {name: [] for name in BOOTSTRAP_MEASURES}
    for system in bootstrap_resample(counts, seed=seed, replicates=replicates):
        delta0 = signaling_profile(system).delta0
        dchsh = chsh_profile(system).delta_chsh
        dmin = max(delta0, dchsh)
        samples["delta0"].append(delta0)
        samples["delta_chsh"].append(dchsh)
        samples["delta_min"].append(dmin)
        samples["genuine"].append(dmin - delta0)
    block = {"replicates": replicates, "seed": seed, "measures": {}}
    for name, values in samples.items():
        arr = np.array(values)
        summary = {"mean": float(arr.mean()), "std": float(arr.std(ddof=1))
                   if len(arr) > 1 else 0.0}
        for label, q in _QUANTILES:
            summary[label] = float(np.quantile(arr, q))
        block["measures"][name] = summary
    return block


def run_analysis(system: CyclicSystem, tol: float = DEFAULT_TOL,
                 include_witness: bool = False, probe_degeneracy: bool = True,
                 counts: CountTable | None = None, bootstrap_replicates: int = 0,
                 bootstrap_seed: int = 0) -> AnalysisReport:
    """Full analysis of one system.

    Bootstrap summaries need the trial counts the system came from; pass
    them via `counts`. Raises SolverFailure (with the partial,
    closed-form-only report attached) when an LP cannot be solved.
    """
    if bootstrap_replicates > 0 and counts is None:
        raise ValueError("bootstrap requires the trial counts")

    stats = system.all_stats()
    contexts = {str(ctx): {"m_a": st.m_a, "m_b": st.m_b, "cov": st.cov}
                for ctx, st in stats.items()}
    signaling = signaling_profile(system)
    chsh = chsh_profile(system)
    delta_min_closed = closed_form_delta_min(system)
    bdk = bdk_check(system, tol=tol)
    is_signaling = signaling.delta0 > tol

    base = dict(contexts=contexts, signaling=signaling, chsh=chsh,
                delta_min_closed=delta_min_closed, bdk_satisfied=bdk)
    try:
        jpd_exists, _ = jpd_feasibility(system)
        delta_min_lp, witness, degenerate = minimize_mismatch(
            system, probe_degeneracy=probe_degeneracy)
    except SolverFailure as failure:
        partial = AnalysisReport(
            jpd_exists=False, solver_error=str(failure),
            verdict=verdict_string(is_signaling, bdk, False), **base)
        raise SolverFailure(str(failure), iterations=failure.iterations,
                            objective=failure.objective, report=partial)

    gap = abs(delta_min_lp - delta_min_closed)
    bootstrap = None
    if bootstrap_replicates > 0:
        bootstrap = _bootstrap_block(counts, bootstrap_replicates, bootstrap_seed)

    return AnalysisReport(
        jpd_exists=jpd_exists,
        verdict=verdict_string(is_signaling, bdk, jpd_exists),
        delta_min_lp=delta_min_lp,
        closed_form_gap=gap,
        genuine=delta_min_lp - signaling.delta0,
        degenerate_coupling=degenerate,
        consistent=gap <= CONSISTENCY_TOL,
        witness=witness.as_list() if include_witness else None,
        bootstrap=bootstrap,
        **base)
