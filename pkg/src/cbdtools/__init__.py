"""Contextuality-by-Default analysis of CHSH-type systems of binary observables.

The package measures how far a four-context system of +1/-1 observable
pairs is from admitting a single joint description: the signaling
aggregate delta0, the CHSH statistic s_max and delta_chsh, and the
minimal coupling mismatch delta_min, obtained both from a linear program
over 256-point couplings and from the closed form
delta_min = max(delta0, delta_chsh).
"""

from __future__ import annotations

from .coupling import (Coupling, build_coupling_lp, coupling_table,
                       jpd_feasibility, minimize_mismatch, mismatch_vector)
from .errors import (CbdError, InfeasibleInjection, InfeasibleStats,
                     MissingContext, SolverFailure, TrialParseError)
from .generators import (GeneratorSpec, classical_deterministic, generate,
                         inject_signaling, pr_box, random_system, tsirelson,
                         uniform_system)
from .lp import LinearProgram, SimplexResult, simplex_solve
from .measures import (ChshProfile, MarginalConsistency, SignalingProfile,
                       bdk_check, chsh_profile, closed_form_delta_min,
                       genuine_contextuality, marginal_consistency,
                       signaling_profile)
from .report import (AnalysisReport, dump_json, run_analysis, system_from_dict,
                     system_to_dict, verdict_string)
from .systems import (CONTEXTS, ContextLabel, CyclicSystem, PairJoint,
                      PairStats, joint_from_stats, pair_stats)
from .trials import (CountTable, TrialRecord, accumulate, bootstrap_resample,
                     normalize, read_trials_csv)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport", "CbdError", "ChshProfile", "ContextLabel",
    "ContextualityAnalyzer", "CONTEXTS", "CountTable", "Coupling",
    "CyclicSystem", "GeneratorSpec", "InfeasibleInjection", "InfeasibleStats",
    "LinearProgram", "MarginalConsistency", "MissingContext", "PairJoint",
    "PairStats", "SignalingProfile", "SimplexResult", "SolverFailure",
    "TrialParseError", "TrialRecord", "accumulate", "bdk_check",
    "bootstrap_resample", "build_coupling_lp", "chsh_profile",
    "classical_deterministic", "closed_form_delta_min", "coupling_table",
    "dump_json", "generate", "genuine_contextuality", "inject_signaling",
    "joint_from_stats", "jpd_feasibility", "marginal_consistency",
    "minimize_mismatch", "mismatch_vector", "normalize", "pair_stats",
    "pr_box", "random_system", "read_trials_csv", "run_analysis",
    "signaling_profile", "simplex_solve", "system_from_dict",
    "system_to_dict", "tsirelson", "uniform_system", "verdict_string",
]


def __getattr__(name: str):
    # deferred so that the command line does not pay the scikit-learn import
    if name == "ContextualityAnalyzer":
        from .analyzer import ContextualityAnalyzer
        return ContextualityAnalyzer
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
