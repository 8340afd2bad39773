"""Estimator-style front end: fit on trial data, read contextuality measures.

ContextualityAnalyzer follows the scikit-learn parameter protocol
(constructor params, get_params/set_params, fit returning self, fitted
attributes with trailing underscores). There is nothing meaningful to
predict or transform after fitting, so the analysis results themselves
are the fitted state.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .report import AnalysisReport, run_analysis
from .systems import ContextLabel, CyclicSystem, DEFAULT_TOL
from .trials import CountTable, TrialRecord, accumulate, normalize


def trials_from_array(X) -> list[TrialRecord]:
    """Validate an (n, 4) array-like of [context_i, context_j, a, b] rows."""
    arr = np.asarray(X)
    if arr.ndim != 2 or arr.shape[1] != 4:
        raise ValueError(f"expected an (n, 4) trial array, got shape {arr.shape}")
    if arr.size and not np.all(arr == np.round(arr)):
        raise ValueError("trial entries must be integers")
    arr = arr.astype(int)
    records = []
    for row, (i, j, a, b) in enumerate(arr):
        if i not in (1, 2) or j not in (1, 2):
            raise ValueError(f"row {row}: context ({i}, {j}) out of range")
        if a not in (-1, 1) or b not in (-1, 1):
            raise ValueError(f"row {row}: outcomes ({a}, {b}) must be +1 or -1")
        records.append(TrialRecord(context=ContextLabel(int(i), int(j)),
                                   a=int(a), b=int(b)))
    return records


class ContextualityAnalyzer(BaseEstimator):
    """Fit contextuality-under-signaling measures to trial data.

    Parameters
    ----------
    tol : float
        Boundary tolerance for signaling and BDK verdicts.
    include_witness : bool
        Keep the optimal coupling's 256 weights on the report.
    probe_degeneracy : bool
        Re-solve with a tilted objective to flag non-unique optima.
    bootstrap : int
        Number of bootstrap replicates (needs trial-level input).
    seed : int
        Bootstrap seed.

    Attributes (after fit)
    ----------------------
    system_ : CyclicSystem          empirical or supplied system
    counts_ : CountTable or None    trial counts when fitted from trials
    report_ : AnalysisReport        the full analysis
    delta0_, s_max_, delta_chsh_, delta_min_, genuine_ : float
    bdk_satisfied_, jpd_exists_, degenerate_ : bool
    """

    def __init__(self, tol: float = DEFAULT_TOL, include_witness: bool = False,
                 probe_degeneracy: bool = True, bootstrap: int = 0, seed: int = 0):
        self.tol = tol
        self.include_witness = include_witness
        self.probe_degeneracy = probe_degeneracy
        self.bootstrap = bootstrap
        self.seed = seed

    def fit(self, X, y=None) -> "ContextualityAnalyzer":
        """X may be a CyclicSystem, a CountTable, a sequence of
        TrialRecord, or an (n, 4) array of [context_i, context_j, a, b]."""
        counts: CountTable | None = None
        if isinstance(X, CyclicSystem):
            system = X
        elif isinstance(X, CountTable):
            counts = X
            system = normalize(counts)
        elif (isinstance(X, (list, tuple)) and X
              and all(isinstance(r, TrialRecord) for r in X)):
            counts = accumulate(X)
            system = normalize(counts)
        else:
            counts = accumulate(trials_from_array(X))
            system = normalize(counts)

        if self.bootstrap > 0 and counts is None:
            raise ValueError("bootstrap requires trial-level input, not a system")

        report: AnalysisReport = run_analysis(
            system, tol=self.tol, include_witness=self.include_witness,
            probe_degeneracy=self.probe_degeneracy, counts=counts,
            bootstrap_replicates=self.bootstrap, bootstrap_seed=self.seed)

        self.system_ = system
        self.counts_ = counts
        self.report_ = report
        self.delta0_ = report.signaling.delta0
        self.s_max_ = report.chsh.s_max
        self.delta_chsh_ = report.chsh.delta_chsh
        self.delta_min_ = report.delta_min_lp
        self.genuine_ = report.genuine
        self.bdk_satisfied_ = report.bdk_satisfied
        self.jpd_exists_ = report.jpd_exists
        self.degenerate_ = report.degenerate_coupling
        return self
