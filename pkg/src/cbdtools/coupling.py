"""Couplings of the four context distributions and their mismatch LP.

A coupling is a joint distribution of the eight variables

    (A11, B11, A12, B21, A21, B12, A22, B22)

over the 256 sign assignments, where context (i, j) carries the pair
(A_ij, B_ji) and must reproduce that context's observed 2x2 table. The
mismatch functional charges every disagreement between the two versions
of one observable:

    P(A11 != A12) + P(A21 != A22) + P(B11 != B12) + P(B21 != B22).

Its minimum over all couplings is delta_min; a system carries genuine
contextuality when delta_min exceeds the signaling floor delta0.

Assignments are enumerated in lexicographic order with -1 before +1 and
the last variable varying fastest, so index 0 is all -1 and index 255 is
all +1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import SolverFailure
from .lp import MAX_ITERATIONS, LinearProgram, simplex_solve
from .systems import CONTEXTS, CyclicSystem, pair_stats

#: Variable order within an assignment, grouped by context.
VARIABLES = ("A11", "B11", "A12", "B21", "A21", "B12", "A22", "B22")

#: (a-column, b-column) of each context's pair.
CONTEXT_COLUMNS = {(1, 1): (0, 1), (1, 2): (2, 3), (2, 1): (4, 5), (2, 2): (6, 7)}

#: Columns holding the two versions of each observable.
MISMATCH_PAIRS = (("a1", 0, 2), ("a2", 4, 6), ("b1", 1, 5), ("b2", 3, 7))

ASSIGNMENTS = np.array(list(itertools.product((-1, 1), repeat=8)), dtype=np.int8)

WITNESS_TABLE_TOL = 1e-7
DEGENERACY_TOL = 1e-6
_PROBE_EPS = 1e-6
_PROBE_SEED = 20240917


def mismatch_vector() -> np.ndarray:
    """Number of observable disagreements in each assignment (the LP objective)."""
    V = ASSIGNMENTS
    cost = np.zeros(len(V))
    for _, left, right in MISMATCH_PAIRS:
        cost += (V[:, left] != V[:, right]).astype(float)
    return cost


def coupling_table(weights: np.ndarray, i: int, j: int) -> tuple[float, float, float, float]:
    """Marginalize 256 weights onto context (i, j); returns (pp, pm, mp, mm).

    Sums weights directly over outcome masks, sharing no machinery with
    the LP constraint rows.
    """
    a_col, b_col = CONTEXT_COLUMNS[(i, j)]
    table = []
    for a, b in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        mask = (ASSIGNMENTS[:, a_col] == a) & (ASSIGNMENTS[:, b_col] == b)
        table.append(float(weights[mask].sum()))
    return tuple(table)


@dataclass(frozen=True)
class Coupling:
    """A distribution over the 256 assignments."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).copy()
        if w.shape != (256,):
            raise ValueError("a coupling holds exactly 256 weights")
        if w.min() < 0.0:
            raise ValueError(f"negative weight {w.min():.3e}")
        if abs(w.sum() - 1.0) > 1e-9:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def table(self, i: int, j: int) -> tuple[float, float, float, float]:
        return coupling_table(self.weights, i, j)

    def mismatch(self) -> float:
        """Value of the mismatch functional under this coupling."""
        return float(mismatch_vector() @ self.weights)

    def as_list(self) -> list[float]:
        return [float(w) for w in self.weights]


def build_coupling_lp(system: CyclicSystem) -> LinearProgram:
    """Mismatch LP: 256 weights, 13 equality rows.

    Row 0 is normalization; each context then contributes three moment
    rows (a-mean, b-mean, covariance), which pin its full 2x2 table.
    """
    V = ASSIGNMENTS.astype(float)
    rows = [np.ones(len(V))]
    rhs = [1.0]
    for ctx in CONTEXTS:
        a_col, b_col = CONTEXT_COLUMNS[(ctx.i, ctx.j)]
        stats = pair_stats(system.joint(ctx.i, ctx.j))
        rows.append(V[:, a_col])
        rhs.append(stats.m_a)
        rows.append(V[:, b_col])
        rhs.append(stats.m_b)
        rows.append(V[:, a_col] * V[:, b_col])
        rhs.append(stats.cov)
    return LinearProgram(objective=mismatch_vector(),
                         eq_matrix=np.array(rows), eq_rhs=np.array(rhs))


def _check_witness(system: CyclicSystem, witness: Coupling) -> None:
    for ctx in CONTEXTS:
        produced = witness.table(ctx.i, ctx.j)
        target = system.joint(ctx.i, ctx.j).entries()
        gap = max(abs(p - t) for p, t in zip(produced, target))
        if gap > WITNESS_TABLE_TOL:
            raise SolverFailure(
                f"witness misses context {ctx} table by {gap:.3e}")


def minimize_mismatch(system: CyclicSystem, probe_degeneracy: bool = True,
                      max_iterations: int = MAX_ITERATIONS) -> tuple[float, Coupling, bool]:
    """Minimal mismatch over couplings, an optimal witness, degeneracy flag.

    Degeneracy is probed by re-solving with the objective tilted by a
    small fixed random perturbation (both signs); a second optimum whose
    weights differ from the first by more than 1e-6 flags a non-unique
    solution.
    """
    lp = build_coupling_lp(system)
    result = simplex_solve(lp, max_iterations=max_iterations)
    if result.status != "optimal":
        raise SolverFailure(
            f"mismatch LP finished with status {result.status!r} "
            f"after {result.iterations} iterations",
            iterations=result.iterations, objective=result.objective)
    weights = result.x

    degenerate = False
    if probe_degeneracy:
        tilt = np.random.default_rng(_PROBE_SEED).uniform(0.0, 1.0, lp.n_variables)
        for sign in (1.0, -1.0):
            perturbed = LinearProgram(
                objective=lp.objective + sign * _PROBE_EPS * tilt,
                eq_matrix=lp.eq_matrix, eq_rhs=lp.eq_rhs)
            probe = simplex_solve(perturbed, max_iterations=max_iterations)
            if probe.status != "optimal":
                raise SolverFailure(
                    f"degeneracy probe finished with status {probe.status!r}",
                    iterations=probe.iterations, objective=probe.objective)
            if np.abs(probe.x - weights).max() > DEGENERACY_TOL:
                degenerate = True
                break

    witness = Coupling(np.clip(weights, 0.0, None))
    _check_witness(system, witness)
    return float(result.objective), witness, degenerate


#: Atom order of a hypothetical joint distribution (a1, a2, b1, b2).
JPD_ATOMS = tuple(itertools.product((-1, 1), repeat=4))


def jpd_feasibility(system: CyclicSystem, feas_tol: float = 1e-8
                    ) -> tuple[bool, dict[tuple[int, int, int, int], float] | None]:
    """Does one joint distribution of (a1, a2, b1, b2) reproduce all contexts?

    Feasibility of 16 atom probabilities under normalization plus the
    four contexts' pairwise marginals. Returns (exists, atom weights).
    """
    atoms = np.array(JPD_ATOMS)
    rows = [np.ones(len(atoms))]
    rhs = [1.0]
    for ctx in CONTEXTS:
        a_col = ctx.i - 1
        b_col = 2 + ctx.j - 1
        joint = system.joint(ctx.i, ctx.j)
        for a, b in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            mask = (atoms[:, a_col] == a) & (atoms[:, b_col] == b)
            rows.append(mask.astype(float))
            rhs.append(joint.p(a, b))
    lp = LinearProgram(objective=np.zeros(len(atoms)),
                       eq_matrix=np.array(rows), eq_rhs=np.array(rhs))
    result = simplex_solve(lp, feas_tol=feas_tol)
    if result.status == "infeasible":
        return False, None
    if result.status != "optimal":
        raise SolverFailure(
            f"jpd LP finished with status {result.status!r}",
            iterations=result.iterations, objective=result.objective)
    weights = np.clip(result.x, 0.0, None)
    return True, {atom: float(w) for atom, w in zip(JPD_ATOMS, weights)}
