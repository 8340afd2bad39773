"""Dense two-phase simplex for small equality-form linear programs.

Problems are stated as: minimize c.x subject to A x = b, x >= 0. Phase 1
introduces one artificial variable per row and minimizes their sum; a
positive phase-1 optimum certifies infeasibility. Redundant rows are
dropped when their artificial cannot be pivoted out. Phase 2 minimizes
the real objective from the feasible basis.

Pivoting uses Dantzig's rule for speed and switches permanently to
Bland's rule after a run of non-improving (degenerate) pivots, which
guarantees termination. Ties in the ratio test always go to the row
whose basic variable has the smallest index. A shared iteration cap
covers both phases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_ITERATIONS = 100_000
COST_TOL = 1e-9     # reduced-cost optimality threshold
PIVOT_TOL = 1e-10   # smallest acceptable pivot element
STALL_LIMIT = 64    # degenerate pivots tolerated before switching to Bland


@dataclass(frozen=True)
class LinearProgram:
    """min objective . x  s.t.  eq_matrix @ x = eq_rhs,  x >= 0."""

    objective: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float)
        A = np.asarray(self.eq_matrix, dtype=float)
        b = np.asarray(self.eq_rhs, dtype=float)
        if A.ndim != 2:
            raise ValueError("eq_matrix must be 2-D")
        if c.ndim != 1 or c.shape[0] != A.shape[1]:
            raise ValueError("objective length must match the column count")
        if b.ndim != 1 or b.shape[0] != A.shape[0]:
            raise ValueError("eq_rhs length must match the row count")
        for name, arr in (("objective", c), ("eq_matrix", A), ("eq_rhs", b)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")
        for name, arr in (("objective", c), ("eq_matrix", A), ("eq_rhs", b)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_variables(self) -> int:
        return self.eq_matrix.shape[1]

    @property
    def n_equalities(self) -> int:
        return self.eq_matrix.shape[0]


@dataclass(frozen=True)
class SimplexResult:
    """Outcome of a solve; status is one of
    "optimal", "infeasible", "unbounded", "iteration_cap"."""

    status: str
    objective: float | None
    x: np.ndarray | None
    iterations: int
    residual: float | None = None


def _pivot(T: np.ndarray, basis: list[int], row: int, col: int) -> None:
    T[row] = T[row] / T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])
    # enforce exact unit column, killing roundoff drift
    T[:, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col


def _iterate(T: np.ndarray, basis: list[int], allowed: np.ndarray,
             start_iter: int, max_iterations: int) -> tuple[str, int]:
    """Pivot until optimal/unbounded/cap; the last tableau row holds
    reduced costs and (negated) objective value."""
    bland = False
    stall = 0
    last_obj = -T[-1, -1]
    iterations = start_iter
    blocked = np.where(allowed, 0.0, np.inf)
    while True:
        cbar = T[-1, :-1]
        if bland:
            candidates = np.flatnonzero((cbar < -COST_TOL) & allowed)
            if candidates.size == 0:
                return "optimal", iterations
            col = int(candidates[0])
        else:
            col = int(np.argmin(cbar + blocked))
            if cbar[col] >= -COST_TOL:
                return "optimal", iterations
        column = T[:-1, col]
        rows = np.flatnonzero(column > PIVOT_TOL)
        if rows.size == 0:
            return "unbounded", iterations
        ratios = np.maximum(T[rows, -1], 0.0) / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12]
        row = int(min(ties, key=lambda r: basis[r]))
        _pivot(T, basis, row, col)
        iterations += 1
        if iterations >= max_iterations:
            return "iteration_cap", iterations
        objective = -T[-1, -1]
        if objective < last_obj - 1e-12:
            stall = 0
            last_obj = objective
        else:
            stall += 1
            if stall >= STALL_LIMIT:
                bland = True


def _solution(basis: list[int], T: np.ndarray, n: int) -> np.ndarray:
    x = np.zeros(n)
    for r, bi in enumerate(basis):
        if bi < n:
            x[bi] = T[r, -1]
    return x


def simplex_solve(lp: LinearProgram, max_iterations: int = MAX_ITERATIONS,
                  feas_tol: float = 1e-9) -> SimplexResult:
    """Solve the program; never raises for infeasible or unbounded input."""
    A = np.array(lp.eq_matrix, dtype=float)
    b = np.array(lp.eq_rhs, dtype=float)
    c = np.array(lp.objective, dtype=float)
    m, n = A.shape
    negative = b < 0
    A[negative] *= -1.0
    b[negative] *= -1.0

    # phase 1: artificial basis, minimize the artificials' sum
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, n:n + m] = 1.0
    T[m] -= T[:m].sum(axis=0)
    basis = list(range(n, n + m))
    allowed = np.concatenate([np.ones(n, dtype=bool), np.zeros(m, dtype=bool)])

    status, iterations = _iterate(T, basis, allowed, 0, max_iterations)
    scale = max(1.0, float(np.abs(b).max()) if m else 1.0)
    if status != "optimal":
        x = _solution(basis, T, n)
        return SimplexResult(status, float(c @ x), None, iterations)
    if -T[m, -1] > feas_tol * scale:
        return SimplexResult("infeasible", None, None, iterations)

    # drive remaining artificials out; rows that cannot pivot are redundant
    keep: list[int] = []
    for r in range(m):
        if basis[r] >= n:
            col = int(np.argmax(np.abs(T[r, :n])))
            if abs(T[r, col]) > PIVOT_TOL:
                _pivot(T, basis, r, col)
            else:
                continue
        keep.append(r)

    rows = len(keep)
    T2 = np.zeros((rows + 1, n + 1))
    T2[:rows, :n] = T[keep][:, :n]
    T2[:rows, -1] = T[keep][:, -1]
    basis2 = [basis[r] for r in keep]
    T2[-1, :n] = c
    for r, bi in enumerate(basis2):
        T2[-1] -= c[bi] * T2[r]

    status, iterations = _iterate(T2, basis2, np.ones(n, dtype=bool),
                                  iterations, max_iterations)
    x = _solution(basis2, T2, n)
    if status != "optimal":
        objective = float(c @ x) if status == "iteration_cap" else None
        return SimplexResult(status, objective, None, iterations)
    residual = float(np.abs(lp.eq_matrix @ x - lp.eq_rhs).max()) if m else 0.0
    return SimplexResult("optimal", float(c @ x), x, iterations, residual=residual)
