"""Seeded system generators: reference points and randomized ensembles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleInjection, InfeasibleStats
from .systems import CONTEXTS, ContextLabel, CyclicSystem, PairStats

KINDS = frozenset({
    "pr_box", "tsirelson", "classical_deterministic", "random", "signaling_injection",
})

_PARAM_KEYS = {
    "pr_box": frozenset(),
    "tsirelson": frozenset(),
    "classical_deterministic": frozenset(),
    "random": frozenset({"no_signaling"}),
    "signaling_injection": frozenset(
        {"delta_a1", "delta_a2", "delta_b1", "delta_b2", "uniform_base"}),
}


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for one system: kind, seed, kind-specific real parameters."""

    kind: str
    seed: int = 0
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; choose from {sorted(KINDS)}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed!r}")
        unknown = set(self.params) - _PARAM_KEYS[self.kind]
        if unknown:
            raise ValueError(
                f"kind {self.kind!r} does not take params {sorted(unknown)}")


def _system_from_covs(covs: tuple[float, float, float, float]) -> CyclicSystem:
    stats = {ctx: PairStats(0.0, 0.0, cov) for ctx, cov in zip(CONTEXTS, covs)}
    return CyclicSystem.from_stats(stats)


def pr_box() -> CyclicSystem:
    """Zero means, covariances (1, 1, 1, -1): s_max = 4, no signaling."""
    return _system_from_covs((1.0, 1.0, 1.0, -1.0))


def tsirelson() -> CyclicSystem:
    """Zero means, covariances (+-sqrt(2)/2): s_max = 2*sqrt(2)."""
    r = math.sqrt(2.0) / 2.0
    return _system_from_covs((r, r, r, -r))


def classical_deterministic() -> CyclicSystem:
    """Every observable is +1 with certainty in every context."""
    stats = {ctx: PairStats(1.0, 1.0, 1.0) for ctx in CONTEXTS}
    return CyclicSystem.from_stats(stats)


def uniform_system() -> CyclicSystem:
    """All four tables uniform: zero means, zero covariances."""
    return _system_from_covs((0.0, 0.0, 0.0, 0.0))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _random_pair(rng: np.random.Generator) -> PairStats:
    # rejection sampling from the cube against table nonnegativity
    while True:
        m_a, m_b, cov = rng.uniform(-1.0, 1.0, 3)
        entries = [1.0 + a * m_a + b * m_b + a * b * cov
                   for a in (-1.0, 1.0) for b in (-1.0, 1.0)]
        if min(entries) >= 0.0:
            return PairStats(m_a, m_b, cov)


def random_system(seed, no_signaling: bool = False) -> CyclicSystem:
    """Random valid system; with no_signaling, marginal means are shared
    across contexts and only covariances vary."""
    rng = _as_rng(seed)
    if not no_signaling:
        return CyclicSystem.from_stats({ctx: _random_pair(rng) for ctx in CONTEXTS})
    m_a = rng.uniform(-1.0, 1.0, 2)
    m_b = rng.uniform(-1.0, 1.0, 2)
    stats = {}
    for ctx in CONTEXTS:
        ma, mb = m_a[ctx.i - 1], m_b[ctx.j - 1]
        low = -1.0 + abs(ma + mb)
        high = 1.0 - abs(ma - mb)
        stats[ctx] = PairStats(ma, mb, rng.uniform(low, high))
    return CyclicSystem.from_stats(stats)


def inject_signaling(base: CyclicSystem,
                     delta_a: tuple[float, float] = (0.0, 0.0),
                     delta_b: tuple[float, float] = (0.0, 0.0)) -> CyclicSystem:
    """Shift marginal means to produce prescribed signaling deltas.

    Observable a_i gains +delta_a[i]/2 in context (i, 1) and -delta_a[i]/2
    in context (i, 2); b_j gains +delta_b[j]/2 in (1, j) and -delta_b[j]/2
    in (2, j). On a no-signaling base the resulting deltas are exactly the
    requested ones. Raises InfeasibleInjection when a shifted context
    leaves the feasible region.
    """
    for name, value in (("delta_a1", delta_a[0]), ("delta_a2", delta_a[1]),
                        ("delta_b1", delta_b[0]), ("delta_b2", delta_b[1])):
        if not abs(value) <= 2.0:
            raise InfeasibleInjection(f"{name} = {value!r} outside [-2, 2]")
    stats = {}
    for ctx in CONTEXTS:
        st = base.stats(ctx.i, ctx.j)
        a_shift = delta_a[ctx.i - 1] / 2.0 * (1.0 if ctx.j == 1 else -1.0)
        b_shift = delta_b[ctx.j - 1] / 2.0 * (1.0 if ctx.i == 1 else -1.0)
        try:
            stats[ctx] = PairStats(st.m_a + a_shift, st.m_b + b_shift, st.cov)
        except InfeasibleStats as exc:
            raise InfeasibleInjection(
                f"context {ctx}: shifted stats infeasible ({exc})") from exc
    return CyclicSystem.from_stats(stats)


def generate(spec: GeneratorSpec) -> CyclicSystem:
    """Materialize a GeneratorSpec; deterministic given (kind, seed, params)."""
    if spec.kind == "pr_box":
        return pr_box()
    if spec.kind == "tsirelson":
        return tsirelson()
    if spec.kind == "classical_deterministic":
        return classical_deterministic()
    if spec.kind == "random":
        return random_system(spec.seed,
                             no_signaling=bool(spec.params.get("no_signaling", 0.0)))
    base = (uniform_system() if spec.params.get("uniform_base", 0.0)
            else random_system(spec.seed, no_signaling=True))
    delta_a = (spec.params.get("delta_a1", 0.0), spec.params.get("delta_a2", 0.0))
    delta_b = (spec.params.get("delta_b1", 0.0), spec.params.get("delta_b2", 0.0))
    return inject_signaling(base, delta_a=delta_a, delta_b=delta_b)
