"""Closed-form contextuality and signaling measures.

Notation: in context (i, j) the a-observable has mean m_a(i, j), the
b-observable has mean m_b(i, j), and cov(i, j) is the product expectation.
The signaling deltas compare one observable's mean across the two contexts
it appears in:

    delta_a(i) = m_a(i, 1) - m_a(i, 2)
    delta_b(j) = m_b(1, j) - m_b(2, j)

delta0 is half the sum of their absolute values. The CHSH statistic takes
the four covariances c = (c11, c12, c21, c22) and forms, for each choice
(i, j) of the subtracted term,

    expression(i, j) = |c11 + c12 + c21 + c22 - 2*c(i, j)|,

with s_max their maximum. s_max <= 2 is the classical bound, 2*sqrt(2)
the quantum (Tsirelson) bound, 4 the algebraic bound.
"""

from __future__ import annotations

from dataclasses import dataclass

from .systems import CONTEXTS, ContextLabel, CyclicSystem, DEFAULT_TOL


@dataclass(frozen=True)
class SignalingProfile:
    """Per-observable signaling deltas and their aggregate delta0."""

    delta_a: tuple[float, float]  # delta_a(1), delta_a(2)
    delta_b: tuple[float, float]  # delta_b(1), delta_b(2)
    delta0: float

    def __post_init__(self):
        expected = 0.5 * (sum(abs(d) for d in self.delta_a)
                          + sum(abs(d) for d in self.delta_b))
        if abs(self.delta0 - expected) > DEFAULT_TOL:
            raise ValueError(f"delta0 = {self.delta0!r} inconsistent with deltas")
        # Each delta lies in [-2, 2], so delta0 lies in [0, 4].
        if not 0.0 <= self.delta0 <= 4.0 + DEFAULT_TOL:
            raise ValueError(f"delta0 = {self.delta0!r} outside [0, 4]")


@dataclass(frozen=True)
class ChshProfile:
    """The four CHSH expressions, their maximum, and delta_chsh."""

    expressions: dict[ContextLabel, float]
    s_max: float
    delta_chsh: float

    def __post_init__(self):
        if set(self.expressions) != set(CONTEXTS):
            raise ValueError("expressions must cover all four contexts")
        if abs(self.s_max - max(self.expressions.values())) > DEFAULT_TOL:
            raise ValueError("s_max inconsistent with expressions")
        if not -1.0 - DEFAULT_TOL <= self.delta_chsh <= 1.0 + DEFAULT_TOL:
            raise ValueError(f"delta_chsh = {self.delta_chsh!r} outside [-1, 1]")

    @property
    def satisfied(self) -> bool:
        """True when the classical CHSH bound holds: s_max <= 2."""
        return self.s_max <= 2.0 + DEFAULT_TOL


@dataclass(frozen=True)
class MarginalConsistency:
    """Per-observable verdicts for the no-signaling conditions."""

    delta_a: tuple[float, float]
    delta_b: tuple[float, float]
    consistent_a: tuple[bool, bool]
    consistent_b: tuple[bool, bool]
    no_signaling: bool


def signaling_profile(system: CyclicSystem) -> SignalingProfile:
    """Signaling deltas of a system and delta0 = half their absolute sum."""
    stats = system.all_stats()
    delta_a = tuple(
        stats[ContextLabel(i, 1)].m_a - stats[ContextLabel(i, 2)].m_a for i in (1, 2))
    delta_b = tuple(
        stats[ContextLabel(1, j)].m_b - stats[ContextLabel(2, j)].m_b for j in (1, 2))
    delta0 = 0.5 * (abs(delta_a[0]) + abs(delta_a[1]) + abs(delta_b[0]) + abs(delta_b[1]))
    return SignalingProfile(delta_a=delta_a, delta_b=delta_b, delta0=delta0)


def chsh_profile(system: CyclicSystem) -> ChshProfile:
    """CHSH expressions over the four subtracted-term choices."""
    covs = {ctx: system.stats(ctx.i, ctx.j).cov for ctx in CONTEXTS}
    total = sum(covs.values())
    expressions = {ctx: abs(total - 2.0 * covs[ctx]) for ctx in CONTEXTS}
    s_max = max(expressions.values())
    return ChshProfile(expressions=expressions, s_max=s_max,
                       delta_chsh=0.5 * (s_max - 2.0))


def marginal_consistency(system: CyclicSystem, tol: float = DEFAULT_TOL) -> MarginalConsistency:
    """Check each observable's mean across its two contexts."""
    prof = signaling_profile(system)
    consistent_a = tuple(abs(d) <= tol for d in prof.delta_a)
    consistent_b = tuple(abs(d) <= tol for d in prof.delta_b)
    return MarginalConsistency(
        delta_a=prof.delta_a,
        delta_b=prof.delta_b,
        consistent_a=consistent_a,
        consistent_b=consistent_b,
        no_signaling=all(consistent_a) and all(consistent_b),
    )


def closed_form_delta_min(system: CyclicSystem) -> float:
    """Closed form for the minimal coupling mismatch: max(delta0, delta_chsh)."""
    return max(signaling_profile(system).delta0, chsh_profile(system).delta_chsh)


def bdk_check(system: CyclicSystem, tol: float = DEFAULT_TOL) -> bool:
    """True when s_max - 2*delta0 <= 2, i.e. no genuine contextuality."""
    return (chsh_profile(system).s_max
            - 2.0 * signaling_profile(system).delta0) <= 2.0 + tol


def genuine_contextuality(system: CyclicSystem, delta_min: float) -> float:
    """Excess of the coupling mismatch over the signaling floor."""
    return delta_min - signaling_profile(system).delta0
