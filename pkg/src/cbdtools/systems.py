"""Core types for cyclic-4 systems of binary (+1/-1) observables.

A system pairs observable a_i with observable b_j in four measurement
contexts (i, j), i, j in {1, 2}. Each context carries one 2x2 joint
probability table over the outcomes (+1, -1). Tables are the canonical
representation; means and covariances are derived views, related by

    p(alpha, beta) = (1 + alpha*m_a + beta*m_b + alpha*beta*cov) / 4.

All types are immutable after construction and validate their own
invariants when built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import InfeasibleStats, MissingContext

# Sum-to-one and reconstruction checks at construction time.
CONSTRUCTION_TOL = 1e-12
# Default tolerance for boundary comparisons everywhere else.
DEFAULT_TOL = 1e-9

OUTCOMES = (1, -1)


def validate_outcome(value: int, what: str = "outcome") -> int:
    """Accept exactly the integers +1 and -1 (no other encoding)."""
    if isinstance(value, bool) or value not in (-1, 1):
        raise ValueError(f"{what} must be +1 or -1, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class ContextLabel:
    """Measurement context (i, j): observable a_i measured with b_j."""

    i: int
    j: int

    def __post_init__(self):
        for name, value in (("i", self.i), ("j", self.j)):
            if isinstance(value, bool) or value not in (1, 2):
                raise ValueError(f"context index {name} must be 1 or 2, got {value!r}")

    def __str__(self) -> str:
        return f"{self.i}{self.j}"


#: The four contexts in canonical order.
CONTEXTS = (
    ContextLabel(1, 1),
    ContextLabel(1, 2),
    ContextLabel(2, 1),
    ContextLabel(2, 2),
)


@dataclass(frozen=True)
class PairJoint:
    """Joint distribution of one (a, b) pair in one context.

    Entries are keyed by outcome sign: pp = p(+1, +1), pm = p(+1, -1),
    mp = p(-1, +1), mm = p(-1, -1). Entries must be nonnegative and sum
    to 1 within 1e-12.
    """

    pp: float
    pm: float
    mp: float
    mm: float
    context: ContextLabel

    def __post_init__(self):
        entries = (self.pp, self.pm, self.mp, self.mm)
        for value in entries:
            if not value >= 0.0:
                raise ValueError(
                    f"context {self.context}: negative or non-finite entry {value!r}")
        total = self.pp + self.pm + self.mp + self.mm
        if abs(total - 1.0) > 4 * CONSTRUCTION_TOL:
            raise ValueError(
                f"context {self.context}: entries sum to {total!r}, not 1")

    def p(self, a: int, b: int) -> float:
        """Probability of outcomes (a, b), each in {+1, -1}."""
        validate_outcome(a, "a outcome")
        validate_outcome(b, "b outcome")
        if a == 1:
            return self.pp if b == 1 else self.pm
        return self.mp if b == 1 else self.mm

    def entries(self) -> tuple[float, float, float, float]:
        return (self.pp, self.pm, self.mp, self.mm)


@dataclass(frozen=True)
class PairStats:
    """Moment view of one context: marginal means and the covariance.

    Feasibility requires every reconstructed table entry to be
    nonnegative: 1 + s1*s2*cov - s1*m_a - s2*m_b >= -4e-12 for all
    sign choices s1, s2.
    """

    m_a: float
    m_b: float
    cov: float

    def __post_init__(self):
        for name, value in (("m_a", self.m_a), ("m_b", self.m_b), ("cov", self.cov)):
            if not abs(value) <= 1.0 + CONSTRUCTION_TOL:
                raise InfeasibleStats(f"{name} = {value!r} outside [-1, 1]")
        worst = min(
            1.0 + a * b * self.cov - a * self.m_a - b * self.m_b
            for a in (-1.0, 1.0) for b in (-1.0, 1.0)
        )
        if worst < -4 * CONSTRUCTION_TOL:
            raise InfeasibleStats(
                f"(m_a={self.m_a}, m_b={self.m_b}, cov={self.cov}) admits no "
                f"probability table (entry deficit {worst / 4:.3e})")


def pair_stats(joint: PairJoint) -> PairStats:
    """Means and covariance of a 2x2 table."""
    m_a = joint.pp + joint.pm - joint.mp - joint.mm
    m_b = joint.pp - joint.pm + joint.mp - joint.mm
    cov = joint.pp - joint.pm - joint.mp + joint.mm
    return PairStats(m_a=m_a, m_b=m_b, cov=cov)


def joint_from_stats(stats: PairStats, context: ContextLabel) -> PairJoint:
    """Reconstruct the table from moments; inverse of pair_stats.

    Entries within -1e-12 of zero are clipped to zero and the table is
    renormalized; a larger deficit is an InfeasibleStats error (already
    rejected by the PairStats constructor).
    """
    raw = [
        (1.0 + a * stats.m_a + b * stats.m_b + a * b * stats.cov) / 4.0
        for a, b in ((1, 1), (1, -1), (-1, 1), (-1, -1))
    ]
    if min(raw) < -CONSTRUCTION_TOL:
        raise InfeasibleStats(
            f"stats {stats} yield negative entry {min(raw):.3e} in context {context}")
    clipped = [max(value, 0.0) for value in raw]
    total = sum(clipped)
    pp, pm, mp, mm = (value / total for value in clipped)
    return PairJoint(pp=pp, pm=pm, mp=mp, mm=mm, context=context)


@dataclass(frozen=True)
class CyclicSystem:
    """One joint table per context, exactly four contexts."""

    joints: tuple[PairJoint, PairJoint, PairJoint, PairJoint]

    def __post_init__(self):
        seen = {joint.context for joint in self.joints}
        if seen != set(CONTEXTS):
            missing = sorted(str(c) for c in set(CONTEXTS) - seen)
            raise MissingContext(f"system needs contexts 11, 12, 21, 22; missing {missing}")
        ordered = tuple(sorted(self.joints, key=lambda jt: (jt.context.i, jt.context.j)))
        object.__setattr__(self, "joints", ordered)

    @classmethod
    def from_joints(cls, joints: Iterable[PairJoint]) -> "CyclicSystem":
        return cls(tuple(joints))

    @classmethod
    def from_tables(cls, tables: Mapping[ContextLabel, tuple[float, float, float, float]]) -> "CyclicSystem":
        """Build from a mapping context -> (pp, pm, mp, mm)."""
        joints = [PairJoint(*tables[ctx], context=ctx) for ctx in CONTEXTS if ctx in tables]
        if len(joints) != 4:
            missing = sorted(str(c) for c in CONTEXTS if c not in tables)
            raise MissingContext(f"missing contexts {missing}")
        return cls(tuple(joints))

    @classmethod
    def from_stats(cls, stats: Mapping[ContextLabel, PairStats]) -> "CyclicSystem":
        """Build from a mapping context -> PairStats."""
        if set(stats) != set(CONTEXTS):
            missing = sorted(str(c) for c in CONTEXTS if c not in stats)
            raise MissingContext(f"missing contexts {missing}")
        return cls(tuple(joint_from_stats(stats[ctx], ctx) for ctx in CONTEXTS))

    def joint(self, i: int, j: int) -> PairJoint:
        for jt in self.joints:
            if jt.context.i == i and jt.context.j == j:
                return jt
        raise MissingContext(f"no context ({i}, {j})")

    def stats(self, i: int, j: int) -> PairStats:
        return pair_stats(self.joint(i, j))

    def all_stats(self) -> dict[ContextLabel, PairStats]:
        return {jt.context: pair_stats(jt) for jt in self.joints}
