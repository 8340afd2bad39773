import numpy as np
import pytest

from cbdtools import (CONTEXTS, ContextLabel, CyclicSystem, InfeasibleStats,
                      MissingContext, PairJoint, PairStats, joint_from_stats,
                      pair_stats)
from cbdtools.systems import validate_outcome

CTX = ContextLabel(1, 1)


def test_pair_stats_hand_example():
    # pp=0.4, pm=0.1, mp=0.2, mm=0.3
    joint = PairJoint(0.4, 0.1, 0.2, 0.3, context=CTX)
    stats = pair_stats(joint)
    assert abs(stats.m_a - 0.0) <= 1e-12
    assert abs(stats.m_b - 0.2) <= 1e-12
    assert abs(stats.cov - 0.4) <= 1e-12


def test_joint_accessor_and_outcome_validation():
    joint = PairJoint(0.4, 0.1, 0.2, 0.3, context=CTX)
    assert joint.p(1, 1) == 0.4
    assert joint.p(1, -1) == 0.1
    assert joint.p(-1, 1) == 0.2
    assert joint.p(-1, -1) == 0.3
    with pytest.raises(ValueError):
        joint.p(0, 1)
    with pytest.raises(ValueError):
        validate_outcome(2)
    with pytest.raises(ValueError):
        validate_outcome(True)


def test_pair_joint_rejects_bad_tables():
    with pytest.raises(ValueError):
        PairJoint(0.5, 0.5, 0.1, -0.1, context=CTX)
    with pytest.raises(ValueError):
        PairJoint(0.5, 0.5, 0.5, 0.5, context=CTX)


def test_context_label_validation():
    with pytest.raises(ValueError):
        ContextLabel(0, 1)
    with pytest.raises(ValueError):
        ContextLabel(1, 3)
    assert str(ContextLabel(2, 1)) == "21"


def test_infeasible_stats_rejected():
    # perfectly correlated with both means +1 is fine ...
    PairStats(1.0, 1.0, 1.0)
    # ... but means +1 with zero covariance admits no table
    with pytest.raises(InfeasibleStats):
        joint_from_stats(PairStats(1.0, 1.0, 0.0), CTX)
    with pytest.raises(InfeasibleStats):
        PairStats(1.5, 0.0, 0.0)


def test_round_trip_table_stats_table():
    rng = np.random.default_rng(42)
    for _ in range(2000):
        raw = rng.dirichlet(np.ones(4))
        joint = PairJoint(*raw, context=CTX)
        back = joint_from_stats(pair_stats(joint), CTX)
        assert max(abs(x - y) for x, y in zip(joint.entries(), back.entries())) <= 1e-12


def test_round_trip_stats_table_stats():
    rng = np.random.default_rng(43)
    kept = 0
    while kept < 2000:
        m_a, m_b, cov = rng.uniform(-1, 1, 3)
        try:
            stats = PairStats(m_a, m_b, cov)
        except InfeasibleStats:
            continue
        kept += 1
        back = pair_stats(joint_from_stats(stats, CTX))
        assert abs(back.m_a - stats.m_a) <= 1e-12
        assert abs(back.m_b - stats.m_b) <= 1e-12
        assert abs(back.cov - stats.cov) <= 1e-12


def test_system_requires_all_four_contexts():
    uniform = [PairJoint(0.25, 0.25, 0.25, 0.25, context=ctx) for ctx in CONTEXTS]
    CyclicSystem.from_joints(uniform)
    with pytest.raises(MissingContext):
        CyclicSystem.from_joints(uniform[:3])
    with pytest.raises(MissingContext):
        CyclicSystem.from_joints(uniform[:3] + [uniform[0]])


def test_system_lookup_and_constructors():
    tables = {ctx: (0.25, 0.25, 0.25, 0.25) for ctx in CONTEXTS}
    tables[ContextLabel(2, 2)] = (0.5, 0.0, 0.0, 0.5)
    system = CyclicSystem.from_tables(tables)
    assert system.joint(2, 2).pp == 0.5
    assert abs(system.stats(2, 2).cov - 1.0) <= 1e-12
    assert abs(system.stats(1, 1).cov) <= 1e-12

    by_stats = CyclicSystem.from_stats({ctx: pair_stats(system.joint(ctx.i, ctx.j))
                                        for ctx in CONTEXTS})
    for ctx in CONTEXTS:
        a = system.joint(ctx.i, ctx.j).entries()
        b = by_stats.joint(ctx.i, ctx.j).entries()
        assert max(abs(x - y) for x, y in zip(a, b)) <= 1e-12
