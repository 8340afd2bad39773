import math

import numpy as np
import pytest

from cbdtools import (CONTEXTS, GeneratorSpec, InfeasibleInjection, bdk_check,
                      classical_deterministic, generate, inject_signaling,
                      pr_box, random_system, signaling_profile, tsirelson,
                      uniform_system)


def test_reference_systems():
    covs = [pr_box().stats(ctx.i, ctx.j).cov for ctx in CONTEXTS]
    assert covs == [1.0, 1.0, 1.0, -1.0]
    for ctx in CONTEXTS:
        st = pr_box().stats(ctx.i, ctx.j)
        assert st.m_a == 0.0 and st.m_b == 0.0

    r = math.sqrt(2.0) / 2.0
    covs = [tsirelson().stats(ctx.i, ctx.j).cov for ctx in CONTEXTS]
    assert max(abs(c - t) for c, t in zip(covs, (r, r, r, -r))) <= 1e-12

    for ctx in CONTEXTS:
        st = classical_deterministic().stats(ctx.i, ctx.j)
        assert (st.m_a, st.m_b, st.cov) == (1.0, 1.0, 1.0)

    for ctx in CONTEXTS:
        assert uniform_system().joint(ctx.i, ctx.j).entries() == (0.25,) * 4


def test_random_is_deterministic_given_seed():
    a = random_system(123)
    b = random_system(123)
    c = random_system(124)
    same = all(a.joint(ctx.i, ctx.j).entries() == b.joint(ctx.i, ctx.j).entries()
               for ctx in CONTEXTS)
    different = any(a.joint(ctx.i, ctx.j).entries() != c.joint(ctx.i, ctx.j).entries()
                    for ctx in CONTEXTS)
    assert same and different


def test_random_systems_are_valid_and_varied():
    rng = np.random.default_rng(55)
    delta0s = [signaling_profile(random_system(rng)).delta0 for _ in range(300)]
    assert min(delta0s) >= 0.0
    assert max(delta0s) > 0.5  # free sampling does produce strong signaling


def test_no_signaling_mode_kills_all_deltas():
    rng = np.random.default_rng(56)
    for _ in range(200):
        prof = signaling_profile(random_system(rng, no_signaling=True))
        assert prof.delta0 <= 1e-12


def test_ensemble_contains_both_bdk_outcomes():
    verdicts = set()
    for k in range(1000):
        system = random_system(np.random.default_rng([3, k]),
                               no_signaling=bool(k % 2))
        verdicts.add(bdk_check(system))
        if verdicts == {True, False}:
            break
    assert verdicts == {True, False}


def test_injection_produces_requested_deltas():
    system = inject_signaling(uniform_system(), delta_a=(0.4, 0.0))
    prof = signaling_profile(system)
    assert abs(prof.delta_a[0] - 0.4) <= 1e-12
    assert abs(prof.delta0 - 0.2) <= 1e-12

    base = random_system(62, no_signaling=True)
    # this seed's base has enough slack for the requested shifts
    system = inject_signaling(base, delta_a=(0.1, -0.05), delta_b=(0.02, 0.08))
    prof = signaling_profile(system)
    for got, want in zip(prof.delta_a + prof.delta_b, (0.1, -0.05, 0.02, 0.08)):
        assert abs(got - want) <= 1e-12
    # covariances are untouched
    for ctx in CONTEXTS:
        assert abs(system.stats(ctx.i, ctx.j).cov
                   - base.stats(ctx.i, ctx.j).cov) <= 1e-12


def test_injection_rejects_infeasible_shifts():
    with pytest.raises(InfeasibleInjection):
        inject_signaling(classical_deterministic(), delta_a=(0.5, 0.0))
    with pytest.raises(InfeasibleInjection):
        inject_signaling(uniform_system(), delta_a=(2.5, 0.0))


def test_generator_spec_validation():
    with pytest.raises(ValueError):
        GeneratorSpec(kind="nonsense")
    with pytest.raises(ValueError):
        GeneratorSpec(kind="random", seed=-1)
    with pytest.raises(ValueError):
        GeneratorSpec(kind="pr_box", params={"delta_a1": 0.1})
    GeneratorSpec(kind="random", seed=5, params={"no_signaling": 1.0})


def test_generate_dispatch_and_reproducibility():
    spec = GeneratorSpec(kind="random", seed=11)
    a, b = generate(spec), generate(spec)
    assert all(a.joint(ctx.i, ctx.j).entries() == b.joint(ctx.i, ctx.j).entries()
               for ctx in CONTEXTS)

    box = generate(GeneratorSpec(kind="pr_box"))
    assert box.stats(2, 2).cov == -1.0

    injected = generate(GeneratorSpec(
        kind="signaling_injection", seed=4,
        params={"uniform_base": 1.0, "delta_a1": 0.6}))
    assert abs(signaling_profile(injected).delta0 - 0.3) <= 1e-12

    seeded_base = generate(GeneratorSpec(kind="signaling_injection", seed=3,
                                         params={"delta_b2": 0.2}))
    prof = signaling_profile(seeded_base)
    assert abs(prof.delta_b[1] - 0.2) <= 1e-12
