"""The power-of-two phase: coefficient rules, point search, full runs."""

import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import conetri.p2t_engine as engine_mod
from conetri.cone_geometry import make_cone
from conetri.errors import DivisibilityError
from conetri.number_theory import ROSSER_CONSTANT, factorize, is_prime, phi
from conetri.p2t_engine import (
    TraceEvent,
    adjust_coefficients,
    coefficient_ok_protected,
    find_x,
    is_power_of_two,
    protected_count,
    run_p2t,
)

from conftest import oracle_barycentric, oracle_validate_tiling, perm_det
from test_cone_geometry import random_cone_gens


def test_is_power_of_two():
    assert [n for n in range(1, 20) if is_power_of_two(n)] == [1, 2, 4, 8, 16]
    assert not is_power_of_two(0)
    assert not is_power_of_two(-4)


def test_protected_count_examples():
    # floor(ln p / 1.25506): ln 3 < tau, ln 5 and ln 7 give 1, ln 13 gives 2.
    assert protected_count(3) == 0
    assert protected_count(5) == 1
    assert protected_count(7) == 1
    assert protected_count(13) == 2


@given(st.integers(min_value=2, max_value=10**6))
def test_protected_count_matches_formula(p):
    assert protected_count(p) == int(math.log(p) / ROSSER_CONSTANT)


def test_coefficient_ok_protected_examples():
    assert coefficient_ok_protected(4, 7)  # composite
    assert not coefficient_ok_protected(5, 7)  # prime above 7/2
    assert coefficient_ok_protected(2, 3)  # the p=3 special case
    assert coefficient_ok_protected(3, 7)  # prime but 3 <= 7/2
    assert coefficient_ok_protected(2, 5)  # 2 <= 5/2
    assert coefficient_ok_protected(0, 11)
    assert coefficient_ok_protected(9, 11)
    assert not coefficient_ok_protected(7, 11)


@given(st.integers(min_value=0, max_value=500), st.integers(min_value=3, max_value=499))
def test_coefficient_ok_protected_definition(z, p):
    if not is_prime(p) or z >= p:
        return
    expected = (not is_prime(z)) or 2 * z <= p or (z == 2 and p == 3)
    assert coefficient_ok_protected(z, p) == expected


def test_find_x_examples():
    c3 = make_cone([(1, 0), (1, 3)])
    assert find_x(c3, 3) == ((1, 1), (2, 1))
    c5 = make_cone([(1, 0), (1, 5)])
    x, z = find_x(c5, 5)
    assert (x, z) == ((1, 1), (4, 1))
    # z[0] sits on the protected (newest-label) position: 3 is rejected there.
    assert z[0] in {1, 2, 4}


def test_find_x_rejects_non_divisor():
    with pytest.raises(DivisibilityError):
        find_x(make_cone([(1, 0), (1, 4)]), 3)


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=60, deadline=None)
def test_find_x_properties(seed):
    rng = random.Random(seed)
    d = rng.choice([2, 3])
    gens = random_cone_gens(rng, d, 6)
    c = make_cone(gens)
    odd = [q for q in (3, 5, 7, 11, 13) if c.multiplicity % q == 0]
    if not odd:
        return
    p = max(odd)
    x, z = find_x(c, p)
    lam = oracle_barycentric(gens, x)
    # x lies in the half-open box and has order exactly p.
    assert all(0 <= v < 1 for v in lam)
    assert all((p * v).denominator == 1 for v in lam)
    assert any(v.denominator != 1 for v in lam)
    # Fresh cones store slots in decreasing label order already, so the
    # returned z is just p * lam.
    assert z == tuple(int(p * v) for v in lam)
    q = min(protected_count(p), d)
    assert all(coefficient_ok_protected(z[j], p) for j in range(q))
    assert find_x(c, p) == (x, z)


def test_adjust_coefficients_examples():
    assert adjust_coefficients((1, 4), 5) == (1, 4)
    # Slot 1 is unprotected for p=7 (q=1); 5 is prime and above 7/2,
    # so it becomes 5 + 7 = 12 = 2^2 * 3.
    assert adjust_coefficients((1, 5), 7) == (1, 12)
    # z=2 is never rewritten.
    assert adjust_coefficients((2, 1), 3) == (2, 1)
    assert adjust_coefficients((2, 2, 2), 3) == (2, 2, 2)


def test_adjust_coefficients_protects_leading_positions():
    # q=2 for p=13: both leading slots copy verbatim even when prime > p/2.
    assert protected_count(13) == 2
    z = (7, 11, 7, 11)
    out = adjust_coefficients(z, 13)
    assert out[:2] == (7, 11)
    assert out[2] == 7 + 13 and out[3] == 11 + 13


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=80)
def test_adjust_coefficients_properties(seed):
    rng = random.Random(seed)
    p = rng.choice([3, 5, 7, 11, 13, 17, 19, 23])
    d = rng.randint(2, 6)
    z = tuple(rng.randrange(p) for _ in range(d))
    out = adjust_coefficients(z, p)
    q = min(protected_count(p), d)
    assert out[:q] == z[:q]
    for zj, oj in zip(z, out):
        assert oj % p == zj % p
        if oj == zj:
            continue
        # Rewritten entries are 2^s * t with t odd and harmless.
        t = oj
        while t % 2 == 0:
            t //= 2
        assert t % 2 == 1 and oj != t
        assert 3 * t <= 2 * p or (not is_prime(t) and t < p)


def test_run_p2t_power_of_two_base_is_untouched():
    base = make_cone([(1, 0), (1, 2)])
    state = run_p2t(base)
    assert state.trace == []
    assert state.triangulation.cones == [base]
    assert state.triangulation.all_created == [base]


def test_run_p2t_mu3_single_event():
    base = make_cone([(1, 0), (1, 3)])
    state = run_p2t(base)
    assert len(state.trace) == 1
    ev = state.trace[0]
    assert ev.parent_id == base.uid
    assert ev.p == 3
    assert ev.z == (2, 1) and ev.z_prime == (2, 1)
    assert ev.x_prime == (1, 1)
    assert ev.new_label_index == 0
    assert ev.mu_parent == 3 and ev.mu_children == (2, 1)
    assert sorted(c.multiplicity for c in state.triangulation.cones) == [1, 2]


def test_run_p2t_mu5_single_event():
    base = make_cone([(1, 0), (1, 5)])
    state = run_p2t(base)
    assert len(state.trace) == 1
    assert sorted(c.multiplicity for c in state.triangulation.cones) == [1, 4]
    assert all(is_power_of_two(c.multiplicity) for c in state.triangulation.cones)


def test_run_p2t_multi_cone_subdivision():
    # A d=3 cone whose run subdivides several cones at one point. Pinned so
    # the neighbor-event path (z read off the shared face) stays exercised.
    from conetri.cli import random_cone

    base = random_cone(3, 6, random.Random(6))
    assert base.generators == ((6, 3, -5), (1, 6, -2), (-3, -3, -2))
    assert base.multiplicity == 159
    state = run_p2t(base)
    groups = Counter((e.x_prime, e.p) for e in state.trace)
    assert groups[((-1, 0, -2), 3)] == 2
    assert groups[((2, 3, -5), 3)] == 4
    assert all(is_power_of_two(c.multiplicity) for c in state.triangulation.cones)


def trace_cone_index(state):
    return {c.uid: c for c in state.triangulation.all_created}


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=40, deadline=None)
def test_run_p2t_random_campaign(seed):
    rng = random.Random(seed)
    d = rng.choice([2, 3])
    gens = random_cone_gens(rng, d, 5)
    base = make_cone(gens)
    state = run_p2t(base)
    tri = state.triangulation
    assert all(is_power_of_two(c.multiplicity) for c in tri.cones)
    report = oracle_validate_tiling(gens, [c.generators for c in tri.cones])
    assert report["containment_ok"] and report["volume_ok"]

    by_uid = trace_cone_index(state)
    phi_base = phi(factorize(base.multiplicity))
    for ev in state.trace:
        parent = by_uid[ev.parent_id]
        # x' = (1/p) sum z'_j g_j in the parent's storage order.
        for i in range(d):
            assert ev.p * ev.x_prime[i] == sum(
                zp * g[i] for zp, g in zip(ev.z_prime, parent.generators)
            )
        assert ev.z == tuple(v % ev.p for v in ev.z_prime)
        # Child multiplicities: mu(parent) * z'_j / p per replaced slot.
        expected = [
            ev.mu_parent * zp // ev.p for zp in ev.z_prime if zp != 0
        ]
        assert list(ev.mu_children) == expected
        phi_parent = phi(factorize(ev.mu_parent))
        for mu_child in ev.mu_children:
            assert phi(factorize(mu_child)) <= phi_parent - 1 + 1e-6
    # Label depth across everything ever created.
    for cone in tri.all_created:
        assert cone.max_label() <= phi_base - 1 + 1e-6 or cone is base


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=25, deadline=None)
def test_ray_index_matches_exhaustive_scan(seed):
    # Dual route: the ray-index candidate filter must not change the run.
    rng = random.Random(seed)
    d = rng.choice([2, 3])
    gens = random_cone_gens(rng, d, 5)
    fast = run_p2t(make_cone(gens))
    engine_mod.EXHAUSTIVE_CONTAINMENT_SCAN = True
    try:
        slow = run_p2t(make_cone(gens))
    finally:
        engine_mod.EXHAUSTIVE_CONTAINMENT_SCAN = False
    assert fast.trace == slow.trace
    assert [c.generators for c in fast.triangulation.cones] == [
        c.generators for c in slow.triangulation.cones
    ]


def test_trace_event_is_frozen():
    ev = TraceEvent(0, 3, (2, 1), (2, 1), (1, 1), 0, (1, 2), 3, (2, 1))
    with pytest.raises(AttributeError):
        ev.p = 5
