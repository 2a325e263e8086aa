"""State spaces, the seminorm-induced distance, and epsilon searches."""

import math
from fractions import Fraction

import numpy as np
import pytest

from spectrunc import (
    AlgebraElement,
    BridgeSpec,
    FreeAbelian,
    Heisenberg,
    SearchParams,
    SolverParams,
    ToeplitzOperator,
    ball,
    bridge_norm,
    brute_distance,
    combined_lipnorm,
    compress,
    delta,
    density_state,
    epsilon_full,
    epsilon_truncated,
    fejer_apply,
    fejer_kernel,
    gh_bound,
    identity_operator,
    l1_norm,
    lip_distance,
    random_density_state,
    random_element,
    random_psd,
    random_vector_state,
    reconstruct,
    state_eval,
    truncated_lipnorm,
    unit,
    vector_state,
    word_length,
)

Z1 = FreeAbelian(1)
Z2 = FreeAbelian(2)
H3 = Heisenberg()

INV_SQRT2 = 1 / math.sqrt(2)


# ---------------------------------------------------------------------------
# state construction and evaluation


def test_vector_state_normalizes():
    phi = vector_state(Z1, {(0,): 3.0, (1,): 4.0})
    assert abs(phi.vector[(0,)] - 0.6) < 1e-15
    assert abs(phi.vector[(1,)] - 0.8) < 1e-15


def test_vector_state_rejects_zero_and_out_of_ball():
    with pytest.raises(ValueError):
        vector_state(Z1, {(0,): 0.0})
    with pytest.raises(ValueError):
        vector_state(Z1, {(5,): 1.0}, lam=2)


def test_density_state_validation():
    n = len(ball(Z1, 1))
    good = np.eye(n) / n
    density_state(Z1, good, 1)
    with pytest.raises(ValueError):
        density_state(Z1, np.eye(n), 1)  # trace n, not 1
    bad_h = good.astype(complex).copy()
    bad_h[0, 1] = 0.5
    with pytest.raises(ValueError):
        density_state(Z1, bad_h, 1)
    neg = np.diag([1.5, -0.5, 0.0])
    with pytest.raises(ValueError):
        density_state(Z1, neg, 1)
    with pytest.raises(ValueError):
        density_state(Z1, np.eye(2) / 2, 1)


def test_state_eval_full_examples():
    phi = vector_state(Z1, {(0,): 1.0})
    assert state_eval(phi, unit(Z1)) == 1.0
    assert state_eval(phi, delta(Z1, (1,))) == 0.0
    psi = vector_state(Z1, {(0,): 1.0, (1,): 1.0})
    assert abs(state_eval(psi, delta(Z1, (1,))) - 0.5) < 1e-15


def test_state_eval_truncated_examples():
    phi = vector_state(Z2, {(0, 0): 1.0}, lam=1)
    T = compress(delta(Z2, (1, 0), 3.0) + delta(Z2, (0, 0), 2.0), 1)
    assert state_eval(phi, T) == 2.0
    n = len(ball(Z2, 1))
    rho = density_state(Z2, np.eye(n) / n, 1)
    assert abs(state_eval(rho, identity_operator(Z2, 1)) - 1.0) < 1e-14


def test_state_eval_is_positive_and_unital():
    rng = np.random.default_rng(40)
    for mk in (random_vector_state, random_density_state):
        st = mk(Z2, 1, rng)
        assert abs(state_eval(st, identity_operator(Z2, 1)) - 1.0) < 1e-12
        val = state_eval(st, random_psd(Z2, 1, rng))
        assert val.real >= -1e-12
        assert abs(val.imag) < 1e-12


def test_state_eval_domain_mismatches():
    full = vector_state(Z1, {(0,): 1.0})
    trunc = vector_state(Z1, {(0,): 1.0}, lam=1)
    with pytest.raises(ValueError):
        state_eval(full, identity_operator(Z1, 1))
    with pytest.raises(ValueError):
        state_eval(trunc, unit(Z1))
    with pytest.raises(ValueError):
        state_eval(trunc, identity_operator(Z1, 2))
    with pytest.raises(ValueError):
        state_eval(trunc, identity_operator(Z2, 1))
    with pytest.raises(TypeError):
        state_eval(full, 3.0)


# ---------------------------------------------------------------------------
# distance solver


def _named_pair():
    phi = vector_state(Z1, {(0,): 1.0, (1,): 1.0}, lam=1)
    psi = vector_state(Z1, {(0,): 1.0}, lam=1)
    return phi, psi


def test_distance_named_instance_value():
    # the optimum is attained on the symmetric two-sided shift direction,
    # where the star-graph norm sqrt(2) forces the value 1/sqrt(2)
    phi, psi = _named_pair()
    res = lip_distance(phi, psi, s=1, lam=1)
    assert res.value >= INV_SQRT2 - 1e-8
    assert abs(res.value - INV_SQRT2) < 1e-9
    assert res.status == "converged"


def test_distance_witness_is_feasible_and_attains_value():
    phi, psi = _named_pair()
    res = lip_distance(phi, psi, s=1, lam=1)
    w = res.witness
    assert w.is_selfadjoint()
    assert truncated_lipnorm(w, 1) <= 1.0 + 1e-9
    attained = (state_eval(phi, w) - state_eval(psi, w)).real
    assert abs(attained - res.value) < 1e-10


def test_distance_matches_brute_oracle_on_named_instance():
    phi, psi = _named_pair()
    res = lip_distance(phi, psi, s=1, lam=1)
    oracle = brute_distance(phi, psi, s=1, lam=1)
    assert abs(res.value - oracle) <= 1e-4


def test_distance_symmetry_and_self_distance():
    rng = np.random.default_rng(41)
    for _ in range(5):
        phi = random_vector_state(Z1, 1, rng)
        psi = random_density_state(Z1, 1, rng)
        d1 = lip_distance(phi, psi, s=1, lam=1).value
        d2 = lip_distance(psi, phi, s=1, lam=1).value
        assert abs(d1 - d2) < 1e-9
        assert lip_distance(phi, phi, s=1, lam=1).value <= 1e-8


def test_distance_zero_difference_short_circuits():
    phi = vector_state(Z1, {(0,): 1.0}, lam=1)
    res = lip_distance(phi, phi, s=1, lam=1)
    assert res.value == 0.0
    assert len(res.witness.support) == 0
    assert res.status == "converged"


def test_distance_scale_homogeneity():
    phi, psi = _named_pair()
    base = lip_distance(phi, psi, s=1, lam=1).value
    half = lip_distance(phi, psi, s=1, lam=1, lip_scale=2.0).value
    assert abs(half - base / 2) < 1e-9


def test_distance_agrees_with_oracle_on_random_pairs():
    rng = np.random.default_rng(42)
    for _ in range(6):
        phi = random_vector_state(Z1, 1, rng)
        psi = random_vector_state(Z1, 1, rng)
        got = lip_distance(phi, psi, s=1, lam=1).value
        want = brute_distance(phi, psi, s=1, lam=1)
        assert abs(got - want) <= 1e-4


def test_distance_triangle_inequality_via_oracle():
    rng = np.random.default_rng(43)
    for _ in range(4):
        a = random_vector_state(Z1, 1, rng)
        b = random_vector_state(Z1, 1, rng)
        c = random_density_state(Z1, 1, rng)
        dab = brute_distance(a, b, s=1, lam=1)
        dbc = brute_distance(b, c, s=1, lam=1)
        dac = brute_distance(a, c, s=1, lam=1)
        assert dac <= dab + dbc + 2e-4


def test_distance_validates_domains():
    phi = vector_state(Z1, {(0,): 1.0}, lam=1)
    chi = vector_state(Z1, {(0,): 1.0}, lam=2)
    with pytest.raises(ValueError):
        lip_distance(phi, chi, s=1, lam=1)
    other = vector_state(Z2, {(0, 0): 1.0}, lam=1)
    with pytest.raises(ValueError):
        lip_distance(phi, other, s=1, lam=1)


def test_brute_oracle_refuses_large_dimension():
    phi = random_vector_state(Z1, 2, np.random.default_rng(44))
    psi = random_vector_state(Z1, 2, np.random.default_rng(45))
    with pytest.raises(ValueError):
        brute_distance(phi, psi, s=1, lam=2)


def test_solver_deterministic():
    phi, psi = _named_pair()
    p = SolverParams(seed=7)
    a = lip_distance(phi, psi, s=1, lam=1, params=p)
    b = lip_distance(phi, psi, s=1, lam=1, params=p)
    assert a.value == b.value


# ---------------------------------------------------------------------------
# bridge coupling


def test_bridge_norm_vanishes_on_reconstruction_pairs():
    rng = np.random.default_rng(46)
    T = random_psd(Z2, 2, rng)
    assert bridge_norm(reconstruct(T), T, epsilon=0.25) == 0.0


def test_bridge_norm_scaling_example():
    a = delta(Z1, (1,))
    zero = ToeplitzOperator(Z1, 1, {})
    assert bridge_norm(a, zero, epsilon=0.5) == pytest.approx(2.0, abs=1e-9)
    with pytest.raises(ValueError):
        bridge_norm(a, zero, epsilon=0.0)


def test_bridge_spec_maps():
    spec = BridgeSpec(Z1, 2, epsilon=0.2)
    f = delta(Z1, (1,), Fraction(1))
    T = spec.to_truncated(f)
    assert spec.to_full(T) == fejer_apply(f, 2)
    assert spec.norm(spec.to_full(T), T) == 0.0


def test_combined_lipnorm_example():
    lam = 2
    a = delta(Z1, (1,))
    b = compress(a, lam)
    # the defect norm is 1/(2 lam + 1); any epsilon at least that large
    # leaves the two one-sided seminorms (both exactly 1) in charge
    val = combined_lipnorm(a, b, s=1, lam=lam, epsilon=0.5)
    assert val == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        combined_lipnorm(a, compress(a, lam + 1), s=1, lam=lam, epsilon=0.5)


def test_state_proximity_under_smoothing():
    # |phi(f) - phi(Ff)| is bounded by the l1 mass of the defect, and that
    # mass is bounded by epsilon times the length-weighted l1 mass of f
    rng = np.random.default_rng(47)
    for grp, lam in ((Z2, 3), (H3, 2)):
        kern = fejer_kernel(grp, lam)
        eps = float(kern.folner_epsilon)
        for _ in range(5):
            phi = vector_state(
                grp, {g: complex(*rng.standard_normal(2)) for g in ball(grp, 2)}
            )
            f = random_element(grp, 3, rng)
            gap = abs(state_eval(phi, f) - state_eval(phi, fejer_apply(f, lam)))
            l1_defect = l1_norm(f - fejer_apply(f, lam))
            weighted = sum(
                word_length(grp, g) * abs(complex(v)) for g, v in f.items()
            )
            assert gap <= l1_defect + 1e-12
            assert l1_defect <= eps * weighted + 1e-12


# ---------------------------------------------------------------------------
# epsilon searches


def test_epsilon_truncated_exact_floor_on_z():
    # on Z the worst basis direction is the single step: (1 - F(1)) / 1
    for lam in (2, 4, 8):
        assert epsilon_truncated(Z1, lam, 2) >= 1 / (2 * lam + 1) - 1e-12


def test_epsilon_full_at_least_basis_floor():
    for grp, lam in ((Z1, 2), (Z2, 2)):
        kern = fejer_kernel(grp, lam)
        floor = max(
            float(1 - v) / word_length(grp, z) ** 2
            for z, v in kern.values.items()
            if z != grp.identity()
        )
        assert epsilon_full(grp, lam, 2) >= floor - 1e-12


def test_epsilon_searches_deterministic():
    p = SearchParams(seed=5, starts=3, max_iters=60)
    assert epsilon_full(Z1, 2, 2, search=p) == epsilon_full(Z1, 2, 2, search=p)
    assert epsilon_truncated(Z1, 2, 2, search=p) == epsilon_truncated(
        Z1, 2, 2, search=p
    )


def test_epsilon_decreases_along_doubling_radii():
    p = SearchParams(starts=4, max_iters=80)
    fulls = [epsilon_full(Z1, lam, 2, search=p) for lam in (2, 4, 8)]
    truncs = [epsilon_truncated(Z1, lam, 2, search=p) for lam in (2, 4, 8)]
    assert fulls[0] > fulls[1] > fulls[2]
    assert truncs[0] > truncs[1] > truncs[2]
    assert fulls[2] <= fulls[0] / 2
    assert truncs[2] <= truncs[0] / 2


def test_gh_bound_is_twice_the_worse_constant():
    assert gh_bound(0.1, 0.2) == 0.4
    assert gh_bound(0.3, 0.2) == 0.6
