"""Margin formulas: binding eigenvalue, feasibility, gains, matrix oracle."""

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from syncmargin.graph import designate_uncertain, erdos_renyi, laplacian_split
from syncmargin.margin import (
    DynamicsParams,
    alpha0_sq,
    check_mss,
    check_mss_all_eigs,
    critical_eigenvalues,
    existence_p_condition,
    lambda_sup,
    optimal_gain,
    riccati_oracle,
    saddle_gain,
)
from syncmargin.spectral import (
    SpectralSummary,
    orthonormal_complement,
    spectral_summary,
)


def extremes(lam2: float, lamN: float, tau: float = 1.0) -> SpectralSummary:
    return SpectralSummary.from_extremes(lam2, lamN, tau)


params_strategy = st.builds(
    DynamicsParams,
    a=st.floats(1.0001, 1.5),
    delta=st.floats(1.2, 10.0),
    g=st.floats(1e-4, 0.5),
)


# ---------------------------------------------------------------- params

def test_dynamics_params_validation():
    with pytest.raises(ValueError):
        DynamicsParams(a=0.0, delta=2.0, g=0.1)
    with pytest.raises(ValueError):
        DynamicsParams(a=1.0, delta=1.0, g=0.1)
    with pytest.raises(ValueError):
        DynamicsParams(a=1.0, delta=2.0, g=0.0)
    with pytest.raises(ValueError):
        DynamicsParams(a=1.0, delta=2.0, g=0.1, omega2=-1.0)
    p = DynamicsParams(a=1.05, delta=2.0, g=0.1)
    assert p.a0 == 1.05 - 0.5


# ---------------------------------------------------------------- lambda_sup

def test_lambda_sup_complete_graph():
    p = DynamicsParams(a=1.5, delta=2.0, g=0.2)
    assert lambda_sup(extremes(4.0, 4.0), p, 0.0) == 4.0


def test_lambda_sup_picks_farther_extreme():
    # a0 = 1, so the quadratic minimizer sits at a0/g - cod*tau
    s = extremes(2.0, 6.0)
    assert lambda_sup(s, DynamicsParams(a=1.5, delta=2.0, g=0.2), 0.0) == 2.0
    assert lambda_sup(s, DynamicsParams(a=1.5, delta=2.0, g=1 / 3), 0.0) == 6.0


def test_lambda_sup_tie_goes_to_lambda_n():
    # minimizer exactly midway between the extremes
    s = extremes(2.0, 6.0)
    assert lambda_sup(s, DynamicsParams(a=1.5, delta=2.0, g=0.25), 0.0) == 6.0


@given(
    lam2=st.floats(0.1, 10.0),
    gap=st.floats(0.0, 10.0),
    tau=st.floats(0.0, 1.0),
    cod=st.floats(0.0, 5.0),
    p=params_strategy,
)
def test_lambda_sup_maximizes_mode_gain(lam2, gap, tau, cod, p):
    s = extremes(lam2, lam2 + gap, tau)
    lam = lambda_sup(s, p, cod)
    assert lam in (s.lambda2, s.lambdaN)
    other = s.lambda2 if lam == s.lambdaN else s.lambdaN
    assert alpha0_sq(lam, p, cod, tau) >= alpha0_sq(other, p, cod, tau) - 1e-12


# ---------------------------------------------------------------- alpha0_sq

def test_alpha0_sq_zero_at_minimizer_without_dispersion():
    p = DynamicsParams(a=1.5, delta=2.0, g=0.2)
    assert alpha0_sq(p.a0 / p.g, p, 0.0, 1.0) == 0.0


def test_alpha0_sq_hand_value():
    # (0.55 - 0.4)^2 + 2 * 1 * 1 * 4 * 0.01 = 0.0225 + 0.08
    p = DynamicsParams(a=1.05, delta=2.0, g=0.1)
    assert np.isclose(alpha0_sq(4.0, p, 1.0, 1.0), 0.1025, rtol=1e-14)


@given(
    p=params_strategy,
    cod=st.floats(0.0, 10.0),
    tau=st.floats(0.0, 1.0),
)
def test_alpha0_sq_minimum_location_and_value(p, cod, tau):
    lam_star = p.a0 / p.g - cod * tau
    assume(lam_star > 0)
    value = 2.0 * cod * tau * p.a0 * p.g - (cod * tau * p.g) ** 2
    assert np.isclose(alpha0_sq(lam_star, p, cod, tau), value, rtol=1e-9, atol=1e-12)
    for lam in np.linspace(max(lam_star - 5.0, 0.0), lam_star + 5.0, 11):
        assert alpha0_sq(float(lam), p, cod, tau) >= value - 1e-10


# ---------------------------------------------------------------- check_mss

def test_check_mss_no_dispersion_margin_is_one():
    report = check_mss(extremes(12.0, 16.0, 0.0), DynamicsParams(1.05, 2.0, 0.03), 0.0)
    assert report.feasible
    assert report.rho_SM == 1.0
    assert report.sigma_eff_sq == 0.0


def test_check_mss_boundary_is_infeasible():
    # at the upper critical eigenvalue the mode gain equals the threshold
    # exactly and the strict inequality fails; rho is undefined there
    report = check_mss(extremes(112.5, 112.5, 0.0), DynamicsParams(1.125, 2.0, 0.01), 0.0)
    assert np.isclose(report.alpha0_sq, report.lhs, rtol=1e-12)
    assert not report.feasible
    assert report.rho_SM is None


def test_check_mss_feasible_window_shrinks_with_dispersion():
    # fixed a, delta, g: scan the eigenvalue axis at growing dispersion. The
    # feasible set is an interval that narrows and is empty by cod = 25.
    p = DynamicsParams(a=1.125, delta=2.0, g=0.01)
    lams = np.linspace(0.5, 225.0, 450)
    counts = []
    for cod in (0.0, 5.0, 15.0, 24.0, 25.0, 30.0):
        flags = [check_mss(extremes(l, l, 1.0), p, cod).feasible for l in lams]
        counts.append(sum(flags))
        idx = [i for i, f in enumerate(flags) if f]
        if idx:
            assert idx == list(range(idx[0], idx[-1] + 1))
    assert counts[0] > counts[1] > counts[2] > counts[3]
    assert counts[4] == counts[5] == 0


@given(
    lam2=st.floats(0.1, 50.0),
    gap=st.floats(0.0, 50.0),
    tau=st.floats(0.0, 1.0),
    cod=st.floats(0.0, 10.0),
    p=params_strategy,
)
def test_check_mss_report_consistency(lam2, gap, tau, cod, p):
    s = extremes(lam2, lam2 + gap, tau)
    r = check_mss(s, p, cod)
    assert r.lhs == (1.0 - 1.0 / p.delta) ** 2
    assert r.lambda_sup == lambda_sup(s, p, cod)
    assert np.isclose(r.alpha0_sq, alpha0_sq(r.lambda_sup, p, cod, tau), rtol=1e-12)
    assert np.isclose(r.sigma_eff_sq, 2.0 * cod * tau * r.lambda_sup, rtol=1e-12)
    assert r.feasible == (r.lhs > r.alpha0_sq)
    if r.hat_a**2 >= r.lhs:
        assert r.rho_SM is None
        assert not r.feasible
    else:
        assert r.rho_SM is not None and r.rho_SM <= 1.0
        assert r.feasible == (r.rho_SM > 0.0)
        if r.sigma_eff_sq == 0.0:
            assert r.rho_SM == 1.0


def test_check_mss_all_eigs_agrees_on_random_graphs():
    rng = np.random.default_rng(2024)
    checked = 0
    for graph_seed in range(50):
        n = int(rng.integers(6, 25))
        g = designate_uncertain(
            erdos_renyi(n, 0.45, graph_seed), float(rng.uniform(0, 1)),
            float(rng.uniform(0, 4)), graph_seed + 1,
        )
        s = spectral_summary(laplacian_split(g))
        for _ in range(20):
            p = DynamicsParams(
                a=float(rng.uniform(1.0001, 1.4)),
                delta=float(rng.uniform(1.5, 8.0)),
                g=float(10 ** rng.uniform(-4, -0.3)),
            )
            cod = float(rng.uniform(0, 5))
            # raises internally if the scan and the binding check disagree
            ok = check_mss_all_eigs(s, p, cod)
            assert ok == check_mss(s, p, cod).feasible
            checked += 1
    assert checked == 1000


# ---------------------------------------------------------------- existence of p

def test_existence_p_trivial_and_boundary():
    sat, p_wit = existence_p_condition(0.0, 2.0)
    assert sat and abs(p_wit - 1.0) < 1e-5
    sat, p_wit = existence_p_condition(0.25, 2.0)
    assert not sat and p_wit is None


def test_existence_p_near_threshold():
    sat, p_wit = existence_p_condition(0.24, 2.0)
    assert sat
    assert (p_wit - 0.5) * (1.0 / p_wit - 0.5) > 0.24


def test_existence_p_rejects_bad_delta():
    with pytest.raises(ValueError):
        existence_p_condition(0.1, 1.0)


@given(delta=st.floats(1.01, 20.0), a0sq=st.floats(0.0, 2.0))
@settings(max_examples=200)
def test_existence_p_matches_closed_form(delta, a0sq):
    lhs = (1.0 - 1.0 / delta) ** 2
    assume(abs(lhs - a0sq) > 1e-9)
    sat, p_wit = existence_p_condition(a0sq, delta)
    assert sat == (lhs > a0sq)
    if sat:
        assert 0.0 < p_wit < delta
        assert (p_wit - 1.0 / delta) * (1.0 / p_wit - 1.0 / delta) > a0sq


@given(delta=st.floats(1.01, 20.0), p=st.floats(0.01, 10.0))
def test_existence_product_reciprocal_symmetry_and_peak(delta, p):
    assume(p < delta and 1.0 / p < delta)

    def f(q):
        return (q - 1.0 / delta) * (1.0 / q - 1.0 / delta)

    assert np.isclose(f(p), f(1.0 / p), rtol=1e-10, atol=1e-12)
    assert f(p) <= (1.0 - 1.0 / delta) ** 2 + 1e-12


# ---------------------------------------------------------------- critical eigenvalues

def test_critical_eigenvalues_near_unity_rate():
    lo, hi = critical_eigenvalues(DynamicsParams(a=1.001, delta=2.0, g=0.01))
    assert np.isclose(lo, 0.1, rtol=1e-12)
    assert hi > lo


def test_critical_eigenvalues_hand_values():
    lo, hi = critical_eigenvalues(DynamicsParams(a=1.05, delta=2.0, g=0.001))
    assert np.isclose(lo, 50.0, rtol=1e-12)
    assert np.isclose(hi, 1050.0, rtol=1e-12)


@given(p=params_strategy)
def test_critical_window_width_and_boundary(p):
    lo, hi = critical_eigenvalues(p)
    width = (2.0 / p.g) * (1.0 - 1.0 / p.delta)
    assert np.isclose(hi - lo, width, rtol=1e-12)
    lhs = (1.0 - 1.0 / p.delta) ** 2
    # both window edges sit exactly on the zero-dispersion threshold
    assert np.isclose(alpha0_sq(lo, p, 0.0, 0.0), lhs, rtol=1e-9, atol=1e-12)
    assert np.isclose(alpha0_sq(hi, p, 0.0, 0.0), lhs, rtol=1e-9, atol=1e-12)


# ---------------------------------------------------------------- optimal gain

def test_optimal_gain_complete_graph_no_dispersion():
    g_star, rho = optimal_gain(extremes(4.0, 4.0, 0.0), 1.05, 2.0, 0.0)
    assert np.isclose(g_star, 0.55 / 4.0, rtol=1e-12)
    assert rho == 1.0


def test_optimal_gain_hand_value():
    g_star, rho = optimal_gain(extremes(1.0, 3.0, 0.0), 1.05, 2.0, 0.0)
    assert np.isclose(g_star, 2.0 * 0.55 / 4.0, rtol=1e-12)
    assert rho == 1.0


def test_optimal_gain_small_spread_branch():
    # lambdaN below lambda2 + 2 cod tau: the dispersion term dominates and
    # g* reduces to a0 / (lambda2 + 2 cod tau)
    g_star, _ = optimal_gain(extremes(2.0, 3.0, 1.0), 1.05, 2.0, 2.0)
    assert np.isclose(g_star, 0.55 / 6.0, rtol=1e-12)


def test_optimal_gain_requires_positive_a0():
    with pytest.raises(ValueError):
        optimal_gain(extremes(1.0, 2.0), 0.4, 2.0, 0.0)


@given(
    lam2=st.floats(0.2, 20.0),
    gap=st.floats(0.0, 30.0),
    tau=st.floats(0.0, 1.0),
    cod=st.floats(0.0, 5.0),
    a=st.floats(1.001, 1.5),
    delta=st.floats(1.5, 8.0),
)
@settings(max_examples=60)
def test_optimal_gain_minimizes_worst_mode_gain(lam2, gap, tau, cod, a, delta):
    # g* equalizes the two extreme modes in the minimax sense: no gain on a
    # fine grid achieves a smaller worst-case alpha0_sq
    s = extremes(lam2, lam2 + gap, tau)
    g_star, _ = optimal_gain(s, a, delta, cod)
    p_star = DynamicsParams(a=a, delta=delta, g=g_star)

    def worst(g):
        p = DynamicsParams(a=a, delta=delta, g=g)
        return max(
            alpha0_sq(s.lambda2, p, cod, tau), alpha0_sq(s.lambdaN, p, cod, tau)
        )

    at_star = worst(g_star)
    for g in np.linspace(0.25 * g_star, 4.0 * g_star, 400):
        assert worst(float(g)) >= at_star - 1e-9 * max(at_star, 1.0)


def test_margin_maximizer_differs_from_minimax_gain():
    # With dispersion present the minimax gain g* does not maximize rho_SM:
    # the margin prefers a weaker coupling whose binding mode sits at the
    # per-mode optimum a0 - lam*g = lhs/a0.  Documented counterexample.
    # (rho at g* is convention-dependent there, since g* balances the two
    # extremes exactly; both readings fall well short of the true peak.)
    a, delta, cod = 1.05, 2.0, 1.0
    s = extremes(1.0, 3.0, 1.0)
    a0, lhs = 0.55, 0.25
    g_star, rho_at_star = optimal_gain(s, a, delta, cod)
    g_mode = (a0 * a0 - lhs) / (a0 * s.lambda2)

    def rho(g):
        r = check_mss(s, DynamicsParams(a=a, delta=delta, g=g), cod)
        return -np.inf if r.rho_SM is None else r.rho_SM

    grid = np.linspace(1e-4, 0.5, 20001)
    rhos = np.array([rho(float(g)) for g in grid])
    best = grid[int(np.argmax(rhos))]
    assert rho(g_mode) > max(rho_at_star, rho(g_star)) + 0.1
    assert abs(best - g_mode) <= grid[1] - grid[0]


def test_margin_maximizer_median_rule():
    # the rho_SM maximizer is the median of the two per-mode optima and the
    # saddle gain; checked against a dense grid for several dispersions
    a, delta = 1.05, 2.0
    a0, lhs = 0.55, 0.25
    for lam2, lamN, cod in [(1.0, 3.0, 1.0), (2.0, 9.0, 0.5), (1.0, 14.0, 3.0)]:
        s = extremes(lam2, lamN, 1.0)
        g_e, _ = saddle_gain(s, a, delta, cod)
        cands = sorted(
            [
                (a0 * a0 - lhs) / (a0 * lamN),
                g_e,
                (a0 * a0 - lhs) / (a0 * lam2),
            ]
        )
        g_med = cands[1]
        grid = np.linspace(1e-4, 0.6, 30001)
        rhos = []
        for g in grid:
            r = check_mss(s, DynamicsParams(a=a, delta=delta, g=float(g)), cod)
            rhos.append(-np.inf if r.rho_SM is None else r.rho_SM)
        best = grid[int(np.argmax(rhos))]
        assert abs(best - g_med) <= 2.0 * (grid[1] - grid[0])


# ---------------------------------------------------------------- saddle gain

def test_saddle_gain_matches_optimal_when_spread_dominates():
    s = extremes(1.0, 3.0, 0.0)
    g_e, alpha_common = saddle_gain(s, 1.05, 2.0, 0.0)
    g_star, _ = optimal_gain(s, 1.05, 2.0, 0.0)
    assert np.isclose(g_e, 0.275, rtol=1e-12)
    assert np.isclose(g_e, g_star, rtol=1e-12)
    p = DynamicsParams(1.05, 2.0, g_e)
    assert np.isclose(alpha_common, alpha0_sq(1.0, p, 0.0, 0.0), rtol=1e-10)


def test_saddle_gain_rejects_equal_extremes():
    with pytest.raises(ValueError):
        saddle_gain(extremes(2.0, 2.0), 1.05, 2.0, 0.0)


@given(
    lam2=st.floats(0.2, 20.0),
    gap=st.floats(1e-3, 30.0),
    tau=st.floats(0.0, 1.0),
    cod=st.floats(0.0, 5.0),
    a=st.floats(1.001, 1.5),
    delta=st.floats(1.5, 8.0),
)
def test_saddle_gain_equalizes_both_extremes(lam2, gap, tau, cod, a, delta):
    s = extremes(lam2, lam2 + gap, tau)
    g_e, alpha_common = saddle_gain(s, a, delta, cod)
    assume(g_e > 0)
    p = DynamicsParams(a=a, delta=delta, g=g_e)
    lo = alpha0_sq(s.lambda2, p, cod, tau)
    hi = alpha0_sq(s.lambdaN, p, cod, tau)
    assert np.isclose(lo, hi, rtol=1e-10, atol=1e-13)
    assert np.isclose(alpha_common, lo, rtol=1e-9, atol=1e-12)
    if s.lambdaN >= s.lambda2 + 2.0 * cod * tau:
        g_star, _ = optimal_gain(s, a, delta, cod)
        assert np.isclose(g_e, g_star, rtol=1e-12)


# ---------------------------------------------------------------- monotonicity

@given(
    lam2=st.floats(0.5, 20.0),
    gap=st.floats(0.0, 20.0),
    tau=st.floats(0.0, 1.0),
    cod=st.floats(0.0, 4.0),
    dcod=st.floats(0.0, 2.0),
    p=params_strategy,
)
def test_margin_never_improves_with_dispersion(lam2, gap, tau, cod, dcod, p):
    s = extremes(lam2, lam2 + gap, tau)
    r1 = check_mss(s, p, cod)
    r2 = check_mss(s, p, cod + dcod)
    assume(r1.lambda_sup == r2.lambda_sup)
    if r1.rho_SM is not None and r2.rho_SM is not None:
        assert r2.rho_SM <= r1.rho_SM + 1e-12


@given(
    lam2=st.floats(0.5, 20.0),
    gap=st.floats(0.0, 20.0),
    tau=st.floats(0.0, 1.0),
    dtau=st.floats(0.0, 1.0),
    cod=st.floats(0.0, 4.0),
    p=params_strategy,
)
def test_margin_never_improves_with_tau(lam2, gap, tau, dtau, cod, p):
    assume(tau + dtau <= 1.0)
    s1 = extremes(lam2, lam2 + gap, tau)
    s2 = extremes(lam2, lam2 + gap, tau + dtau)
    r1 = check_mss(s1, p, cod)
    r2 = check_mss(s2, p, cod)
    assume(r1.lambda_sup == r2.lambda_sup)
    if r1.rho_SM is not None and r2.rho_SM is not None:
        assert r2.rho_SM <= r1.rho_SM + 1e-12


@given(
    lam2=st.floats(0.5, 20.0),
    gap=st.floats(0.0, 20.0),
    tau=st.floats(0.0, 1.0),
    cod=st.floats(0.0, 4.0),
    a=st.floats(1.001, 1.4),
    delta=st.floats(1.5, 8.0),
    ddelta=st.floats(0.0, 4.0),
    g=st.floats(1e-3, 0.5),
)
def test_weaker_nonlinearity_never_hurts_feasible_margin(
    lam2, gap, tau, cod, a, delta, ddelta, g
):
    s = extremes(lam2, lam2 + gap, tau)
    r1 = check_mss(s, DynamicsParams(a=a, delta=delta, g=g), cod)
    r2 = check_mss(s, DynamicsParams(a=a, delta=delta + ddelta, g=g), cod)
    assume(r1.feasible and r1.lambda_sup == r2.lambda_sup)
    assert r2.feasible
    assert r2.rho_SM >= r1.rho_SM - 1e-12


@given(
    lam2=st.floats(0.5, 20.0),
    gap=st.floats(0.0, 20.0),
    tau=st.floats(0.0, 1.0),
    cod=st.floats(0.0, 4.0),
    a=st.floats(1.001, 1.4),
    da=st.floats(0.0, 0.3),
    delta=st.floats(1.5, 8.0),
    g=st.floats(1e-3, 0.5),
)
def test_stronger_instability_never_helps(lam2, gap, tau, cod, a, da, delta, g):
    s = extremes(lam2, lam2 + gap, tau)
    r1 = check_mss(s, DynamicsParams(a=a, delta=delta, g=g), cod)
    r2 = check_mss(s, DynamicsParams(a=a + da, delta=delta, g=g), cod)
    assume(r1.lambda_sup == r2.lambda_sup and r1.hat_a >= 0.0)
    if r1.rho_SM is not None and r2.rho_SM is not None:
        assert r2.rho_SM <= r1.rho_SM + 1e-12


# ---------------------------------------------------------------- equivalence

@given(
    lam2=st.floats(0.2, 30.0),
    gap=st.floats(0.0, 30.0),
    tau=st.floats(0.0, 1.0),
    cod=st.floats(0.0, 5.0),
    p=params_strategy,
)
@settings(max_examples=200)
def test_feasibility_equivalent_to_existence_of_p(lam2, gap, tau, cod, p):
    s = extremes(lam2, lam2 + gap, tau)
    r = check_mss(s, p, cod)
    assume(abs(r.lhs - r.alpha0_sq) > 1e-9)
    sat, _ = existence_p_condition(r.alpha0_sq, p.delta)
    assert sat == r.feasible


# ---------------------------------------------------------------- riccati oracle

def two_node_reduced_map(p_val, a0, g, delta, sigma2):
    """Scalar version of the matrix fixed-point map for a single edge."""
    A0 = a0 - 2.0 * g
    m = p_val + p_val * p_val / (delta - p_val)
    return (A0 * A0 + 4.0 * g * g * sigma2) * m + 1e-4 + 1.0 / delta


def test_riccati_two_node_matches_bisection():
    from syncmargin.graph import Edge, NetworkGraph

    g_net = NetworkGraph(2, (Edge(0, 1, mu=1.0, sigma2=0.8),))
    params = DynamicsParams(a=1.05, delta=2.0, g=0.2)
    split = laplacian_split(g_net)
    U = orthonormal_complement(2)
    converged, P = riccati_oracle(split, U, params, cod=0.8)
    assert converged
    p_oracle = float(P[0, 0])

    def residual(p_val):
        return p_val - two_node_reduced_map(p_val, params.a0, params.g, 2.0, 0.8)

    # the stable fixed point is the first upward crossing of the residual
    lo = 1e-8
    assert residual(lo) < 0
    hi = None
    for cand in np.linspace(1e-6, 2.0 - 1e-6, 4000):
        if residual(float(cand)) > 0:
            hi = float(cand)
            break
    assert hi is not None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if residual(mid) < 0:
            lo = mid
        else:
            hi = mid
    assert abs(p_oracle - 0.5 * (lo + hi)) <= 1e-7


def test_riccati_feasible_ten_node_case():
    g_net = designate_uncertain(erdos_renyi(10, 0.6, 3), 0.6, 1.0, 4)
    s = spectral_summary(laplacian_split(g_net))
    g_star, rho = optimal_gain(s, 1.05, 2.0, 1.0)
    assert rho is not None and rho >= 0.05
    params = DynamicsParams(a=1.05, delta=2.0, g=g_star)
    converged, P = riccati_oracle(
        laplacian_split(g_net), orthonormal_complement(10), params, cod=1.0
    )
    assert converged
    w = np.linalg.eigvalsh(P)
    assert w.min() > 0
    assert np.linalg.eigvalsh(2.0 * np.eye(9) - P).min() > 0


def test_riccati_diverges_when_uncoupled_and_unstable():
    # g so small the coupling cannot remove the a0 > 1 - 1/delta excess
    g_net = erdos_renyi(8, 0.7, 1)
    params = DynamicsParams(a=1.3, delta=2.0, g=1e-8)
    assert params.a0 > 1.0 - 1.0 / 2.0
    converged, P = riccati_oracle(
        laplacian_split(g_net), orthonormal_complement(8), params, cod=0.0
    )
    assert not converged and P is None


def test_riccati_rejects_oversized_and_mismatched_input():
    big = erdos_renyi(31, 0.5, 0)
    with pytest.raises(ValueError):
        riccati_oracle(
            laplacian_split(big), orthonormal_complement(31),
            DynamicsParams(1.05, 2.0, 0.01), 0.0,
        )
    small = erdos_renyi(6, 0.8, 0)
    with pytest.raises(ValueError):
        riccati_oracle(
            laplacian_split(small), orthonormal_complement(7),
            DynamicsParams(1.05, 2.0, 0.01), 0.0,
        )


def test_riccati_scalar_feasibility_implies_matrix_convergence():
    # whenever the scalar margin clearly passes, the matrix fixed point
    # must settle too (it certifies the same contraction)
    rng = np.random.default_rng(77)
    done = 0
    for seed in range(200):
        n = int(rng.integers(5, 16))
        g_net = designate_uncertain(
            erdos_renyi(n, 0.55, seed), float(rng.uniform(0, 1)),
            float(rng.uniform(0, 2.5)), seed + 1,
        )
        s = spectral_summary(laplacian_split(g_net))
        a = float(rng.uniform(1.001, 1.3))
        delta = float(rng.uniform(1.6, 6.0))
        cod = float(rng.uniform(0, 2.5))
        g_star, rho = optimal_gain(s, a, delta, cod)
        if rho is None or rho < 0.05:
            continue
        params = DynamicsParams(a=a, delta=delta, g=g_star)
        converged, P = riccati_oracle(
            laplacian_split(g_net), orthonormal_complement(n), params, cod
        )
        assert converged, f"seed {seed}: rho={rho:.3f} but matrix oracle failed"
        assert np.linalg.eigvalsh(P).min() > 0
        done += 1
        if done == 25:
            break
    assert done == 25
