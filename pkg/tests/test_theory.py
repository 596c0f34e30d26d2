import math
from fractions import Fraction

import pytest

from chordalsub.theory import (
    BoundaryAlphaError,
    binom_log_pmf,
    dense_params,
    g_eval,
    g_prime,
    gamma_c,
    gamma_solve,
    k_alpha,
    k_minus,
    k_plus,
    log_recip,
    sparse_prediction,
    theorem2_limit,
)

P_GRID = [round(0.05 * i, 2) for i in range(1, 20)]


# ---------------------------------------------------------------------------
# g and its root
# ---------------------------------------------------------------------------


def test_g_at_2p_equals_log_recip_p():
    for p in P_GRID:
        if 2 * p < 2:
            assert g_eval(2 * p, p) == pytest.approx(math.log(1 / p), abs=1e-12)


def test_g_at_one():
    for p in P_GRID:
        assert g_eval(1.0, p) == pytest.approx(math.log(4 * (1 - p)), abs=1e-12)
    assert g_eval(1.0, 0.5) == pytest.approx(math.log(2), abs=1e-12)


def test_g_near_two_approaches_negative_log():
    for p in (0.2, 0.5, 0.8):
        assert g_eval(2 - 1e-12, p) == pytest.approx(-math.log(1 / p), abs=1e-6)


def test_bracket_sign_property():
    for p in P_GRID:
        lo = max(1.0, 2.0 * p) + 1e-9
        assert g_eval(lo, p) > 0.0 > g_eval(2.0 - 1e-9, p)


def test_g_positive_at_one_below_three_quarters():
    for p in P_GRID:
        if p < 0.75:
            assert g_eval(1.0, p) > 0.0


def test_g_prime_is_derivative():
    # finite-difference oracle for the closed-form derivative
    for p in (0.2, 0.5, 0.7):
        for gamma in (1.1, 1.5, 1.9):
            h = 1e-6
            fd = (g_eval(gamma + h, p) - g_eval(gamma - h, p)) / (2 * h)
            assert g_prime(gamma, p) == pytest.approx(fd, rel=1e-5)


def test_gamma_solve_half():
    sol = gamma_solve(0.5, 1e-12)
    assert 1.7794 <= sol.gamma <= 1.7804
    assert sol.residual <= 1e-10
    # equivalent form of the defining equation at p = 1/2
    lhs = sol.gamma * math.log(2 / sol.gamma) + (2 - sol.gamma) * math.log(2 / (2 - sol.gamma))
    assert lhs == pytest.approx(math.log(2), abs=1e-9)


def test_gamma_inside_bracket_across_grid():
    prev = None
    for p in P_GRID:
        sol = gamma_solve(p)
        assert max(1.0, 2.0 * p) < sol.gamma < 2.0
        assert abs(g_eval(sol.gamma, p)) <= 1e-10
        if prev is not None:
            # monotone in p, observed numerically on the grid
            assert sol.gamma > prev
        prev = sol.gamma


def test_log_ratio_bound_at_solution():
    # log base 1/p of 2/gamma stays below 1/2 at the solved root
    for p in P_GRID:
        gamma = gamma_solve(p).gamma
        assert log_recip(2.0 / gamma, p) < 0.5


def test_gamma_solve_rejects_bad_inputs():
    with pytest.raises(ValueError):
        gamma_solve(0.0)
    with pytest.raises(ValueError):
        gamma_solve(0.5, tol=-1)


# ---------------------------------------------------------------------------
# binomial point masses
# ---------------------------------------------------------------------------


def test_binom_log_pmf_exact_small():
    assert binom_log_pmf(4, 2, 0.5) == pytest.approx(math.log(6 / 16), abs=1e-12)
    assert binom_log_pmf(7, 0, 0.3) == pytest.approx(7 * math.log(0.7), abs=1e-12)


def test_binom_log_pmf_matches_comb_oracle():
    for k in (1, 5, 12, 30):
        for s in range(0, k + 1, max(1, k // 4)):
            for p in (0.2, 0.5, 0.9):
                exact = math.log(math.comb(k, s)) + s * math.log(p) + (k - s) * math.log(1 - p)
                assert binom_log_pmf(k, s, p) == pytest.approx(exact, rel=1e-12, abs=1e-12)


def test_binom_log_pmf_domain():
    with pytest.raises(ValueError):
        binom_log_pmf(4, 5, 0.5)
    with pytest.raises(ValueError):
        binom_log_pmf(4, -1, 0.5)


def _claim_scaling_quantity(n_log2: int, x: float, p: float = 0.5) -> float:
    """n * P[Bin(k,p)=s] at k ~ 2 log n - x loglog n, s ~ gamma log n - x loglog n."""
    n = 2.0**n_log2
    gamma = gamma_solve(p).gamma
    loglog = log_recip(math.log(n), p)
    k = round(2 * log_recip(n, p) - x * loglog)
    s = round(gamma * log_recip(n, p) - x * loglog)
    return math.log(n) + binom_log_pmf(k, s, p)


def test_point_mass_scaling_grows_for_positive_x():
    vals = [_claim_scaling_quantity(e, x=9.0) for e in (20, 40, 80)]
    assert vals[0] < vals[1] < vals[2]


def test_point_mass_scaling_decays_for_negative_x():
    vals = [_claim_scaling_quantity(e, x=-3.0) for e in (20, 40, 80)]
    assert vals[0] > vals[1] > vals[2]


# ---------------------------------------------------------------------------
# dense parameter bundle
# ---------------------------------------------------------------------------


def test_k_plus_at_1024():
    assert k_plus(1024, 0.5) == 20


def test_k_minus_raw_negative_at_desk_scale():
    assert k_minus(1024, 0.5) == -9


def test_dense_params_large_scale():
    dp = dense_params(2**40, 0.5)
    assert dp.k_plus == 80
    assert dp.s_lower is not None and dp.s_lower < dp.s_upper
    assert not dp.s_lower_degenerate
    assert dp.k_minus <= dp.k_plus
    assert dp.ell_upper == dp.s_upper * 2**40


def test_dense_params_degenerate_threshold_at_desk_scale():
    dp = dense_params(1024, 0.5)
    assert dp.s_lower_degenerate
    assert dp.s_lower is None
    assert dp.prediction_radius > 0
    assert dp.k_minus == -9


def test_dense_params_radius_positive_from_three():
    for n in (3, 10, 1000):
        assert dense_params(n, 0.5).prediction_radius > 0


# ---------------------------------------------------------------------------
# sparse limits
# ---------------------------------------------------------------------------


def test_k_alpha_examples():
    assert k_alpha(0.9) == 0
    assert theorem2_limit(0.9) == pytest.approx(1.0)
    # 0.6 sits exactly on the 3/5 boundary: the strict scan still selects
    # k=1 (the open case is flagged with a warning, not an exception)
    with pytest.warns(UserWarning, match="boundary"):
        assert k_alpha(0.6) == 1
    with pytest.warns(UserWarning, match="boundary"):
        assert theorem2_limit(0.6) == pytest.approx(1.5)
    assert theorem2_limit(0.4) == pytest.approx(2.5)


def test_k_alpha_fraction_inputs():
    assert k_alpha(Fraction(9, 10)) == 0
    assert k_alpha("0.55") == 4
    assert theorem2_limit(Fraction(9, 20)) == pytest.approx(Fraction(20, 9))


def test_boundary_alpha_flagging():
    from chordalsub.theory import is_boundary_alpha

    for k in range(4):
        assert is_boundary_alpha(Fraction(1 + k, 1 + 2 * k))
        if k >= 1:
            with pytest.warns(UserWarning, match="boundary"):
                k_alpha(Fraction(1 + k, 1 + 2 * k))
    assert not is_boundary_alpha(Fraction(11, 20))
    assert not is_boundary_alpha(0.65)
    # alpha = 1 has no qualifying k at all: hard error
    with pytest.raises(BoundaryAlphaError):
        theorem2_limit(1.0)
    with pytest.raises(BoundaryAlphaError):
        k_alpha(Fraction(1))


def test_theorem2_limit_domain():
    with pytest.raises(ValueError):
        theorem2_limit(0)
    with pytest.raises(ValueError):
        theorem2_limit(1.5)


def test_sparse_prediction_bundle():
    pred = sparse_prediction("0.65")
    assert pred.k_alpha == 1 and pred.limit == pytest.approx(1.5)
    assert not pred.boundary
    pred = sparse_prediction("0.3")
    assert pred.k_alpha is None and pred.limit == pytest.approx(10 / 3)
    with pytest.warns(UserWarning):
        pred = sparse_prediction(Fraction(3, 5))
    assert pred.boundary and pred.k_alpha == 1


# ---------------------------------------------------------------------------
# component-count series
# ---------------------------------------------------------------------------


def test_gamma_c_leading_term_limit():
    res = gamma_c(1e-6, 1e-12)
    assert res.value == pytest.approx(1.0, abs=1e-5)


def test_gamma_c_half_value():
    res = gamma_c(0.5, 1e-10)
    assert res.tail_bound <= 1e-10
    # subcritical identity: the series sums to 1 - c/2
    assert res.value == pytest.approx(0.75, abs=1e-9)
    assert res.chordal_limit == pytest.approx(0.25, abs=1e-9)


def test_gamma_c_monotone_decreasing():
    vals = [gamma_c(c, 1e-10).value for c in (0.1, 0.3, 0.5, 0.7, 0.9)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_gamma_c_domain_guard():
    with pytest.raises(ValueError):
        gamma_c(1.0)
    with pytest.raises(ValueError):
        gamma_c(0.0)
