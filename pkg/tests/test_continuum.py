import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sidonforge.continuum import (
    SIGMA_UPPER,
    DiscretizationParams,
    ProbModel,
    StepFunction,
    autoconvolution,
    certified_ratio,
    chernoff_bound,
    discretize,
    inverse_sqrt_profile,
    make_prob_model,
    monte_carlo_check,
    optimize_sigma,
    poly_ratio,
    read_profile_csv,
    sample_random_set,
    window_integral_check,
    write_profile_csv,
)
from sidonforge.errors import CertificateError, ProbabilityOverflow, WindowTooLarge, ZeroFunction

coeff_lists = st.lists(st.floats(0, 10, allow_nan=False), min_size=1, max_size=40).filter(lambda a: sum(a) > 1e-3)


def test_step_function_invariants():
    with pytest.raises(ValueError):
        StepFunction([])
    with pytest.raises(ValueError):
        StepFunction([1.0, -0.5])


def test_autoconvolution_examples():
    tent = autoconvolution(StepFunction([1.0]))
    assert tent.values.tolist() == [0.0, 1.0, 0.0] and tent.argsup == 1.0
    ac = autoconvolution(StepFunction([1.0, 1.0]))
    assert np.allclose(ac.values, [0, 0.5, 1, 0.5, 0]) and ac.sup == 1.0
    assert ac(0.75) == pytest.approx(0.75)


@settings(max_examples=60, deadline=None)
@given(coeff_lists)
def test_autoconvolution_against_double_loop(a):
    N = len(a)
    ac = autoconvolution(StepFunction(a))
    for j in range(1, 2 * N):
        direct = sum(a[i] * a[j - 1 - i] for i in range(N) if 0 <= j - 1 - i < N) / N
        assert ac.values[j] == pytest.approx(direct, rel=1e-9, abs=1e-9)
    # the polygon integrates to (int f)^2 by the trapezoid rule
    assert np.trapezoid(ac.values, ac.x) == pytest.approx((sum(a) / N) ** 2, rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(coeff_lists, st.floats(1e-3, 1e3))
def test_ratio_scale_invariant_and_bounded(a, c):
    f = StepFunction(a)
    r = poly_ratio(f)
    assert r == pytest.approx(poly_ratio(f.scaled(c)), rel=1e-9)
    assert r == pytest.approx(certified_ratio(f), rel=1e-9)
    assert r <= SIGMA_UPPER + 1e-4


def test_ratio_examples():
    assert poly_ratio(StepFunction([1.0])) == 1.0
    with pytest.raises(ZeroFunction):
        poly_ratio(StepFunction([0.0, 0.0]))
    assert abs(poly_ratio(inverse_sqrt_profile(10_000)) - 2 / math.sqrt(math.pi)) < 0.01 * 1.1284


def test_cell_average_profile_is_flat_at_one():
    # cell averages of 1/sqrt(pi x) pin the first breakpoint and give ratio exactly 1
    N = 64
    edges = np.sqrt(np.arange(N + 1) / N)
    a = N * 2 * np.diff(edges) / math.sqrt(math.pi)
    assert poly_ratio(StepFunction(a)) == pytest.approx(1.0, abs=1e-9)


def test_optimizer_ascent_and_certificate():
    assert optimize_sigma(1).ratio == 1.0
    res = optimize_sigma(64, budget=40, seed=1)
    assert res.ratio >= res.start_ratio
    assert res.ratio <= SIGMA_UPPER + 1e-4
    assert res.ratio == pytest.approx(poly_ratio(res.step), rel=1e-12)
    assert window_integral_check(res.step) <= 1e-9
    again = optimize_sigma(64, budget=40, seed=1)
    assert again.ratio == res.ratio


def test_window_estimate_on_start_profile():
    assert window_integral_check(inverse_sqrt_profile(200)) <= 1e-9


def test_discretize_constant():
    params = DiscretizationParams(n=1000, eps=0.2)
    d = discretize(StepFunction([1.0]), params)
    L = params.L
    assert d.coeffs.size == 1001
    assert np.allclose(d.coeffs[L : 1000 - L + 1], 1.0)
    assert d.coeffs[0] < 1 and d.coeffs[-1] < 1


def test_discretize_rescales_when_peak_exceeds_one():
    d = discretize(StepFunction([3.0]), DiscretizationParams(n=1000, eps=0.2))
    assert d.scale == pytest.approx(1 / 3) and d.integral == pytest.approx(1.0)


def test_discretize_inverse_sqrt_checks():
    d = discretize(inverse_sqrt_profile(4096), DiscretizationParams(n=10_000, eps=0.2))
    assert d.ok, d.checks
    assert set(d.checks) >= {"cap", "mass", "convolution", "edge_mass"}


def test_params_validation():
    assert DiscretizationParams(1000, 0.2).L == math.ceil(1000 ** (1 / 3) / 0.64)
    with pytest.raises(WindowTooLarge):
        DiscretizationParams(4, 0.9)
    with pytest.raises(ValueError):
        DiscretizationParams(1000, 1.0)


def test_prob_model():
    n = 1000
    m = make_prob_model(np.ones(n + 1), n, 1 / 3, 1.0)
    assert np.allclose(m.probs, n ** (2 / 3) / (n + 1))
    assert m.probs.sum() == pytest.approx(n ** (2 / 3))
    with pytest.raises(ProbabilityOverflow):
        make_prob_model(np.eye(1, n + 1)[0], n, 1 / 3, 1.0)
    d = discretize(inverse_sqrt_profile(4096), DiscretizationParams(n=10_000, eps=0.3))
    m = make_prob_model(d.coeffs, 10_000, 1 / 3, d.integral)
    assert m.target_sum / 10_000 ** (2 / 3) == pytest.approx(1.1284, rel=0.01)


def test_sampling_edge_cases_and_determinism():
    assert len(sample_random_set(ProbModel(np.zeros(11), 0.0))) == 0
    assert list(sample_random_set(ProbModel(np.ones(11), 11.0))) == list(range(11))
    m = ProbModel(np.full(501, 0.1), 50.1, seed=9)
    assert sample_random_set(m).elements == sample_random_set(m).elements


def test_chernoff():
    assert chernoff_bound(0, 0.5) == 2
    assert chernoff_bound(100, 1) == pytest.approx(2 * math.exp(-25))
    assert chernoff_bound(100, 4) == pytest.approx(2 * math.exp(-200))


def test_monte_carlo_reports():
    zero = monte_carlo_check(ProbModel(np.zeros(101), 10.0), 3, 0.3)
    assert zero.success_rate == 0 and zero.max_r_stats["max"] == 0
    d = discretize(inverse_sqrt_profile(4096), DiscretizationParams(n=5000, eps=0.3))
    m = make_prob_model(d.coeffs, 5000, 1 / 3, d.integral, seed=3)
    rep = monte_carlo_check(m, 40, 0.3)
    assert rep.to_json() == monte_carlo_check(m, 40, 0.3).to_json()
    sd = math.sqrt(float((m.probs * (1 - m.probs)).sum()))
    assert abs(rep.size_stats["mean"] - rep.expected_size) <= 3 * sd


def test_profile_csv_round_trip(tmp_path):
    f = StepFunction(np.random.default_rng(0).random(17))
    write_profile_csv(f, tmp_path / "f.csv")
    g = read_profile_csv(tmp_path / "f.csv")
    assert np.array_equal(f.coeffs, g.coeffs)
    (tmp_path / "bad.csv").write_text("N=3\n1.0\n")
    with pytest.raises(CertificateError):
        read_profile_csv(tmp_path / "bad.csv")
