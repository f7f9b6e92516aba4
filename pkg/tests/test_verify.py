import math

import numpy as np
import pytest

from epidual.extremal import solve_lambda
from epidual.profile import ConstantTail, LinearTail, ConvexProfile, RadiusFunction, to_radius
from epidual.verify import (
    DEFAULT_CASES,
    DEFAULT_SEEDS,
    SUITE_NAMES,
    ProfileSampler,
    SuiteReport,
    UnknownSuite,
    _brute_force_scan,
    _cap_radius,
    _profile_gap,
    _tent_log_ratios,
    brute_force_lambda,
    run_suite,
)


def test_sampler_is_deterministic():
    a = ProfileSampler(seed=5)
    b = ProfileSampler(seed=5)
    sa, sb = a.stream(), b.stream()
    for _ in range(50):
        assert next(sa) == next(sb)


def test_sampler_seed_changes_stream():
    first = next(ProfileSampler(seed=1).stream())
    second = next(ProfileSampler(seed=2).stream())
    assert first != second


def test_sampler_profiles_are_canonical_and_bounded():
    stream = ProfileSampler(seed=9, max_segments=4).stream()
    for _ in range(200):
        p = next(stream)
        assert p.breakpoints[0] == (0.0, 0.0)
        assert len(p.breakpoints) <= 5


def test_sampler_indicator_fraction_near_quarter():
    stream = ProfileSampler(seed=12).stream()
    hits = sum(math.isinf(next(stream).tail_slope) for _ in range(2000))
    assert 0.2 < hits / 2000 < 0.3


def test_sampler_rejects_bad_config():
    with pytest.raises(ValueError):
        ProfileSampler(seed=0, max_segments=0)
    with pytest.raises(ValueError):
        ProfileSampler(seed=0, slope_scale=0.0)
    with pytest.raises(ValueError):
        ProfileSampler(seed=0, radius_scale=math.inf)


def test_unknown_suite_lists_names():
    with pytest.raises(UnknownSuite, match="involution"):
        run_suite("no-such-suite")
    with pytest.raises(ValueError):
        run_suite("involution", cases=0)


def test_default_tables_cover_all_suites():
    assert set(DEFAULT_SEEDS) == set(SUITE_NAMES)
    assert set(DEFAULT_CASES) == set(SUITE_NAMES)
    assert all(c >= 99 for c in DEFAULT_CASES.values())


@pytest.mark.parametrize("name", SUITE_NAMES)
def test_suite_passes_on_sampled_inputs(name):
    cases = min(100, DEFAULT_CASES[name])
    report = run_suite(name, cases=cases)
    assert report.passed, report.failures[:3]
    assert report.cases == cases
    assert report.suite == name


def test_suite_runs_are_reproducible():
    first = run_suite("factorization", ProfileSampler(seed=77), cases=40)
    second = run_suite("factorization", ProfileSampler(seed=77), cases=40)
    assert first == second


def test_involution_suite_full_run():
    report = run_suite("involution")
    assert report.passed
    assert report.cases == 1000
    assert report.worst_residual <= 1e-9


def test_delta_suite_full_run():
    report = run_suite("delta-nonpositive")
    assert report.passed
    assert report.worst_residual <= 1e-9


def test_steiner_commute_suite_full_run():
    report = run_suite("steiner-commute-1d")
    assert report.passed
    assert report.cases == 500
    assert report.worst_residual <= 1e-9


def test_report_round_trips_to_dict():
    report = SuiteReport("involution", 3, ((1, "went sideways"),), 0.25)
    doc = report.to_dict()
    assert doc["suite"] == "involution"
    assert doc["passed"] is False
    assert doc["failures"] == [{"case": 1, "problem": "went sideways"}]
    assert SuiteReport("x", 1, (), 0.0).passed


# ---------------------------------------------------------------------------
# helpers


def test_profile_gap_detects_differences():
    p = ConvexProfile(((0.0, 0.0), (1.0, 2.0)), 4.0)
    q = ConvexProfile(((0.0, 0.0), (1.0, 2.5)), 4.0)
    assert _profile_gap(p, p) == 0.0
    assert _profile_gap(p, q) == pytest.approx(0.5, abs=1e-12)


def test_profile_gap_tolerates_ulp_indicator_boundary():
    p = ConvexProfile(((0.0, 0.0), (1.0, 1.0)), math.inf)
    q = ConvexProfile(((0.0, 0.0), (1.0 + 1e-15, 1.0)), math.inf)
    r = ConvexProfile(((0.0, 0.0), (1.5, 1.5)), math.inf)
    assert _profile_gap(p, q) < 1e-9
    assert _profile_gap(p, r) == math.inf


def test_cap_radius_clips_where_needed():
    rho = to_radius(ConvexProfile(((0.0, 0.0), (1.0, 1.0), (2.0, 4.0)), 5.0))
    capped = _cap_radius(rho, 1.5)
    assert isinstance(capped.tail, ConstantTail)
    zs = np.linspace(0.0, 20.0, 300)
    for z in zs:
        want = min(rho.evaluate(float(z)), 1.5)
        assert capped.evaluate(float(z)) == pytest.approx(want, abs=1e-12)


def test_cap_radius_above_range_is_identity_or_tail_clip():
    flat = RadiusFunction(((0.0, 1.0),), ConstantTail(1.0))
    assert _cap_radius(flat, 3.0) == flat
    grows = RadiusFunction(((0.0, 1.0),), LinearTail(2.0))
    capped = _cap_radius(grows, 5.0)
    assert capped.evaluate(10.0) == pytest.approx(5.0, abs=1e-12)
    assert capped.evaluate(1.0) == pytest.approx(3.0, abs=1e-12)


# ---------------------------------------------------------------------------
# brute-force oracle


def test_tent_ratio_at_b_zero_is_inverse_factorial():
    for n in (1, 2, 3):
        for a in (0.1, 1.0, 3.0):
            got = _tent_log_ratios(n, a, np.array([0.0]))[0]
            assert got == pytest.approx(-math.lgamma(n + 1), abs=1e-10)


def test_brute_force_matches_solver_on_coarse_grid():
    est = solve_lambda(1)
    val = brute_force_lambda(1, 400, 80, a_range=(0.05, 2.0))
    assert abs(math.expm1(val - est.log_lambda)) < 2e-3


def test_brute_force_maximum_sits_at_infinite_b():
    _, a_best, b_best = _brute_force_scan(1, 300, 60, (0.1, 1.0), 1e4)
    assert math.isinf(b_best)
    assert 0.2 < a_best < 0.5


def test_brute_force_rejects_bad_grids():
    with pytest.raises(ValueError):
        brute_force_lambda(1, 1, 50)
    with pytest.raises(ValueError):
        brute_force_lambda(1, 50, 50, a_range=(2.0, 1.0))
