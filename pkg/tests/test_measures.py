import math

import mpmath as mp
import pytest
from scipy.integrate import quad

from epidual.logdomain import NEG_INF
from epidual.measures import (
    VolumePair,
    delta,
    integrate_line,
    log_kappa,
    log_s_j_n,
    s_j_n,
    symmetrization_gap,
    vol_mu,
    vol_nu,
    vol_nu_direct,
    volume_pair,
)
from epidual.profile import (
    INF,
    ConstantTail,
    ConvexProfile,
    LineConvexFunction,
    LinearTail,
    RadiusFunction,
    scale,
    to_radius,
)

ZERO = ConvexProfile(((0.0, 0.0),), 0.0)
ORIGIN = ConvexProfile(((0.0, 0.0),), INF)
INDICATOR = ConvexProfile(((0.0, 0.0), (1.0, 0.0)), INF)

PROFILES = [
    ConvexProfile(((0.0, 0.0), (0.5, 0.25), (2.0, 3.0)), INF),
    ConvexProfile(((0.0, 0.0), (0.5, 0.0), (1.0, 0.75), (4.0, 8.0)), 5.0),
    ConvexProfile(((0.0, 0.0), (2.0, 1.0)), 0.5),
    ConvexProfile(((0.0, 0.0), (0.25, 1.0), (1.5, 9.0)), 16.0),
]


def oracle_mu(rho, n):
    zs = [z for z, _ in rho.breakpoints]
    total = 0.0
    for z0, z1 in zip(zs, zs[1:]):
        val, _ = quad(
            lambda z: rho.evaluate(z) ** n * math.exp(-z), z0, z1,
            epsabs=1e-14, epsrel=1e-13,
        )
        total += val
    tail, _ = quad(
        lambda z: rho.evaluate(z) ** n * math.exp(-z), zs[-1], math.inf,
        epsabs=1e-14, epsrel=1e-13,
    )
    return total + tail


def oracle_nu_direct(rho, n):
    knots = [mp.mpf(z) for z, _ in rho.breakpoints]
    if knots[0] != 0:
        knots.insert(0, mp.mpf(0))

    def f(z):
        x = mp.mpf(rho.evaluate(float(z)))
        if x <= 0 or z <= 0:
            return mp.mpf(0)
        return x ** n * mp.e ** (-1 / z - (n + 2) * mp.log(z))

    with mp.workdps(30):
        return mp.quad(f, knots + [mp.inf])


def test_log_kappa_small_dimensions():
    assert log_kappa(1) == pytest.approx(math.log(2.0), abs=1e-15)
    assert log_kappa(2) == pytest.approx(math.log(math.pi), abs=1e-15)
    assert log_kappa(3) == pytest.approx(math.log(4.0 * math.pi / 3.0), abs=1e-14)
    assert log_kappa(4) == pytest.approx(math.log(math.pi ** 2 / 2.0), abs=1e-14)


@pytest.mark.parametrize("n", [1, 3, 10, 50])
def test_vol_mu_of_indicator(n):
    assert vol_mu(to_radius(INDICATOR), n) == pytest.approx(0.0, abs=1e-13)


@pytest.mark.parametrize("n", [1, 3, 10, 50])
@pytest.mark.parametrize("a", [0.5, 2.0])
def test_vol_mu_of_linear(n, a):
    # psi = a r has radius z / a, so mu = n! / a^n
    p = ConvexProfile(((0.0, 0.0),), a)
    expect = math.lgamma(n + 1) - n * math.log(a)
    assert vol_mu(to_radius(p), n) == pytest.approx(expect, rel=1e-13, abs=1e-13)


def test_vol_mu_of_unit_tent():
    rho = RadiusFunction(((0.0, 0.0), (1.0, 1.0)), ConstantTail(1.0))
    assert vol_mu(rho, 1) == pytest.approx(math.log(1.0 - math.exp(-1.0)), abs=1e-13)


@pytest.mark.parametrize("n", [1, 2, 5])
def test_vol_mu_matches_quadrature(n):
    for p in PROFILES:
        rho = to_radius(p)
        expect = math.log(oracle_mu(rho, n))
        assert vol_mu(rho, n) == pytest.approx(expect, abs=2e-11), p


def test_vol_mu_degenerate():
    assert vol_mu(to_radius(ZERO), 3) == INF
    assert vol_mu(to_radius(ORIGIN), 3) == NEG_INF


def test_vol_mu_rejects_bad_dimension():
    rho = to_radius(INDICATOR)
    for n in (0, -1, 1.5, True):
        with pytest.raises(ValueError):
            vol_mu(rho, n)


@pytest.mark.parametrize("n", [1, 2, 5])
def test_vol_nu_direct_matches_quadrature(n):
    for p in PROFILES:
        rho = to_radius(p)
        expect = float(mp.log(oracle_nu_direct(rho, n)))
        assert vol_nu_direct(rho, n) == pytest.approx(expect, abs=5e-11), p


@pytest.mark.parametrize("n", [1, 2, 5, 20, 50])
def test_substitution_identity(n):
    # nu computed raw equals mu of the inverted radius
    for p in PROFILES:
        rho = to_radius(p)
        assert vol_nu_direct(rho, n) == pytest.approx(
            vol_nu(rho, n), abs=1e-12
        ), p


def test_volume_pair_invariant():
    assert volume_pair(ZERO, 2) == VolumePair(INF, INF)
    assert volume_pair(ORIGIN, 2) == VolumePair(NEG_INF, NEG_INF)
    with pytest.raises(ValueError):
        VolumePair(0.0, INF)
    with pytest.raises(ValueError):
        VolumePair(NEG_INF, 1.0)


@pytest.mark.parametrize("n", [1, 4, 25])
def test_ratio_of_indicator_is_factorial(n):
    assert log_s_j_n(INDICATOR, n) == pytest.approx(math.lgamma(n + 1), abs=1e-12)


@pytest.mark.parametrize("n", [1, 4, 25])
def test_ratio_of_linear_is_inverse_factorial(n):
    p = ConvexProfile(((0.0, 0.0),), 3.0)
    assert log_s_j_n(p, n) == pytest.approx(-math.lgamma(n + 1), abs=1e-12)


def test_ratio_convention_on_degenerates():
    assert log_s_j_n(ZERO, 3) == 0.0
    assert log_s_j_n(ORIGIN, 3) == 0.0
    assert s_j_n(ZERO, 3) == 1.0


def test_ratio_of_fixed_point_tent():
    # radius min(z, 1) is invariant under inversion, so the ratio is 1
    p = ConvexProfile(((0.0, 0.0), (1.0, 1.0)), INF)
    assert log_s_j_n(p, 1) == 0.0


@pytest.mark.parametrize("a", [0.1, 7.0])
@pytest.mark.parametrize("n", [1, 3, 8])
def test_ratio_scaling_invariance(a, n):
    for p in PROFILES:
        base = log_s_j_n(p, n)
        assert log_s_j_n(scale(p, a), n) == pytest.approx(base, abs=1e-10), p


@pytest.mark.parametrize("a", [0.25, 5.0])
def test_vol_mu_homogeneity(a):
    for p in PROFILES:
        n = 4
        base = vol_mu(to_radius(p), n)
        scaled = vol_mu(to_radius(scale(p, a)), n)
        assert scaled == pytest.approx(base - n * math.log(a), rel=1e-12, abs=1e-11)


def test_vol_mu_monotone_in_profile():
    small = ConvexProfile(((0.0, 0.0), (1.0, 1.0)), 4.0)
    big = ConvexProfile(((0.0, 0.0), (0.5, 1.0)), 8.0)  # larger psi everywhere
    for n in (1, 3, 9):
        assert vol_mu(to_radius(small), n) >= vol_mu(to_radius(big), n)


def test_delta_of_linear_profile():
    # psi = 2r: mu = n!/2^n, nu = 2^(-n), deficit is 2^(-n) (1 - lambda n!)
    p = ConvexProfile(((0.0, 0.0),), 2.0)
    sign, mag = delta(p, 2, -math.lgamma(3))
    assert sign == 0 and mag == NEG_INF
    sign, mag = delta(p, 2, 0.0)  # lambda = 1
    assert sign == -1
    assert mag == pytest.approx(math.log(0.25), abs=1e-12)
    sign, mag = delta(p, 2, math.log(0.1))
    assert sign == 1
    assert mag == pytest.approx(math.log(0.2), abs=1e-12)


def test_delta_degenerate_profiles():
    assert delta(ORIGIN, 3, 0.0) == (0, NEG_INF)
    with pytest.raises(ValueError):
        delta(ZERO, 3, 0.0)


def test_integrate_line_two_sided_exponential():
    lin = ConvexProfile(((0.0, 0.0),), 1.0)
    f = LineConvexFunction(lin, lin)
    assert integrate_line(f) == pytest.approx(math.log(2.0), abs=1e-13)
    steeper = LineConvexFunction(ConvexProfile(((0.0, 0.0),), 2.0), lin)
    assert integrate_line(steeper) == pytest.approx(math.log(1.5), abs=1e-13)


def test_symmetrization_preserves_integral():
    f = LineConvexFunction(INDICATOR, ConvexProfile(((0.0, 0.0),), 1.0))
    assert symmetrization_gap(f) == pytest.approx(0.0, abs=1e-11)
    g = LineConvexFunction(PROFILES[0], PROFILES[1])
    assert symmetrization_gap(g) == pytest.approx(0.0, abs=1e-11)
