"""Extremal tents and the dimensional constant of the volume-ratio bound.

The pointwise sign map m compares the two volume densities at height z,

    m(z) = e^(-1/z) z^(-(n+2)) - lambda e^(-z),

whose sign equals the sign of g(z) = z - 1/z - (n+2) log z - log lambda.
g has fixed critical points at ((n+2) -+ sqrt((n+2)^2 - 4)) / 2 independent
of lambda, so the three-root sign pattern (-,+,-,+) is detected exactly from
g at those two probes instead of by scanning.

Tents are the two-slope profiles T(a, b, x0): slope a up to radius x0, then
slope a + b (b = inf caps the body at x0).  Their volume ratio has the
closed form big_f in incomplete gamma functions; its b -> inf limit big_g
is maximized over a to produce the constant for each dimension.  At the
maximizer the first-order condition reads

    gamma(n+1, a) gamma(n+1, 1/a) = e^(-a - 1/a)

and the solver certifies it through two residuals that vanish at the true
stationary point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .logdomain import log_add, log_sub_signed, log_sum
from .profile import INF, ConvexProfile, RadiusFunction
from .gammafn import reg_gamma

_BISECT_RTOL = 1e-12
_RESIDUAL_TOL = 1e-8


class OneRootCase(Exception):
    """The sign map crosses zero once; no positivity island exists."""


class BracketFailure(Exception):
    """No maximizer bracket could be formed from the sign-map roots."""


class StationarityFailure(Exception):
    """The solved maximizer fails its first-order residual certificates."""


class BracketInvalid(Exception):
    """The requested asymptotic window does not contain the positivity island."""


class ZeroProfile(Exception):
    """The profile degenerates and no tent can be anchored to it."""


def _check_n(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValueError(f"dimension must be an integer >= 1, got {n!r}")


def _log_gamma_lower(s: int, x: float) -> float:
    """log of the lower incomplete gamma(s, x), unnormalized."""
    return reg_gamma(s, x).log_p + math.lgamma(s)


def _log_gamma_upper(s: int, x: float) -> float:
    return reg_gamma(s, x).log_q + math.lgamma(s)


# ---------------------------------------------------------------------------
# the sign map and its roots


def _log_gap(z: float, n: int, log_lambda: float) -> float:
    return z - 1.0 / z - (n + 2) * math.log(z) - log_lambda


def m_sign(z: float, n: int, log_lambda: float) -> int:
    """Sign of the density gap m at height z: -1, 0 or +1."""
    _check_n(n)
    if not z > 0.0 or math.isinf(z):
        raise ValueError(f"height must be finite > 0, got {z}")
    g = _log_gap(z, n, log_lambda)
    if g == 0.0:
        return 0
    return 1 if g > 0.0 else -1


def _gap_probes(n: int) -> tuple[float, float]:
    """Local max and local min abscissas of the gap, roots of z^2-(n+2)z+1."""
    d = float(n + 2)
    root = math.sqrt(d * d - 4.0)
    return 0.5 * (d - root), 0.5 * (d + root)


def _bisect(f, lo: float, hi: float) -> float:
    f_lo = f(lo)
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if hi - lo <= _BISECT_RTOL * mid:
            return mid
        if (f(mid) > 0.0) == (f_lo > 0.0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class RootTriple:
    """The three roots of the sign map for a given lambda and order.

    Construction re-samples the sign at the midpoint of each of the four
    intervals the roots cut out and demands the (-,+,-,+) pattern, so a
    triple that exists is always a genuine sign-change triple.
    """

    z1: float
    z2: float
    z3: float
    lambda_log: float
    n: int

    def __post_init__(self) -> None:
        if not 0.0 < self.z1 < self.z2 < self.z3:
            raise ValueError(
                f"roots must be positive increasing: {self.z1}, {self.z2}, {self.z3}"
            )
        checks = (
            (0.5 * self.z1, -1),
            (0.5 * (self.z1 + self.z2), 1),
            (0.5 * (self.z2 + self.z3), -1),
            (2.0 * self.z3, 1),
        )
        for z, want in checks:
            if m_sign(z, self.n, self.lambda_log) != want:
                raise ValueError(
                    f"sign pattern broke between roots at z={z} (n={self.n})"
                )


def roots_of_m(n: int, log_lambda: float) -> RootTriple:
    """Locate all three roots of the sign map, or raise OneRootCase.

    The gap rises from -inf to a local max, dips to a local min, then grows
    linearly; three roots exist exactly when the local max is positive and
    the local min negative.  Each root is bisected to relative 1e-12.
    """
    _check_n(n)
    z_lo, z_hi = _gap_probes(n)

    def g(z: float) -> float:
        return _log_gap(z, n, log_lambda)

    if g(z_lo) <= 0.0 or g(z_hi) >= 0.0:
        raise OneRootCase(
            f"sign map has a single root at n={n}, log_lambda={log_lambda}"
        )
    left = z_lo
    while g(left) >= 0.0:
        left *= 0.5
    z1 = _bisect(g, left, z_lo)
    z2 = _bisect(g, z_lo, z_hi)
    right = z_hi
    while g(right) <= 0.0:
        right *= 2.0
    z3 = _bisect(g, z_hi, right)
    return RootTriple(z1, z2, z3, log_lambda, n)


# ---------------------------------------------------------------------------
# tents


@dataclass(frozen=True)
class TentParams:
    """Two-slope tent: slope a to radius x0, slope a + b after (inf caps)."""

    a: float
    b: float
    x0: float

    def __post_init__(self) -> None:
        if not (self.a >= 0.0 and math.isfinite(self.a)):
            raise ValueError(f"tent slope a must be finite >= 0, got {self.a}")
        if math.isnan(self.b) or self.b < 0.0:
            raise ValueError(f"tent increment b must be in [0, inf], got {self.b}")
        if not (self.x0 > 0.0 and math.isfinite(self.x0)):
            raise ValueError(f"tent kink x0 must be finite > 0, got {self.x0}")


def tent_profile(t: TentParams) -> ConvexProfile:
    pts = ((0.0, 0.0), (t.x0, t.a * t.x0))
    tail = INF if math.isinf(t.b) else t.a + t.b
    return ConvexProfile(pts, tail)


def t_map(rho: RadiusFunction, roots: RootTriple) -> TentParams:
    """Tent matching rho at the sign-map roots.

    The first slope is anchored through (z1, rho(z1)); the second segment
    passes through the points at z2 and z3.  Equal radii there mean the body
    is capped (b = inf); a second slope indistinguishable from the first
    collapses to the linear tent b = 0.
    """
    if rho.is_infinite:
        raise ZeroProfile("tent undefined for the everywhere-infinite radius")
    x1 = rho.evaluate(roots.z1)
    x2 = rho.evaluate(roots.z2)
    x3 = rho.evaluate(roots.z3)
    if x1 <= 0.0:
        raise ZeroProfile(f"radius vanishes at the first root z1={roots.z1}")
    a = roots.z1 / x1
    if x3 == x2:
        return TentParams(a, INF, x2)
    slope = (roots.z3 - roots.z2) / (x3 - x2)
    if slope - a <= 1e-12 * max(1.0, a):
        return TentParams(a, 0.0, x1)
    b = slope - a
    x0 = ((a + b) * x2 - roots.z2) / b
    return TentParams(a, b, x0)


# ---------------------------------------------------------------------------
# closed-form volume ratios of tents


def big_f(a: float, b: float, n: int) -> float:
    """log of the volume ratio of the tent with slopes (a, a+b) and kink 1.

    F = [(a+b)^n N1 + a^n N2] / [(a+b)^n M1 + a^n M2] with N1 = e^(-1/a),
    N2 = sum_k C(n,k) b^k gamma(k+1, 1/a), M1 = gamma(n+1, a) and
    M2 = sum_k C(n,k) b^(n-k) Gamma(k+1, a).  A kink at x0 rescales into
    this form: the ratio of T(a, b, x0) is F(a*x0, b*x0, n).
    """
    _check_n(n)
    if not (a > 0.0 and math.isfinite(a)):
        raise ValueError(f"tent slope a must be finite > 0, got {a}")
    if math.isnan(b) or b < 0.0:
        raise ValueError(f"tent increment b must be in [0, inf], got {b}")
    if math.isinf(b):
        return big_g(a, n)
    if b == 0.0:
        return -math.lgamma(n + 1)
    la = math.log(a)
    lab = math.log(a + b)
    lb = math.log(b)
    lbinom = [
        math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
        for k in range(n + 1)
    ]
    n2 = log_sum(
        [lbinom[k] + k * lb + _log_gamma_lower(k + 1, 1.0 / a) for k in range(n + 1)]
    )
    m2 = log_sum(
        [lbinom[k] + (n - k) * lb + _log_gamma_upper(k + 1, a) for k in range(n + 1)]
    )
    m1 = _log_gamma_lower(n + 1, a)
    num = log_add(n * lab - 1.0 / a, n * la + n2)
    den = log_add(n * lab + m1, n * la + m2)
    return num - den


def big_g(a: float, n: int) -> float:
    """log of the capped-tent ratio G(a, n), the b -> inf limit of big_f.

    G = (e^(-1/a) + a^n gamma(n+1, 1/a)) / (gamma(n+1, a) + a^n e^(-a)).
    The numerator uses the identity
    integral_a^inf e^(-1/z) z^(-(n+2)) dz = gamma(n+1, 1/a).
    """
    _check_n(n)
    if not (a > 0.0 and math.isfinite(a)):
        raise ValueError(f"tent slope a must be finite > 0, got {a}")
    la = math.log(a)
    num = log_add(-1.0 / a, n * la + _log_gamma_lower(n + 1, 1.0 / a))
    den = log_add(_log_gamma_lower(n + 1, a), n * la - a)
    return num - den


def _stationarity_gap(a: float, n: int) -> float:
    """h(a) = (-1/a - a) - log gamma(n+1, a) - log gamma(n+1, 1/a).

    Negative where G increases, zero at its critical points.
    """
    return (
        -1.0 / a
        - a
        - _log_gamma_lower(n + 1, a)
        - _log_gamma_lower(n + 1, 1.0 / a)
    )


# ---------------------------------------------------------------------------
# solving for the dimensional constant


def _golden_max(f, lo: float, hi: float) -> float:
    invphi = 0.5 * (math.sqrt(5.0) - 1.0)
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(300):
        if hi - lo <= _BISECT_RTOL * max(lo, 1e-300):
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = f(x1)
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class LambdaEstimate:
    """Solved dimensional constant with its maximizer and certificates.

    bracket is the positivity island of the sign map at lambda = n!, the
    interval the maximizer was searched in.  residual_n1 and residual_n2
    are the relative errors of the two first-order identities
    lambda = e^(-1/a) / gamma(n+1, a) and lambda = e^a gamma(n+1, 1/a).
    lambda_hat_minus_1 is lambda/n! - 1 computed through the regularized
    gamma so no large-factorial cancellation occurs.
    """

    n: int
    log_lambda: float
    a_n: float
    bracket: tuple[float, float]
    residual_n1: float
    residual_n2: float
    lambda_hat_minus_1: float
    multiple_local_maxima: bool


def _refine_stationary(n: int, a0: float, lo: float, hi: float) -> float:
    # Golden section flattens out near the peak (the objective moves by
    # ~eps while the abscissa still wanders ~1e-8); the first-order
    # condition has a healthy slope there, so polish on its sign change.
    width = max(1e-8, 1e-6 * a0)
    for _ in range(80):
        wl = max(lo, a0 - width)
        wr = min(hi, a0 + width)
        if _stationarity_gap(wl, n) < 0.0 < _stationarity_gap(wr, n):
            return _bisect(lambda a: _stationarity_gap(a, n), wl, wr)
        if wl == lo and wr == hi:
            break
        width *= 4.0
    return a0


@lru_cache(maxsize=None)
def solve_lambda(n: int) -> LambdaEstimate:
    """Maximize the capped-tent ratio G over a for dimension n.

    The positivity island of the sign map at lambda = n! brackets the
    maximizer; golden section plus a stationarity polish find it, the two
    first-order residuals certify it (1e-8), and the roots are recomputed
    at the solved lambda to confirm the maximizer stays inside the island.
    """
    _check_n(n)
    log_factorial = math.lgamma(n + 1)
    try:
        seed = roots_of_m(n, log_factorial)
    except OneRootCase as exc:
        raise BracketFailure(
            f"no positivity island at lambda = n! for n={n}"
        ) from exc
    lo, hi = seed.z1, seed.z2
    a0 = _golden_max(lambda a: big_g(a, n), lo, hi)
    a_n = _refine_stationary(n, a0, lo, hi)
    log_lambda = big_g(a_n, n)
    residual_n1 = math.expm1(
        -1.0 / a_n - _log_gamma_lower(n + 1, a_n) - log_lambda
    )
    residual_n2 = math.expm1(
        a_n + _log_gamma_lower(n + 1, 1.0 / a_n) - log_lambda
    )
    if max(abs(residual_n1), abs(residual_n2)) > _RESIDUAL_TOL:
        raise StationarityFailure(
            f"stationarity residuals {residual_n1:.3e}, {residual_n2:.3e} "
            f"exceed {_RESIDUAL_TOL} at n={n}"
        )
    try:
        island = roots_of_m(n, log_lambda)
    except OneRootCase:
        # the solved lambda can sit a hair above the tangency value
        island = roots_of_m(n, log_lambda + math.log1p(-1e-12))
    if not island.z1 <= a_n <= island.z2:
        raise BracketFailure(
            f"maximizer a={a_n} escaped the island [{island.z1}, {island.z2}]"
        )
    scan = [lo + (hi - lo) * i / 64.0 for i in range(65)]
    vals = [big_g(a, n) for a in scan]
    peaks = sum(
        1
        for i in range(1, 64)
        if vals[i - 1] < vals[i] >= vals[i + 1]
    )
    return LambdaEstimate(
        n=n,
        log_lambda=log_lambda,
        a_n=a_n,
        bracket=(lo, hi),
        residual_n1=residual_n1,
        residual_n2=residual_n2,
        lambda_hat_minus_1=math.expm1(
            a_n + reg_gamma(n + 1, 1.0 / a_n).log_p
        ),
        multiple_local_maxima=peaks > 1,
    )


def a_bracket(n: int, alpha: float) -> tuple[float, float]:
    """Window [1/(n + n^alpha), 1/(n - n^alpha)] around the maximizer.

    Validated against the sign map at lambda = n!: negative at both ends,
    positive at 1/n.  The factorial map dominates the map at any larger
    lambda, so the window then contains the positivity island for every
    lambda the solver works with.  The claim is asymptotic in n, and the
    threshold grows sharply as alpha drops toward 1/2 (for alpha = 2/3 it
    sits beyond n = 2000); BracketInvalid reports a failed check.
    """
    _check_n(n)
    if not 0.5 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (1/2, 1), got {alpha}")
    shift = float(n) ** alpha
    if shift >= n:
        raise BracketInvalid(f"n^alpha = {shift} >= n leaves no upper endpoint")
    lo = 1.0 / (n + shift)
    hi = 1.0 / (n - shift)
    log_factorial = math.lgamma(n + 1)
    signs = tuple(m_sign(z, n, log_factorial) for z in (lo, 1.0 / n, hi))
    if signs != (-1, 1, -1):
        raise BracketInvalid(
            f"window misses the island at n={n}, alpha={alpha}: signs {signs}"
        )
    return lo, hi


def ck_coefficients(
    n: int, a: float, log_lambda: float
) -> list[tuple[int, float]]:
    """Signed logs of c_k = C(n-1,k) [gamma(k+1, 1/a) - lambda Gamma(n-k+1, a)]."""
    _check_n(n)
    if not (a > 0.0 and math.isfinite(a)):
        raise ValueError(f"slope a must be finite > 0, got {a}")
    out = []
    for k in range(n):
        lbinom = (
            math.lgamma(n) - math.lgamma(k + 1) - math.lgamma(n - k)
        )
        pos = lbinom + _log_gamma_lower(k + 1, 1.0 / a)
        neg = lbinom + log_lambda + _log_gamma_upper(n - k + 1, a)
        out.append(log_sub_signed(pos, neg))
    return out
