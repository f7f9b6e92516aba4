"""Piecewise-linear convex profiles on the ray and their duality transforms.

A profile psi is a nonnegative convex function on [0, inf) with psi(0) = 0,
stored as breakpoints (r_i, v_i) plus a tail slope; tail_slope = inf encodes
a jump to +inf past the last breakpoint (indicator-type tails).  The inverse
view is the radius function rho(z) = sup{r : psi(r) <= z}, concave and
non-decreasing, with either a constant or a linear tail.

The inversion transform acts on radius functions as rho_J(w) = w * rho(1/w),
which on a linear segment rho = alpha z + beta swaps slope and intercept.
All three transforms (inversion J, conjugation L, polarity A) are exact on
the piecewise-linear representation; polarity is exposed pointwise only.

Two degenerate profiles are representable and flow through everything:
psi == 0 (radius identically +inf) and the indicator of {0} (radius
identically 0).  They are each other's images under all three transforms.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

INF = float("inf")

# Segments whose slopes agree to this relative tolerance are merged; profile
# equality is defined up to the same tolerance on canonical breakpoints.
MERGE_RTOL = 1e-12
# Slack for accepting slope monotonicity from computed (rounded) inputs.
CONVEXITY_SLACK = 1e-9


def _close(a: float, b: float, rtol: float = MERGE_RTOL) -> bool:
    if a == b:
        return True
    if math.isinf(a) or math.isinf(b):
        return False
    return abs(a - b) <= rtol * max(1.0, abs(a), abs(b))


# ---------------------------------------------------------------------------
# profile of psi


@dataclass(frozen=True)
class ConvexProfile:
    """Convex psi on the ray: breakpoints ((r, v), ...) and a tail slope.

    Canonicalized on construction: collinear breakpoints are merged, a
    trailing breakpoint whose incoming slope equals a finite tail slope is
    absorbed.  Invalid data (r not strictly increasing, v decreasing, slopes
    decreasing beyond slack, tail slope below the last slope) raises
    ValueError.
    """

    breakpoints: tuple[tuple[float, float], ...]
    tail_slope: float

    def __post_init__(self) -> None:
        pts = [(float(r), float(v)) for r, v in self.breakpoints]
        tail = float(self.tail_slope)
        if not pts:
            raise ValueError("profile needs at least the origin breakpoint")
        if pts[0] != (0.0, 0.0):
            raise ValueError(f"profile must start at (0, 0), got {pts[0]}")
        if math.isnan(tail) or tail < 0.0:
            raise ValueError(f"tail slope must be in [0, inf], got {tail}")
        for (r0, v0), (r1, v1) in zip(pts, pts[1:]):
            if not r1 > r0:
                raise ValueError(f"radii must strictly increase: {r0} -> {r1}")
            if v1 < v0 - CONVEXITY_SLACK * max(1.0, abs(v0)):
                raise ValueError(f"values must not decrease: {v0} -> {v1}")
        slopes = [(v1 - v0) / (r1 - r0) for (r0, v0), (r1, v1) in zip(pts, pts[1:])]
        for s0, s1 in zip(slopes, slopes[1:]):
            if s1 < s0 - CONVEXITY_SLACK * max(1.0, abs(s0), abs(s1)):
                raise ValueError(f"slopes must not decrease: {s0} -> {s1}")
        if slopes and not math.isinf(tail):
            if tail < slopes[-1] - CONVEXITY_SLACK * max(1.0, abs(slopes[-1])):
                raise ValueError(
                    f"tail slope {tail} below final slope {slopes[-1]}"
                )
        # canonicalize: absorb tail-collinear trailing points, merge collinear
        while len(pts) > 1 and not math.isinf(tail):
            r0, v0 = pts[-2]
            r1, v1 = pts[-1]
            if _close((v1 - v0) / (r1 - r0), tail):
                pts.pop()
            else:
                break
        merged = pts[:1]
        for r, v in pts[1:]:
            while len(merged) > 1:
                ra, va = merged[-2]
                rb, vb = merged[-1]
                if _close((vb - va) / (rb - ra), (v - vb) / (r - rb)):
                    merged.pop()
                else:
                    break
            merged.append((r, v))
        object.__setattr__(self, "breakpoints", tuple(merged))
        object.__setattr__(self, "tail_slope", tail)

    @property
    def is_zero(self) -> bool:
        return len(self.breakpoints) == 1 and self.tail_slope == 0.0

    @property
    def is_origin_indicator(self) -> bool:
        return len(self.breakpoints) == 1 and math.isinf(self.tail_slope)

    @property
    def flat_end(self) -> float:
        """Largest r with psi(r) = 0."""
        end = 0.0
        for r, v in self.breakpoints:
            if v <= 0.0:
                end = r
        return end

    def evaluate(self, r: float) -> float:
        if r < 0.0 or math.isnan(r):
            raise ValueError(f"profile domain is r >= 0, got {r}")
        pts = self.breakpoints
        r_last, v_last = pts[-1]
        if r >= r_last:
            if r == r_last:
                return v_last
            if math.isinf(self.tail_slope):
                return INF
            return v_last + self.tail_slope * (r - r_last)
        idx = bisect_right([p[0] for p in pts], r) - 1
        r0, v0 = pts[idx]
        r1, v1 = pts[idx + 1]
        return v0 + (v1 - v0) * (r - r0) / (r1 - r0)

    def approx_equal(self, other: "ConvexProfile", rtol: float = MERGE_RTOL) -> bool:
        if len(self.breakpoints) != len(other.breakpoints):
            return False
        if math.isinf(self.tail_slope) != math.isinf(other.tail_slope):
            return False
        if not math.isinf(self.tail_slope):
            if not _close(self.tail_slope, other.tail_slope, rtol):
                return False
        return all(
            _close(a[0], b[0], rtol) and _close(a[1], b[1], rtol)
            for a, b in zip(self.breakpoints, other.breakpoints)
        )


# ---------------------------------------------------------------------------
# radius functions


@dataclass(frozen=True)
class ConstantTail:
    value: float


@dataclass(frozen=True)
class LinearTail:
    slope: float

    def __post_init__(self) -> None:
        if not self.slope > 0.0 or math.isinf(self.slope):
            raise ValueError(f"linear tail slope must be finite > 0: {self.slope}")


@dataclass(frozen=True)
class RadiusFunction:
    """Level-set radius rho(z): breakpoints ((z, rho), ...) plus a tail.

    rho is non-decreasing and concave.  The degenerate rho == +inf (profile
    psi == 0) is the single breakpoint (0, inf) with a constant tail.
    """

    breakpoints: tuple[tuple[float, float], ...]
    tail: ConstantTail | LinearTail

    def __post_init__(self) -> None:
        pts = [(float(z), float(x)) for z, x in self.breakpoints]
        if not pts:
            raise ValueError("radius function needs at least one breakpoint")
        if pts[0][0] != 0.0:
            raise ValueError(f"first breakpoint must sit at z = 0, got {pts[0]}")
        if math.isinf(pts[0][1]):
            if len(pts) > 1 or not (
                isinstance(self.tail, ConstantTail) and math.isinf(self.tail.value)
            ):
                raise ValueError("infinite radius must be the single point (0, inf)")
            object.__setattr__(self, "breakpoints", ((0.0, INF),))
            return
        if pts[0][1] < 0.0:
            raise ValueError(f"radius must be nonnegative, got {pts[0][1]}")
        for (z0, x0), (z1, x1) in zip(pts, pts[1:]):
            if not z1 > z0:
                raise ValueError(f"heights must strictly increase: {z0} -> {z1}")
            if x1 < x0 - CONVEXITY_SLACK * max(1.0, abs(x0)):
                raise ValueError(f"radius must not decrease: {x0} -> {x1}")
        slopes = [(x1 - x0) / (z1 - z0) for (z0, x0), (z1, x1) in zip(pts, pts[1:])]
        for s0, s1 in zip(slopes, slopes[1:]):
            if s1 > s0 + CONVEXITY_SLACK * max(1.0, abs(s0), abs(s1)):
                raise ValueError(f"slopes must not increase: {s0} -> {s1}")
        tail_slope = self.tail.slope if isinstance(self.tail, LinearTail) else 0.0
        if slopes and tail_slope > slopes[-1] + CONVEXITY_SLACK * max(
            1.0, abs(slopes[-1])
        ):
            raise ValueError(
                f"tail slope {tail_slope} above final slope {slopes[-1]}"
            )
        if isinstance(self.tail, ConstantTail):
            x_last = pts[-1][1]
            if not _close(self.tail.value, x_last, CONVEXITY_SLACK):
                raise ValueError(
                    f"constant tail {self.tail.value} != last radius {x_last}"
                )
        # absorb trailing breakpoints collinear with the tail
        while len(pts) > 1:
            z0, x0 = pts[-2]
            z1, x1 = pts[-1]
            if _close((x1 - x0) / (z1 - z0), tail_slope):
                pts.pop()
            else:
                break
        merged = pts[:1]
        for z, x in pts[1:]:
            while len(merged) > 1:
                za, xa = merged[-2]
                zb, xb = merged[-1]
                if _close((xb - xa) / (zb - za), (x - xb) / (z - zb)):
                    merged.pop()
                else:
                    break
            merged.append((z, x))
        tail = self.tail
        if isinstance(tail, ConstantTail):
            tail = ConstantTail(merged[-1][1])
        object.__setattr__(self, "breakpoints", tuple(merged))
        object.__setattr__(self, "tail", tail)

    @classmethod
    def infinite(cls) -> "RadiusFunction":
        return cls(((0.0, INF),), ConstantTail(INF))

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.breakpoints[0][1])

    @property
    def is_zero(self) -> bool:
        return (
            len(self.breakpoints) == 1
            and self.breakpoints[0][1] == 0.0
            and isinstance(self.tail, ConstantTail)
            and self.tail.value == 0.0
        )

    def evaluate(self, z: float) -> float:
        if z < 0.0 or math.isnan(z):
            raise ValueError(f"radius domain is z >= 0, got {z}")
        if self.is_infinite:
            return INF
        pts = self.breakpoints
        z_last, x_last = pts[-1]
        if z >= z_last:
            if isinstance(self.tail, ConstantTail):
                return self.tail.value
            return x_last + self.tail.slope * (z - z_last)
        idx = bisect_right([p[0] for p in pts], z) - 1
        z0, x0 = pts[idx]
        z1, x1 = pts[idx + 1]
        return x0 + (x1 - x0) * (z - z0) / (z1 - z0)

    def approx_equal(self, other: "RadiusFunction", rtol: float = MERGE_RTOL) -> bool:
        if self.is_infinite or other.is_infinite:
            return self.is_infinite and other.is_infinite
        if len(self.breakpoints) != len(other.breakpoints):
            return False
        if type(self.tail) is not type(other.tail):
            return False
        if isinstance(self.tail, ConstantTail):
            if not _close(self.tail.value, other.tail.value, rtol):
                return False
        elif not _close(self.tail.slope, other.tail.slope, rtol):
            return False
        return all(
            _close(a[0], b[0], rtol) and _close(a[1], b[1], rtol)
            for a, b in zip(self.breakpoints, other.breakpoints)
        )


@dataclass(frozen=True)
class LineConvexFunction:
    """Convex function on the whole line vanishing at 0, as two ray branches.

    `right` is the profile of f on [0, inf); `left` the profile of
    x -> f(-x).
    """

    left: ConvexProfile
    right: ConvexProfile


# ---------------------------------------------------------------------------
# conversions


def to_radius(p: ConvexProfile) -> RadiusFunction:
    """Radius function of the level sets of psi; exact coordinate swap."""
    if p.is_zero:
        return RadiusFunction.infinite()
    pts = [(0.0, p.flat_end)]
    for r, v in p.breakpoints:
        if v > 0.0:
            pts.append((v, r))
    r_last = p.breakpoints[-1][0]
    if math.isinf(p.tail_slope):
        tail: ConstantTail | LinearTail = ConstantTail(r_last)
    else:
        tail = LinearTail(1.0 / p.tail_slope)
    return RadiusFunction(tuple(pts), tail)


def from_radius(rho: RadiusFunction) -> ConvexProfile:
    """Inverse of to_radius; rejects non-concave input via the constructor."""
    if rho.is_infinite:
        return ConvexProfile(((0.0, 0.0),), 0.0)
    pts = [(0.0, 0.0)]
    x0 = rho.breakpoints[0][1]
    if x0 > 0.0:
        pts.append((x0, 0.0))
    for z, x in rho.breakpoints[1:]:
        pts.append((x, z))
    if isinstance(rho.tail, ConstantTail):
        tail_slope = INF
    else:
        tail_slope = 1.0 / rho.tail.slope
    return ConvexProfile(tuple(pts), tail_slope)


# ---------------------------------------------------------------------------
# the inversion transform


def j_transform(rho: RadiusFunction) -> RadiusFunction:
    """rho_J(w) = w * rho(1/w): breakpoint (z, x) maps to (1/z, x/z).

    The input tail becomes the output's behaviour at w = 0 and the input's
    first segment becomes the output tail, so the transform is an exact
    involution on the representation.
    """
    if rho.is_infinite:
        return RadiusFunction.infinite()
    pts = rho.breakpoints
    if isinstance(rho.tail, ConstantTail):
        tail_slope, tail_icept = 0.0, rho.tail.value
    else:
        z_m, x_m = pts[-1]
        tail_slope = rho.tail.slope
        tail_icept = x_m - tail_slope * z_m
        if tail_icept < 0.0:  # concavity gives >= 0; clear FP dust
            tail_icept = 0.0
    if len(pts) == 1:
        out = ((0.0, tail_slope),)
        if tail_icept == 0.0:
            return RadiusFunction(out, ConstantTail(tail_slope))
        return RadiusFunction(out, LinearTail(tail_icept))
    out_pts = [(0.0, tail_slope)]
    for z, x in reversed(pts[1:]):
        out_pts.append((1.0 / z, x / z))
    (z1, x1) = pts[1]
    x_first = pts[0][1]
    first_slope = (x1 - x_first) / z1
    if x_first == 0.0:
        tail: ConstantTail | LinearTail = ConstantTail(first_slope)
    else:
        tail = LinearTail(x_first)
    return RadiusFunction(tuple(out_pts), tail)


# ---------------------------------------------------------------------------
# conjugation


def legendre(p: ConvexProfile) -> ConvexProfile:
    """Convex conjugate sup_r (s r - psi(r)): slopes and breakpoints swap.

    A finite tail slope becomes the conjugate's last breakpoint followed by
    an indicator tail; an indicator tail becomes a finite final slope.
    """
    pts = p.breakpoints
    radii = [r for r, _ in pts]
    slopes = [
        (v1 - v0) / (r1 - r0) for (r0, v0), (r1, v1) in zip(pts, pts[1:])
    ]
    kinks = list(slopes)
    if not math.isinf(p.tail_slope):
        kinks.append(p.tail_slope)
    out_pts = [(0.0, 0.0)]
    val = 0.0
    prev = 0.0
    for j, s in enumerate(kinks):
        val += radii[j] * (s - prev)
        if s > prev:
            out_pts.append((s, val))
        prev = s
    tail = INF if not math.isinf(p.tail_slope) else radii[-1]
    return ConvexProfile(tuple(out_pts), tail)


# ---------------------------------------------------------------------------
# polarity


def polarity(p: ConvexProfile, s: float) -> float:
    """(A psi)(s) = sup_y (s y - 1) / psi(y), evaluated pointwise.

    Division conventions: positive/0 = +inf, nonpositive/0 = 0, finite/inf
    = 0.  On each linear segment the ratio is monotone, so the supremum is
    attained at breakpoints or as the tail limit s / tail_slope.
    """
    if s < 0.0 or math.isnan(s):
        raise ValueError(f"polarity domain is s >= 0, got {s}")
    if p.is_zero:
        return INF if s > 0.0 else 0.0
    flat = p.flat_end
    if flat > 0.0 and s * flat - 1.0 > 0.0:
        return INF
    best = 0.0
    for r, v in p.breakpoints:
        if v > 0.0:
            best = max(best, (s * r - 1.0) / v)
    if not math.isinf(p.tail_slope):
        best = max(best, s / p.tail_slope)
    return best


def _polar_profile(p: ConvexProfile) -> ConvexProfile:
    """Profile of the polar: upper envelope of the per-segment candidate lines.

    Private plumbing for the factorization cross-check; the public polarity
    stays pointwise.
    """
    if p.is_zero:
        return ConvexProfile(((0.0, 0.0),), INF)
    if p.is_origin_indicator:
        return ConvexProfile(((0.0, 0.0),), 0.0)
    lines = [(0.0, 0.0)]
    for r, v in p.breakpoints:
        if v > 0.0:
            lines.append((r / v, -1.0 / v))
    if not math.isinf(p.tail_slope):
        lines.append((1.0 / p.tail_slope, 0.0))
    lines.sort()
    dedup: list[tuple[float, float]] = []
    for a, b in lines:
        if dedup and dedup[-1][0] == a:
            if b > dedup[-1][1]:
                dedup[-1] = (a, b)
        else:
            dedup.append((a, b))
    hull: list[tuple[float, float]] = []
    starts: list[float] = []
    for a, b in dedup:
        x = 0.0
        while hull:
            a0, b0 = hull[-1]
            x = (b0 - b) / (a - a0)
            if x <= starts[-1]:
                hull.pop()
                starts.pop()
            else:
                break
        if not hull:
            if b < 0.0:
                continue  # dominated at 0 by the zero line; enters later if at all
            hull.append((a, b))
            starts.append(0.0)
        else:
            hull.append((a, b))
            starts.append(x)
    flat = p.flat_end
    cutoff = (1.0 / flat) if flat > 0.0 else INF
    out_pts = [(0.0, 0.0)]
    for (a, b), x in zip(hull, starts):
        if 0.0 < x < cutoff:
            out_pts.append((x, a * x + b))
    if math.isinf(cutoff):
        return ConvexProfile(tuple(out_pts), hull[-1][0])
    a, b = hull[-1]
    for (ai, bi), x in zip(hull, starts):
        if x < cutoff:
            a, b = ai, bi
    if cutoff > out_pts[-1][0]:
        out_pts.append((cutoff, a * cutoff + b))
    return ConvexProfile(tuple(out_pts), INF)


# ---------------------------------------------------------------------------
# composite checks and helpers


def evaluation_grid(
    lo: float = 1e-3, hi: float = 1e3, points: int = 200,
    extras: Iterable[float] = (),
) -> list[float]:
    """Geometric grid on [lo, hi] plus any finite positive extras, sorted."""
    ratio = hi / lo
    grid = {lo * ratio ** (i / (points - 1)) for i in range(points)}
    for x in extras:
        if x > 0.0 and math.isfinite(x):
            grid.add(float(x))
    return sorted(grid)


def check_j_factorization(
    p: ConvexProfile, grid: Sequence[float] | None = None
) -> float:
    """Max pointwise gap between the radius route and conjugate-of-polar.

    Grid points where both routes are +inf count as zero deviation; a point
    where exactly one route is infinite returns inf.
    """
    route_radius = from_radius(j_transform(to_radius(p)))
    route_polar = legendre(_polar_profile(p))
    if grid is None:
        extras = [r for r, _ in route_radius.breakpoints] + [
            r for r, _ in route_polar.breakpoints
        ]
        grid = evaluation_grid(extras=extras)
    worst = 0.0
    for s in grid:
        a = route_radius.evaluate(s)
        b = route_polar.evaluate(s)
        if math.isinf(a) and math.isinf(b):
            continue
        if math.isinf(a) or math.isinf(b):
            return INF
        worst = max(worst, abs(a - b))
    return worst


def scale(p: ConvexProfile, a: float) -> ConvexProfile:
    """Profile of r -> psi(a r): breakpoints (r/a, v), slopes scaled by a."""
    if not (a > 0.0) or math.isinf(a):
        raise ValueError(f"scale factor must be finite > 0, got {a}")
    pts = tuple((r / a, v) for r, v in p.breakpoints)
    tail = p.tail_slope if math.isinf(p.tail_slope) else p.tail_slope * a
    return ConvexProfile(pts, tail)


def _average_radius(r1: RadiusFunction, r2: RadiusFunction) -> RadiusFunction:
    if r1.is_infinite or r2.is_infinite:
        return RadiusFunction.infinite()
    zs = sorted({z for z, _ in r1.breakpoints} | {z for z, _ in r2.breakpoints})
    pts = tuple((z, 0.5 * (r1.evaluate(z) + r2.evaluate(z))) for z in zs)
    s1 = r1.tail.slope if isinstance(r1.tail, LinearTail) else 0.0
    s2 = r2.tail.slope if isinstance(r2.tail, LinearTail) else 0.0
    if s1 + s2 > 0.0:
        tail: ConstantTail | LinearTail = LinearTail(0.5 * (s1 + s2))
    else:
        tail = ConstantTail(pts[-1][1])
    return RadiusFunction(pts, tail)


def symmetrize_line(f: LineConvexFunction) -> ConvexProfile:
    """Even rearrangement of f: level interval [l, r] becomes radius (r-l)/2."""
    avg = _average_radius(to_radius(f.left), to_radius(f.right))
    return from_radius(avg)


# ---------------------------------------------------------------------------
# JSON document form


def profile_to_dict(p: ConvexProfile) -> dict:
    tail = "inf" if math.isinf(p.tail_slope) else p.tail_slope
    return {
        "breakpoints": [[r, v] for r, v in p.breakpoints],
        "tail_slope": tail,
    }


def profile_from_dict(doc: object) -> ConvexProfile:
    if not isinstance(doc, dict):
        raise ValueError(f"profile document must be an object, got {type(doc).__name__}")
    unknown = set(doc) - {"breakpoints", "tail_slope"}
    if unknown:
        raise ValueError(f"unknown profile fields: {sorted(unknown)}")
    if "breakpoints" not in doc or "tail_slope" not in doc:
        raise ValueError("profile document needs 'breakpoints' and 'tail_slope'")
    raw = doc["breakpoints"]
    if not isinstance(raw, list) or not all(
        isinstance(bp, (list, tuple)) and len(bp) == 2 for bp in raw
    ):
        raise ValueError("'breakpoints' must be a list of [r, v] pairs")
    try:
        pts = tuple((float(r), float(v)) for r, v in raw)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"non-numeric breakpoint: {exc}") from exc
    tail = doc["tail_slope"]
    if tail == "inf":
        tail_slope = INF
    elif isinstance(tail, (int, float)) and not isinstance(tail, bool):
        tail_slope = float(tail)
    else:
        raise ValueError(f"'tail_slope' must be a number or \"inf\", got {tail!r}")
    return ConvexProfile(pts, tail_slope)
