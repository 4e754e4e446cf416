"""Minimum enclosing ellipses and the elliptical unsafe-set primitive.

An unsafe set is the smallest ellipse around a cluster of tracked obstacles,
inflated by the safety margin and translated over time at the cluster's mean
velocity. Everything here is a pure function on immutable values.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

EPS_MIN = 1e-6
"""Minor-axis clamp (meters) applied to degenerate point sets before inflation."""

_CONTAIN_TOL = 1e-9


@dataclass(frozen=True)
class ConicEllipse:
    """Implicit conic a*x^2 + b*x*y + c*y^2 + d*x + e*y + f = 0, ellipse branch only.

    Scale-invariant: multiplying all six coefficients by a nonzero scalar
    describes the same ellipse.
    """

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float

    def coefficients(self) -> tuple[float, float, float, float, float, float]:
        return (self.a, self.b, self.c, self.d, self.e, self.f)

    def value(self, x: float, y: float) -> float:
        """Raw conic residual at (x, y); sign depends on coefficient scaling."""
        return (
            self.a * x * x
            + self.b * x * y
            + self.c * y * y
            + self.d * x
            + self.e * y
            + self.f
        )

    def discriminant(self) -> float:
        return self.b * self.b - 4.0 * self.a * self.c


@dataclass(frozen=True)
class CanonicalEllipse:
    """Center, semi-axes (semi_major >= semi_minor > 0) and rotation in (-pi/2, pi/2]."""

    center: tuple[float, float]
    semi_major: float
    semi_minor: float
    rotation: float

    def area(self) -> float:
        return math.pi * self.semi_major * self.semi_minor


@dataclass
class UnsafeSet:
    """Inflated cluster ellipse plus its constant velocity.

    priority_distance is the minimum predicted robot-to-center distance over
    the prediction horizon; the controller's prioritization step fills it in.
    """

    ellipse: CanonicalEllipse
    velocity: tuple[float, float]
    member_ids: frozenset[int]
    priority_distance: float | None = None


def conic_from_canonical(e: CanonicalEllipse) -> ConicEllipse:
    """Expand canonical parameters into implicit coefficients.

    Uses the scaling where the constant term is -(semi_major*semi_minor)^2 at
    the origin-centered form, so interior points evaluate negative.
    """
    a2 = e.semi_major * e.semi_major
    b2 = e.semi_minor * e.semi_minor
    ct = math.cos(e.rotation)
    st = math.sin(e.rotation)
    A = a2 * st * st + b2 * ct * ct
    B = 2.0 * (b2 - a2) * st * ct
    C = a2 * ct * ct + b2 * st * st
    x0, y0 = e.center
    D = -2.0 * A * x0 - B * y0
    E = -B * x0 - 2.0 * C * y0
    F = A * x0 * x0 + B * x0 * y0 + C * y0 * y0 - a2 * b2
    return ConicEllipse(A, B, C, D, E, F)


def conic_to_canonical(c: ConicEllipse) -> CanonicalEllipse:
    """Convert an implicit ellipse to canonical center/axes/rotation form.

    Invariant under rescaling of the coefficients (any nonzero factor).
    Raises ValueError for non-ellipse or degenerate conics.
    """
    A, B, C, D, E, F = c.coefficients()
    disc = B * B - 4.0 * A * C
    if not disc < 0.0:
        raise ValueError("not an ellipse")
    if A < 0.0:
        A, B, C, D, E, F = -A, -B, -C, -D, -E, -F
    big_gamma = A * E * E + C * D * D - B * D * E + disc * F
    small_gamma = (A - C) * (A - C) + B * B
    root = math.sqrt(small_gamma)
    rad_major = 2.0 * big_gamma * ((A + C) + root)
    rad_minor = 2.0 * big_gamma * ((A + C) - root)
    if rad_major <= 0.0 or rad_minor <= 0.0:
        raise ValueError("degenerate conic")
    semi_major = -math.sqrt(rad_major) / disc
    semi_minor = -math.sqrt(rad_minor) / disc
    x0 = (2.0 * C * D - B * E) / disc
    y0 = (2.0 * A * E - B * D) / disc
    if semi_major - semi_minor <= 1e-12 * semi_major:
        theta = 0.0
    else:
        theta = 0.5 * math.atan2(-B, C - A)
        if theta <= -0.5 * math.pi:
            theta += math.pi
        elif theta > 0.5 * math.pi:
            theta -= math.pi
    return CanonicalEllipse((x0, y0), semi_major, semi_minor, theta)


def inflate(e: CanonicalEllipse, s: float) -> CanonicalEllipse:
    """Grow both semi-axes by the safety margin s (meters); center and rotation fixed."""
    if s < 0.0:
        raise ValueError("safety margin must be non-negative")
    return replace(e, semi_major=e.semi_major + s, semi_minor=e.semi_minor + s)


def propagate(u: UnsafeSet, n: int, tau: float) -> CanonicalEllipse:
    """Ellipse at prediction step n: the center translates at the set velocity, shape fixed."""
    if n < 0:
        raise ValueError("step index must be non-negative")
    if tau <= 0.0:
        raise ValueError("time step must be positive")
    x0, y0 = u.ellipse.center
    vx, vy = u.velocity
    return replace(u.ellipse, center=(x0 + vx * tau * n, y0 + vy * tau * n))


def membership_margin(e: CanonicalEllipse, p: tuple[float, float]) -> float:
    """Signed membership value: positive inside, zero on the boundary, negative outside.

    Evaluates a^2*b^2 - (b^2*x'^2 + a^2*y'^2) in the ellipse-aligned frame;
    this is the quantity the controller clamps into its avoidance penalty.
    """
    ct = math.cos(e.rotation)
    st = math.sin(e.rotation)
    dx = p[0] - e.center[0]
    dy = p[1] - e.center[1]
    xr = dx * ct + dy * st
    yr = -dx * st + dy * ct
    a2 = e.semi_major * e.semi_major
    b2 = e.semi_minor * e.semi_minor
    return a2 * b2 - (b2 * xr * xr + a2 * yr * yr)


def contains(e: CanonicalEllipse, p: tuple[float, float]) -> tuple[bool, float]:
    """Whether p lies inside or on the ellipse, plus the signed membership margin."""
    m = membership_margin(e, p)
    return m >= 0.0, m


# ---------------------------------------------------------------------------
# Minimum enclosing ellipse
#
# Randomized Welzl-style recursion: the minimum enclosing ellipse is determined
# by a support set of at most 5 points lying on its boundary. Support ellipses
# are kept in canonical form (possibly degenerate: point or segment) so the
# containment test stays cheap and uniform.
# ---------------------------------------------------------------------------

# internal support representation: (cx, cy, a, b, cos_t, sin_t); a >= b >= 0
_Support = tuple[float, float, float, float, float, float]


def _support_area(s: _Support) -> float:
    return math.pi * s[2] * s[3]


def _support_contains(s: _Support, p: tuple[float, float], tol: float = 1e-9) -> bool:
    cx, cy, a, b, ct, st = s
    dx = p[0] - cx
    dy = p[1] - cy
    xr = dx * ct + dy * st
    yr = -dx * st + dy * ct
    scale = max(1.0, a)
    if a <= tol * scale:
        return math.hypot(dx, dy) <= tol * scale
    if b <= tol * scale:
        return abs(yr) <= tol * scale and abs(xr) <= a * (1.0 + tol)
    return (xr / a) ** 2 + (yr / b) ** 2 <= 1.0 + tol


def _canonical_to_support(e: CanonicalEllipse) -> _Support:
    return (
        e.center[0],
        e.center[1],
        e.semi_major,
        e.semi_minor,
        math.cos(e.rotation),
        math.sin(e.rotation),
    )


def _segment_support(points: np.ndarray) -> _Support:
    """Degenerate zero-width ellipse spanning collinear points."""
    mean = points.mean(axis=0)
    centered = points - mean
    if len(points) == 1:
        return (mean[0], mean[1], 0.0, 0.0, 1.0, 0.0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    direction = vt[0]
    t = centered @ direction
    lo, hi = t.min(), t.max()
    half = 0.5 * (hi - lo)
    mid = mean + direction * 0.5 * (hi + lo)
    norm = math.hypot(direction[0], direction[1])
    return (mid[0], mid[1], half, 0.0, direction[0] / norm, direction[1] / norm)


def _support_from_shape(center: np.ndarray, shape: np.ndarray) -> _Support | None:
    """Canonical support from the quadratic form (p-c)^T S (p-c) = 1."""
    w, v = np.linalg.eigh(shape)
    if w[0] <= 0.0:
        return None
    a = 1.0 / math.sqrt(w[0])
    b = 1.0 / math.sqrt(w[1])
    ct, st = v[0, 0], v[1, 0]
    return (center[0], center[1], a, b, ct, st)


def _steiner_ellipse(p1, p2, p3) -> _Support | None:
    """Smallest-area ellipse through three points: the affine image of a circumcircle."""
    g = (np.asarray(p1) + np.asarray(p2) + np.asarray(p3)) / 3.0
    # reference equilateral triangle on the unit circle
    inv_ref = np.array([[-1.0 / math.sqrt(3.0), 1.0], [-2.0 / math.sqrt(3.0), 0.0]])
    m = np.column_stack([np.asarray(p1) - g, np.asarray(p2) - g]) @ inv_ref
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det) < 1e-14:
        return None
    mmt = m @ m.T
    shape = np.linalg.inv(mmt)
    return _support_from_shape(g, shape)


def _conic_matrix_to_support(q: np.ndarray) -> _Support | None:
    """Canonical support from a symmetric 3x3 conic matrix, if it is a real ellipse."""
    A = q[0, 0]
    B = 2.0 * q[0, 1]
    C = q[1, 1]
    D = 2.0 * q[0, 2]
    E = 2.0 * q[1, 2]
    F = q[2, 2]
    try:
        can = conic_to_canonical(ConicEllipse(A, B, C, D, E, F))
    except ValueError:
        return None
    return _canonical_to_support(can)


def _line(p, q) -> np.ndarray:
    return np.cross([p[0], p[1], 1.0], [q[0], q[1], 1.0])


def _pencil_min_ellipse(points: list) -> _Support | None:
    """Minimum-area ellipse through four points in convex position.

    The conics through four points form a pencil spanned by the two degenerate
    line-pair conics of opposite edges; the area-stationary member is found by
    solving the quartic from d/dl [det3(l)^2 / det2(l)^3] = 0.
    """
    pts = np.asarray(points, dtype=float)
    centroid = pts.mean(axis=0)
    order = np.argsort(np.arctan2(pts[:, 1] - centroid[1], pts[:, 0] - centroid[0]))
    p0, p1, p2, p3 = (pts[i] for i in order)

    def sym(l, m):
        return 0.5 * (np.outer(l, m) + np.outer(m, l))

    q1 = sym(_line(p0, p1), _line(p2, p3))
    q2 = sym(_line(p1, p2), _line(p3, p0))

    def q_of(lam):
        return (1.0 - lam) * q1 + lam * q2

    nodes3 = np.array([-1.5, -0.5, 0.5, 1.5])
    det3 = np.polyfit(nodes3, [np.linalg.det(q_of(t)) for t in nodes3], 3)
    nodes2 = np.array([-1.0, 0.0, 1.0])
    det2 = np.polyfit(nodes2, [np.linalg.det(q_of(t)[:2, :2]) for t in nodes2], 2)
    h = np.polysub(
        2.0 * np.polymul(np.polyder(det3), det2),
        3.0 * np.polymul(np.polyder(det2), det3),
    )
    best: _Support | None = None
    for lam in np.roots(h):
        if abs(lam.imag) > 1e-9 * (1.0 + abs(lam.real)):
            continue
        support = _conic_matrix_to_support(q_of(lam.real))
        if support is None:
            continue
        if best is None or _support_area(support) < _support_area(best):
            best = support
    return best


def _conic_through_five(points: list) -> _Support | None:
    """Unique conic through five points via the null space of the design matrix."""
    pts = np.asarray(points, dtype=float)
    mean = pts.mean(axis=0)
    scale = max(np.abs(pts - mean).max(), 1e-12)
    z = (pts - mean) / scale
    design = np.column_stack(
        [z[:, 0] ** 2, z[:, 0] * z[:, 1], z[:, 1] ** 2, z[:, 0], z[:, 1], np.ones(len(z))]
    )
    _, _, vt = np.linalg.svd(design)
    A, B, C, D, E, F = vt[-1]
    # undo the normalization x = scale*z + mean
    mx, my = mean
    s = scale
    A2, B2, C2 = A / s**2, B / s**2, C / s**2
    D2 = (-2.0 * A * mx - B * my) / s**2 + D / s
    E2 = (-B * mx - 2.0 * C * my) / s**2 + E / s
    F2 = (A * mx * mx + B * mx * my + C * my * my) / s**2 - (D * mx + E * my) / s + F
    try:
        can = conic_to_canonical(ConicEllipse(A2, B2, C2, D2, E2, F2))
    except ValueError:
        return None
    return _canonical_to_support(can)


def _support_ellipse(boundary: list) -> _Support | None:
    """Smallest ellipse with the given points (at most five) on its boundary."""
    k = len(boundary)
    if k == 0:
        return None
    if k == 1:
        x, y = boundary[0]
        return (x, y, 0.0, 0.0, 1.0, 0.0)
    if k == 2:
        return _segment_support(np.asarray(boundary, dtype=float))
    if k == 3:
        support = _steiner_ellipse(*boundary)
        if support is None:
            return _segment_support(np.asarray(boundary, dtype=float))
        return support
    if k == 4:
        support = _pencil_min_ellipse(boundary)
        if support is not None:
            return support
        # one point inside the hull of the others: fall back to subsets
        return _best_subset_ellipse(boundary)
    support = _conic_through_five(boundary)
    if support is not None:
        return support
    return _best_subset_ellipse(boundary)


def _best_subset_ellipse(points: list) -> _Support | None:
    """Smallest support ellipse over proper subsets that still contains all points."""
    best: _Support | None = None
    n = len(points)
    for size in (3, 4):
        if size >= n:
            break
        for subset in combinations(range(n), size):
            candidate = _support_ellipse([points[i] for i in subset])
            if candidate is None or candidate[3] <= 0.0:
                continue
            if all(_support_contains(candidate, points[i], 1e-9) for i in range(n)):
                if best is None or _support_area(candidate) < _support_area(best):
                    best = candidate
    return best


def _welzl(points: list, rng: random.Random) -> _Support | None:
    pts = points[:]
    rng.shuffle(pts)

    def rec(i: int, boundary: list) -> _Support | None:
        if i == 0 or len(boundary) == 5:
            return _support_ellipse(boundary)
        p = pts[i - 1]
        e = rec(i - 1, boundary)
        if e is not None and _support_contains(e, p):
            return e
        return rec(i - 1, boundary + [p])

    return rec(len(pts), [])


def _deterministic_seed(points: np.ndarray, salt: int = 0) -> int:
    digest = hashlib.blake2b(points.tobytes() + salt.to_bytes(4, "little"), digest_size=8)
    return int.from_bytes(digest.digest(), "little")


def min_enclosing_ellipse(points) -> ConicEllipse:
    """Smallest-area ellipse containing every input point.

    Degenerate inputs (single point, collinear sets) get the minor semi-axis
    clamped to EPS_MIN so the returned conic stays a real ellipse; the safety
    inflation applied downstream dominates the clamp.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise ValueError("empty point set")
    if pts.shape[1] != 2:
        raise ValueError("points must be 2D")
    if not np.isfinite(pts).all():
        raise ValueError("points must be finite")
    pts = np.unique(pts, axis=0)

    scale = max(1.0, float(np.abs(pts - pts.mean(axis=0)).max()))
    centered = pts - pts.mean(axis=0)
    singular = np.linalg.svd(centered, compute_uv=False) if len(pts) > 1 else np.zeros(2)
    if len(pts) == 1 or singular[-1] <= 1e-12 * scale:
        cx, cy, half, _, ct, st = _segment_support(pts)
        theta = math.atan2(st, ct)
        if theta <= -0.5 * math.pi:
            theta += math.pi
        elif theta > 0.5 * math.pi:
            theta -= math.pi
        can = CanonicalEllipse((cx, cy), max(half, EPS_MIN), EPS_MIN, theta if half > EPS_MIN else 0.0)
        return conic_from_canonical(can)

    point_list = [tuple(p) for p in pts]
    for attempt in range(4):
        rng = random.Random(_deterministic_seed(pts, attempt))
        support = _welzl(point_list, rng)
        if support is None or support[3] <= EPS_MIN:
            continue
        if all(_support_contains(support, p, 1e-7) for p in point_list):
            cx, cy, a, b, ct, st = support
            theta = math.atan2(st, ct)
            if theta <= -0.5 * math.pi:
                theta += math.pi
            elif theta > 0.5 * math.pi:
                theta -= math.pi
            return conic_from_canonical(CanonicalEllipse((cx, cy), a, max(b, EPS_MIN), theta))
    raise RuntimeError("minimum enclosing ellipse did not converge")
