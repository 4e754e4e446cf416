"""Independent reference implementations used as test oracles.

Nothing in here may import algorithm internals from the package under test;
these are deliberately different algorithm families (iterative optimization,
exhaustive search, direct linear algebra).
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np


def mvee(points, eps: float = 1e-10, max_iter: int = 200_000):
    """Minimum-volume enclosing ellipsoid by Frank-Wolfe with away steps.

    Returns (center, shape) with the ellipse {x : (x-c)^T S (x-c) <= 1}.
    The away-step variant converges linearly, so eps can be tightened enough
    to serve as an area oracle.
    """
    pts = np.asarray(points, dtype=float)
    n, d = pts.shape
    q = np.column_stack([pts, np.ones(n)])
    u = np.full(n, 1.0 / n)
    dp1 = d + 1.0
    for _ in range(max_iter):
        x = q.T @ (q * u[:, None])
        kappa = np.einsum("ij,jk,ik->i", q, np.linalg.inv(x), q)
        j_plus = int(np.argmax(kappa))
        k_plus = kappa[j_plus]
        active = u > 1e-14
        kappa_active = np.where(active, kappa, np.inf)
        j_minus = int(np.argmin(kappa_active))
        k_minus = kappa_active[j_minus]
        if k_plus - dp1 <= eps * dp1 and dp1 - k_minus <= eps * dp1:
            break
        if k_plus - dp1 >= dp1 - k_minus:
            step = (k_plus - dp1) / (dp1 * (k_plus - 1.0))
            u *= 1.0 - step
            u[j_plus] += step
        else:
            step = (dp1 - k_minus) / (dp1 * (k_minus - 1.0))
            step = min(step, u[j_minus] / (1.0 - u[j_minus]))
            u *= 1.0 + step
            u[j_minus] -= step
        u = np.maximum(u, 0.0)
        u /= u.sum()
    center = pts.T @ u
    cov = pts.T @ (pts * u[:, None]) - np.outer(center, center)
    shape = np.linalg.inv(cov) / d
    return center, shape


def mvee_area(points, **kwargs) -> float:
    _, shape = mvee(points, **kwargs)
    return math.pi / math.sqrt(np.linalg.det(shape))


def smallest_enclosing_circle(points):
    """Exact minimum enclosing circle by brute force over pairs and triples."""
    pts = [tuple(map(float, p)) for p in np.atleast_2d(np.asarray(points, dtype=float))]
    if len(pts) == 1:
        return pts[0], 0.0

    def covers(center, r2):
        return all((p[0] - center[0]) ** 2 + (p[1] - center[1]) ** 2 <= r2 * (1 + 1e-12) + 1e-18 for p in pts)

    best = None
    for p, q in combinations(pts, 2):
        c = ((p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0)
        r2 = (p[0] - c[0]) ** 2 + (p[1] - c[1]) ** 2
        if covers(c, r2) and (best is None or r2 < best[1]):
            best = (c, r2)
    for p, q, r in combinations(pts, 3):
        d = 2.0 * (p[0] * (q[1] - r[1]) + q[0] * (r[1] - p[1]) + r[0] * (p[1] - q[1]))
        if abs(d) < 1e-14:
            continue
        ux = (
            (p[0] ** 2 + p[1] ** 2) * (q[1] - r[1])
            + (q[0] ** 2 + q[1] ** 2) * (r[1] - p[1])
            + (r[0] ** 2 + r[1] ** 2) * (p[1] - q[1])
        ) / d
        uy = (
            (p[0] ** 2 + p[1] ** 2) * (r[0] - q[0])
            + (q[0] ** 2 + q[1] ** 2) * (p[0] - r[0])
            + (r[0] ** 2 + r[1] ** 2) * (q[0] - p[0])
        ) / d
        r2 = (p[0] - ux) ** 2 + (p[1] - uy) ** 2
        if covers((ux, uy), r2) and (best is None or r2 < best[1]):
            best = ((ux, uy), r2)
    assert best is not None
    return best[0], math.sqrt(best[1])


def fit_conic_through(points):
    """Least-squares conic through >= 5 points via the design-matrix null space.

    Returns (a, b, c, d, e, f) for a*x^2 + b*x*y + c*y^2 + d*x + e*y + f = 0.
    """
    pts = np.asarray(points, dtype=float)
    design = np.column_stack(
        [
            pts[:, 0] ** 2,
            pts[:, 0] * pts[:, 1],
            pts[:, 1] ** 2,
            pts[:, 0],
            pts[:, 1],
            np.ones(len(pts)),
        ]
    )
    _, _, vt = np.linalg.svd(design)
    return tuple(vt[-1])


def ellipse_boundary_points(center, semi_major, semi_minor, rotation, count=12):
    """Parametric samples on an ellipse boundary."""
    t = np.linspace(0.0, 2.0 * math.pi, count, endpoint=False)
    ct, st = math.cos(rotation), math.sin(rotation)
    x = semi_major * np.cos(t)
    y = semi_minor * np.sin(t)
    return np.column_stack(
        [center[0] + x * ct - y * st, center[1] + x * st + y * ct]
    )


def conic_sign_classify(coeffs, interior_point, points):
    """Classify points as inside/on (True) vs outside (False) by conic sign."""
    a, b, c, d, e, f = coeffs
    px, py = interior_point
    ref = a * px * px + b * px * py + c * py * py + d * px + e * py + f
    sign = -1.0 if ref > 0 else 1.0
    pts = np.asarray(points, dtype=float)
    vals = sign * (
        a * pts[:, 0] ** 2
        + b * pts[:, 0] * pts[:, 1]
        + c * pts[:, 1] ** 2
        + d * pts[:, 0]
        + e * pts[:, 1]
        + f
    )
    return vals <= 0.0


def dijkstra_grid_cost(traversable_cost, start, goal):
    """Reference shortest-path cost on an 8-connected grid of per-cell entry costs.

    traversable_cost[j][i] is the cost of entering cell (i, j) by a straight
    move; diagonal moves add (sqrt(2) - 1) times the cell's distance share,
    supplied separately by the caller via a (straight, diagonal) tuple.
    None marks an occupied cell. Plain Dijkstra with a dict-based heap.
    """
    import heapq

    rows = len(traversable_cost)
    cols = len(traversable_cost[0])
    si, sj = start
    gi, gj = goal
    dist = {(si, sj): 0.0}
    heap = [(0.0, si, sj)]
    moves = [(-1, 0), (1, 0), (0, -1), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1)]
    while heap:
        g, i, j = heapq.heappop(heap)
        if (i, j) == (gi, gj):
            return g
        if g > dist.get((i, j), math.inf):
            continue
        for di, dj in moves:
            ni, nj = i + di, j + dj
            if not (0 <= ni < cols and 0 <= nj < rows):
                continue
            entry = traversable_cost[nj][ni]
            if entry is None:
                continue
            if di != 0 and dj != 0:
                if traversable_cost[j][ni] is None or traversable_cost[nj][i] is None:
                    continue
                step = entry[1]
            else:
                step = entry[0]
            ng = g + step
            if ng < dist.get((ni, nj), math.inf) - 1e-15:
                dist[(ni, nj)] = ng
                heapq.heappush(heap, (ng, ni, nj))
    return None
