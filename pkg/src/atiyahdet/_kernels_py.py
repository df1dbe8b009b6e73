"""Pure-Python kernels for the per-configuration determinant pipeline.

Mirrors the compiled extension `_kernels` (same signatures, same algorithm);
selected as a fallback when the extension is unavailable.  Operates on plain
floats and lists: for 4x4 complex work that beats numpy's per-call overhead.
"""

from __future__ import annotations

from math import sqrt

from .errors import CoincidentPoints, NumericalBreakdown

BACKEND = "python"


def _lift_components(dt: float, du: float, dv: float) -> tuple[complex, complex, float]:
    """Spinor (w1, w2) lifting (dt, du, dv), plus the length r.

    Chart switch at dt = 0 keeps the formula regular near the negative axis.
    """
    r = sqrt(dt * dt + du * du + dv * dv)
    if r == 0.0:
        raise CoincidentPoints("zero separation between two points")
    if dt >= 0.0:
        s = 1.0 / sqrt(r + dt)
        return complex(s * (r + dt), 0.0), complex(s * du, -s * dv), r
    s = 1.0 / sqrt(r - dt)
    return complex(s * du, s * dv), complex(s * (r - dt), 0.0), r


def _complex_lu_det(m: list[list[complex]], n: int) -> complex:
    """Determinant by in-place LU with partial pivoting."""
    det = complex(1.0, 0.0)
    for col in range(n):
        piv, best = col, abs(m[col][col])
        for row in range(col + 1, n):
            mag = abs(m[row][col])
            if mag > best:
                piv, best = row, mag
        if best == 0.0:
            raise NumericalBreakdown("vanishing pivot in determinant elimination")
        if piv != col:
            m[piv], m[col] = m[col], m[piv]
            det = -det
        pivot = m[col][col]
        det *= pivot
        inv = 1.0 / pivot
        for row in range(col + 1, n):
            f = m[row][col] * inv
            if f != 0.0:
                mrow, crow = m[row], m[col]
                for k in range(col + 1, n):
                    mrow[k] -= f * crow[k]
    return det


def _build_matrix(pts) -> tuple[list[list[complex]], float, list[float]]:
    """Atiyah matrix, the edge product prod(2 r_ij), and the distances
    [r_ij for i > j in row-major (i, j) order]."""
    if hasattr(pts, "tolist"):
        pts = pts.tolist()
    n = len(pts)
    w1 = [[0j] * n for _ in range(n)]
    w2 = [[0j] * n for _ in range(n)]
    edge_product = 1.0
    dists = []
    for i in range(n):
        ti, ui, vi = pts[i][0], pts[i][1], pts[i][2]
        for j in range(i + 1, n):
            a, b, r = _lift_components(pts[j][0] - ti, pts[j][1] - ui, pts[j][2] - vi)
            w1[i][j] = a
            w2[i][j] = b
            edge_product *= 2.0 * r
            dists.append(r)
    m = [[0j] * n for _ in range(n)]
    acc = [0j] * n
    for i in range(n):
        acc[0] = complex(1.0, 0.0)
        size = 1
        for j in range(n):
            if j == i:
                continue
            if i < j:
                a, b = w1[i][j], w2[i][j]
            else:
                a, b = -w2[j][i].conjugate(), w1[j][i].conjugate()
            acc[size] = b * acc[size - 1]
            for k in range(size - 1, 0, -1):
                acc[k] = a * acc[k] + b * acc[k - 1]
            acc[0] = a * acc[0]
            size += 1
        for k in range(n):
            m[k][i] = acc[k]
    return m, edge_product, dists


def det_and_edge_product(pts) -> tuple[complex, float]:
    """Atiyah determinant and prod_{i>j}(2 r_ij) for an (n, 3) point array."""
    m, edge_product, _ = _build_matrix(pts)
    return _complex_lu_det(m, len(pts)), edge_product


def tetra_scan(pts) -> tuple[float, float, float, float, float]:
    """Scan quantities for a 4-point configuration.

    Returns (Re det M, Im det M, prod r_ij, prod over faces of
    (d3 + 8abc), mean edge length).
    """
    m, _, d = _build_matrix(pts)
    det = _complex_lu_det(m, 4)
    # pair order from _build_matrix: (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
    r21, r31, r41, r32, r42, r43 = d
    prod_r = r21 * r31 * r32 * r41 * r42 * r43
    face_prod = 1.0
    for a, b, c in ((r21, r31, r32), (r21, r41, r42), (r31, r41, r43), (r32, r42, r43)):
        face_prod *= (a + b - c) * (b + c - a) * (c + a - b) + 8.0 * a * b * c
    mean_edge = (r21 + r31 + r32 + r41 + r42 + r43) / 6.0
    return det.real, det.imag, prod_r, face_prod, mean_edge
