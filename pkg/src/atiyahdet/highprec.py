"""Extended-precision evaluation of the determinant pipeline with mpmath.

Mirrors the float64 path: same two-chart lift, same column construction.
Used where float64 cannot certify a value (polynomial recovery residuals),
not as a default engine.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import mpmath as mp

from .errors import CoincidentPoints, NotRealizable

__all__ = ["atiyah_det_mp", "embed_edge_lengths_mp", "abs_detM_sq_from_edges"]


def _num(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def _lift(dt, du, dv):
    r = mp.sqrt(dt * dt + du * du + dv * dv)
    if r == 0:
        raise CoincidentPoints("zero separation between two points")
    if dt >= 0:
        s = 1 / mp.sqrt(r + dt)
        return mp.mpc(s * (r + dt)), mp.mpc(s * du, -s * dv), r
    s = 1 / mp.sqrt(r - dt)
    return mp.mpc(s * du, s * dv), mp.mpc(s * (r - dt)), r


def atiyah_det_mp(points: Sequence[Sequence], precision: int = 256):
    """det M at the given bit precision; points are (t, u, v) rows of any
    mpmath-convertible numbers (Fractions convert exactly)."""
    with mp.workprec(precision):
        pts = [[_num(x) for x in row] for row in points]
        n = len(pts)
        w1 = [[None] * n for _ in range(n)]
        w2 = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                a, b, _ = _lift(
                    pts[j][0] - pts[i][0], pts[j][1] - pts[i][1], pts[j][2] - pts[i][2]
                )
                w1[i][j] = a
                w2[i][j] = b
        m = mp.matrix(n, n)
        for i in range(n):
            acc = [mp.mpc(1)]
            for j in range(n):
                if j == i:
                    continue
                if i < j:
                    a, b = w1[i][j], w2[i][j]
                else:
                    a, b = -mp.conj(w2[j][i]), mp.conj(w1[j][i])
                nxt = [mp.mpc(0)] * (len(acc) + 1)
                for k, c in enumerate(acc):
                    nxt[k] += a * c
                    nxt[k + 1] += b * c
                acc = nxt
            for k in range(n):
                m[k, i] = acc[k]
        return mp.det(m)


def embed_edge_lengths_mp(e: Sequence, precision: int = 256) -> list[list]:
    """Four (t, u, v) rows realizing the edge lengths, extended precision.

    Same frame as the float64 embedding; tiny negative radicands (within
    2^-precision/2 of zero, relative) are clamped, anything worse raises
    NotRealizable.
    """
    with mp.workprec(precision):
        r21, r31, r32, r41, r42, r43 = (_num(x) for x in e)
        scale = (r21 + r31 + r32 + r41 + r42 + r43) / 6
        tol = mp.mpf(2) ** (-(precision // 2))

        def root(x, deg_scale):
            if x < -tol * deg_scale:
                raise NotRealizable("edge lengths do not embed at this precision")
            return mp.sqrt(max(x, mp.mpf(0)))

        x3 = (r21 * r21 + r31 * r31 - r32 * r32) / (2 * r21)
        y3 = root(r31 * r31 - x3 * x3, scale * scale)
        x4 = (r21 * r21 + r41 * r41 - r42 * r42) / (2 * r21)
        if y3 > tol * scale:
            y4 = (r31 * r31 + r41 * r41 - r43 * r43 - 2 * x3 * x4) / (2 * y3)
            t4 = root(r41 * r41 - x4 * x4 - y4 * y4, scale * scale)
            p3, p4 = [0, x3, y3], [t4, x4, y4]
        else:
            rho = root(r41 * r41 - x4 * x4, scale * scale)
            p3, p4 = [0, x3, 0], [0, x4, rho]
        zero = mp.mpf(0)
        return [[zero, zero, zero], [zero, r21, zero], p3, p4]


def abs_detM_sq_from_edges(e: Sequence, precision: int = 256):
    """|det M|^2 for the tetrahedron with the given edge lengths."""
    with mp.workprec(precision):
        det = atiyah_det_mp(embed_edge_lengths_mp(e, precision), precision)
        return det.real * det.real + det.imag * det.imag
