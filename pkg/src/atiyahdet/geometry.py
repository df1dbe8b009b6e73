"""Points, displacement vectors, spinors, and the Hopf-map machinery.

Coordinates live in R x C: a point is (t, u, v) with t the distinguished
real axis and zeta = u + i*v the complex factor.  A nonzero displacement
lifts to a spinor (w1, w2) in C^2 with |w1|^2 + |w2|^2 = 2*|v|, and the
Hopf map sends the spinor back to the displacement.  The antipode sends a
lift of v to a lift of -v; using a lift and its antipode for the two views
of each point pair makes downstream determinants phase-unambiguous.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import CoincidentPoints, ZeroVector

__all__ = [
    "Point3",
    "Vec3",
    "Spinor",
    "Configuration",
    "hopf",
    "antipode",
    "lift",
    "pair_spinors",
    "distance_matrix",
]


@dataclass(frozen=True)
class Point3:
    """A point of R x C ~ R^3, coordinates (t, u, v)."""

    t: float
    u: float
    v: float

    @property
    def zeta(self) -> complex:
        """The complex-factor coordinate u + i*v."""
        return complex(self.u, self.v)

    def __sub__(self, other: "Point3") -> "Vec3":
        return Vec3(self.t - other.t, self.u - other.u, self.v - other.v)

    def is_finite(self) -> bool:
        return math.isfinite(self.t) and math.isfinite(self.u) and math.isfinite(self.v)


@dataclass(frozen=True)
class Vec3:
    """A displacement between points, same coordinate convention as Point3."""

    t: float
    u: float
    v: float

    @property
    def zeta(self) -> complex:
        return complex(self.u, self.v)

    def length(self) -> float:
        return math.sqrt(self.t * self.t + self.u * self.u + self.v * self.v)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.t, -self.u, -self.v)


@dataclass(frozen=True)
class Spinor:
    """A pair of complex scalars; lifts of a vector of length r satisfy
    norm_sq == 2*r."""

    w1: complex
    w2: complex

    def norm_sq(self) -> float:
        return abs(self.w1) ** 2 + abs(self.w2) ** 2

    def scaled(self, phase: complex) -> "Spinor":
        return Spinor(self.w1 * phase, self.w2 * phase)


@dataclass(frozen=True)
class Configuration:
    """An ordered tuple of n >= 2 distinct points.

    Raises CoincidentPoints when two points coincide exactly; genuinely
    near-coincident input is caught later by the determinant's pivot guard.
    """

    points: tuple[Point3, ...]
    label: str | None = None

    def __init__(self, points, label: str | None = None):
        pts = tuple(p if isinstance(p, Point3) else Point3(*p) for p in points)
        if len(pts) < 2:
            raise ValueError("a configuration needs at least 2 points")
        for p in pts:
            if not p.is_finite():
                raise ValueError(f"non-finite coordinates in {p}")
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if (pts[j] - pts[i]).length() == 0.0:
                    raise CoincidentPoints(f"points {i} and {j} coincide")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "label", label)

    @property
    def n(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        """(n, 3) float64 array of (t, u, v) rows."""
        return np.array([(p.t, p.u, p.v) for p in self.points], dtype=np.float64)

    @classmethod
    def from_array(cls, arr, label: str | None = None) -> "Configuration":
        return cls([Point3(float(r[0]), float(r[1]), float(r[2])) for r in arr], label)

    def mean_edge(self) -> float:
        d = distance_matrix(self)
        n = self.n
        return float(sum(d[i][j] for i in range(n) for j in range(i + 1, n)) / (n * (n - 1) / 2))

    def diameter(self) -> float:
        d = distance_matrix(self)
        return float(max(max(row) for row in d))


def hopf(w: Spinor) -> Vec3:
    """Hopf map: (w1, w2) -> ((|w1|^2 - |w2|^2)/2, w1 * conj(w2))."""
    z = w.w1 * w.w2.conjugate()
    return Vec3((abs(w.w1) ** 2 - abs(w.w2) ** 2) / 2.0, z.real, z.imag)


def antipode(w: Spinor) -> Spinor:
    """The antipode sigma: (w1, w2) -> (-conj(w2), conj(w1)).

    Anti-involution (applying twice negates the spinor) and phase-reversing:
    sigma(e^{i theta} w) = e^{-i theta} sigma(w).  hopf(antipode(w)) == -hopf(w).
    """
    return Spinor(-w.w2.conjugate(), w.w1.conjugate())


def lift(v: Vec3) -> Spinor:
    """Deterministic spinor lift of a nonzero vector: hopf(lift(v)) == v.

    Two charts, switching at t = 0, avoid the singularity of the single
    formula near the negative t-axis:

      t >= 0:  (r + t, conj(zeta)) / sqrt(r + t)
      t <  0:  (zeta, r - t) / sqrt(r - t)

    The charts agree up to phase where both apply; the exact antipodal case
    zeta = 0, t = -r lands in the second chart as (0, sqrt(2r)).
    """
    r = v.length()
    if r == 0.0:
        raise ZeroVector("cannot lift the zero vector")
    if v.t >= 0.0:
        s = 1.0 / math.sqrt(r + v.t)
        return Spinor(s * (r + v.t), s * v.zeta.conjugate())
    s = 1.0 / math.sqrt(r - v.t)
    return Spinor(s * v.zeta, s * (r - v.t))


def pair_spinors(cfg: Configuration, i: int, j: int) -> tuple[Spinor, Spinor]:
    """Spinor pair for points i < j: the first lifts p_j - p_i (the later
    point seen from the earlier), the second is its antipode and lifts
    p_i - p_j.  Any common phase choice cancels from the determinant."""
    if not i < j:
        raise ValueError("pair_spinors requires i < j")
    try:
        first = lift(cfg.points[j] - cfg.points[i])
    except ZeroVector as exc:
        raise CoincidentPoints(f"points {i} and {j} coincide") from exc
    return first, antipode(first)


def distance_matrix(cfg: Configuration) -> list[list[float]]:
    """Symmetric matrix of pairwise distances, zero diagonal."""
    n = cfg.n
    d = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d[i][j] = d[j][i] = (cfg.points[j] - cfg.points[i]).length()
    return d
