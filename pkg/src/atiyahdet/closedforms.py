"""Closed forms for three and four points, and the area identities behind them.

Edge lengths of a four-point configuration are always passed in the fixed
order (r21, r31, r32, r41, r42, r43).  The algebraic functions here are
written with ring operations only (+, -, *, integer division at the very
end of an average), so they evaluate equally well on floats, Fractions,
mpmath numbers, and the sparse edge polynomials used for symbolic work.
"""

from __future__ import annotations

import math
from itertools import permutations
from typing import Callable, NamedTuple, Sequence

from . import _backend
from .errors import DegenerateDenominator, NotRealizable
from .geometry import Configuration, Point3

__all__ = [
    "EDGE_ORDER",
    "EDGE_NAMES",
    "FACE_EDGES",
    "OPPOSITE_PAIRS",
    "EdgeLengths4",
    "vertex_permutation_tables",
    "permute_edges",
    "d3",
    "heron_16A2",
    "detM_n3",
    "cayley_menger_144V2",
    "av4",
    "re_detM_n4_terms",
    "re_detM_n4",
    "signed_projected_area",
    "area_quadric_check",
    "area_product_reduction_check",
    "conjecture2_gap",
    "conjecture3_gap",
    "bound_margin",
    "embed_edge_lengths",
]

# Vertex pairs (i, j), i > j, 0-based, indexing the six edges of a
# tetrahedron in the canonical order.
EDGE_ORDER: tuple[tuple[int, int], ...] = ((1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2))
EDGE_NAMES: tuple[str, ...] = ("r21", "r31", "r32", "r41", "r42", "r43")

_EDGE_INDEX = {pair: k for k, pair in enumerate(EDGE_ORDER)}

# Edge-index triples of the four faces, one per omitted vertex.
FACE_EDGES: tuple[tuple[int, int, int], ...] = ((0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 4, 5))

# Edge-index pairs with no vertex in common.
OPPOSITE_PAIRS: tuple[tuple[int, int], ...] = ((0, 5), (1, 4), (2, 3))


class EdgeLengths4(NamedTuple):
    """The six edge lengths of a four-point configuration, canonical order."""

    r21: float
    r31: float
    r32: float
    r41: float
    r42: float
    r43: float

    @classmethod
    def from_configuration(cls, cfg: Configuration) -> "EdgeLengths4":
        if cfg.n != 4:
            raise ValueError(f"need exactly 4 points, got {cfg.n}")
        return cls(*((cfg.points[i] - cfg.points[j]).length() for i, j in EDGE_ORDER))

    def mean(self) -> float:
        return sum(self) / 6.0

    def scaled(self, factor: float) -> "EdgeLengths4":
        return EdgeLengths4(*(x * factor for x in self))


def _build_perm_tables() -> tuple[tuple[int, ...], ...]:
    tables = []
    for p in permutations(range(4)):
        row = tuple(
            _EDGE_INDEX[(max(p[i], p[j]), min(p[i], p[j]))] for i, j in EDGE_ORDER
        )
        tables.append(row)
    return tuple(tables)


# Row g maps edge slot k to the slot its edge is sent to by the g-th vertex
# permutation (itertools order); used both to permute values and exponents.
_PERM_TABLES: tuple[tuple[int, ...], ...] = _build_perm_tables()


def vertex_permutation_tables() -> tuple[tuple[int, ...], ...]:
    """All 24 edge-slot permutations induced by relabeling the 4 vertices."""
    return _PERM_TABLES


def permute_edges(e: Sequence, table: Sequence[int]) -> tuple:
    """Edge values rearranged by one slot permutation: slot k reads e[table[k]]."""
    return tuple(e[i] for i in table)


def d3(a, b, c):
    """(a + b - c)(b + c - a)(c + a - b); nonnegative when a, b, c satisfy
    the triangle inequality, and abc >= d3(a, b, c) for a, b, c >= 0."""
    return (a + b - c) * (b + c - a) * (c + a - b)


def heron_16A2(a, b, c):
    """16 * (triangle area)^2 for side lengths a, b, c."""
    sa, sb, sc = a * a, b * b, c * c
    return 2 * (sa * sb + sa * sc + sb * sc) - sa * sa - sb * sb - sc * sc


def detM_n3(a, b, c):
    """det M of three points with pairwise distances a = r21, b = r31,
    c = r32, already divided by nothing: d3(a, b, c) + 8abc.

    Three points are coplanar with the distinguished axis choice free, so
    det M is real; dividing by 8abc gives the normalized D.
    """
    return d3(a, b, c) + 8 * a * b * c


def cayley_menger_144V2(e: Sequence):
    """144 V^2 of the tetrahedron with edge lengths e, canonical order.

    Grouped over the three opposite-edge pairs plus the four face products;
    expanding gives 22 monomials of degree 6, all exponents even.
    """
    s21, s31, s32, s41, s42, s43 = (x * x for x in e)
    return (
        s21 * s43 * (s31 + s32 + s41 + s42 - s21 - s43)
        + s31 * s42 * (s21 + s32 + s41 + s43 - s31 - s42)
        + s32 * s41 * (s21 + s31 + s42 + s43 - s32 - s41)
        - s21 * s31 * s32
        - s21 * s41 * s42
        - s31 * s41 * s43
        - s32 * s42 * s43
    )


def av4(f: Callable, e: Sequence):
    """Average of f(r21, ..., r43) over the 24 vertex relabelings.

    Matches the symmetrization convention av(r21) = (sum of edges)/6 and
    av(r21 r43) = (r21 r43 + r31 r42 + r41 r32)/3.
    """
    total = None
    for table in _PERM_TABLES:
        value = f(*permute_edges(e, table))
        total = value if total is None else total + value
    return total / 24


def _av_term(r21, r31, r32, r41, r42, r43):
    s = r42 + r43
    return r41 * (s * s - r32 * r32) * d3(r21, r31, r32)


def re_detM_n4_terms(e: Sequence) -> tuple:
    """The four summands of Re(det M) for four points, in order: the edge
    product term, the opposite-pair d3 term, the symmetrized face term, and
    the volume term.  No realizability validation; ring operations only."""
    prod_term = 64 * e[0] * e[1] * e[2] * e[3] * e[4] * e[5]
    opp_term = -4 * d3(e[0] * e[5], e[1] * e[4], e[2] * e[3])
    face_term = 12 * av4(_av_term, e)
    vol_term = 2 * cayley_menger_144V2(e)
    return prod_term, opp_term, face_term, vol_term


def re_detM_n4(e: Sequence, tol: float = 1e-12):
    """Re(det M) of four points from edge lengths alone.

    Raises NotRealizable when the lengths fail a face triangle inequality
    or give negative squared volume beyond tol (relative, degree-scaled):
    the closed form only represents a determinant on realizable inputs.
    """
    vals = tuple(e)
    _require_realizable(tuple(float(x) for x in vals), tol)
    p, o, f, v = re_detM_n4_terms(vals)
    return p + o + f + v


def _require_realizable(e: tuple, tol: float) -> None:
    if min(e) <= 0.0:
        raise NotRealizable("edge lengths must be positive")
    scale = sum(e) / 6.0
    for fi, (a, b, c) in enumerate(FACE_EDGES):
        if d3(e[a], e[b], e[c]) < -tol * scale**3:
            raise NotRealizable(f"face {fi} violates the triangle inequality")
    if cayley_menger_144V2(e) < -tol * scale**6:
        raise NotRealizable("negative squared volume: no 3-space embedding")


def _tetra_scan(cfg: Configuration):
    if cfg.n != 4:
        raise ValueError(f"need exactly 4 points, got {cfg.n}")
    return _backend.tetra_scan(cfg.as_array())


def conjecture2_gap(cfg: Configuration) -> float:
    """|det M| - 64 prod r_ij for four points; conjectured nonnegative."""
    re, im, prod_r, _, _ = _tetra_scan(cfg)
    return math.hypot(re, im) - 64.0 * prod_r


def conjecture3_gap(cfg: Configuration) -> float:
    """|det M|^2 - prod over faces of (d3 + 8abc); conjectured nonnegative."""
    re, im, _, face_prod, _ = _tetra_scan(cfg)
    return (re * re + im * im) - face_prod


def bound_margin(cfg: Configuration) -> float:
    """Re(det M) - 60 prod r_ij for four points; proved nonnegative."""
    re, _, prod_r, _, _ = _tetra_scan(cfg)
    return re - 60.0 * prod_r


def signed_projected_area(cfg: Configuration, i: int, j: int, k: int) -> float:
    """A_ijk: the signed area of triangle (i, j, k) projected along the
    t-axis onto the complex factor.  Alternating in the three indices."""
    zi, zj, zk = (cfg.points[m].zeta for m in (i, j, k))
    return ((zi - zj) * (zk - zj).conjugate()).imag / 2.0


def _off_plane_r2(cfg: Configuration, idx: tuple[int, ...]) -> tuple[int, float]:
    off = [m for m in idx if cfg.points[m].t != 0.0]
    if len(off) > 1:
        raise ValueError("identity needs all but at most one point at t = 0")
    if not off:
        return -1, 0.0
    return off[0], cfg.points[off[0]].t ** 2


def area_quadric_check(
    cfg: Configuration, i: int, j: int, k: int, l: int
) -> tuple[float, float]:
    """Both sides of the quadric identity for 16 A_ijk A_ijl.

    For points in the t = 0 plane,

      16 A_ijk A_ijl = 2 s_ij (s_ik + s_il - s_kl)
                       - (s_ij + s_ik - s_jk)(s_ij + s_il - s_jl)

    with s the squared distances.  When exactly one of the four points sits
    off the plane at height t, every squared distance touching it enters
    reduced by t^2.  Returns (lhs, rhs).
    """
    if len({i, j, k, l}) != 4:
        raise ValueError("indices must be distinct")
    off, r2 = _off_plane_r2(cfg, (i, j, k, l))

    def s(a: int, b: int) -> float:
        sq = (cfg.points[a] - cfg.points[b]).length() ** 2
        if (a == off) != (b == off):
            sq -= r2
        return sq

    lhs = 16.0 * signed_projected_area(cfg, i, j, k) * signed_projected_area(cfg, i, j, l)
    rhs = 2.0 * s(i, j) * (s(i, k) + s(i, l) - s(k, l)) - (
        s(i, j) + s(i, k) - s(j, k)
    ) * (s(i, j) + s(i, l) - s(j, l))
    return lhs, rhs


def _perm_sign(src: tuple[int, int, int], dst: tuple[int, int, int]) -> int:
    order = tuple(src.index(x) for x in dst)
    return 1 if order in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1


def _quadric_pair(cfg: Configuration, tri_a: tuple, tri_b: tuple) -> float:
    """A(tri_a) * A(tri_b) reduced to distances via the quadric identity.

    The triangles must share exactly two vertices.  Signs from reordering
    each triangle to lead with the shared pair are folded in, so the value
    matches the product of the signed areas as given.
    """
    common = sorted(set(tri_a) & set(tri_b))
    if len(common) != 2:
        raise ValueError("triangles must share exactly two vertices")
    p, q = common
    x = next(m for m in tri_a if m not in common)
    y = next(m for m in tri_b if m not in common)
    sign = _perm_sign(tri_a, (p, q, x)) * _perm_sign(tri_b, (p, q, y))

    def s(a: int, b: int) -> float:
        return (cfg.points[a] - cfg.points[b]).length() ** 2

    value = 2.0 * s(p, q) * (s(p, x) + s(p, y) - s(x, y)) - (
        s(p, q) + s(p, x) - s(q, x)
    ) * (s(p, q) + s(p, y) - s(q, y))
    return sign * value / 16.0


def area_product_reduction_check(
    cfg: Configuration,
    tri1: tuple[int, int, int],
    tri2: tuple[int, int, int],
    tol: float = 1e-12,
) -> tuple[float, float]:
    """Both sides of the reduction of A(tri1) A(tri2) to a rational function
    of distances, for planar configurations with arbitrary triangles.

    Bridging triangles (i, j, n) and (i, m, n) connect tri1 = (i, j, k) and
    tri2 = (l, m, n), so every pairwise product shares an edge and reduces
    by the quadric identity:

      A_ijk A_lmn = (A_ijk A_ijn)(A_imn A_lmn) / (A_ijn A_imn).

    Raises DegenerateDenominator when the bridge product nearly vanishes.
    Returns (lhs, rhs).
    """
    for m in set(tri1) | set(tri2):
        if cfg.points[m].t != 0.0:
            raise ValueError("reduction identity needs a planar configuration")
    i, j, k = tri1
    l, m, n = tri2
    den = _quadric_pair(cfg, (i, j, n), (i, m, n))
    if abs(den) <= tol * cfg.diameter() ** 4:
        raise DegenerateDenominator(
            "bridge area product vanishes for this index choice"
        )
    num = _quadric_pair(cfg, tri1, (i, j, n)) * _quadric_pair(cfg, (i, m, n), tri2)
    lhs = signed_projected_area(cfg, *tri1) * signed_projected_area(cfg, *tri2)
    return lhs, num / den


def embed_edge_lengths(e: Sequence, tol: float = 1e-9) -> Configuration:
    """A four-point configuration realizing the given edge lengths.

    Vertex 1 sits at the origin, vertex 2 on the u-axis, vertex 3 in the
    t = 0 plane, vertex 4 at t >= 0.  When the base triangle is degenerate
    the first three points are collinear and vertex 4 is placed in the
    plane instead.  Raises NotRealizable for non-embeddable lengths.
    """
    e = EdgeLengths4(*(float(x) for x in e))
    _require_realizable(e, tol)
    r21, r31, r32, r41, r42, r43 = e
    scale = e.mean()
    x3 = (r21 * r21 + r31 * r31 - r32 * r32) / (2.0 * r21)
    y3_sq = r31 * r31 - x3 * x3
    y3 = math.sqrt(max(y3_sq, 0.0))
    x4 = (r21 * r21 + r41 * r41 - r42 * r42) / (2.0 * r21)
    p1 = Point3(0.0, 0.0, 0.0)
    p2 = Point3(0.0, r21, 0.0)
    if y3 > 1e-7 * scale:
        y4 = (r31 * r31 + r41 * r41 - r43 * r43 - 2.0 * x3 * x4) / (2.0 * y3)
        t4_sq = r41 * r41 - x4 * x4 - y4 * y4
        if t4_sq < -tol * scale * scale:
            raise NotRealizable("no real height for the fourth vertex")
        p3 = Point3(0.0, x3, y3)
        p4 = Point3(math.sqrt(max(t4_sq, 0.0)), x4, y4)
    else:
        rho_sq = r41 * r41 - x4 * x4
        if rho_sq < -tol * scale * scale:
            raise NotRealizable("no real offset for the fourth vertex")
        p3 = Point3(0.0, x3, 0.0)
        p4 = Point3(0.0, x4, math.sqrt(max(rho_sq, 0.0)))
    return Configuration((p1, p2, p3, p4), label="embedded")
