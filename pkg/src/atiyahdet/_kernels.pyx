# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled kernels for the determinant pipeline.

Same algorithm and exception contract as _kernels_py; stack-allocated
buffers for n up to MAXN, plain C complex arithmetic, no numpy C API.
"""

from libc.math cimport sqrt

from .errors import CoincidentPoints, NumericalBreakdown

BACKEND = "compiled"

cdef enum:
    MAXN = 16


cdef inline double _abs2(double complex z) noexcept:
    return z.real * z.real + z.imag * z.imag


cdef int _fill_matrix(
    const double[:, ::1] pts,
    int n,
    double complex* m,
    double* edge_product,
    double* dists,
) except -1:
    """Atiyah matrix into m (row-major n x n); prod(2 r) into edge_product;
    pairwise distances (i < j, row-major) into dists."""
    cdef double complex w1[MAXN][MAXN]
    cdef double complex w2[MAXN][MAXN]
    cdef double complex acc[MAXN]
    cdef double complex a, b, f
    cdef double dt, du, dv, r, s, ep
    cdef int i, j, k, size, idx

    ep = 1.0
    idx = 0
    for i in range(n):
        for j in range(i + 1, n):
            dt = pts[j, 0] - pts[i, 0]
            du = pts[j, 1] - pts[i, 1]
            dv = pts[j, 2] - pts[i, 2]
            r = sqrt(dt * dt + du * du + dv * dv)
            if r == 0.0:
                raise CoincidentPoints("zero separation between two points")
            if dt >= 0.0:
                s = 1.0 / sqrt(r + dt)
                w1[i][j] = s * (r + dt)
                w2[i][j] = s * du - 1j * (s * dv)
            else:
                s = 1.0 / sqrt(r - dt)
                w1[i][j] = s * du + 1j * (s * dv)
                w2[i][j] = s * (r - dt)
            ep *= 2.0 * r
            dists[idx] = r
            idx += 1
    edge_product[0] = ep

    for i in range(n):
        acc[0] = 1.0
        size = 1
        for j in range(n):
            if j == i:
                continue
            if i < j:
                a = w1[i][j]
                b = w2[i][j]
            else:
                a = -w2[j][i].conjugate()
                b = w1[j][i].conjugate()
            acc[size] = b * acc[size - 1]
            for k in range(size - 1, 0, -1):
                acc[k] = a * acc[k] + b * acc[k - 1]
            acc[0] = a * acc[0]
            size += 1
        for k in range(n):
            m[k * n + i] = acc[k]
    return 0


cdef double complex _lu_det(double complex* m, int n) except *:
    cdef double complex det, pivot, inv, f
    cdef double best, mag
    cdef int col, row, k, piv

    det = 1.0
    for col in range(n):
        piv = col
        best = _abs2(m[col * n + col])
        for row in range(col + 1, n):
            mag = _abs2(m[row * n + col])
            if mag > best:
                piv = row
                best = mag
        if best == 0.0:
            raise NumericalBreakdown("vanishing pivot in determinant elimination")
        if piv != col:
            for k in range(n):
                pivot = m[piv * n + k]
                m[piv * n + k] = m[col * n + k]
                m[col * n + k] = pivot
            det = -det
        pivot = m[col * n + col]
        det *= pivot
        inv = 1.0 / pivot
        for row in range(col + 1, n):
            f = m[row * n + col] * inv
            if f != 0.0:
                for k in range(col + 1, n):
                    m[row * n + k] -= f * m[col * n + k]
    return det


def det_and_edge_product(const double[:, ::1] pts):
    """Atiyah determinant and prod_{i>j}(2 r_ij) for an (n, 3) point array."""
    cdef int n = pts.shape[0]
    if n > MAXN:
        from . import _kernels_py
        return _kernels_py.det_and_edge_product(pts)
    cdef double complex m[MAXN * MAXN]
    cdef double dists[MAXN * MAXN]
    cdef double edge_product
    _fill_matrix(pts, n, m, &edge_product, dists)
    return complex(_lu_det(m, n)), edge_product


def tetra_scan(const double[:, ::1] pts):
    """Scan quantities for a 4-point configuration: (Re det M, Im det M,
    prod r_ij, prod over faces of (d3 + 8abc), mean edge length)."""
    if pts.shape[0] != 4:
        raise ValueError("tetra_scan needs exactly 4 points")
    cdef double complex m[16]
    cdef double d[6]
    cdef double edge_product, prod_r, face_prod, mean_edge, a, b, c
    cdef double complex det
    cdef int t
    _fill_matrix(pts, 4, m, &edge_product, d)
    det = _lu_det(m, 4)
    # pair order: (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
    prod_r = d[0] * d[1] * d[2] * d[3] * d[4] * d[5]
    face_prod = 1.0
    for t in range(4):
        if t == 0:
            a = d[0]; b = d[1]; c = d[3]   # r21 r31 r32
        elif t == 1:
            a = d[0]; b = d[2]; c = d[4]   # r21 r41 r42
        elif t == 2:
            a = d[1]; b = d[2]; c = d[5]   # r31 r41 r43
        else:
            a = d[3]; b = d[4]; c = d[5]   # r32 r42 r43
        face_prod *= (a + b - c) * (b + c - a) * (c + a - b) + 8.0 * a * b * c
    mean_edge = (d[0] + d[1] + d[2] + d[3] + d[4] + d[5]) / 6.0
    return det.real, det.imag, prod_r, face_prod, mean_edge
