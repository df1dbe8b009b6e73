"""The configuration determinant.

For each ordered pair (i, j) the direction p_j - p_i is lifted to a spinor;
column i of the matrix M collects the coefficients of the product of the
n - 1 linear forms w1*x + w2*y attached to point i.  det M is independent
of the lift phases once pairs share a lift up to the antipode convention,
and det M / prod_{i>j}(2 r_ij) is the normalized invariant D.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _backend
from .errors import NumericalBreakdown
from .geometry import Configuration, Spinor, pair_spinors

# Below this the normalization D = det M / prod(2 r) is meaningless in
# float64; configurations should be rescaled toward unit mean edge.
_EDGE_PRODUCT_FLOOR = 1e-300


def mixed_column(spinors: Sequence[Spinor]) -> list[complex]:
    """Coefficients of prod_k (w1_k x + w2_k y) over a list of spinors.

    Entry k is the coefficient of x^(m-k) y^k, m = len(spinors); entry k
    therefore aggregates every way of drawing k second components.
    """
    acc = [complex(1.0, 0.0)]
    for s in spinors:
        a, b = s.w1, s.w2
        nxt = [0j] * (len(acc) + 1)
        for k, c in enumerate(acc):
            nxt[k] += a * c
            nxt[k + 1] += b * c
        acc = nxt
    return acc


def atiyah_matrix(config: Configuration, reverse_pairs: bool = False) -> np.ndarray:
    """The n x n complex matrix whose column i mixes the spinors seen from
    point i.

    With reverse_pairs the roles of the two lifts in each pair are swapped
    (point j sees the direct lift, point i the antipode); the determinant
    must not change, which makes this a convention self-test hook.
    """
    n = config.n
    seen: list[list[Spinor | None]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            fwd, bwd = pair_spinors(config, i, j)
            if reverse_pairs:
                fwd, bwd = bwd, fwd
            seen[i][j] = fwd
            seen[j][i] = bwd
    m = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        column = mixed_column([seen[i][j] for j in range(n) if j != i])
        for k in range(n):
            m[k, i] = column[k]
    return m


@dataclass(frozen=True)
class DetResult:
    """det M together with the normalization it is measured against."""

    detM: complex
    edge_product: float
    n: int

    @property
    def D(self) -> complex:
        return self.detM / self.edge_product

    @property
    def abs_D(self) -> float:
        return abs(self.detM) / self.edge_product


def atiyah_det(config: Configuration | np.ndarray) -> DetResult:
    """det M, prod_{i>j}(2 r_ij) and D for a configuration.

    Accepts a Configuration or a raw (n, 3) float array.  Raises
    NumericalBreakdown when the edge product leaves float64 range.
    """
    if isinstance(config, Configuration):
        pts = config.as_array()
    else:
        pts = np.ascontiguousarray(config, dtype=np.float64)
    det, edge_product = _backend.det_and_edge_product(pts)
    if not (edge_product > _EDGE_PRODUCT_FLOOR) or edge_product == np.inf:
        raise NumericalBreakdown(
            "edge product %r outside float64 working range; rescale the "
            "configuration toward unit mean edge" % (edge_product,)
        )
    return DetResult(detM=det, edge_product=edge_product, n=len(pts))
