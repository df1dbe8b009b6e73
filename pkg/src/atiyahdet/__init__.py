"""Atiyah configuration determinants for point configurations in 3-space.

Point pairs lift through the Hopf map to spinors; the resulting n x n
complex determinant det M, normalized by prod(2 r_ij), is the invariant D
conjectured never to vanish.  This package computes det M numerically
(compiled kernel with a pure-Python fallback), evaluates and expands the
three- and four-point closed forms exactly, and stress-tests the proved
bound and the outstanding conjectures with seeded random scans and
derivative-free search.
"""

from ._backend import backend_name
from .closedforms import (
    EdgeLengths4,
    av4,
    bound_margin,
    cayley_menger_144V2,
    conjecture2_gap,
    conjecture3_gap,
    d3,
    detM_n3,
    embed_edge_lengths,
    heron_16A2,
    re_detM_n4,
)
from .determinant import DetResult, atiyah_det, atiyah_matrix, mixed_column
from .errors import (
    AtiyahDetError,
    CoincidentPoints,
    DegenerateDenominator,
    IllConditioned,
    NotRealizable,
    NumericalBreakdown,
    ObjectiveUndefined,
    ResidualTooLarge,
    ZeroVector,
)
from .geometry import (
    Configuration,
    Point3,
    Spinor,
    Vec3,
    antipode,
    distance_matrix,
    hopf,
    lift,
    pair_spinors,
)
from .search import SearchProblem, SearchResult, minimize
from .sympoly import (
    EdgePoly,
    VertexPermutation,
    apply_permutation,
    cm_poly_144V2,
    expand_re_detM,
    interpolate_homogeneous,
    sym_av,
)
from .verify import (
    GeneratorSpec,
    Report,
    generate_configuration,
    run_conjecture_scan,
    run_identity_suite,
    run_invariance_suite,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    "AtiyahDetError",
    "ZeroVector",
    "CoincidentPoints",
    "NumericalBreakdown",
    "NotRealizable",
    "DegenerateDenominator",
    "IllConditioned",
    "ResidualTooLarge",
    "ObjectiveUndefined",
    "Point3",
    "Vec3",
    "Spinor",
    "Configuration",
    "hopf",
    "antipode",
    "lift",
    "pair_spinors",
    "distance_matrix",
    "DetResult",
    "mixed_column",
    "atiyah_matrix",
    "atiyah_det",
    "EdgeLengths4",
    "d3",
    "heron_16A2",
    "detM_n3",
    "cayley_menger_144V2",
    "av4",
    "re_detM_n4",
    "conjecture2_gap",
    "conjecture3_gap",
    "bound_margin",
    "embed_edge_lengths",
    "EdgePoly",
    "VertexPermutation",
    "apply_permutation",
    "sym_av",
    "cm_poly_144V2",
    "expand_re_detM",
    "interpolate_homogeneous",
    "GeneratorSpec",
    "Report",
    "generate_configuration",
    "run_identity_suite",
    "run_invariance_suite",
    "run_conjecture_scan",
    "SearchProblem",
    "SearchResult",
    "minimize",
]
