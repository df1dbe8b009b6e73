"""Exact sparse polynomials in the six edge variables.

Monomials are exponent 6-tuples over (e21, e31, e32, e41, e42, e43) in the
canonical edge order; coefficients are Fractions.  The symbolic expansion
of the four-point Re(det M) is produced by evaluating the generic closed
forms on degree-1 variable polynomials, so the float path and the symbolic
path share one formula source.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import closedforms
from .errors import IllConditioned, ResidualTooLarge

__all__ = [
    "Monomial",
    "EdgePoly",
    "VertexPermutation",
    "poly_add",
    "poly_mul",
    "poly_neg",
    "poly_scale",
    "variables",
    "d3_poly",
    "apply_permutation",
    "all_permutations",
    "sym_av",
    "cm_poly_144V2",
    "expand_re_detM",
    "monomials_of_degree",
    "orbit_decomposition",
    "InterpolationResult",
    "interpolate_homogeneous",
    "recover_abs_detM_sq",
]

Monomial = tuple[int, int, int, int, int, int]

_NVARS = 6


def _mono_key(m: Monomial) -> tuple:
    # graded lex, largest first: sort key for canonical printing
    return (-sum(m), tuple(-e for e in m))


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class EdgePoly:
    """Sparse polynomial with exact rational coefficients.

    Immutable; zero coefficients are never stored, so structural equality
    is canonical-form equality.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple[Monomial, object]] | dict | None = None):
        data: dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for mono, coeff in items:
            mono = tuple(mono)
            if len(mono) != _NVARS or any(e < 0 or not isinstance(e, int) for e in mono):
                raise ValueError(f"bad exponent tuple {mono!r}")
            c = data.get(mono, Fraction(0)) + _coerce(coeff)
            if c:
                data[mono] = c
            else:
                data.pop(mono, None)
        self._terms = data

    @classmethod
    def zero(cls) -> "EdgePoly":
        return cls()

    @classmethod
    def constant(cls, c) -> "EdgePoly":
        return cls([((0,) * _NVARS, c)])

    @classmethod
    def variable(cls, k: int) -> "EdgePoly":
        exp = [0] * _NVARS
        exp[k] = 1
        return cls([(tuple(exp), 1)])

    def items(self) -> list[tuple[Monomial, Fraction]]:
        """(monomial, coefficient) pairs in graded-lex order."""
        return sorted(self._terms.items(), key=lambda kv: _mono_key(kv[0]))

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, EdgePoly) and self._terms == other._terms

    __hash__ = None

    def __add__(self, other) -> "EdgePoly":
        if not isinstance(other, EdgePoly):
            try:
                other = EdgePoly.constant(other)
            except (TypeError, ValueError):
                return NotImplemented
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono, Fraction(0)) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return _raw(out)

    __radd__ = __add__

    def __neg__(self) -> "EdgePoly":
        return _raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "EdgePoly":
        return self + (-other)

    def __rsub__(self, other) -> "EdgePoly":
        return (-self) + other

    def __mul__(self, other) -> "EdgePoly":
        if isinstance(other, EdgePoly):
            out: dict[Monomial, Fraction] = {}
            for m1, c1 in self._terms.items():
                for m2, c2 in other._terms.items():
                    mono = tuple(a + b for a, b in zip(m1, m2))
                    s = out.get(mono, Fraction(0)) + c1 * c2
                    if s:
                        out[mono] = s
                    else:
                        out.pop(mono, None)
            return _raw(out)
        c = _coerce(other)
        if not c:
            return EdgePoly()
        return _raw({m: cc * c for m, cc in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "EdgePoly":
        c = _coerce(other)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (1 / c)

    def __pow__(self, n: int) -> "EdgePoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = EdgePoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {sum(m) for m in self._terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return degree is None or degs == {degree}

    def evaluate(self, values: Sequence):
        """Evaluate on six values of any ring containing the integers."""
        vals = tuple(values)
        if len(vals) != _NVARS:
            raise ValueError("need six edge values")
        total = 0
        for mono, coeff in self._terms.items():
            prod = 1
            for v, e in zip(vals, mono):
                if e:
                    prod = prod * v**e
            num = prod * coeff.numerator
            if coeff.denominator == 1:
                total = total + num
            elif isinstance(num, int):
                total = total + Fraction(num, coeff.denominator)
            else:
                total = total + num / coeff.denominator
        return total

    def to_text(self) -> str:
        """One term per line: "coeff e21 e31 e32 e41 e42 e43", graded-lex."""
        lines = [
            str(c) + " " + " ".join(str(e) for e in m) for m, c in self.items()
        ]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str) -> "EdgePoly":
        terms = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if len(fields) != 7:
                raise ValueError(f"line {lineno}: expected 7 fields, got {len(fields)}")
            coeff = Fraction(fields[0])
            mono = tuple(int(f) for f in fields[1:])
            terms.append((mono, coeff))
        return cls(terms)

    def __repr__(self) -> str:
        return f"EdgePoly({len(self._terms)} terms, degree {self.degree()})"


def _raw(terms: dict) -> EdgePoly:
    p = EdgePoly.__new__(EdgePoly)
    p._terms = terms
    return p


def poly_add(p: EdgePoly, q: EdgePoly) -> EdgePoly:
    return p + q


def poly_mul(p: EdgePoly, q: EdgePoly) -> EdgePoly:
    return p * q


def poly_neg(p: EdgePoly) -> EdgePoly:
    return -p


def poly_scale(p: EdgePoly, c) -> EdgePoly:
    return p * c


def variables() -> tuple[EdgePoly, ...]:
    """The six edge variables as degree-1 polynomials, canonical order."""
    return tuple(EdgePoly.variable(k) for k in range(_NVARS))


def d3_poly(a: EdgePoly, b: EdgePoly, c: EdgePoly) -> EdgePoly:
    """d3 on polynomial arguments; on three distinct variables this expands
    to 10 monomials (six of the form a^2 b, minus the three cubes, -2abc)."""
    return closedforms.d3(a, b, c)


@dataclass(frozen=True)
class VertexPermutation:
    """A relabeling of the four vertices; image[i] is where vertex i goes
    (1-based, matching the r_ij subscripts)."""

    image: tuple[int, int, int, int]

    def __post_init__(self):
        if sorted(self.image) != [1, 2, 3, 4]:
            raise ValueError(f"not a permutation of 1..4: {self.image!r}")

    def edge_table(self) -> tuple[int, ...]:
        """Slot k of the result reads edge slot table[k] of the argument."""
        im = [x - 1 for x in self.image]
        return tuple(
            closedforms._EDGE_INDEX[
                (max(im[i], im[j]), min(im[i], im[j]))
            ]
            for i, j in closedforms.EDGE_ORDER
        )

    def compose(self, other: "VertexPermutation") -> "VertexPermutation":
        """self after other: (self.compose(other))(i) = self(other(i))."""
        return VertexPermutation(tuple(self.image[other.image[i] - 1] for i in range(4)))


def all_permutations() -> tuple[VertexPermutation, ...]:
    return tuple(VertexPermutation(tuple(x + 1 for x in p)) for p in permutations(range(4)))


def _apply_table(p: EdgePoly, table: Sequence[int]) -> EdgePoly:
    out: dict[Monomial, Fraction] = {}
    for mono, c in p._terms.items():
        new = [0] * _NVARS
        for k, e in enumerate(mono):
            new[table[k]] = e
        mono2 = tuple(new)
        s = out.get(mono2, Fraction(0)) + c
        if s:
            out[mono2] = s
        else:
            out.pop(mono2, None)
    return _raw(out)


def apply_permutation(p: EdgePoly, perm: VertexPermutation) -> EdgePoly:
    """Relabel vertices: r_ij becomes r_{perm(i) perm(j)}."""
    return _apply_table(p, perm.edge_table())


def sym_av(p: EdgePoly) -> EdgePoly:
    """Average of p over all 24 vertex relabelings."""
    total = EdgePoly()
    for table in closedforms.vertex_permutation_tables():
        total = total + _apply_table(p, table)
    return total / 24


def cm_poly_144V2() -> EdgePoly:
    """144 V^2 as a polynomial in the edge variables (even exponents).

    The grouped Cayley-Menger form expands to 22 monomials of degree 6:
    twelve positive products over opposite-edge pairs, four negative face
    products, six negative squared-pair terms.
    """
    return closedforms.cayley_menger_144V2(variables())


def expand_re_detM() -> EdgePoly:
    """Symbolic expansion of the four-point Re(det M).

    64 prod(r) - 4 d3(r21 r43, r31 r42, r32 r41)
    + 12 av(r41((r42+r43)^2 - r32^2) d3(r21, r31, r32)) + 2 * (144 V^2),
    homogeneous of degree 6.  The volume-free part carries 226 monomials
    and the volume part 22 more on disjoint support (its exponents are all
    even, the rest each have an odd exponent), so the expansion has 248.
    """
    p, o, f, v = closedforms.re_detM_n4_terms(variables())
    return p + o + f + v


def monomials_of_degree(degree: int) -> list[Monomial]:
    """All exponent tuples of the given total degree, graded-lex order."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    out: list[Monomial] = []

    def rec(prefix: tuple[int, ...], left: int):
        if len(prefix) == _NVARS - 1:
            out.append(prefix + (left,))
            return
        for e in range(left, -1, -1):
            rec(prefix + (e,), left - e)

    rec((), degree)
    return out


def orbit_decomposition(degree: int) -> list[tuple[Monomial, tuple[Monomial, ...]]]:
    """Vertex-relabeling orbits on the degree-d monomial basis.

    Returns (representative, members) pairs; the representative is the
    graded-lex-first member and pairs are listed in graded-lex order.
    """
    tables = closedforms.vertex_permutation_tables()
    seen: set[Monomial] = set()
    orbits = []
    for mono in monomials_of_degree(degree):
        if mono in seen:
            continue
        members = set()
        for table in tables:
            new = [0] * _NVARS
            for k, e in enumerate(mono):
                new[table[k]] = e
            members.add(tuple(new))
        seen |= members
        orbits.append((mono, tuple(sorted(members, key=_mono_key))))
    return orbits


class InterpolationResult(NamedTuple):
    poly: EdgePoly
    residual: float
    condition: float


def _to_mpf(x, mp):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def interpolate_homogeneous(
    samples: Sequence[tuple[Sequence, object]],
    degree: int,
    precision: int = 256,
    symmetric: bool = False,
    condition_bound: float = 1e14,
    max_denominator: int = 48,
    rtol: float = 1e-20,
) -> InterpolationResult:
    """Recover a homogeneous polynomial from (edge values, target) samples.

    Least squares over the full monomial basis (or the relabeling-invariant
    orbit-sum basis with symmetric=True), refined against targets at the
    given bit precision, then rounded to rationals with bounded denominator.
    Raises IllConditioned when the design matrix condition number exceeds
    the bound, ResidualTooLarge when the rounded polynomial misses any
    target by more than rtol relative.
    """
    import mpmath as mp

    if not samples:
        raise ValueError("no samples")
    if symmetric:
        orbits = orbit_decomposition(degree)
        columns = [members for _, members in orbits]
    else:
        columns = [(m,) for m in monomials_of_degree(degree)]
    n_cols = len(columns)
    if len(samples) < n_cols:
        raise ValueError(f"need at least {n_cols} samples, got {len(samples)}")

    with mp.workprec(precision):
        edges_mp = [[_to_mpf(x, mp) for x in e] for e, _ in samples]
        b_mp = [_to_mpf(t, mp) for _, t in samples]
        # powers[i][v][e] = v-th edge of sample i raised to e
        powers = [
            [[mp.mpf(1)] * (degree + 1) for _ in range(_NVARS)] for _ in edges_mp
        ]
        for i, e in enumerate(edges_mp):
            for v in range(_NVARS):
                for k in range(1, degree + 1):
                    powers[i][v][k] = powers[i][v][k - 1] * e[v]

        def feature(i: int, col) -> object:
            total = mp.mpf(0)
            for mono in col:
                prod = mp.mpf(1)
                for v, exp in enumerate(mono):
                    if exp:
                        prod *= powers[i][v][exp]
                total += prod
            return total

        a_mp = [[feature(i, col) for col in columns] for i in range(len(samples))]
        a64 = np.array([[float(x) for x in row] for row in a_mp], dtype=np.float64)
        b64 = np.array([float(x) for x in b_mp], dtype=np.float64)
        condition = float(np.linalg.cond(a64))
        if condition > condition_bound:
            raise IllConditioned(
                f"design matrix condition {condition:.3e} exceeds {condition_bound:.3e}"
            )
        x64, *_ = np.linalg.lstsq(a64, b64, rcond=None)
        x_mp = [mp.mpf(float(v)) for v in x64]
        # mixed-precision iterative refinement
        for _ in range(12):
            resid = [
                b_mp[i] - mp.fsum(a_mp[i][j] * x_mp[j] for j in range(n_cols))
                for i in range(len(samples))
            ]
            r64 = np.array([float(r) for r in resid], dtype=np.float64)
            delta, *_ = np.linalg.lstsq(a64, r64, rcond=None)
            step = float(np.max(np.abs(delta)))
            for j in range(n_cols):
                x_mp[j] += mp.mpf(float(delta[j]))
            ref = max((abs(float(v)) for v in x_mp), default=0.0)
            if step <= 1e-30 * max(ref, 1.0):
                break

        coeffs = [
            Fraction(float(v)).limit_denominator(max_denominator) for v in x_mp
        ]
        terms = []
        for col, c in zip(columns, coeffs):
            if c:
                for mono in col:
                    terms.append((mono, c))
        poly = EdgePoly(terms)

        c_mp = [mp.mpf(c.numerator) / c.denominator for c in coeffs]
        floor = max((abs(t) for t in b_mp), default=mp.mpf(0)) * mp.mpf(2) ** (-precision)
        worst = mp.mpf(0)
        for i in range(len(samples)):
            err = abs(
                mp.fsum(a_mp[i][j] * c_mp[j] for j in range(n_cols)) - b_mp[i]
            )
            rel = err / max(abs(b_mp[i]), floor, mp.mpf("1e-300"))
            worst = max(worst, rel)
        if worst > rtol:
            raise ResidualTooLarge(
                f"post-rounding relative residual {mp.nstr(worst, 6)} exceeds {rtol:g}"
            )
        return InterpolationResult(poly, float(worst), condition)


def sample_realizable_edges(
    rng: np.random.Generator, count: int, denominator: int = 16
) -> list[tuple[Fraction, ...]]:
    """Random rational edge sextuples, strictly realizable, unit mean.

    Integer numerators keep the samples exactly representable so rounded
    fits can be verified against exact evaluations.
    """
    out: list[tuple[Fraction, ...]] = []
    while len(out) < count:
        nums = rng.integers(denominator // 2, 3 * denominator, size=6)
        e = tuple(Fraction(int(x), denominator) for x in nums)
        ef = tuple(float(x) for x in e)
        scale = sum(ef) / 6.0
        ok = all(
            closedforms.d3(ef[a], ef[b], ef[c]) > 1e-2 * scale**3
            for a, b, c in closedforms.FACE_EDGES
        )
        if ok and closedforms.cayley_menger_144V2(ef) > 1e-2 * scale**6:
            mean = sum(e, Fraction(0)) / 6
            out.append(tuple(x / mean for x in e))
    return out


def recover_abs_detM_sq(
    seed: int = 0,
    n_samples: int = 420,
    precision: int = 256,
    rtol: float = 1e-20,
) -> InterpolationResult:
    """Fit |det M|^2 for four points as a degree-12 polynomial in the edges.

    |det M|^2 is invariant under vertex relabeling, so the fit runs on the
    orbit-sum basis; targets come from the extended-precision determinant at
    embedded configurations.
    """
    from . import highprec

    rng = np.random.default_rng(seed)
    edges = sample_realizable_edges(rng, n_samples)
    samples = [
        (e, highprec.abs_detM_sq_from_edges(e, precision)) for e in edges
    ]
    return interpolate_homogeneous(
        samples,
        degree=12,
        precision=precision,
        symmetric=True,
        max_denominator=8,
        rtol=rtol,
    )
