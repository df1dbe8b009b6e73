"""Tests for exact sparse polynomial arithmetic, symmetrization, and fits."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from atiyahdet import (
    EdgePoly,
    EdgeLengths4,
    IllConditioned,
    ResidualTooLarge,
    VertexPermutation,
    apply_permutation,
    cayley_menger_144V2,
    cm_poly_144V2,
    d3,
    expand_re_detM,
    interpolate_homogeneous,
    re_detM_n4,
    sym_av,
)
from atiyahdet.sympoly import (
    all_permutations,
    d3_poly,
    monomials_of_degree,
    orbit_decomposition,
    sample_realizable_edges,
    variables,
)

# --- hypothesis strategies -------------------------------------------------

coeffs = st.fractions(
    min_value=-100, max_value=100, max_denominator=16
).filter(lambda f: f != 0)
exponents = st.tuples(*([st.integers(min_value=0, max_value=3)] * 6))
polys = st.dictionaries(exponents, coeffs, min_size=0, max_size=8).map(EdgePoly)


class TestRingAxioms:
    @given(polys, polys)
    @settings(max_examples=60, deadline=None)
    def test_addition_commutes(self, p, q):
        assert p + q == q + p

    @given(polys, polys, polys)
    @settings(max_examples=60, deadline=None)
    def test_addition_associates(self, p, q, r):
        assert (p + q) + r == p + (q + r)

    @given(polys, polys)
    @settings(max_examples=40, deadline=None)
    def test_multiplication_commutes(self, p, q):
        assert p * q == q * p

    @given(polys, polys, polys)
    @settings(max_examples=30, deadline=None)
    def test_distributivity(self, p, q, r):
        assert p * (q + r) == p * q + p * r

    @given(polys)
    @settings(max_examples=60, deadline=None)
    def test_additive_inverse(self, p):
        assert not (p + (-p))
        assert p - p == EdgePoly()

    @given(polys)
    @settings(max_examples=60, deadline=None)
    def test_neutral_elements(self, p):
        assert p + 0 == p
        assert p * 1 == p
        assert not p * 0

    @given(polys)
    @settings(max_examples=40, deadline=None)
    def test_evaluation_is_ring_hom(self, p):
        point = (2, 3, 5, 7, 11, 13)
        q = p * p + p
        assert q.evaluate(point) == p.evaluate(point) * p.evaluate(point) + p.evaluate(point)


class TestBasics:
    def test_variables(self):
        vs = variables()
        assert len(vs) == 6
        for k, v in enumerate(vs):
            assert v.degree() == 1
            assert len(v) == 1
            point = [0] * 6
            point[k] = 9
            assert v.evaluate(point) == 9

    def test_exact_integer_evaluation(self):
        vs = variables()
        p = vs[0] ** 3 - 2 * vs[1] * vs[2] * vs[3] if hasattr(vs[0], "__rmul__") else None
        p = vs[0] ** 3 - vs[1] * vs[2] * vs[3] * 2
        val = p.evaluate((2, 1, 1, 1, 1, 1))
        assert val == 6
        assert isinstance(val, int) or (isinstance(val, Fraction) and val.denominator == 1)

    def test_text_roundtrip(self):
        vs = variables()
        p = (vs[0] + vs[5]) ** 3 - Fraction(7, 3) * (vs[1] * vs[2] * vs[4])
        q = EdgePoly.from_text(p.to_text())
        assert p == q

    def test_text_is_graded_lex(self):
        vs = variables()
        p = vs[0] ** 2 + vs[0] * vs[1] + vs[5] + vs[2]
        lines = p.to_text().strip().splitlines()
        degs = [sum(map(int, ln.split()[1:])) for ln in lines]
        assert degs == sorted(degs, reverse=True)

    def test_homogeneity(self):
        vs = variables()
        assert (vs[0] * vs[1] - vs[2] ** 2).is_homogeneous()
        assert not (vs[0] + vs[1] * vs[2]).is_homogeneous()

    def test_d3_poly_shape(self):
        vs = variables()
        p = d3_poly(vs[0], vs[1], vs[2])
        assert len(p) == 10
        assert p.degree() == 3
        assert p.evaluate((3, 4, 5, 0, 0, 0)) == d3(3, 4, 5)


class TestGroupAction:
    def test_group_size(self):
        perms = all_permutations()
        assert len(perms) == 24
        assert len({p.image for p in perms}) == 24

    def test_action_composition_law(self, rng):
        vs = variables()
        f = vs[0] * vs[3] ** 2 - vs[4] * vs[5] * vs[1]
        perms = all_permutations()
        for _ in range(30):
            p = perms[rng.integers(24)]
            q = perms[rng.integers(24)]
            lhs = apply_permutation(apply_permutation(f, q), p)
            rhs = apply_permutation(f, p.compose(q))
            assert lhs == rhs

    def test_action_preserves_evaluation(self, rng):
        # Permuting the polynomial matches permuting the edge values.
        vs = variables()
        f = vs[0] ** 2 * vs[5] - vs[2] * vs[3] * vs[4]
        e = EdgeLengths4(*(Fraction(k) for k in (2, 3, 4, 5, 6, 7)))
        for p in all_permutations():
            table = p.edge_table()
            permuted_values = tuple(e[table[k]] for k in range(6))
            assert apply_permutation(f, p).evaluate(e) == f.evaluate(permuted_values)

    def test_sym_av_invariant_and_idempotent(self):
        vs = variables()
        f = vs[0] ** 3 + vs[1] * vs[2] * vs[5]
        g = sym_av(f)
        for p in all_permutations():
            assert apply_permutation(g, p) == g
        assert sym_av(g) == g

    def test_sym_av_single_edge(self):
        vs = variables()
        g = sym_av(vs[0])
        # av(r21) = (sum of all six edges)/6
        want = sum(vs[1:], vs[0]) * Fraction(1, 6)
        assert g == want


class TestSymbolicForms:
    def test_cm_poly_shape(self):
        p = cm_poly_144V2()
        assert len(p) == 22
        assert p.degree() == 6
        assert p.is_homogeneous()

    def test_cm_poly_invariant(self):
        p = cm_poly_144V2()
        for perm in all_permutations():
            assert apply_permutation(p, perm) == p

    def test_cm_poly_matches_closed_form(self, rng):
        p = cm_poly_144V2()
        for e in sample_realizable_edges(np.random.default_rng(3), 20):
            assert p.evaluate(e) == cayley_menger_144V2(EdgeLengths4(*e))

    def test_cm_poly_unit_edges(self):
        assert cm_poly_144V2().evaluate((1, 1, 1, 1, 1, 1)) == 2

    def test_expand_shape(self):
        p = expand_re_detM()
        assert p.degree() == 6
        assert p.is_homogeneous()
        # 226 monomials carry an odd exponent; the 22-term all-even block
        # is twice the squared-volume polynomial.
        even = EdgePoly({m: c for m, c in p.items()
                         if all(x % 2 == 0 for x in m)})
        odd = p - even
        assert len(even) == 22
        assert len(odd) == 226
        assert len(p) == 248
        assert even == cm_poly_144V2() * 2

    def test_expand_integer_coefficients(self):
        for _, c in expand_re_detM().items():
            assert Fraction(c).denominator == 1

    def test_expand_invariant(self):
        p = expand_re_detM()
        for perm in all_permutations():
            assert apply_permutation(p, perm) == p

    def test_expand_spot_values(self):
        p = expand_re_detM()
        assert p.evaluate((1, 1, 1, 1, 1, 1)) == 100
        assert p.evaluate((1, 2, 1, 3, 2, 1)) == 768

    def test_expand_matches_closed_form_exactly(self):
        p = expand_re_detM()
        for e in sample_realizable_edges(np.random.default_rng(11), 25):
            assert p.evaluate(e) == re_detM_n4(EdgeLengths4(*e))


class TestMonomialBases:
    def test_monomial_counts(self):
        # C(d+5, 5) monomials of degree d in six variables.
        assert len(monomials_of_degree(2)) == 21
        assert len(monomials_of_degree(6)) == 462
        assert all(sum(m) == 6 for m in monomials_of_degree(6))

    def test_orbit_partition(self):
        orbits = orbit_decomposition(6)
        assert len(orbits) == 32
        seen = set()
        for rep, members in orbits:
            assert rep in members
            seen.update(members)
        assert len(seen) == 462

    def test_degree12_orbit_count(self):
        orbits = orbit_decomposition(12)
        assert len(orbits) == 313
        assert sum(len(members) for _, members in orbits) == 6188


class TestInterpolation:
    def test_recovers_d3_cube(self, rng):
        # Target: d3(r21, r31, r32)^2, a degree-6 polynomial, from samples.
        target = d3_poly(*variables()[:3]) * d3_poly(*variables()[:3])
        gen = np.random.default_rng(5)
        samples = []
        for e in sample_realizable_edges(gen, 600):
            samples.append((e, target.evaluate(e)))
        res = interpolate_homogeneous(samples, degree=6)
        assert res.poly == target
        assert res.residual <= 1e-20

    def test_symmetric_fit_reduces_unknowns(self):
        target = sym_av(variables()[0] ** 2 * variables()[3] ** 2 * variables()[5] ** 2)
        gen = np.random.default_rng(6)
        samples = [(e, target.evaluate(e)) for e in sample_realizable_edges(gen, 80)]
        res = interpolate_homogeneous(samples, degree=6, symmetric=True)
        assert res.poly == target

    def test_too_few_samples_rejected(self):
        gen = np.random.default_rng(7)
        samples = [(e, 1) for e in sample_realizable_edges(gen, 10)]
        with pytest.raises(ValueError):
            interpolate_homogeneous(samples, degree=6)

    def test_degenerate_samples_ill_conditioned(self):
        # Enough rows, but all identical: the normal system is singular.
        gen = np.random.default_rng(7)
        e = sample_realizable_edges(gen, 1)[0]
        samples = [(e, 1)] * 30
        with pytest.raises(IllConditioned):
            interpolate_homogeneous(samples, degree=2)

    def test_non_polynomial_target_raises(self):
        gen = np.random.default_rng(8)
        samples = [
            (e, math.sqrt(float(sum(e)))) for e in sample_realizable_edges(gen, 60)
        ]
        with pytest.raises(ResidualTooLarge):
            interpolate_homogeneous(samples, degree=2)

    def test_sample_realizability(self):
        gen = np.random.default_rng(9)
        for e in sample_realizable_edges(gen, 50):
            assert all(isinstance(x, Fraction) and x > 0 for x in e)
            assert cayley_menger_144V2(EdgeLengths4(*e)) >= 0
            assert sum(e) / 6 == 1  # unit mean edge
