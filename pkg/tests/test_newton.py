import itertools
import random
from fractions import Fraction

import pytest

from fsig.newton import (
    clip,
    clip_and_volume,
    closure_membership,
    lattice_count,
    monomial_signature,
    newton_polyhedron,
)

from _oracles import brute_lattice_count, shoelace_area

CUSP = [(3, 0), (0, 2)]


def cusp_pair_volume(t: Fraction) -> Fraction:
    """Piecewise closed form for the <x^3, y^2> pair, used as the oracle."""
    t = Fraction(t)
    if t <= Fraction(1, 3):
        return 1 - 3 * t * t
    if t <= Fraction(1, 2):
        return Fraction(4, 3) - 2 * t
    if t <= Fraction(5, 6):
        return Fraction(25, 12) - 5 * t + 3 * t * t
    return Fraction(0)


def test_newton_polyhedron_two_point_facet():
    P = newton_polyhedron(CUSP)
    assert P.facets == (((2, 3), 6),)
    for pt in CUSP:
        assert 2 * pt[0] + 3 * pt[1] == 6


def test_newton_polyhedron_maximal_ideal():
    P = newton_polyhedron([(1, 0), (0, 1)])
    assert P.facets == (((1, 1), 1),)


def test_newton_polyhedron_drops_interior_point():
    P = newton_polyhedron([(2, 0), (1, 1), (0, 2)])
    assert P.facets == (((1, 1), 2),)


def test_newton_polyhedron_axis_parallel_facets():
    P = newton_polyhedron([(1, 2)])
    assert set(P.facets) == {((1, 0), 1), ((0, 1), 2)}


def test_newton_polyhedron_rejects_bad_input():
    with pytest.raises(ValueError):
        newton_polyhedron([])
    with pytest.raises(ValueError):
        newton_polyhedron([(1, -1)])
    with pytest.raises(ValueError):
        newton_polyhedron([(1, 0), (1, 0, 0)])


def test_clip_and_volume_pinned_values():
    P = newton_polyhedron(CUSP)
    assert clip_and_volume(P, Fraction(1, 4)) == Fraction(13, 16)
    assert clip_and_volume(P, Fraction(3, 5)) == Fraction(49, 300)
    assert clip_and_volume(P, 0) == 1
    assert clip_and_volume(P, Fraction(5, 6)) == 0
    assert clip_and_volume(P, 2) == 0


def test_clip_vertices_are_tight_and_feasible():
    P = newton_polyhedron(CUSP)
    poly = clip(P, Fraction(1, 4))
    assert len(poly.vertices) == 5
    for v in poly.vertices:
        tight = sum(
            1
            for normal, rhs in poly.halfspaces
            if sum(a * u for a, u in zip(normal, v)) == rhs
        )
        assert tight >= 2


def test_triangulation_matches_shoelace_on_sweep():
    P = newton_polyhedron(CUSP)
    for k in range(0, 51):
        t = Fraction(k, 60)
        poly = clip(P, t)
        assert poly.volume() == shoelace_area(poly.vertices)


def test_monomial_signature_piecewise_formula_exact():
    for k in range(0, 51):
        t = Fraction(k, 60)
        assert monomial_signature(CUSP, t) == cusp_pair_volume(t)


def test_monomial_signature_examples():
    assert monomial_signature(CUSP, Fraction(2, 5)) == Fraction(8, 15)
    assert monomial_signature(CUSP, Fraction(5, 6)) == 0
    assert monomial_signature([(1, 0), (0, 1)], 1) == Fraction(1, 2)


def test_volume_monotone_in_t():
    P = newton_polyhedron([(2, 1), (0, 3)])
    values = [clip_and_volume(P, Fraction(k, 12)) for k in range(0, 25)]
    assert values[0] == 1
    for a, b in zip(values, values[1:]):
        assert b <= a
    assert values[-1] == 0


def test_lattice_count_examples():
    P = newton_polyhedron(CUSP)
    assert lattice_count(P, Fraction(1, 2), 3) == 7
    assert lattice_count(P, Fraction(1, 2), 9) == 37
    assert lattice_count(P, 0, 4) == 25


def test_lattice_count_matches_brute_force():
    rng = random.Random(17)
    P = newton_polyhedron(CUSP)
    for _ in range(25):
        t = Fraction(rng.randint(0, 12), rng.randint(1, 12))
        q = rng.randint(1, 20)
        assert lattice_count(P, t, q) == brute_lattice_count(P.facets, t, q, 2)


def test_closure_membership_examples():
    assert closure_membership((2, 1), CUSP, 1)
    assert not closure_membership((1, 1), CUSP, 1)
    for pt in CUSP:
        assert closure_membership(pt, CUSP, 1)


def test_closure_membership_scaling():
    assert closure_membership((1, 1), CUSP, Fraction(5, 6))
    assert not closure_membership((1, 1), CUSP, Fraction(6, 7))


def test_lattice_volume_envelope():
    P = newton_polyhedron(CUSP)
    for t in (Fraction(1, 4), Fraction(1, 2), Fraction(2, 3)):
        vol = clip_and_volume(P, t)
        errors = {
            e: abs(Fraction(lattice_count(P, t, 3**e), 9**e) - vol) for e in (1, 2, 3, 4)
        }
        C = max(errors[1] * 3, errors[2] * 9)
        for e in (3, 4):
            assert errors[e] <= C / 3**e


def test_three_dimensional_volumes():
    # <x*y*z>: the region is u >= (t,t,t), so the clipped volume is (1-t)^3,
    # matching the simple-normal-crossings product formula
    P = newton_polyhedron([(1, 1, 1)])
    assert set(P.facets) == {((1, 0, 0), 1), ((0, 1, 0), 1), ((0, 0, 1), 1)}
    assert clip_and_volume(P, Fraction(1, 2)) == Fraction(1, 8)
    assert clip_and_volume(P, Fraction(1, 3)) == Fraction(8, 27)
    # maximal ideal at t = 1: the cube minus the unit corner simplex
    P2 = newton_polyhedron([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert clip_and_volume(P2, 1) == 1 - Fraction(1, 6)


def test_volume_agrees_with_splitting_sequence_envelope():
    # the level sequence of the plain-power pair family drifts toward the
    # exact clipped volume; at four levels the tail fit already brackets it
    from fsig.groebner import Ideal
    from fsig.poly import PolyRing
    from fsig.signature import signature_sequence
    from fsig.systems import PairSystem

    vol = monomial_signature(CUSP, Fraction(2, 5))
    assert vol == Fraction(8, 15)
    R = PolyRing.make(3, ["x", "y"])
    pair = PairSystem(R, Ideal(R, [R.parse("x^3"), R.parse("y^2")]), Fraction(2, 5))
    rep = signature_sequence(pair, 4, method="linear")
    assert abs(rep.rows[-1].s_e - vol) <= rep.error_envelope
    assert abs(rep.estimate - vol) <= rep.error_envelope


def test_dimension_cap():
    pts = [tuple(1 if j == i else 0 for j in range(7)) for i in range(7)]
    P = newton_polyhedron(pts)
    with pytest.raises(ValueError):
        clip_and_volume(P, Fraction(1, 2))
