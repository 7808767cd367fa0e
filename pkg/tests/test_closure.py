import itertools
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgclosure.bodies import Ball, VPolytope
from cgclosure.closure import (
    approx_boundary,
    approx_inside,
    brute_force_closure,
    cg_closure,
    face_closure_equals_restriction_check,
    lift_cut,
    lift_face_closure,
    separate_irrational,
)
from cgclosure.errors import BudgetExhausted
from cgclosure.lattice import rational_dimension
from cgclosure.polyhedra import Cut, CutSet, box_directions, cut_for, enumerate_vertices_bruteforce

from conftest import R2, R3, ball, segment, to_mp, triangle, unit_square


def _q(*pts):
    return {tuple(Fraction(x) for x in p) for p in pts}


def _integer_points(K, radius=6):
    n = K.n
    return [p for p in itertools.product(range(-radius, radius + 1), repeat=n) if K.contains(p)]


def _mp_support(K, a):
    return max(sum(to_mp(x) * to_mp(y) for x, y in zip(v, a)) for v in K.vertices)


# -- lift_cut -------------------------------------------------------------------


def _holds_on_line(base, d, a, rhs, g, grhs):
    """Cut ``a x <= rhs`` implies ``g x <= grhs`` on the line ``base + s d`` (sampled densely)."""
    for k in range(-400, 401):
        s = Fraction(k, 8)
        x = [b + s * e for b, e in zip(base, d)]
        if sum(p * q for p, q in zip(a, x)) <= rhs and sum(p * q for p, q in zip(g, x)) > grhs:
            return False
    return True


def test_lift_cut_irrational_triangle():
    K = VPolytope([(0, 0), (2, 0), (0, R2)])
    wit = lift_cut(K, (1, 0), (0, 1))
    assert not wit.vacuous
    rhs = math.floor(mpmath.floor(_mp_support(K, wit.w_prime)))
    # face is the vertex (2,0); aff_I(H_v) is the line x1 = 2
    assert _holds_on_line((2, 0), (0, 1), wit.w_prime, rhs, (0, 1), 0)


def test_lift_cut_trivial_on_square():
    wit = lift_cut(unit_square(), (0, 1), (1, 0))
    assert wit.w_prime == (1, 0) and wit.n_dirichlet == 0


def test_lift_cut_vacuous_face():
    # H_v is x1 + x2 = 1 + sqrt(2): no integer points
    wit = lift_cut(segment(), (1, 1), (1, 0))
    assert wit.vacuous and wit.w_prime == (1, 0)


def test_lift_cut_epsilon_window():
    K = VPolytope([(0, 0), (2, 0), (0, R2)])
    wit = lift_cut(K, (1, 0), (0, 1))
    hF = 0  # support of the face {(2,0)} in direction (0,1)
    # the direction is rescaled to (1/2, 0), whose support is 1
    gap = _mp_support(K, wit.w_prime) - wit.n_dirichlet * 1 - hF
    assert abs(gap) <= to_mp(wit.epsilon) + mpmath.mpf(10) ** -40


# -- separate_irrational ----------------------------------------------------------


SEPARATION_CASES = {
    "segment": (segment(), (-R2, 1)),
    "shifted": (VPolytope([(0, Fraction(1, 3)), (1, R2 + Fraction(1, 3))]), (-R2, 1)),
    "triangle": (VPolytope([(0, 0), (R3, 0), (0, 1)]), (1, R3)),
}


def _separation_vertices(K, cert):
    rows = [(c.a, c.rhs) for c in cert.cuts(K)] + [(a, math.floor(K.support(a))) for a in box_directions(K.n)]
    return enumerate_vertices_bruteforce(rows, K.n)


@pytest.mark.parametrize("name", sorted(SEPARATION_CASES))
def test_separation_certificate(name):
    K, v = SEPARATION_CASES[name]
    cert = separate_irrational(K, v)
    assert len(cert.cut_vectors) <= rational_dimension(v) + 1
    h = _mp_support(K, v)
    combo = [sum(to_mp(lam) * a[i] for lam, a in zip(cert.lambdas, cert.cut_vectors)) for i in range(K.n)]
    assert all(abs(c - to_mp(cert.multiple) * to_mp(x)) < mpmath.mpf(10) ** -40 for c, x in zip(combo, v))
    floors = sum(to_mp(lam) * math.floor(_mp_support(K, a)) for lam, a in zip(cert.lambdas, cert.cut_vectors))
    assert floors <= to_mp(cert.multiple) * h + mpmath.mpf(10) ** -40
    for x in _separation_vertices(K, cert):
        val = sum(to_mp(p) * to_mp(q) for p, q in zip(v, x))
        assert val <= h + mpmath.mpf(10) ** -40


def test_separation_segment_meets_hyperplane_at_origin():
    K, v = SEPARATION_CASES["segment"]
    verts = _separation_vertices(K, separate_irrational(K, v))
    on_h = [x for x in verts if abs(sum(to_mp(p) * to_mp(q) for p, q in zip(v, x))) < mpmath.mpf(10) ** -40]
    assert on_h == [(0, 0)]


def test_separation_case_two_is_strict():
    K, v = SEPARATION_CASES["shifted"]
    cert = separate_irrational(K, v)
    assert cert.strict and cert.trace.case == 2
    floors = sum(to_mp(lam) * math.floor(_mp_support(K, a)) for lam, a in zip(cert.lambdas, cert.cut_vectors))
    assert floors < to_mp(cert.multiple) * _mp_support(K, v)
    # H_v holds no integer point at all, so nothing of the polyhedron may touch it
    h = _mp_support(K, v)
    for x in _separation_vertices(K, cert):
        assert sum(to_mp(p) * to_mp(q) for p, q in zip(v, x)) < h


def test_separation_rational_direction_is_one_cut():
    cert = separate_irrational(unit_square(), (1, 0))
    assert cert.cut_vectors == ((1, 0),)
    assert [c.rhs for c in cert.cuts(unit_square())] == [1]


# -- lift_face_closure --------------------------------------------------------------


def test_lift_face_closure_square_top_edge():
    K = unit_square()
    face_cuts = CutSet([Cut((1, 0), 1), Cut((-1, 0), 0), Cut((0, 1), 1), Cut((0, -1), -1)])
    S = lift_face_closure(K, (0, 1), face_cuts)
    rows = [(c.a, c.rhs) for c in S]
    on_top = [x for x in enumerate_vertices_bruteforce(rows, 2) if x[1] == 1]
    assert set(on_top) == _q((0, 1), (1, 1))


def test_lift_face_closure_ball_empty_face():
    K = ball()
    S = lift_face_closure(K, (1, 0), CutSet())
    rows = [(c.a, c.rhs) for c in S]
    assert all(x[0] < Fraction(3, 2) for x in enumerate_vertices_bruteforce(rows, 2))


def test_lift_face_closure_segment_pins_origin():
    K = segment()
    S = lift_face_closure(K, (-R2, 1), cg_closure(VPolytope([(0, 0)])).generating_cuts)
    verts = enumerate_vertices_bruteforce([(c.a, c.rhs) for c in S], 2)
    # a rational point lies on y = sqrt(2) x only at the origin
    assert (0, 0) in verts
    assert all(-to_mp(R2) * x[0] + x[1] < 0 for x in verts if x != (0, 0))


# -- approximations and the closure ---------------------------------------------


def test_approx_inside_ball_gives_square():
    S = approx_inside(ball())
    assert all(a in S for a in box_directions(2))
    verts = enumerate_vertices_bruteforce([(c.a, c.rhs) for c in S], 2)
    assert set(verts) == _q((0, 0), (1, 0), (0, 1), (1, 1))


def test_approx_inside_square_is_box():
    S = approx_inside(unit_square())
    assert set(enumerate_vertices_bruteforce([(c.a, c.rhs) for c in S], 2)) == _q((0, 0), (1, 0), (0, 1), (1, 1))


def test_approx_inside_point_without_integers_is_empty():
    S = approx_inside(VPolytope([(Fraction(1, 2), Fraction(1, 2))]))
    assert enumerate_vertices_bruteforce([(c.a, c.rhs) for c in S], 2) == []


def test_approx_boundary_ball_adds_nothing_new():
    K = ball()
    inside = approx_inside(K)
    extra = approx_boundary(K, inside)
    rows = [(c.a, c.rhs) for c in inside | extra]
    assert set(enumerate_vertices_bruteforce(rows, 2)) == _q((0, 0), (1, 0), (0, 1), (1, 1))


def test_approx_boundary_square_keeps_square():
    K = unit_square()
    inside = approx_inside(K)
    rows = [(c.a, c.rhs) for c in inside | approx_boundary(K, inside)]
    assert set(enumerate_vertices_bruteforce(rows, 2)) == _q((0, 0), (1, 0), (0, 1), (1, 1))


@pytest.mark.parametrize(
    "make, expected",
    [
        (triangle, _q((0, 0), (1, 0), (0, 1))),
        (ball, _q((0, 0), (1, 0), (0, 1), (1, 1))),
        (segment, _q((0, 0))),
    ],
)
def test_closure_examples(make, expected):
    K = make()
    res = cg_closure(K)
    assert set(res.polyhedron.vertices) == expected
    assert res.polyhedron.equals(brute_force_closure(K, 2).polyhedron)


def test_closure_of_point_without_integers_is_empty():
    res = cg_closure(VPolytope([(Fraction(1, 2), Fraction(1, 2))]))
    assert res.empty


def test_closure_irrational_triangle():
    K = VPolytope([(0, 0), (R2, 0), (0, R3)])
    res = cg_closure(K)
    assert set(res.polyhedron.vertices) == _q((0, 0), (1, 0), (0, 1))


def test_closure_three_dimensional_simplex():
    h = Fraction(5, 2)
    K = VPolytope([(0, 0, 0), (h, 0, 0), (0, h, 0), (0, 0, h)])
    res = cg_closure(K)
    assert set(res.polyhedron.vertices) == _q((0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2))


def test_closure_budget_is_enforced():
    with pytest.raises(BudgetExhausted):
        cg_closure(VPolytope([(Fraction(1, 3), 0), (R2 + 1, Fraction(1, 2)), (1, R3 + 1), (0, R2)]), budget=3)


def test_closure_trace_on_ball():
    res = cg_closure(ball())
    t = res.trace
    assert t.delta > 0 and t.R == 1 / t.delta
    assert t.enumerated_w_count == len(t.fiber_minimizers) > 0


# -- oracle ----------------------------------------------------------------------------


def test_brute_force_triangle_chain():
    K = triangle()
    P1, P2 = brute_force_closure(K, 1).polyhedron, brute_force_closure(K, 2).polyhedron
    assert P2 <= P1
    assert set(P2.vertices) == _q((0, 0), (1, 0), (0, 1))


def test_brute_force_ball_stable():
    K = ball()
    P1, P2 = brute_force_closure(K, 1).polyhedron, brute_force_closure(K, 2).polyhedron
    assert set(P1.vertices) == _q((0, 0), (1, 0), (0, 1), (1, 1)) and P1.equals(P2)


def test_brute_force_empty_point():
    assert brute_force_closure(VPolytope([(Fraction(1, 2), Fraction(1, 2))]), 2).empty


def test_brute_force_cut_count():
    assert len(brute_force_closure(triangle(), 1).generating_cuts) == 8
    assert len(brute_force_closure(triangle(), 2).generating_cuts) == 24


@pytest.mark.parametrize(
    "make, v",
    [(unit_square, (0, 1)), (ball, (1, 0)), (segment, (-R2, 1))],
)
def test_face_restriction_check(make, v):
    assert face_closure_equals_restriction_check(make(), v, 2)


# -- properties ----------------------------------------------------------------------------


coord = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(coord, coord), min_size=1, max_size=4, unique=True))
def test_closure_sandwich_on_random_polygons(points):
    K = VPolytope(points)
    P = cg_closure(K).polyhedron
    # every integer point of K survives, nothing leaves K, and all cuts beat any truncation
    assert all(P.contains_point(z) for z in _integer_points(K, 4))
    assert all(K.contains(x) for x in P.vertices)
    assert P <= brute_force_closure(K, 2).polyhedron


@settings(max_examples=10, deadline=None)
@given(
    st.fractions(min_value=-2, max_value=2, max_denominator=4),
    st.fractions(min_value=-2, max_value=2, max_denominator=4),
    st.fractions(min_value=Fraction(1, 2), max_value=2, max_denominator=4),
)
def test_closure_of_random_balls_matches_integer_points(cx, cy, r):
    K = Ball((cx, cy), r)
    P = cg_closure(K).polyhedron
    pts = _integer_points(K, 5)
    assert all(P.contains_point(z) for z in pts)
    assert P <= brute_force_closure(K, 3).polyhedron


def test_cut_for_agrees_with_high_precision_support():
    K = VPolytope([(0, 0), (R2, 0), (0, R3)])
    for a in itertools.product(range(-3, 4), repeat=2):
        assert cut_for(K, a).rhs == (int(mpmath.floor(_mp_support(K, a))) if any(a) else 0)
