import random
from fractions import Fraction

import pytest

from cgclosure.bodies import Ball, Image, Sliced, SlicedBall, SlicedPolytope, VPolytope, norm2
from cgclosure.errors import EmptyBody, IrrationalFacePoint
from cgclosure.exact import dot
from cgclosure.lattice import UnimodularMatrix

from conftest import R2, ball, segment, triangle, unit_square


def test_support_examples():
    assert segment().support((1, -1)) == 0
    assert ball().support((1, 1)) == 1 + R2
    assert ball().support((1, 0)) == Fraction(3, 2)
    assert triangle().support((1, 1)) == Fraction(3, 2)


def test_exposed_face_examples():
    f = segment().exposed_face((-R2, 1))
    assert len(f.face.vertices) == 2 and f.support_value == 0
    f = unit_square().exposed_face((0, 1))
    assert set(f.face.vertices) == {(0, 1), (1, 1)} and f.support_value == 1
    f = Ball((0, 0), 1).exposed_face((1, 0))
    assert f.face.vertices == ((1, 0),) and f.support_value == 1


def test_ball_face_for_irrational_direction():
    with pytest.raises(IrrationalFacePoint):
        Ball((0, 0), 1).exposed_face((1, R2))


def test_contains_examples():
    assert ball().contains((0, 0))
    assert segment().contains((Fraction(1, 2), R2 / 2))
    assert not Ball((0, 0), 1).contains((1, 1))
    assert not segment().contains((Fraction(1, 2), Fraction(1, 2)))


def test_relative_boundary_examples():
    assert Ball((0, 0), 1).on_relative_boundary((1, 0)) == (1, 0)
    assert unit_square().on_relative_boundary((Fraction(1, 2), Fraction(1, 2))) is None
    d = segment().on_relative_boundary((0, 0))
    # direction along minus the segment, up to positive scaling
    assert d[0] < 0 and d[1] == d[0] * R2
    assert segment().on_relative_boundary((Fraction(1, 2), R2 / 2)) is None


def test_affine_hull_examples():
    p, basis = segment().affine_hull()
    assert p == (0, 0) and len(basis) == 1 and basis[0][1] == basis[0][0] * R2
    p, basis = ball().affine_hull()
    assert p == (Fraction(1, 2), Fraction(1, 2)) and len(basis) == 2
    pt = VPolytope([(Fraction(1, 2), Fraction(1, 2))])
    assert pt.affine_hull() == ((Fraction(1, 2), Fraction(1, 2)), []) and pt.dim == 0


def test_duplicate_vertices_removed():
    assert len(VPolytope([(0, 0), (0, 0), (1, 1)]).vertices) == 2


def _random_unimodular(rng: random.Random, n: int) -> UnimodularMatrix:
    M = UnimodularMatrix.identity(n)
    for _ in range(4):
        i, j = rng.sample(range(n), 2)
        E = [[int(a == b) for b in range(n)] for a in range(n)]
        E[i][j] = rng.choice([-2, -1, 1, 2])
        M = UnimodularMatrix(E) @ M
    return M


BODIES = [triangle, ball, segment, unit_square]


@pytest.mark.parametrize("make", BODIES)
def test_support_unimodular_equivariance(make):
    rng = random.Random(3)
    K = make()
    for _ in range(5):
        T = _random_unimodular(rng, 2)
        TK = Image(K, T.matrix)
        direct = K.linear_image(T.matrix)
        for _ in range(10):
            v = (rng.randint(-4, 4), rng.randint(-4, 4))
            w = T.inv().transpose().apply(v)
            assert TK.support(w) == K.support(v)
            assert direct.support(w) == K.support(v)


@pytest.mark.parametrize("make", BODIES)
def test_exposed_faces_are_faces(make):
    K = make()
    for v in [(1, 0), (0, 1), (-1, -1), (2, -1), (1, 3)]:
        f = K.exposed_face(v)
        assert f.check()
        assert all(K.contains(x) for x in f.face.vertices)


@pytest.mark.parametrize("make", BODIES)
def test_contains_consistent_with_support(make):
    rng = random.Random(11)
    K = make()
    points = [tuple(Fraction(rng.randint(-4, 8), 4) for _ in range(2)) for _ in range(30)]
    points += [K.exposed_face(v).face.vertices[0] for v in [(1, 0), (0, -1)]]
    inside = [x for x in points if K.contains(x)]
    assert inside
    for _ in range(100):
        a = (rng.randint(-5, 5), rng.randint(-5, 5))
        h = K.support(a)
        assert all(dot(a, x) <= h for x in inside)


@pytest.mark.parametrize("make", [ball, triangle, segment])
def test_faces_converge_along_direction_sequence(make):
    K = make()
    target = (1, 0) if make is not segment else (1, 1)
    face = K.exposed_face(target).face
    dists = []
    for i in range(1, 8):
        v = (Fraction(1), Fraction(1, 2**i)) if make is not segment else (1, 1 + Fraction(1, 2**i))
        pts = K.exposed_face(v).face.vertices
        # squared distance to the nearest target-face vertex; target faces here are single points or edges
        dists.append(max(min(norm2(tuple(a - b for a, b in zip(p, q))) for q in face.vertices) for p in pts))
    assert all(a >= b for a, b in zip(dists, dists[1:]))
    assert dists[-1] < dists[0] or dists[0] == 0


def test_sliced_polytope():
    S = Sliced(unit_square(), [((1, 1), 1)])
    assert isinstance(S, SlicedPolytope)
    assert set(S.vertices) == {(0, 0), (1, 0), (0, 1)}
    with pytest.raises(EmptyBody):
        Sliced(unit_square(), [((1, 1), -1)])


def test_sliced_ball_support():
    S = Sliced(Ball((0, 0), 1), [((1, 0), 0)])
    assert isinstance(S, SlicedBall)
    assert S.support((1, 0)) == 0
    assert S.support((-1, 0)) == 1
    assert S.support((1, 1)) == 1
    assert S.contains((0, Fraction(1, 2)))
    assert not S.contains((Fraction(1, 2), 0))


def test_sliced_ball_radius_and_face():
    S = Sliced(Ball((0, 0), 2), [((0, 1), 1)])
    assert S.support((0, 1)) == 1
    f = S.exposed_face((-1, 0))
    assert f.face.vertices == ((-2, 0),)


def test_boundary_distance_bounds():
    K = ball()
    d = K.boundary_distance_lower((0, 0))
    assert 0 < d <= 1 - R2 / 2
    T = triangle()
    d = T.boundary_distance_lower((Fraction(1, 4), Fraction(1, 4)))
    assert 0 < d <= Fraction(1, 4)
