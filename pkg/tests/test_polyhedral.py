import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from asymlin import CapacityError, Limits, LpStatus, Polyhedron, box, conv_decompose, enumerate_v_rep, polar, solve_lp
from asymlin.polyhedral import h_to_v_bruteforce, pulling_triangulation, recession_cone
from asymlin._rational import dot

from conftest import rationals


@st.composite
def bounded_h_polytopes(draw):
    """A box cut by a few random halfspaces through a point of the box."""
    n = draw(st.integers(1, 3))
    rows = list(box(n, 2).h_rep)
    for _ in range(draw(st.integers(0, 3))):
        a = draw(st.tuples(*[st.integers(-3, 3)] * n))
        if any(a):
            rows.append((a, Fraction(draw(st.integers(1, 4)), 2)))
    return Polyhedron(n, h_rep=tuple(rows))


@given(bounded_h_polytopes(), st.data())
def test_lp_matches_vertex_bruteforce(P, data):
    c = data.draw(st.tuples(*[rationals] * P.dim))
    out = solve_lp(c, P)
    verts = h_to_v_bruteforce(P)
    assert out.status is LpStatus.OPTIMAL
    assert out.optimum == max(dot(c, v) for v in verts)
    assert P.contains(out.witness) and dot(c, out.witness) == out.optimum


@given(bounded_h_polytopes())
def test_double_description_matches_bruteforce(P):
    V = enumerate_v_rep(P)
    assert set(V.vertices) == set(h_to_v_bruteforce(P))
    assert V.rays == ()


@given(bounded_h_polytopes())
def test_round_trip_membership(P):
    V = enumerate_v_rep(P)
    H = polar(enumerate_v_rep(polar(V)))
    rng = random.Random(7)
    for _ in range(60):
        x = tuple(Fraction(rng.randint(-9, 9), 4) for _ in range(P.dim))
        assert P.contains(x) == (conv_decompose(V, x) is not None) == H.contains(x)


def test_unbounded_and_infeasible():
    half = Polyhedron(2, h_rep=(((1, 0), 1),))
    out = solve_lp((1, 1), half)
    assert out.status is LpStatus.UNBOUNDED
    assert dot((1, 1), out.witness) > 0 and half.recession_contains(out.witness)
    empty = Polyhedron(1, h_rep=(((1,), 0), ((-1,), -1)))
    assert solve_lp((1,), empty).status is LpStatus.INFEASIBLE


def test_rays_and_lineality():
    # strip |y| <= 1 in the plane: lineality along x
    strip = Polyhedron(2, h_rep=(((0, 1), 1), ((0, -1), 1)))
    V = enumerate_v_rep(strip)
    assert {(1, 0), (-1, 0)} <= set(V.rays)
    assert recession_cone(strip).contains((5, 0)) and not recession_cone(strip).contains((0, 1))


def test_polar_of_cube_is_cross_polytope():
    P = enumerate_v_rep(polar(box(3)))
    expected = {tuple(s if i == k else 0 for i in range(3)) for k in range(3) for s in (1, -1)}
    assert set(P.vertices) == expected


def test_triangulation_covers_square():
    sq = enumerate_v_rep(box(2))
    simplices = pulling_triangulation(sq)
    assert len(simplices) == 2
    area = sum(abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) / 2 for a, b, c in simplices)
    assert area == 4


def test_dimension_cap():
    with pytest.raises(CapacityError):
        enumerate_v_rep(box(4), Limits(dim_cap=3))


def test_conv_decompose_weights():
    tri = Polyhedron(2, v_rep=(((0, 0), (2, 0), (0, 2)), ((1, 1),)))
    lam, mu = conv_decompose(tri, (3, 3))
    assert sum(lam) == 1 and all(w >= 0 for w in itertools.chain(lam, mu))
    assert conv_decompose(tri, (-1, 0)) is None
