import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from asymlin import (
    INF,
    AsymNorm,
    DimensionError,
    InputError,
    NormedCone,
    Polyhedron,
    cone_quasi_metric,
    conjugate,
    converges,
    eval_norm,
    finiteness_classes,
    l1_norm,
    linf_norm,
    quasi_metric,
    symmetrize,
    u_norm,
    unit_ball,
)

from conftest import norms, rationals


def test_u_norm_values():
    u = u_norm()
    assert u((3,)) == 3 and u((-2,)) == 0
    assert quasi_metric(u, (1,), (4,)) == 3 and quasi_metric(u, (4,), (1,)) == 0
    assert symmetrize(u)((-2,)) == 2


def test_invalid_generators():
    with pytest.raises(InputError):
        AsymNorm(2, ((1, 0),))  # p(-e1) < 0
    with pytest.raises(DimensionError):
        AsymNorm(2, ((1,),))


@given(norms(), st.data())
def test_axioms(p, data):
    x = data.draw(st.tuples(*[rationals] * p.dim))
    y = data.draw(st.tuples(*[rationals] * p.dim))
    t = data.draw(rationals.filter(lambda v: v >= 0))
    assert p(x) >= 0
    assert p(tuple(t * a for a in x)) == t * p(x)
    assert p(tuple(a + b for a, b in zip(x, y))) <= p(x) + p(y)
    if p(x) == 0 and p(tuple(-a for a in x)) == 0:
        assert not any(x)


@given(norms(), st.data())
def test_conjugation_and_symmetrization(p, data):
    x = data.draw(st.tuples(*[rationals] * p.dim))
    y = data.draw(st.tuples(*[rationals] * p.dim))
    pb, ps = conjugate(p), symmetrize(p)
    assert quasi_metric(pb, x, y) == quasi_metric(p, y, x)
    assert quasi_metric(ps, x, y) == max(quasi_metric(p, x, y), quasi_metric(p, y, x))
    assert set(conjugate(pb).generators) == set(p.generators)


@given(norms())
def test_unit_ball_membership(p):
    rng = random.Random(3)
    B = unit_ball(p)
    for _ in range(30):
        x = tuple(Fraction(rng.randint(-8, 8), 4) for _ in range(p.dim))
        assert B.contains(x) == (eval_norm(p, x) <= 1)


def test_standard_norms():
    assert linf_norm(2)((1, -3)) == 3
    assert l1_norm(3)((1, -3, Fraction(1, 2))) == Fraction(9, 2)


def test_converges_asymmetric():
    # x_n = -1/n tends to 0 from both sides; x_n = n only backwards
    u = u_norm()
    eps = [Fraction(1, 2), Fraction(1, 8)]
    rep = converges(u, [(Fraction(-1, n),) for n in range(1, 30)], (0,), eps)
    assert rep.d_convergent and rep.dbar_convergent
    far = converges(u, [(Fraction(n),) for n in range(1, 30)], (0,), eps)
    assert not far.d_convergent and far.dbar_convergent


def test_cone_metric_and_finiteness():
    cone = NormedCone(Polyhedron(1, h_rep=(((-1,), 0),)), u_norm())
    assert cone_quasi_metric(cone, (1,), (3,)) == 2
    assert cone_quasi_metric(cone, (3,), (1,)) == INF
    assert NormedCone(Polyhedron(1, h_rep=(((-1,), 0),)), u_norm()).t1
    assert not NormedCone(Polyhedron(1, h_rep=(((1,), 0),)), u_norm()).t1
    rep = finiteness_classes([(0,), (1,), (2,)], lambda x, y: cone_quasi_metric(cone, x, y))
    assert not rep.symmetric
    assert rep.classes == ((0,), (1,), (2,))
