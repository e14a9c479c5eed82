import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from asymlin import (
    INF,
    DomainError,
    Functional,
    LinearOp,
    adjoint,
    adjoint_norm_by_vertices,
    conjugate,
    dual_ball,
    dual_norm,
    enumerate_v_rep,
    linf_norm,
    norming_functional,
    op_norm,
    op_norm_witness,
    schauder_linear_check,
    star_norm,
    symmetrize,
    u_norm,
    unit_ball,
)
from asymlin.polyhedral import h_to_v_bruteforce

from conftest import norms


def _brute_op_norm(A):
    """sup q(Ax) over B_p from brute-force vertices and the recession cone."""
    B = enumerate_v_rep(unit_ball(A.source))
    if any(A.target(A(r)) > 0 for r in B.rays):
        return INF
    return max(A.target(A(v)) for v in B.vertices)


@st.composite
def linear_ops(draw):
    p, q = draw(norms()), draw(norms())
    m = tuple(tuple(Fraction(draw(st.integers(-4, 4)), 2) for _ in range(p.dim)) for _ in range(q.dim))
    return LinearOp(m, p, q)


def test_identity_and_negation():
    I = LinearOp(((1, 0), (0, 1)), linf_norm(2), linf_norm(2))
    assert op_norm(I) == 1 and op_norm(adjoint(I)) == 1
    N = LinearOp(((-1,),), u_norm(), u_norm())
    value, ray = op_norm_witness(N)
    assert value == INF and ray == (-1,)


@given(linear_ops())
def test_op_norm_matches_bruteforce(A):
    assert op_norm(A) == _brute_op_norm(A)


@given(linear_ops())
def test_conjugate_and_symmetric_norms(A):
    n = op_norm(A)
    assert op_norm(A.with_norms(conjugate(A.source), conjugate(A.target))) == n
    assert op_norm(A.with_norms(symmetrize(A.source), symmetrize(A.target))) <= n


@given(linear_ops())
def test_adjoint_norm_equality(A):
    n = op_norm(A)
    adj = op_norm(adjoint(A))
    assert adj == n == adjoint_norm_by_vertices(A) or (n == INF and adj == INF)


@given(linear_ops())
def test_smallest_constant(A):
    n = op_norm(A)
    if n in (0, INF):
        return
    rng = random.Random(0)
    for _ in range(20):
        x = tuple(Fraction(rng.randint(-6, 6), 3) for _ in range(A.source.dim))
        assert A.target(A(x)) <= n * A.source(x)
    # any smaller constant fails at the witness vertex
    B = enumerate_v_rep(unit_ball(A.source))
    best = max(B.vertices, key=lambda v: A.target(A(v)))
    assert A.target(A(best)) > (n - Fraction(1, 1000)) * A.source(best)


def test_dual_ball_and_dual_norms():
    assert set(enumerate_v_rep(dual_ball(u_norm())).vertices) == {(0,), (1,)}
    assert dual_norm(Functional((2,), u_norm())) == 2
    assert dual_norm(Functional((-1,), u_norm())) == INF
    assert star_norm(Functional((-1,), u_norm())) == 1


@given(norms())
def test_dual_ball_vertices_against_bruteforce(p):
    B = dual_ball(p)
    assert B.rays == ()
    # every generator of p lies in its dual ball, and vertices are generators
    assert set(B.vertices) <= set(p.generators)
    for g in p.generators:
        assert dual_norm(Functional(g, p)) <= 1


def test_norming_functional():
    phi = norming_functional(linf_norm(2), (1, -3))
    assert phi.vector == (0, -1) and phi.dual_norm == 1
    with pytest.raises(DomainError):
        norming_functional(u_norm(), (-1,))


def test_schauder_linear():
    I = LinearOp(((1, 0), (0, 1)), linf_norm(2), linf_norm(2))
    res = schauder_linear_check(I, Fraction(1, 2))
    assert res.verified and res.radius == Fraction(3, 8) <= Fraction(3, 2)
    Z = LinearOp(((0, 0), (0, 0)), linf_norm(2), linf_norm(2))
    res = schauder_linear_check(Z, Fraction(1, 2))
    assert res.verified and res.radius == 0
    N = LinearOp(((-1,),), u_norm(), u_norm())
    res = schauder_linear_check(N, Fraction(1, 2))
    assert not res.verified and res.ray == (1,)  # image ray N(-1)


def test_bruteforce_oracle_agrees_on_box():
    assert set(h_to_v_bruteforce(unit_ball(linf_norm(2)))) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}
