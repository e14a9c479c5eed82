import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from asymlin import (
    INF,
    AsymNorm,
    BilinearForm,
    BilinearOp,
    Functional,
    InputError,
    LinearOp,
    Verdict3,
    adjoint_norm,
    alaoglu_desk_check,
    arens_adjoint,
    arens_norm,
    bideal_compose_left,
    bideal_compose_right,
    bilin_norm,
    bilin_norm_alternating,
    bilin_norm_lp,
    bilin_norm_witness,
    bilinear_adjoint,
    check_bilinearity,
    closedness_limit_check,
    enumerate_v_rep,
    form_norm,
    linf_norm,
    operator_distance,
    precompact_class,
    product_net,
    rank_one_form_tensor,
    rank_one_norm,
    rescaling_equivalence_check,
    schauder_bilinear_net,
    sym_norm,
    symmetrize,
    transport_left,
    u_norm,
    unit_ball,
    verify_product_net,
    verify_schauder,
    w2_converges,
)

from conftest import norms

ABS = AsymNorm(1, ((1,), (-1,)))
U = u_norm()
PROD = (((1,),),)  # T(a, b) = ab


def _tensor(draw, k, n1, n2):
    return tuple(
        tuple(tuple(Fraction(draw(st.integers(-4, 4)), 2) for _ in range(n2)) for _ in range(n1)) for _ in range(k)
    )


@st.composite
def bilinear_ops(draw, symmetric_sources=None):
    p1, p2 = draw(norms(2, symmetric_sources)), draw(norms(2, symmetric_sources))
    q = draw(norms(2))
    return BilinearOp(_tensor(draw, q.dim, p1.dim, p2.dim), p1, p2, q)


def _brute_norm(T):
    """Vertex pairs of independently enumerated balls; INF on any growing ray pair."""
    B1, B2 = enumerate_v_rep(unit_ball(T.source1)), enumerate_v_rep(unit_ball(T.source2))
    q = T.target
    for x, y in itertools.chain(
        itertools.product(B1.rays, B2.vertices + B2.rays), itertools.product(B1.vertices, B2.rays)
    ):
        if q(T(x, y)) > 0:
            return INF
    return max(q(T(v, w)) for v in B1.vertices for w in B2.vertices)


# -- worked examples -------------------------------------------------------------


def test_product_on_symmetric_sources():
    T = BilinearOp(PROD, ABS, ABS, U)
    assert bilin_norm(T) == 1 == sym_norm(T)


def test_product_on_u_sources_is_unbounded():
    T = BilinearOp(PROD, U, U, U)
    value, witness = bilin_norm_witness(T)
    assert value == INF and witness[0] == "ray-ray"
    assert sym_norm(T) == 1
    assert precompact_class(T).qs is Verdict3.REFUTED
    assert form_norm(BilinearForm(((1,),), U, U)) == INF


def test_zero_operator():
    T = BilinearOp((((0, 0), (0, 0)),), linf_norm(2), linf_norm(2), U)
    assert bilin_norm(T) == 0 == sym_norm(T)
    c = precompact_class(T)
    assert c.q is Verdict3.CERTIFIED and c.qs is Verdict3.CERTIFIED
    res = schauder_bilinear_net(T, Fraction(1, 4))
    assert res.certified and res.radius == 0 and len(res.form_net) == 1


def test_rescaling_examples():
    T = BilinearOp(PROD, ABS, ABS, U)
    v = rescaling_equivalence_check(T, 4, 2)
    assert v.cond_i and v.cond_ii and v.agree
    # degenerate: p1 = u, x = -1 has p1(x) = 0
    D = BilinearOp(PROD, U, ABS, U)
    assert bilin_norm(D) == INF
    v = rescaling_equivalence_check(D, 1, 1)
    assert v.degenerate and v.agree and not v.cond_i
    with pytest.raises(InputError):
        rescaling_equivalence_check(T, 1, 0)


def test_adjoints_of_product():
    T = BilinearOp(PROD, ABS, ABS, U)
    b = bilinear_adjoint(T, (Fraction(3),))
    assert b.matrix == ((3,),) and form_norm(b) == 3
    assert arens_adjoint(T, (1,), (2,)).vector == (2,)
    assert arens_adjoint(T, (0,), (2,)).vector == (0,)


def test_form_norm_linf():
    assert form_norm(BilinearForm(((1,),), linf_norm(1), linf_norm(1))) == 1


def test_distances():
    T1 = BilinearOp((((1, 0), (0, 1)),), linf_norm(2), linf_norm(2), ABS)
    E = BilinearOp((((1, 1), (1, 1)),), linf_norm(2), linf_norm(2), ABS)
    T2 = T1 + E.scaled(Fraction(1, 2))
    d = operator_distance(T1, T2)
    assert d.forward == d.symmetric == Fraction(1, 2) * bilin_norm(E) == 2
    assert operator_distance(T1, T1).symmetric == 0
    A = BilinearOp(PROD, ABS, ABS, U)
    B = BilinearOp((((0,),),), ABS, ABS, U)
    # with target u the two directions differ only through the sign flip
    assert operator_distance(A, B).forward == operator_distance(B, A).forward == 1


def test_asymmetric_distance():
    p = AsymNorm(1, ((1,), (Fraction(-1, 2),)))
    C = BilinearOp(PROD, p, p, U)  # both balls are [-2, 1]
    Z = C.scaled(0)
    fwd, bwd = operator_distance(C, Z).forward, operator_distance(Z, C).forward
    assert (fwd, bwd) == (2, 4)
    assert operator_distance(C, Z).symmetric == operator_distance(Z, C).symmetric == max(fwd, bwd)


def test_w2_examples():
    E = BilinearForm(((1,),), ABS, ABS)
    probes = [((1,), (1,)), ((-1,), (2,))]
    eps = [Fraction(1, 2), Fraction(1, 10)]
    const = w2_converges([E] * 5, E, probes, eps)
    assert const.convergent and const.agree
    seq = [BilinearForm(((1 + Fraction(1, i),),), ABS, ABS) for i in range(1, 40)]
    assert w2_converges(seq, E, probes, eps).convergent
    alt = [BilinearForm((((-1) ** i,),), ABS, ABS) for i in range(40)]
    rep = w2_converges(alt, E, probes, eps)
    assert not rep.convergent and rep.agree


def test_alaoglu_examples():
    E = BilinearForm(((Fraction(1, 2),),), ABS, ABS)
    assert alaoglu_desk_check(ABS, ABS, [E] * 8).limit.matrix == ((Fraction(1, 2),),)
    alt = [BilinearForm((((-1) ** i * Fraction(1, 2),),), ABS, ABS) for i in range(64)]
    res = alaoglu_desk_check(ABS, ABS, alt)
    assert len({alt[i].matrix for i in res.indices}) == 1
    grow = [BilinearForm(((1 - Fraction(1, i),),), ABS, ABS) for i in range(1, 65)]
    res = alaoglu_desk_check(ABS, ABS, grow)
    assert res.limit.matrix == ((1,),) and res.limit_norm == 1 and res.bound_ok
    with pytest.raises(InputError):
        alaoglu_desk_check(ABS, ABS, [BilinearForm(((2,),), ABS, ABS)])


def test_schauder_linf_sources_u_target():
    q = AsymNorm(2, ((0, 0), (1, 0), (0, 1)))  # u-polyhedral target
    T = BilinearOp(((((1, Fraction(1, 2)), (0, -1))), ((Fraction(-1, 2), 1), (1, 0))), linf_norm(2), linf_norm(2), q)
    eps = Fraction(1, 4)
    res = schauder_bilinear_net(T, eps)
    assert res.certified and res.radius <= 3 * eps
    assert verify_schauder(res, T) <= 3 * eps
    assert verify_product_net(res.image_net, T, samples=20).ok(eps)


def test_bideal_examples():
    T = BilinearOp((((1, 0), (0, 1)), ((0, 1), (1, 0))), linf_norm(2), linf_norm(2), linf_norm(2))
    eps = Fraction(1, 2)
    cert = product_net(T, eps)
    I = LinearOp(((1, 0), (0, 1)), linf_norm(2), linf_norm(2))
    assert bideal_compose_left(I, T).tensor == T.tensor
    two = transport_left(I.scaled(2), T, cert)
    assert two.radius == 2 * eps
    assert verify_product_net(two, bideal_compose_left(I.scaled(2), T), samples=10).ok(two.radius)
    assert bilin_norm(bideal_compose_left(I.scaled(0), T)) == 0
    same = bideal_compose_right(T, I, I, cert)
    assert same.beta == 1 and same.operator.tensor == T.tensor
    rc = bideal_compose_right(T, I.scaled(Fraction(1, 2)), I.scaled(3), cert)
    assert rc.beta == 3 and rc.inclusion_verified
    assert verify_product_net(rc.certificate, rc.operator, samples=10).ok(rc.certificate.radius)
    N = LinearOp(((-1,),), U, U)
    S = BilinearOp(PROD, U, ABS, U)
    bad = bideal_compose_right(S, N, LinearOp(((1,),), ABS, ABS))
    assert bad.beta == INF and bad.certificate is None


def test_rank_one():
    phi = BilinearForm(((1, 1), (1, 1)), linf_norm(2), linf_norm(2))
    zero = rank_one_form_tensor(phi, (0, 0), linf_norm(2))
    assert bilin_norm(zero) == 0
    unit_form = BilinearForm(((1, 0), (0, 0)), linf_norm(2), linf_norm(2))
    P = rank_one_form_tensor(unit_form, (1, 0), linf_norm(2))
    assert bilin_norm(P) == 1 == rank_one_norm(unit_form, (1, 0), linf_norm(2))
    # target u, z = -1 with q(z) = 0: a form is unbounded above iff below,
    # so an unbounded form escapes while a bounded one stays precompact
    unbounded = BilinearForm(((1,),), U, U)
    R = rank_one_form_tensor(unbounded, (-1,), U)
    assert bilin_norm(R) == rank_one_norm(unbounded, (-1,), U) == INF
    assert precompact_class(R).q is Verdict3.REFUTED
    bounded = BilinearForm(((2,),), ABS, ABS)
    R = rank_one_form_tensor(bounded, (-1,), U)
    assert bilin_norm(R) == rank_one_norm(bounded, (-1,), U) == 2
    assert precompact_class(R).qs is Verdict3.CERTIFIED


def test_closedness_examples():
    T0 = BilinearOp((((1, 0), (0, 1)),), linf_norm(2), linf_norm(2), ABS)
    eps = Fraction(1, 2)
    v = closedness_limit_check([T0] * 3, T0, [eps])
    assert v.certified and v.tails[0] == 1  # 1-based term index
    seq = [T0.scaled(1 - Fraction(1, n)) for n in range(1, 12)]
    v = closedness_limit_check(seq, T0, [eps])
    assert v.certified
    cert = v.certificates[0]
    assert cert.radius == 3 * eps and verify_product_net(cert, T0, samples=10).ok(cert.radius)
    v = closedness_limit_check([T0.scaled(n) for n in range(1, 8)], T0.scaled(0), [eps])
    assert not v.uniformly_convergent and v.certificates == (None,)


# -- properties ------------------------------------------------------------------


@given(bilinear_ops())
def test_norm_routes_agree(T):
    n = bilin_norm(T)
    assert n == bilin_norm_lp(T) == _brute_norm(T)
    assert bilin_norm_alternating(T) <= n
    assert sym_norm(T) <= n


@given(bilinear_ops(), st.integers(1, 6))
def test_homogeneity(T, k):
    t = Fraction(k, 3)
    n = bilin_norm(T)
    assert bilin_norm(T.scaled(t)) == (INF if n == INF else t * n)


@given(bilinear_ops(), st.data())
def test_subadditivity(T, data):
    T2 = T.with_tensor(_tensor(data.draw, T.target.dim, T.source1.dim, T.source2.dim))
    a, b = bilin_norm(T), bilin_norm(T2)
    if INF not in (a, b):
        assert bilin_norm(T + T2) <= a + b


@given(bilinear_ops(symmetric_sources=True))
def test_adjoint_and_arens_identities(T):
    n = bilin_norm(T)
    assert adjoint_norm(T) == n
    assert arens_norm(T) == sym_norm(T)
    assert check_bilinearity(T, random.Random(0))


@given(bilinear_ops(), st.integers(1, 5))
def test_target_scaling_scales_norms(T, k):
    t = Fraction(k, 2)
    q = AsymNorm(T.target.dim, tuple(tuple(t * a for a in g) for g in T.target.generators))
    S = BilinearOp(T.tensor, T.source1, T.source2, q)
    (n1, w1), (n2, w2) = bilin_norm_witness(T), bilin_norm_witness(S)
    assert n2 == (INF if n1 == INF else t * n1)
    assert w1[0] == w2[0] and w1[1:3] == w2[1:3]


@given(bilinear_ops(symmetric_sources=True))
def test_symmetric_everything_gives_equal_norms(T):
    S = BilinearOp(T.tensor, T.source1, T.source2, symmetrize(T.target))
    assert bilin_norm(S) == sym_norm(S)
