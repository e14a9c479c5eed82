"""Linear operators between asymmetric normed spaces and their adjoints."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from ._rational import (
    INF,
    DimensionError,
    DomainError,
    InputError,
    dot,
    is_zero,
    mat,
    matvec,
    sub,
    transpose,
    vec,
)
from .polyhedral import (
    DEFAULT_LIMITS,
    Limits,
    LpStatus,
    Polyhedron,
    enumerate_v_rep,
    polar,
    pulling_triangulation,
    solve_lp,
)
from .precompact import (
    EpsNetCertificate,
    PrecompactStatus,
    polyhedron_precompact,
    verify_certificate,
)
from .space import AsymNorm, eval_norm, quasi_metric, symmetrize, unit_ball

__all__ = [
    "DualGauge",
    "dual_gauge",
    "LinearOp",
    "Functional",
    "op_norm",
    "op_norm_witness",
    "dual_norm",
    "star_norm",
    "dual_ball",
    "norming_functional",
    "adjoint",
    "adjoint_norm_by_vertices",
    "cover_dual_ball",
    "LinearSchauderResult",
    "schauder_linear_check",
]


@dataclass(frozen=True)
class DualGauge:
    """The gauge ``p^flat(phi) = sup{phi(x) : p(x) <= 1}`` of a dual cone.

    Finite part is the max over the vertices of ``B_p``; the value is
    ``INF`` off the dual cone, i.e. when ``phi`` is positive on a ray.
    """

    dim: int
    generators: tuple
    domain_rays: tuple = ()

    def __call__(self, phi):
        phi = vec(phi)
        if len(phi) != self.dim:
            raise DimensionError("functional has wrong dimension")
        if any(dot(r, phi) > 0 for r in self.domain_rays):
            return INF
        return max(dot(v, phi) for v in self.generators)


def dual_gauge(p: AsymNorm, limits: Limits = DEFAULT_LIMITS) -> DualGauge:
    ball = enumerate_v_rep(unit_ball(p), limits)
    return DualGauge(p.dim, ball.vertices, ball.rays)


@dataclass(frozen=True)
class LinearOp:
    matrix: tuple  # target_dim x source_dim
    source: object
    target: object

    def __post_init__(self):
        m = mat(self.matrix)
        if len(m) != self.target.dim or any(len(r) != self.source.dim for r in m):
            raise DimensionError("matrix shape does not match the source/target norms")
        object.__setattr__(self, "matrix", m)

    def __call__(self, x):
        return matvec(self.matrix, vec(x))

    def scaled(self, t) -> "LinearOp":
        t = Fraction(t)
        return LinearOp(tuple(tuple(t * a for a in r) for r in self.matrix), self.source, self.target)

    def with_norms(self, source, target) -> "LinearOp":
        return LinearOp(self.matrix, source, target)


def op_norm_witness(A: LinearOp):
    """``(||A|, witness)``: an optimal point of ``B_p`` or an escaping ray.

    The ray ``r`` satisfies ``p(r) <= 0`` and ``q(A r) > 0``.
    """
    ball = unit_ball(A.source)
    At = transpose(A.matrix)
    best, arg = None, None
    for r in getattr(A.target, "domain_rays", ()):
        out = solve_lp(matvec(At, r), ball)
        if out.status is LpStatus.UNBOUNDED:
            return INF, out.witness
        if out.optimum > 0:
            return INF, out.witness
    for g in A.target.generators:
        out = solve_lp(matvec(At, g), ball)
        if out.status is LpStatus.UNBOUNDED:
            return INF, out.witness
        if best is None or out.optimum > best:
            best, arg = out.optimum, out.witness
    return best, arg


def op_norm(A: LinearOp):
    """``||A|_{p,q} = sup{q(Ax) : p(x) <= 1}``, one LP per target generator."""
    return op_norm_witness(A)[0]


@dataclass(frozen=True)
class Functional:
    vector: tuple
    space: object

    def __post_init__(self):
        v = vec(self.vector)
        if len(v) != self.space.dim:
            raise DimensionError("functional and space dimensions differ")
        object.__setattr__(self, "vector", v)

    def __call__(self, x):
        return dot(self.vector, vec(x))

    @cached_property
    def dual_norm(self):
        return _support(self.vector, unit_ball(self.space))

    @property
    def in_dual_cone(self) -> bool:
        return self.dual_norm < INF


def _support(phi, ball: Polyhedron):
    out = solve_lp(phi, ball)
    if out.status is LpStatus.UNBOUNDED:
        return INF
    return out.optimum


def dual_norm(phi: Functional):
    """``p^flat(phi) = sup{phi(x) : p(x) <= 1}``; ``INF`` off the dual cone."""
    return phi.dual_norm


def star_norm(phi: Functional):
    """``||phi||* = sup{phi(x) : p^s(x) <= 1}``."""
    return _support(phi.vector, unit_ball(symmetrize(phi.space)))


def dual_ball(p, limits: Limits = DEFAULT_LIMITS) -> Polyhedron:
    """``B_{p^flat}`` as the polar of ``B_p``, with its vertices enumerated."""
    return enumerate_v_rep(polar(enumerate_v_rep(unit_ball(p), limits)), limits)


def norming_functional(q: AsymNorm, z) -> Functional:
    """A generator attaining ``q(z)``; lowest index breaks ties.

    Such a generator ``b`` has ``b(w) <= q(w)`` for all ``w`` and
    ``q^flat(b) = 1`` because ``b(z / q(z)) = 1``.
    """
    z = vec(z)
    if eval_norm(q, z) <= 0:
        raise DomainError("no norming functional is needed when q(z) = 0")
    psi = Functional(q.generators[q.argmax(z)], q)
    return psi


def adjoint(A: LinearOp, limits: Limits = DEFAULT_LIMITS) -> LinearOp:
    """``A^flat psi = psi o A``: the transpose between the dual gauges."""
    return LinearOp(transpose(A.matrix), dual_gauge(A.target, limits), dual_gauge(A.source, limits))


def adjoint_norm_by_vertices(A: LinearOp, limits: Limits = DEFAULT_LIMITS):
    """``max p^flat(A^T psi)`` over the vertices of ``B_{q^flat}``.

    The map is convex in ``psi`` and the dual ball is a polytope, so the
    maximum sits at a vertex.
    """
    ball = dual_ball(A.target, limits)
    At = transpose(A.matrix)
    best = Fraction(0)
    src_ball = unit_ball(A.source)
    for psi in ball.vertices:
        val = _support(matvec(At, psi), src_ball)
        if val == INF:
            return INF
        best = max(best, val)
    return best


# ---------------------------------------------------------------------------
# Covering the dual ball
# ---------------------------------------------------------------------------


def _spread(proj, center):
    """``max_k (w - c).y_k`` over the vertices, from row projections."""
    return max(max(a - b for a, b in zip(pw, center)) for pw in proj)


def cover_dual_ball(ball: Polyhedron, rows: Sequence, eps, max_simplices: int = 50_000):
    """Finite cover of a polytope under ``rho(psi, c) = max_k (psi - c).y_k``.

    Returns ``[(simplex, center), ...]`` with ``rho(w, center) < eps`` at
    every vertex ``w`` of the simplex, hence on the whole simplex.  The
    pulling triangulation is refined by longest-edge bisection, edge length
    measured by ``max_k |(a - b).y_k|``.  Vertices carry their projections
    ``(w.y_k)_k`` so midpoints are cheap.
    """
    eps = Fraction(eps)
    rows = [vec(y) for y in rows] or [tuple(Fraction(0) for _ in range(ball.dim))]

    def node(w):
        return (w, tuple(dot(w, y) for y in rows))

    verts = [node(w) for w in ball.vertices]
    projs = [p for _, p in verts]
    for w, pc in verts:
        if _spread(projs, pc) < eps:
            return [(tuple(v for v, _ in verts), w)]
    queue = deque(tuple(node(w) for w in S) for S in pulling_triangulation(ball))
    done = []
    while queue:
        if len(done) + len(queue) > max_simplices:
            raise RuntimeError("dual-ball cover exceeded its simplex budget")
        S = queue.popleft()
        projs = [p for _, p in S]
        center = next((w for w, pc in S if _spread(projs, pc) < eps), None)
        if center is not None:
            done.append((tuple(w for w, _ in S), center))
            continue
        best, pair = None, None
        for i in range(len(S)):
            for j in range(i + 1, len(S)):
                length = max(abs(a - b) for a, b in zip(projs[i], projs[j]))
                if best is None or length > best:
                    best, pair = length, (i, j)
        i, j = pair
        mid = (
            tuple((a + b) / 2 for a, b in zip(S[i][0], S[j][0])),
            tuple((a + b) / 2 for a, b in zip(projs[i], projs[j])),
        )
        queue.append(tuple(mid if k == i else v for k, v in enumerate(S)))
        queue.append(tuple(mid if k == j else v for k, v in enumerate(S)))
    return done


@dataclass(frozen=True)
class LinearSchauderResult:
    status: PrecompactStatus
    eps: Fraction
    image_certificate: Optional[EpsNetCertificate] = None
    dual_net: tuple = ()  # centers psi_i in B_{q^flat}
    image_net: tuple = ()  # distinct A^flat psi_i
    radius: Optional[Fraction] = None  # measured covering radius, <= 3 eps
    ray: Optional[tuple] = None
    cover: tuple = field(default=(), compare=False, repr=False)

    @property
    def verified(self) -> bool:
        return self.status is PrecompactStatus.PRECOMPACT and self.radius is not None and self.radius <= 3 * self.eps


def schauder_linear_check(A: LinearOp, eps, limits: Limits = DEFAULT_LIMITS) -> LinearSchauderResult:
    """Explicit 3 eps-net for ``A^flat(B_{q^flat})`` from an eps-net of ``A(B_p)``.

    Requires ``A(B_p)`` to be ``q^s``-precompact; otherwise the image ray
    is returned.  Every bound ``p^flat(A^flat psi - A^flat psi_i) <= 3 eps``
    is re-checked at all vertices of the covering simplices.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    ball = enumerate_v_rep(unit_ball(A.source), limits)
    verts = tuple(dict.fromkeys(A(v) for v in ball.vertices))
    rays = tuple(A(r) for r in ball.rays if not is_zero(A(r)))
    image = Polyhedron(A.target.dim, v_rep=(verts, rays))
    qs = symmetrize(A.target)
    verdict = polyhedron_precompact(image, qs, eps=eps if not rays else None)
    if not verdict.precompact:
        return LinearSchauderResult(PrecompactStatus.NOT_PRECOMPACT, eps, ray=verdict.ray)
    cert = verdict.certificate
    d_qs = lambda z, w: quasi_metric(qs, z, w)  # noqa: E731
    if not verify_certificate(cert, d_qs, image.contains):
        raise AssertionError("image certificate failed re-verification")

    dball = dual_ball(A.target, limits)
    rows = list(dict.fromkeys(cert.net + verts))
    cover = cover_dual_ball(dball, rows, eps)
    At = transpose(A.matrix)
    src_ball = unit_ball(A.source)
    radius = Fraction(0)
    for S, c in cover:
        for w in S:
            val = _support(matvec(At, sub(w, c)), src_ball)
            radius = max(radius, val)
    centers = tuple(dict.fromkeys(c for _, c in cover))
    images = tuple(dict.fromkeys(matvec(At, c) for c in centers))
    return LinearSchauderResult(
        PrecompactStatus.PRECOMPACT, eps, cert, centers, images, radius, cover=tuple(cover)
    )
