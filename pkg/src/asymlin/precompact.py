"""Epsilon-nets, precompactness decisions, and left K-Cauchy analysis.

Coverage is by closed quasi-metric balls: a net point ``z`` covers ``w``
when ``d(z, w) <= eps``.
"""

from __future__ import annotations

import enum
import itertools
import math
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from ._rational import (
    INF,
    CapacityError,
    DomainError,
    InputError,
    add,
    dot,
    inverse,
    matvec,
    neg,
    scale,
    sub,
    transpose,
    unit,
    vec,
)
from .polyhedral import LpStatus, Polyhedron, box, conv_decompose, solve_lp
from .space import AsymNorm, eval_norm, quasi_metric, symmetrize

__all__ = [
    "EpsNetCertificate",
    "PrecompactStatus",
    "PrecompactVerdict",
    "GridNet",
    "greedy_eps_net",
    "verify_certificate",
    "polyhedron_precompact",
    "escape_point",
    "left_k_cauchy",
    "left_k_cauchy_subsequence",
    "is_bounded",
    "sample_polyhedron",
    "linf_comparison_constant",
]

MAX_GRID_CELLS = 200_000


@dataclass(frozen=True)
class EpsNetCertificate:
    eps: Fraction
    net: tuple
    points: tuple  # covered points
    witnesses: tuple  # witnesses[i] indexes the net point covering points[i]
    inside: bool
    proof: dict = field(default_factory=dict, compare=False)

    @property
    def size(self) -> int:
        return len(self.net)


class PrecompactStatus(enum.Enum):
    PRECOMPACT = "Precompact"
    NOT_PRECOMPACT = "NotPrecompact"


@dataclass(frozen=True)
class PrecompactVerdict:
    status: PrecompactStatus
    certificate: Optional[EpsNetCertificate] = None
    ray: Optional[tuple] = None

    def __post_init__(self):
        if self.status is PrecompactStatus.NOT_PRECOMPACT and (self.ray is None or self.certificate):
            raise ValueError("NotPrecompact carries exactly a ray witness")
        if self.status is PrecompactStatus.PRECOMPACT and self.ray is not None:
            raise ValueError("Precompact carries no ray")

    @property
    def precompact(self) -> bool:
        return self.status is PrecompactStatus.PRECOMPACT


# ---------------------------------------------------------------------------
# Finite samples
# ---------------------------------------------------------------------------


def greedy_eps_net(
    sample: Sequence,
    d: Callable,
    eps,
    inside_only: bool = True,
    candidates: Sequence = (),
    exact: bool = False,
) -> EpsNetCertificate:
    """Cover a finite sample by closed ``d``-balls of radius ``eps``.

    Greedy set cover: among the uncovered points (plus ``candidates`` when
    ``inside_only`` is off) pick the center covering the most uncovered
    points, lowest index first.  ``exact`` searches all center sets by
    increasing size and is limited to 20 points.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    pts = [vec(w) for w in sample]
    pool = list(pts) if inside_only else list(pts) + [vec(c) for c in candidates]
    covers = [frozenset(i for i, w in enumerate(pts) if d(c, w) <= eps) for c in pool]

    if exact:
        if len(pool) > 20:
            raise CapacityError("exact covering is limited to 20 candidate points")
        chosen = None
        for k in range(1, len(pool) + 1):
            for combo in itertools.combinations(range(len(pool)), k):
                if len(frozenset().union(*(covers[c] for c in combo))) == len(pts):
                    chosen = list(combo)
                    break
            if chosen is not None:
                break
        chosen = chosen or []
    else:
        uncovered = set(range(len(pts)))
        chosen = []
        while uncovered:
            options = [i for i in range(len(pool)) if i >= len(pts) or i in uncovered]
            best = max(options, key=lambda i: (len(covers[i] & uncovered), -i))
            chosen.append(best)
            uncovered -= covers[best]

    net = tuple(pool[i] for i in chosen)
    witnesses = tuple(next(k for k, c in enumerate(chosen) if i in covers[c]) for i in range(len(pts)))
    return EpsNetCertificate(eps, net, tuple(pts), witnesses, inside_only)


def verify_certificate(
    cert: EpsNetCertificate,
    d: Callable,
    member: Optional[Callable] = None,
    require_inside: Optional[bool] = None,
) -> bool:
    """Re-evaluate every recorded witness; check net membership if inside."""
    if len(cert.witnesses) != len(cert.points):
        return False
    for w, k in zip(cert.points, cert.witnesses):
        if not 0 <= k < len(cert.net) or d(cert.net[k], w) > cert.eps:
            return False
    inside = cert.inside if require_inside is None else require_inside
    if inside:
        if member is None:
            raise InputError("an inside certificate needs a membership oracle")
        if not all(member(z) for z in cert.net):
            return False
    return True


# ---------------------------------------------------------------------------
# Polyhedral sets
# ---------------------------------------------------------------------------


def linf_comparison_constant(q: AsymNorm) -> Fraction:
    """``sup{q^s(x) : |x|_inf <= 1}`` by one LP per generator of ``q^s``."""
    cube = box(q.dim)
    return max(solve_lp(g, cube).optimum for g in symmetrize(q).generators)


def _point_in_cell(P: Polyhedron, lo, hi):
    """Some point of ``P`` inside the box ``[lo, hi]``, or ``None``."""
    n = P.dim
    if P.h_rep is not None:
        center = tuple((a + b) / 2 for a, b in zip(lo, hi))
        if P.contains(center):
            return center
        # box entirely outside one halfspace: empty without an LP
        for a, b in P.h_rep:
            if sum(c * (l if c > 0 else h) for c, l, h in zip(a, lo, hi)) > b:
                return None
        rows = list(P.h_rep)
        for k in range(n):
            rows.append((unit(n, k), hi[k]))
            rows.append((neg(unit(n, k)), -lo[k]))
        out = solve_lp((Fraction(0),) * n, Polyhedron(n, h_rep=tuple(rows)))
        return None if out.status is LpStatus.INFEASIBLE else out.witness
    verts, rays = P.v_rep
    nv, nr = len(verts), len(rays)
    nvar = nv + nr
    zero = Fraction(0)
    rows = []
    for k in range(n):
        coeffs = tuple(v[k] for v in verts) + tuple(r[k] for r in rays)
        rows.append((coeffs, hi[k]))
        rows.append((tuple(-c for c in coeffs), -lo[k]))
    ones = (Fraction(1),) * nv + (zero,) * nr
    rows.append((ones, Fraction(1)))
    rows.append((tuple(-x for x in ones), Fraction(-1)))
    for j in range(nvar):
        rows.append((tuple(Fraction(-1) if i == j else zero for i in range(nvar)), zero))
    out = solve_lp((zero,) * nvar, Polyhedron(nvar, h_rep=tuple(rows)))
    if out.status is LpStatus.INFEASIBLE:
        return None
    lam = out.witness
    pt = [zero] * n
    for w, g in zip(lam, verts + rays):
        if w:
            pt = [a + w * b for a, b in zip(pt, g)]
    return tuple(pt)


def _affine_cell_tests(P: Polyhedron, lo, delta) -> list:
    """Integer data for each halfspace ``a.x <= b`` over grid cells.

    For cell index ``i`` the value ``base + steps.i`` is ``a`` at the cell
    center and subtracting ``corr`` gives the minimum over the cell, all
    scaled by one common positive integer.
    """
    out = []
    for a, b in P.h_rep:
        center0 = sum(c * (l + delta / 2) for c, l in zip(a, lo))
        corr = delta / 2 * sum(abs(c) for c in a)
        steps = [c * delta for c in a]
        D = math.lcm(center0.denominator, corr.denominator, Fraction(b).denominator, *[s.denominator for s in steps])
        out.append((int(center0 * D), [int(s * D) for s in steps], int(corr * D), int(b * D)))
    return out


@dataclass(frozen=True)
class GridNet:
    """Inside net of a V-polyhedron from an l-infinity cell grid.

    Cells of side ``delta`` tile the bounding box of the vertices; each
    cell meeting the polyhedron holds one net point of the polyhedron.
    Any point whose convex part lies in a cell is within ``delta`` of that
    cell's net point in the l-infinity norm.

    With a ``basis`` ``G`` the grid lives in the coordinates ``u = G x``:
    the l-infinity statement holds for ``G (x - x_k)``, while points are
    passed in and returned in the ambient coordinates.
    """

    polyhedron: Polyhedron
    delta: Fraction
    lo: tuple
    counts: tuple
    cells: dict = field(compare=False)
    basis: Optional[tuple] = None

    @classmethod
    def build(cls, P: Polyhedron, delta, basis=None) -> "GridNet":
        delta = Fraction(delta)
        if delta <= 0:
            raise InputError("grid resolution must be positive")
        if not P.vertices:
            raise DomainError("empty polyhedron")
        ambient = P
        if basis is not None:
            basis = tuple(vec(r) for r in basis)
            Ginv = inverse(basis)
            h = None if P.h_rep is None else tuple((matvec(transpose(Ginv), a), b) for a, b in P.h_rep)
            P = Polyhedron(P.dim, h_rep=h, v_rep=(tuple(matvec(basis, v) for v in P.vertices), tuple(matvec(basis, r) for r in P.rays)))
        verts = P.vertices
        n = P.dim
        lo = tuple(min(v[k] for v in verts) for k in range(n))
        hi = tuple(max(v[k] for v in verts) for k in range(n))
        counts = tuple(max(1, math.ceil((hi[k] - lo[k]) / delta)) for k in range(n))
        if math.prod(counts) > MAX_GRID_CELLS:
            raise CapacityError(f"grid of {math.prod(counts)} cells exceeds {MAX_GRID_CELLS}")
        cells = {}
        tests = _affine_cell_tests(P, lo, delta) if P.h_rep is not None else None
        for idx in itertools.product(*(range(c) for c in counts)):
            clo = tuple(lo[k] + idx[k] * delta for k in range(n))
            if tests is not None:
                inside = True
                for base, steps, corr, rhs in tests:
                    v = base + sum(map(operator.mul, steps, idx))
                    if v - corr > rhs:
                        break
                    if v > rhs:
                        inside = False
                else:
                    if inside:
                        cells[idx] = tuple(c + delta / 2 for c in clo)
                    else:
                        z = _point_in_cell(P, clo, tuple(c + delta for c in clo))
                        if z is not None:
                            cells[idx] = z
                continue
            z = _point_in_cell(P, clo, tuple(c + delta for c in clo))
            if z is not None:
                cells[idx] = z
        if basis is not None:
            cells = {k: matvec(Ginv, z) for k, z in cells.items()}
        return cls(ambient, delta, lo, counts, cells, basis)

    @property
    def points(self) -> tuple:
        return tuple(self.cells.values())

    def cell_of(self, c) -> tuple:
        if self.basis is not None:
            c = matvec(self.basis, c)
        return tuple(
            min(max(math.floor((c[k] - self.lo[k]) / self.delta), 0), self.counts[k] - 1)
            for k in range(len(c))
        )

    def locate(self, c):
        """Net point for a point ``c`` of the convex part."""
        return self.cells.get(self.cell_of(c))

    def convex_part(self, x):
        """The convex-hull component of ``x`` in ``conv(V) + cone(R)``."""
        x = vec(x)
        if not self.polyhedron.rays:
            return x
        dec = conv_decompose(self.polyhedron, x)
        if dec is None:
            raise DomainError(f"{x} is not in the polyhedron")
        lam, _ = dec
        pt = [Fraction(0)] * len(x)
        for w, v in zip(lam, self.polyhedron.vertices):
            if w:
                pt = [a + w * b for a, b in zip(pt, v)]
        return tuple(pt)


def sample_polyhedron(P: Polyhedron, k: int, rng, ray_scale: int = 50) -> list:
    """``k`` exact points of a V-polyhedron as ``(point, convex_part)`` pairs."""
    verts, rays = P.v_rep
    out = []
    for _ in range(k):
        w = [rng.randint(0, 8) for _ in verts]
        if not any(w):
            w[rng.randrange(len(w))] = 1
        tot = sum(w)
        c = tuple(sum((Fraction(wi, tot) * v[j] for wi, v in zip(w, verts)), Fraction(0)) for j in range(P.dim))
        x = c
        for r in rays:
            t = Fraction(rng.randint(0, ray_scale * 4), rng.randint(1, 4))
            if t:
                x = add(x, scale(t, r))
        out.append((x, c))
    return out


def polyhedron_precompact(
    P: Polyhedron,
    q: AsymNorm,
    eps=None,
    samples: Sequence = (),
) -> PrecompactVerdict:
    """Decide ``q``-precompactness of ``P = conv(V) + cone(R)``.

    ``P`` is precompact iff ``q`` vanishes on every ray.  With ``eps`` a
    grid certificate is built: cells of side ``eps / (2L)``, where ``L``
    bounds ``q^s`` by the l-infinity norm, so the convex part of any point
    is within ``eps / 2`` of its cell's net point and ray components add
    nothing.  Coverage is recorded for the vertices and the given samples
    (``(point, convex_part)`` pairs or bare points).
    """
    if P.v_rep is None:
        raise InputError("polyhedron_precompact needs a V-representation")
    if q.dim != P.dim:
        raise InputError("norm and polyhedron dimensions differ")
    if not P.vertices:
        raise DomainError("empty polyhedron")
    for r in P.rays:
        if eval_norm(q, r) > 0:
            return PrecompactVerdict(PrecompactStatus.NOT_PRECOMPACT, ray=r)
    if eps is None:
        return PrecompactVerdict(PrecompactStatus.PRECOMPACT)
    eps = Fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    L = linf_comparison_constant(q)
    delta = eps / (2 * L)
    grid = GridNet.build(P, delta)
    net = grid.points
    index = {z: i for i, z in enumerate(net)}
    pts, wit = [], []
    items = [(v, v) for v in P.vertices]
    for s in samples:
        items.append(s if isinstance(s, tuple) and len(s) == 2 and isinstance(s[0], tuple) else (vec(s), None))
    for x, c in items:
        c = grid.convex_part(x) if c is None else c
        pts.append(x)
        wit.append(index[grid.locate(c)])
    proof = {"L": L, "delta": delta, "bound": L * delta}
    cert = EpsNetCertificate(eps, net, tuple(pts), tuple(wit), True, proof)
    return PrecompactVerdict(PrecompactStatus.PRECOMPACT, certificate=cert)


def escape_point(P: Polyhedron, q: AsymNorm, ray, centers: Sequence, eps):
    """A point of ``P`` farther than ``eps`` (in ``d_q``) from every center.

    Uses ``q(v + t r - z) >= t q(r) - q(z - v)`` with ``v`` the first vertex.
    """
    ray = vec(ray)
    qr = eval_norm(q, ray)
    if qr <= 0:
        raise DomainError("the ray does not escape: q(r) = 0")
    v = P.vertices[0]
    worst = max((eval_norm(q, sub(z, v)) for z in centers), default=Fraction(0))
    t = (Fraction(eps) + worst) / qr + 1
    w = add(v, scale(t, ray))
    assert all(quasi_metric(q, z, w) > eps for z in centers)
    return w


def is_bounded(P: Polyhedron, p: AsymNorm):
    """``sup{p(x) : x in P}``; ``INF`` when some generator LP is unbounded."""
    if P.h_rep is not None:
        best = None
        for g in p.generators:
            out = solve_lp(g, P)
            if out.status is LpStatus.INFEASIBLE:
                raise DomainError("empty polyhedron")
            if out.status is LpStatus.UNBOUNDED:
                return INF
            best = out.optimum if best is None else max(best, out.optimum)
        return best
    verts, rays = P.v_rep
    if not verts:
        raise DomainError("empty polyhedron")
    if any(dot(g, r) > 0 for g in p.generators for r in rays):
        return INF
    return max(eval_norm(p, v) for v in verts)


# ---------------------------------------------------------------------------
# Left K-Cauchy sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LeftKCauchyReport:
    eps_schedule: tuple
    indices: tuple  # least 1-based n_eps per eps
    verdicts: tuple

    @property
    def cauchy(self) -> bool:
        return all(self.verdicts)


def left_k_cauchy(seq: Sequence, d: Callable, eps_schedule: Sequence, min_tail=Fraction(1, 2)) -> LeftKCauchyReport:
    """Least ``n_eps`` with ``d(x_n, x_m) < eps`` for all ``n_eps <= n <= m``.

    The verdict at ``eps`` is positive when the tail from ``n_eps`` covers at
    least ``min_tail`` of the sample.
    """
    pts = [vec(x) for x in seq]
    N = len(pts)
    dist = [[d(pts[i], pts[j]) if j > i else Fraction(0) for j in range(N)] for i in range(N)]
    indices, verdicts = [], []
    for e in eps_schedule:
        e = Fraction(e)
        last_bad = -1
        for i in range(N):
            if any(dist[i][j] >= e for j in range(i + 1, N)):
                last_bad = i
        n_eps = last_bad + 2
        indices.append(n_eps)
        verdicts.append(N - n_eps + 1 >= min_tail * N)
    return LeftKCauchyReport(tuple(Fraction(e) for e in eps_schedule), tuple(indices), tuple(verdicts))


def left_k_cauchy_subsequence(seq: Sequence, d: Callable, eps) -> tuple:
    """Greedy subsequence whose ordered pairs all satisfy ``d < eps``."""
    eps = Fraction(eps)
    pts = [vec(x) for x in seq]
    kept: list = []
    for j, x in enumerate(pts):
        if all(d(pts[i], x) < eps for i in kept):
            kept.append(j)
    return tuple(kept)
