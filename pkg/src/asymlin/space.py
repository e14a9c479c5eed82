"""Polyhedral asymmetric norms, their quasi-metrics, and normed cones."""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from ._rational import (
    INF,
    CapacityError,
    DimensionError,
    InputError,
    common_denominator,
    neg,
    rank,
    sub,
    unit,
    vec,
)
from .polyhedral import (
    DEFAULT_LIMITS,
    Limits,
    LpStatus,
    Polyhedron,
    solve_lp,
)

__all__ = [
    "AsymNorm",
    "eval_norm",
    "conjugate",
    "symmetrize",
    "quasi_metric",
    "unit_ball",
    "ConvergenceReport",
    "converges",
    "NormedCone",
    "cone_quasi_metric",
    "FinitenessReport",
    "finiteness_classes",
    "u_norm",
    "linf_norm",
    "l1_norm",
]


def _zero_in_hull(gens, dim) -> bool:
    """LP feasibility of ``0 = sum lam_i g_i`` with ``lam`` in the simplex."""
    k = len(gens)
    zero = Fraction(0)
    rows = []
    for c in range(dim):
        coeffs = tuple(g[c] for g in gens)
        rows.append((coeffs, zero))
        rows.append((tuple(-x for x in coeffs), zero))
    ones = (Fraction(1),) * k
    rows.append((ones, Fraction(1)))
    rows.append((tuple(-x for x in ones), Fraction(-1)))
    for j in range(k):
        rows.append((tuple(Fraction(-1) if i == j else zero for i in range(k)), zero))
    out = solve_lp((zero,) * k, Polyhedron(k, h_rep=tuple(rows)))
    return out.status is not LpStatus.INFEASIBLE


@dataclass(frozen=True)
class AsymNorm:
    """``p(x) = max_i <a_i, x>`` over a finite generator set.

    Validated on construction: 0 lies in the convex hull of the generators
    (so ``p >= 0``) and the generators span the space (so
    ``p(x) = p(-x) = 0`` forces ``x = 0``).
    """

    dim: int
    generators: tuple
    limits: Limits = field(default=DEFAULT_LIMITS, compare=False, repr=False)
    validate: bool = field(default=True, compare=False, repr=False)

    domain_rays = ()

    def __post_init__(self):
        gens = tuple(vec(g) for g in self.generators)
        if not gens:
            raise InputError("an asymmetric norm needs at least one generator")
        if any(len(g) != self.dim for g in gens):
            raise DimensionError("generator length does not match dimension")
        if len(gens) > self.limits.generator_cap:
            raise CapacityError(f"{len(gens)} generators exceed cap {self.limits.generator_cap}")
        object.__setattr__(self, "generators", gens)
        den = common_denominator(x for g in gens for x in g)
        object.__setattr__(self, "_den", den)
        object.__setattr__(self, "_int_gens", tuple(tuple(int(x * den) for x in g) for g in gens))
        if self.validate:
            if rank(gens) != self.dim:
                raise InputError("generators must span the space (axiom AN1)")
            if not _zero_in_hull(gens, self.dim):
                raise InputError("0 must lie in the convex hull of the generators (p >= 0)")

    def __call__(self, x) -> Fraction:
        return eval_norm(self, x)

    def argmax(self, x) -> int:
        """Lowest index of a generator attaining ``p(x)``."""
        x = vec(x)
        vals = [sum(a * b for a, b in zip(g, x)) for g in self.generators]
        best = max(vals)
        return vals.index(best)


def u_norm() -> AsymNorm:
    """``u(a) = max(a, 0)`` on the line."""
    return AsymNorm(1, ((1,), (0,)))


def linf_norm(dim: int) -> AsymNorm:
    gens = []
    for k in range(dim):
        e = unit(dim, k)
        gens.append(e)
        gens.append(neg(e))
    return AsymNorm(dim, tuple(gens))


def l1_norm(dim: int) -> AsymNorm:
    import itertools

    gens = [tuple(Fraction(s) for s in signs) for signs in itertools.product((1, -1), repeat=dim)]
    return AsymNorm(dim, tuple(gens))


def _scaled_max(p: AsymNorm, x) -> Fraction:
    dx = math.lcm(*[v.denominator for v in x])
    xi = [v.numerator * (dx // v.denominator) for v in x]
    best = max(sum(map(operator.mul, g, xi)) for g in p._int_gens)
    return Fraction(best, p._den * dx)


def eval_norm(p: AsymNorm, x) -> Fraction:
    x = vec(x)
    if len(x) != p.dim:
        raise DimensionError(f"vector of length {len(x)} for a norm on dimension {p.dim}")
    return _scaled_max(p, x)


def conjugate(p: AsymNorm) -> AsymNorm:
    return AsymNorm(p.dim, tuple(neg(g) for g in p.generators), limits=p.limits, validate=False)


def symmetrize(p: AsymNorm) -> AsymNorm:
    gens = list(p.generators)
    for g in p.generators:
        ng = neg(g)
        if ng not in gens:
            gens.append(ng)
    limits = p.limits
    if len(gens) > limits.generator_cap:
        limits = Limits(limits.dim_cap, len(gens))
    return AsymNorm(p.dim, tuple(gens), limits=limits, validate=False)


def quasi_metric(p: AsymNorm, x, y) -> Fraction:
    """``d_p(x, y) = p(y - x)``."""
    x, y = vec(x), vec(y)
    if len(x) != p.dim or len(y) != p.dim:
        raise DimensionError("points do not match the norm's dimension")
    return _scaled_max(p, sub(y, x))


def unit_ball(p) -> Polyhedron:
    """``{x : <a_i, x> <= 1}``, plus ``<r, x> <= 0`` for any domain rays."""
    rows = [(g, Fraction(1)) for g in p.generators]
    rows += [(r, Fraction(0)) for r in getattr(p, "domain_rays", ())]
    return Polyhedron(p.dim, h_rep=tuple(rows))


# ---------------------------------------------------------------------------
# Convergence predicates (finite-prefix verdicts)
# ---------------------------------------------------------------------------


def _tail_index(values, eps) -> Optional[int]:
    """Least 1-based n with ``values[m] < eps`` for every m >= n."""
    n = None
    for i in range(len(values) - 1, -1, -1):
        if values[i] < eps:
            n = i + 1
        else:
            break
    return n


@dataclass(frozen=True)
class ConvergenceReport:
    eps_schedule: tuple
    d_tails: tuple  # per eps: tail index or None
    dbar_tails: tuple

    @property
    def d_convergent(self) -> bool:
        return all(t is not None for t in self.d_tails)

    @property
    def dbar_convergent(self) -> bool:
        return all(t is not None for t in self.dbar_tails)


def converges(p: AsymNorm, seq: Sequence, x, eps_schedule: Sequence) -> ConvergenceReport:
    """Tail indices of ``d(x, x_n) < eps`` and ``dbar(x, x_n) < eps``.

    A verdict about the given finite prefix only; no limit is claimed.
    """
    if not seq:
        raise InputError("empty sequence")
    x = vec(x)
    eps_schedule = tuple(Fraction(e) for e in eps_schedule)
    fwd = [quasi_metric(p, x, xn) for xn in seq]
    bwd = [quasi_metric(p, xn, x) for xn in seq]
    return ConvergenceReport(
        eps_schedule,
        tuple(_tail_index(fwd, e) for e in eps_schedule),
        tuple(_tail_index(bwd, e) for e in eps_schedule),
    )


# ---------------------------------------------------------------------------
# Normed cones
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormedCone:
    """A polyhedral cone with an asymmetric norm restricted to it."""

    cone: Polyhedron
    norm: AsymNorm
    t1: bool = field(init=False)

    def __post_init__(self):
        if self.cone.h_rep is None:
            raise InputError("the cone needs an H-representation")
        if any(c != 0 for _, c in self.cone.h_rep):
            raise InputError("a cone H-rep has zero offsets")
        if self.cone.dim != self.norm.dim:
            raise DimensionError("cone and norm dimensions differ")
        object.__setattr__(self, "t1", _vanishes_only_at_zero(self.cone, self.norm))

    @property
    def ambient_dim(self) -> int:
        return self.cone.dim

    def contains(self, z) -> bool:
        return self.cone.contains(z)


def _vanishes_only_at_zero(cone: Polyhedron, p: AsymNorm) -> bool:
    """LP check that ``{z in cone : p(z) <= 0}`` is ``{0}``."""
    n = cone.dim
    rows = list(cone.h_rep) + [(g, Fraction(0)) for g in p.generators]
    for k in range(n):
        e = unit(n, k)
        rows.append((e, Fraction(1)))
        rows.append((neg(e), Fraction(1)))
    region = Polyhedron(n, h_rep=tuple(rows))
    for k in range(n):
        for e in (unit(n, k), neg(unit(n, k))):
            if solve_lp(e, region).optimum != 0:
                return False
    return True


def cone_quasi_metric(c: NormedCone, x, y):
    """``p(y - x)`` when ``y - x`` lies in the cone, otherwise ``INF``."""
    z = sub(vec(y), vec(x))
    if not c.contains(z):
        return INF
    return eval_norm(c.norm, z)


@dataclass(frozen=True)
class FinitenessReport:
    reach: tuple  # reach[i][j] is True iff d(x_i, x_j) < inf
    symmetric: bool
    classes: tuple  # mutual-reachability classes (index tuples)


def finiteness_classes(points: Sequence, dist: Callable) -> FinitenessReport:
    n = len(points)
    reach = tuple(tuple(dist(points[i], points[j]) < INF for j in range(n)) for i in range(n))
    symmetric = all(reach[i][j] == reach[j][i] for i in range(n) for j in range(n))
    # transitive closure; the relation is a preorder
    closure = [list(r) for r in reach]
    for k in range(n):
        for i in range(n):
            if closure[i][k]:
                for j in range(n):
                    if closure[k][j]:
                        closure[i][j] = True
    classes = []
    assigned = set()
    for i in range(n):
        if i in assigned:
            continue
        cls = tuple(j for j in range(n) if closure[i][j] and closure[j][i])
        assigned.update(cls)
        classes.append(cls)
    return FinitenessReport(reach, symmetric, tuple(classes))
