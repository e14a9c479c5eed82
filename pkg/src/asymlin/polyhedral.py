"""Exact rational polyhedra: LP, double description, polars, recession cones.

A :class:`Polyhedron` carries an H-representation ``{x : <a, x> <= c}``
and/or a V-representation ``conv(vertices) + cone(rays)``.  Everything is
exact; there is no tolerance anywhere in this module.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ._rational import (
    CapacityError,
    DimensionError,
    DomainError,
    InputError,
    Vector,
    dot,
    is_zero,
    neg,
    primitive,
    rank,
    scale,
    sub,
    unit,
    vec,
)

__all__ = [
    "Limits",
    "DEFAULT_LIMITS",
    "Polyhedron",
    "LpStatus",
    "LpOutcome",
    "solve_lp",
    "enumerate_v_rep",
    "polar",
    "recession_cone",
    "box",
    "conv_decompose",
    "pulling_triangulation",
]


@dataclass(frozen=True)
class Limits:
    dim_cap: int = 6
    generator_cap: int = 32


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class Polyhedron:
    dim: int
    h_rep: Optional[tuple] = None  # ((normal, offset), ...)
    v_rep: Optional[tuple] = None  # (vertices, rays)

    def __post_init__(self):
        if self.dim < 1:
            raise InputError("polyhedron dimension must be positive")
        if self.h_rep is None and self.v_rep is None:
            raise InputError("polyhedron needs an H- or V-representation")
        if self.h_rep is not None:
            rows = tuple((vec(a), Fraction(c)) for a, c in self.h_rep)
            for a, _ in rows:
                if len(a) != self.dim:
                    raise DimensionError(f"inequality normal {a} has wrong length")
            object.__setattr__(self, "h_rep", rows)
        if self.v_rep is not None:
            verts, rays = self.v_rep
            verts = tuple(vec(v) for v in verts)
            rays = tuple(vec(r) for r in rays)
            for v in verts + rays:
                if len(v) != self.dim:
                    raise DimensionError(f"generator {v} has wrong length")
            if any(is_zero(r) for r in rays):
                raise InputError("rays must be nonzero")
            object.__setattr__(self, "v_rep", (verts, rays))

    @classmethod
    def from_inequalities(cls, rows, dim=None):
        rows = list(rows)
        if dim is None:
            if not rows:
                raise InputError("cannot infer dimension from an empty H-rep")
            dim = len(rows[0][0])
        return cls(dim, h_rep=tuple(rows))

    @classmethod
    def from_generators(cls, vertices, rays=(), dim=None):
        vertices, rays = list(vertices), list(rays)
        if dim is None:
            dim = len((vertices + rays)[0])
        return cls(dim, v_rep=(tuple(vertices), tuple(rays)))

    @property
    def vertices(self) -> tuple:
        return self.v_rep[0]

    @property
    def rays(self) -> tuple:
        return self.v_rep[1]

    def is_bounded_v(self) -> bool:
        return not self.v_rep[1]

    def contains(self, x) -> bool:
        x = vec(x)
        if len(x) != self.dim:
            raise DimensionError("point has wrong dimension")
        if self.h_rep is not None:
            return all(dot(a, x) <= c for a, c in self.h_rep)
        return conv_decompose(self, x) is not None

    def recession_contains(self, r) -> bool:
        r = vec(r)
        if self.h_rep is None:
            raise InputError("recession membership needs an H-rep")
        return all(dot(a, r) <= 0 for a, _ in self.h_rep)


def box(dim: int, radius=1) -> Polyhedron:
    """The l-infinity ball ``[-radius, radius]^dim`` with both representations."""
    radius = Fraction(radius)
    rows = []
    for k in range(dim):
        e = unit(dim, k)
        rows.append((e, radius))
        rows.append((neg(e), radius))
    verts = [tuple(radius * s for s in signs) for signs in itertools.product((1, -1), repeat=dim)]
    return Polyhedron(dim, h_rep=tuple(rows), v_rep=(tuple(verts), ()))


# ---------------------------------------------------------------------------
# Linear programming
# ---------------------------------------------------------------------------


class LpStatus(enum.Enum):
    OPTIMAL = "Optimal"
    UNBOUNDED = "Unbounded"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    optimum: Optional[Fraction] = None
    witness: Optional[Vector] = None
    dual: Optional[Vector] = field(default=None, compare=False)

    def __post_init__(self):
        if self.status is LpStatus.OPTIMAL and (self.optimum is None or self.witness is None):
            raise ValueError("optimal outcome needs optimum and witness")
        if self.status is LpStatus.UNBOUNDED and self.witness is None:
            raise ValueError("unbounded outcome needs an improving ray")


def _pivot(tab, obj, r, c):
    row = tab[r]
    p = row[c]
    if p != 1:
        row = [v / p for v in row]
        tab[r] = row
    for i, other in enumerate(tab):
        if i != r:
            f = other[c]
            if f:
                tab[i] = [a - f * b for a, b in zip(other, row)]
    f = obj[c]
    if f:
        obj[:] = [a - f * b for a, b in zip(obj, row)]


def _run_simplex(tab, obj, basis, allowed):
    """Bland's-rule primal simplex on a canonical tableau (maximization).

    ``obj[j]`` holds the reduced cost ``c_B B^-1 A_j - c_j``; optimal when
    every allowed entry is >= 0.  Returns ``None`` at optimum or the
    entering column index when the problem is unbounded along it.
    """
    while True:
        enter = next((j for j in allowed if obj[j] < 0), None)
        if enter is None:
            return None
        best = None
        for i, row in enumerate(tab):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return enter
        leave = best[1]
        _pivot(tab, obj, leave, enter)
        basis[leave] = enter


def _lp_core(A, b, c):
    """Maximize ``c.x`` subject to ``A x <= b`` with ``x`` free."""
    m, n = len(A), len(c)
    # columns: x+ (n) | x- (n) | slack (m) | artificial (k)
    need_art = [i for i in range(m) if b[i] < 0]
    k = len(need_art)
    ncols = 2 * n + m + k
    tab = []
    basis = []
    zero = Fraction(0)
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        row = [zero] * (ncols + 1)
        for j in range(n):
            row[j] = sign * A[i][j]
            row[n + j] = -sign * A[i][j]
        row[2 * n + i] = Fraction(sign)
        row[-1] = sign * b[i]
        if sign < 0:
            a_col = 2 * n + m + need_art.index(i)
            row[a_col] = Fraction(1)
            basis.append(a_col)
        else:
            basis.append(2 * n + i)
        tab.append(row)

    real_cols = list(range(2 * n + m))
    if k:
        # phase I: maximize -sum(artificials)
        obj = [zero] * (ncols + 1)
        for j in range(2 * n + m, ncols):
            obj[j] = Fraction(1)
        for i, bv in enumerate(basis):
            if bv >= 2 * n + m:
                obj = [a - v for a, v in zip(obj, tab[i])]
        _run_simplex(tab, obj, basis, list(range(ncols)))
        if obj[-1] != 0:
            return LpOutcome(LpStatus.INFEASIBLE)
        for i, bv in enumerate(basis):
            if bv >= 2 * n + m:
                # every row carries its own slack, so a real pivot column exists
                col = next(j for j in real_cols if tab[i][j] != 0)
                _pivot(tab, obj, i, col)
                basis[i] = col
        tab = [row[: 2 * n + m] + [row[-1]] for row in tab]
        ncols = 2 * n + m

    cost = [Fraction(cj) for cj in c] + [-Fraction(cj) for cj in c] + [zero] * m
    obj = [-v for v in cost] + [zero]
    for i, bv in enumerate(basis):
        f = cost[bv]
        if f:
            obj = [a + f * v for a, v in zip(obj, tab[i])]
    enter = _run_simplex(tab, obj, basis, real_cols)

    if enter is not None:
        d = [zero] * ncols
        d[enter] = Fraction(1)
        for i, bv in enumerate(basis):
            d[bv] = -tab[i][enter]
        ray = tuple(d[j] - d[n + j] for j in range(n))
        return LpOutcome(LpStatus.UNBOUNDED, witness=ray)

    z = [zero] * ncols
    for i, bv in enumerate(basis):
        z[bv] = tab[i][-1]
    x = tuple(z[j] - z[n + j] for j in range(n))
    y = tuple(obj[2 * n + i] for i in range(m))
    return LpOutcome(LpStatus.OPTIMAL, optimum=obj[-1], witness=x, dual=y)


def solve_lp(objective, region: Polyhedron) -> LpOutcome:
    """Maximize ``<objective, x>`` over ``region`` exactly.

    Optimal outcomes carry the optimal point and a dual certificate
    ``y >= 0`` with ``A^T y = objective`` and ``<b, y> = optimum``.
    Unbounded outcomes carry a recession ray with positive objective.
    """
    c = vec(objective)
    if len(c) != region.dim:
        raise DimensionError(f"objective length {len(c)} != region dimension {region.dim}")
    if region.h_rep is None:
        raise InputError("solve_lp needs an H-representation")
    A = [a for a, _ in region.h_rep]
    b = [off for _, off in region.h_rep]
    out = _lp_core(A, b, c)
    if out.status is LpStatus.OPTIMAL:
        y = out.dual
        ok = all(v >= 0 for v in y) and all(
            sum((y[i] * A[i][j] for i in range(len(A))), Fraction(0)) == c[j] for j in range(len(c))
        ) and dot(b, y) == out.optimum and dot(c, out.witness) == out.optimum
        if not ok:  # pragma: no cover - would indicate a solver bug
            raise ArithmeticError("LP duality certificate failed")
    return out


# ---------------------------------------------------------------------------
# Double description
# ---------------------------------------------------------------------------


def _dd_cone(H, d):
    """Generators (lineality basis, extreme rays) of ``{z : H z <= 0}``."""
    lin = [unit(d, k) for k in range(d)]
    rays: list = []
    processed: list = []
    for h in H:
        idx = next((k for k, l in enumerate(lin) if dot(h, l) != 0), None)
        if idx is not None:
            l = lin.pop(idx)
            hl = dot(h, l)
            lin = [sub(mv, scale(dot(h, mv) / hl, l)) for mv in lin]
            rays = [primitive(sub(r, scale(dot(h, r) / hl, l))) for r in rays]
            rays.append(primitive(l if hl < 0 else neg(l)))
            processed.append(h)
            continue
        vals = [dot(h, r) for r in rays]
        minus = [(r, v) for r, v in zip(rays, vals) if v < 0]
        keep = [r for r, v in zip(rays, vals) if v <= 0]
        target = d - len(lin) - 2
        for rp, vp in ((r, v) for r, v in zip(rays, vals) if v > 0):
            for rm, vm in minus:
                common = [g for g in processed if dot(g, rp) == 0 and dot(g, rm) == 0]
                if target >= 0 and len(common) >= target and rank(common) == target:
                    keep.append(primitive(sub(scale(vp, rm), scale(vm, rp))))
        seen = set()
        rays = []
        for r in keep:
            if r not in seen:
                seen.add(r)
                rays.append(r)
        processed.append(h)
    return [primitive(l) for l in lin], rays


def enumerate_v_rep(region: Polyhedron, limits: Limits = DEFAULT_LIMITS) -> Polyhedron:
    """Populate the V-representation of an H-polyhedron by double description.

    Lineality directions, if any, are reported as pairs of opposite rays.
    An empty polyhedron gets an empty vertex list.
    """
    if region.h_rep is None:
        raise InputError("enumerate_v_rep needs an H-representation")
    if region.dim > limits.dim_cap:
        raise CapacityError(f"dimension {region.dim} exceeds cap {limits.dim_cap}")
    n = region.dim
    H = [tuple(a) + (-c,) for a, c in region.h_rep]
    H.insert(0, (Fraction(0),) * n + (Fraction(-1),))
    lin, rays = _dd_cone(H, n + 1)
    verts, rec = [], []
    for l in lin:
        rec.append(l[:n])
        rec.append(neg(l[:n]))
    for r in rays:
        t = r[n]
        if t > 0:
            v = tuple(x / t for x in r[:n])
            if v not in verts:
                verts.append(v)
        else:
            rec.append(r[:n])
    if not verts:
        rec = []
    return Polyhedron(n, h_rep=region.h_rep, v_rep=(tuple(verts), tuple(rec)))


def recession_cone(region: Polyhedron) -> Polyhedron:
    """``{r : <a, r> <= 0}`` for every inequality of the H-rep."""
    if region.h_rep is None:
        raise InputError("recession_cone needs an H-representation")
    return Polyhedron(region.dim, h_rep=tuple((a, Fraction(0)) for a, _ in region.h_rep))


def _contains_origin(region: Polyhedron) -> bool:
    if region.h_rep is not None:
        return all(c >= 0 for _, c in region.h_rep)
    return conv_decompose(region, (Fraction(0),) * region.dim) is not None


def polar(region: Polyhedron) -> Polyhedron:
    """``{phi : <phi, v> <= 1 for vertices v, <phi, r> <= 0 for rays r}``."""
    if region.v_rep is None:
        raise InputError("polar needs a V-representation")
    if not _contains_origin(region):
        raise DomainError("polar requires 0 in the region")
    verts, rays = region.v_rep
    rows = [(v, Fraction(1)) for v in verts] + [(r, Fraction(0)) for r in rays]
    return Polyhedron(region.dim, h_rep=tuple(rows))


def conv_decompose(region: Polyhedron, x) -> Optional[tuple]:
    """Find ``x = sum lam_i v_i + sum mu_j r_j`` (lam in the simplex, mu >= 0).

    Returns ``(lam, mu)`` or ``None`` when ``x`` is not in the V-polyhedron.
    """
    verts, rays = region.v_rep
    if not verts:
        return None
    x = vec(x)
    nv, nr = len(verts), len(rays)
    nvar = nv + nr
    rows = []
    zero = Fraction(0)
    for k in range(region.dim):
        coeffs = tuple(v[k] for v in verts) + tuple(r[k] for r in rays)
        rows.append((coeffs, x[k]))
        rows.append((tuple(-c for c in coeffs), -x[k]))
    ones = (Fraction(1),) * nv + (zero,) * nr
    rows.append((ones, Fraction(1)))
    rows.append((tuple(-v for v in ones), Fraction(-1)))
    for j in range(nvar):
        rows.append((tuple(Fraction(-1) if i == j else zero for i in range(nvar)), zero))
    out = solve_lp((zero,) * nvar, Polyhedron(nvar, h_rep=tuple(rows)))
    if out.status is LpStatus.INFEASIBLE:
        return None
    w = out.witness
    return tuple(w[:nv]), tuple(w[nv:])


# ---------------------------------------------------------------------------
# Triangulation of bounded polytopes
# ---------------------------------------------------------------------------


def _affine_dim(points) -> int:
    if not points:
        return -1
    base = points[0]
    return rank([sub(p, base) for p in points[1:]]) if len(points) > 1 else 0


def pulling_triangulation(region: Polyhedron) -> list:
    """Triangulate a bounded polytope with both representations.

    Each simplex is a tuple of vertices.  Pulling: cone the first vertex
    over the triangulations of the facets that avoid it, recursively.
    """
    if region.v_rep is None or region.h_rep is None:
        raise InputError("triangulation needs both representations")
    if region.rays:
        raise DomainError("triangulation needs a bounded polytope")
    verts = list(region.vertices)
    tight = {v: frozenset(i for i, (a, c) in enumerate(region.h_rep) if dot(a, v) == c) for v in verts}

    def tri(face, k):
        if k == 0:
            return [(face[0],)]
        apex = face[0]
        out = []
        seen = set()
        for i in range(len(region.h_rep)):
            sub_face = tuple(v for v in face if i in tight[v])
            if not sub_face or len(sub_face) == len(face) or apex in sub_face:
                continue
            key = frozenset(sub_face)
            if key in seen:
                continue
            if _affine_dim(list(sub_face)) != k - 1:
                continue
            seen.add(key)
            for s in tri(sub_face, k - 1):
                out.append(s + (apex,))
        return out

    return tri(tuple(verts), _affine_dim(verts))


def h_to_v_bruteforce(region: Polyhedron) -> list:
    """Vertices of an H-polyhedron by intersecting all dim-subsets of facets.

    Independent oracle for :func:`enumerate_v_rep`; exponential, test use.
    """
    n = region.dim
    rows = list(region.h_rep)
    found = []
    for combo in itertools.combinations(rows, n):
        A = [list(a) for a, _ in combo]
        b = [c for _, c in combo]
        sol = _solve_square(A, b)
        if sol is None:
            continue
        if all(dot(a, sol) <= c for a, c in rows) and sol not in found:
            found.append(sol)
    return found


def _solve_square(A, b) -> Optional[Vector]:
    n = len(A)
    m = [list(A[i]) + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * c for a, c in zip(m[i], m[col])]
    return tuple(m[i][n] for i in range(n))
