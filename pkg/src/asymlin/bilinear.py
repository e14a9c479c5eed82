"""Bilinear operators and forms on polyhedral asymmetric normed spaces.

Every supremum of a bilinear expression over a product of unit balls is
computed exactly.  For fixed ``y`` the map ``x -> b.T(x, y)`` is linear,
so over ``conv(V) + cone(R)`` it is unbounded iff it is positive on a
ray and otherwise peaks at a vertex; the same holds in ``y``.  Hence the
supremum is infinite iff some (ray, vertex), (vertex, ray) or (ray, ray)
pair gives a positive value, and is a max over vertex pairs otherwise.
"""

from __future__ import annotations

import enum
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from ._rational import (
    INF,
    DimensionError,
    InputError,
    dot,
    ext_mul,
    inverse,
    is_zero,
    matvec,
    neg,
    rank,
    scale,
    sub,
    unit,
    vec,
)
from .linear import (
    Functional,
    LinearOp,
    cover_dual_ball,
    dual_ball,
    norming_functional,
    op_norm,
    star_norm,
)
from .polyhedral import (
    DEFAULT_LIMITS,
    Limits,
    LpStatus,
    Polyhedron,
    enumerate_v_rep,
    solve_lp,
)
from .precompact import GridNet, sample_polyhedron
from .space import AsymNorm, _tail_index, eval_norm, symmetrize, unit_ball

__all__ = [
    "BilinearOp",
    "BilinearForm",
    "OperatorDistance",
    "bilin_norm",
    "bilin_norm_witness",
    "bilin_norm_lp",
    "bilin_norm_alternating",
    "sym_norm",
    "form_norm",
    "form_norm_lp",
    "form_sym_norm",
    "RescalingVerdict",
    "rescaling_equivalence_check",
    "bilinear_adjoint",
    "adjoint_norm",
    "adjoint_norm_lower_witness",
    "operator_distance",
    "form_distance",
    "W2Report",
    "w2_converges",
    "AlaogluResult",
    "alaoglu_desk_check",
    "Verdict3",
    "PrecompactClass",
    "precompact_class",
    "ProductNetCertificate",
    "product_net",
    "certificate_bound",
    "verify_product_net",
    "BilinearSchauderResult",
    "schauder_bilinear_net",
    "verify_schauder",
    "RightComposition",
    "bideal_compose_left",
    "bideal_compose_right",
    "transport_left",
    "transport_right",
    "rank_one_form_tensor",
    "rank_one_norm",
    "ClosednessVerdict",
    "closedness_limit_check",
    "arens_adjoint",
    "arens_norm",
    "check_bilinearity",
]


# ---------------------------------------------------------------------------
# Data
# ---------------------------------------------------------------------------


@lru_cache(maxsize=256)
def _vrep(p) -> Polyhedron:
    return enumerate_v_rep(unit_ball(p), getattr(p, "limits", DEFAULT_LIMITS))


@lru_cache(maxsize=256)
def _sym(p) -> AsymNorm:
    return symmetrize(p)


def _bil(M, x, y):
    return sum((x[i] * dot(row, y) for i, row in enumerate(M) if x[i]), Fraction(0))


@dataclass(frozen=True)
class BilinearOp:
    tensor: tuple  # tensor[k][i][j]: target x source1 x source2
    source1: object
    source2: object
    target: object

    def __post_init__(self):
        t = tuple(tuple(vec(row) for row in m) for m in self.tensor)
        if len(t) != self.target.dim:
            raise DimensionError("tensor target index does not match the target norm")
        for m in t:
            if len(m) != self.source1.dim or any(len(r) != self.source2.dim for r in m):
                raise DimensionError("tensor source indices do not match the source norms")
        object.__setattr__(self, "tensor", t)

    def __call__(self, x, y):
        x, y = vec(x), vec(y)
        return tuple(_bil(m, x, y) for m in self.tensor)

    def contract(self, psi) -> tuple:
        """Form matrix of ``psi o T``."""
        psi = vec(psi)
        n1, n2 = self.source1.dim, self.source2.dim
        return tuple(
            tuple(sum((psi[k] * self.tensor[k][i][j] for k in range(len(psi)) if psi[k]), Fraction(0)) for j in range(n2))
            for i in range(n1)
        )

    def scaled(self, t) -> "BilinearOp":
        t = Fraction(t)
        return self.with_tensor(tuple(tuple(scale(t, r) for r in m) for m in self.tensor))

    def with_tensor(self, tensor) -> "BilinearOp":
        return BilinearOp(tensor, self.source1, self.source2, self.target)

    def signature(self) -> tuple:
        return (self.source1, self.source2, self.target)

    def __add__(self, other: "BilinearOp") -> "BilinearOp":
        _same_signature(self, other)
        return self.with_tensor(
            tuple(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(m, n)) for m, n in zip(self.tensor, other.tensor))
        )

    def __sub__(self, other: "BilinearOp") -> "BilinearOp":
        return self + other.scaled(-1)


@dataclass(frozen=True)
class BilinearForm:
    matrix: tuple  # source1 x source2
    source1: object
    source2: object

    def __post_init__(self):
        m = tuple(vec(r) for r in self.matrix)
        if len(m) != self.source1.dim or any(len(r) != self.source2.dim for r in m):
            raise DimensionError("form matrix does not match the source norms")
        object.__setattr__(self, "matrix", m)

    def __call__(self, x, y):
        return _bil(self.matrix, vec(x), vec(y))

    def __sub__(self, other: "BilinearForm") -> "BilinearForm":
        return BilinearForm(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)),
            self.source1,
            self.source2,
        )


def _same_signature(T1: BilinearOp, T2: BilinearOp):
    if T1.signature() != T2.signature():
        raise InputError("bilinear operators have different space signatures")


def check_bilinearity(T: BilinearOp, rng: random.Random, trials: int = 10) -> bool:
    """Spot check ``T(sx + tx', y) = sT(x, y) + tT(x', y)`` and symmetrically."""

    def rv(n):
        return tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n))

    n1, n2 = T.source1.dim, T.source2.dim
    for _ in range(trials):
        s, t = Fraction(rng.randint(-5, 5), rng.randint(1, 3)), Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        x, x2, y, y2 = rv(n1), rv(n1), rv(n2), rv(n2)
        lhs = T(tuple(s * a + t * b for a, b in zip(x, x2)), y)
        rhs = tuple(s * a + t * b for a, b in zip(T(x, y), T(x2, y)))
        if lhs != rhs:
            return False
        lhs = T(x, tuple(s * a + t * b for a, b in zip(y, y2)))
        rhs = tuple(s * a + t * b for a, b in zip(T(x, y), T(x, y2)))
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# Suprema over products of balls
# ---------------------------------------------------------------------------


def _sup_forms(mats, B1: Polyhedron, B2: Polyhedron, vscale1=1, vscale2=1):
    """``(sup max_m x^T M y, witness)`` over ``B1 x B2``.

    ``vscale`` multiplies the vertices (balls of radius ``r``).  The witness
    is ``(kind, x, y, m)`` with kind one of ``vertex``, ``ray-vertex``,
    ``vertex-ray``, ``ray-ray``.
    """
    V1 = [scale(vscale1, v) for v in B1.vertices]
    V2 = [scale(vscale2, w) for w in B2.vertices]
    R1, R2 = B1.rays, B2.rays
    for m, M in enumerate(mats):
        for r in R1:
            for w in V2:
                if _bil(M, r, w) > 0:
                    return INF, ("ray-vertex", r, w, m)
            for s in R2:
                if _bil(M, r, s) > 0:
                    return INF, ("ray-ray", r, s, m)
        for v in V1:
            for s in R2:
                if _bil(M, v, s) > 0:
                    return INF, ("vertex-ray", v, s, m)
    best, wit = None, None
    for m, M in enumerate(mats):
        for v in V1:
            Mv = tuple(sum((v[i] * M[i][j] for i in range(len(v)) if v[i]), Fraction(0)) for j in range(len(M[0])))
            for w in V2:
                val = dot(Mv, w)
                if best is None or val > best:
                    best, wit = val, ("vertex", v, w, m)
    return best, wit


def _gen_forms(T: BilinearOp, gens) -> list:
    return [T.contract(b) for b in gens]


def bilin_norm_witness(T: BilinearOp):
    """``(||T|, witness)`` by vertex-pair enumeration; see the module notes."""
    return _sup_forms(_gen_forms(T, T.target.generators), _vrep(T.source1), _vrep(T.source2))


def bilin_norm(T: BilinearOp):
    """``||T| = sup{q(T(x, y)) : p1(x) <= 1, p2(y) <= 1}``."""
    return bilin_norm_witness(T)[0]


def _sup_forms_lp(mats, p1, B2: Polyhedron):
    """Same supremum, solving an LP over the H-rep of ``B_{p1}`` per ``y``."""
    ball1 = unit_ball(p1)
    best = Fraction(0)
    for M in mats:
        for y, is_ray in [(s, True) for s in B2.rays] + [(w, False) for w in B2.vertices]:
            out = solve_lp(tuple(dot(row, y) for row in M), ball1)
            if out.status is LpStatus.UNBOUNDED or (is_ray and out.optimum > 0):
                return INF
            if not is_ray:
                best = max(best, out.optimum)
    return best


def bilin_norm_lp(T: BilinearOp):
    """Independent route to ``||T|``: LPs in ``x``, enumeration in ``y``."""
    return _sup_forms_lp(_gen_forms(T, T.target.generators), T.source1, _vrep(T.source2))


def bilin_norm_alternating(T: BilinearOp, starts: int = 4, seed: int = 0):
    """Lower bound on ``||T|`` by alternating maximization over vertices.

    From seeded starting vertices ``w`` of ``B_{p2}``, pick the best vertex
    ``v`` of ``B_{p1}`` for ``w``, then the best ``w`` for ``v``, until the
    value stops increasing.  Only a cross-check: it may stop at a local
    maximum, and it returns ``INF`` only on a ray it happens to test.
    """
    B1, B2 = _vrep(T.source1), _vrep(T.source2)
    q = T.target
    for r in B1.rays:
        if any(eval_norm(q, T(r, w)) > 0 for w in B2.vertices):
            return INF
    for s in B2.rays:
        if any(eval_norm(q, T(v, s)) > 0 for v in B1.vertices):
            return INF
    rng = random.Random(seed)
    best = Fraction(0)
    for _ in range(starts):
        w = rng.choice(B2.vertices)
        val = None
        while True:
            v = max(B1.vertices, key=lambda x: eval_norm(q, T(x, w)))
            w = max(B2.vertices, key=lambda y: eval_norm(q, T(v, y)))
            new = eval_norm(q, T(v, w))
            if val is not None and new <= val:
                break
            val = new
        best = max(best, val)
    return best


def sym_norm(T: BilinearOp) -> Fraction:
    """``||T|| = sup{q^s(T(x, y))}`` over the symmetrized (bounded) balls."""
    return _sup_forms(
        _gen_forms(T, _sym(T.target).generators), _vrep(_sym(T.source1)), _vrep(_sym(T.source2))
    )[0]


def form_norm(b: BilinearForm):
    """``||b| = sup{b(x, y)}`` over ``B_{p1} x B_{p2}``."""
    return _sup_forms([b.matrix], _vrep(b.source1), _vrep(b.source2))[0]


def form_norm_lp(b: BilinearForm):
    return _sup_forms_lp([b.matrix], b.source1, _vrep(b.source2))


def form_sym_norm(b: BilinearForm) -> Fraction:
    """``||b|| = sup{|b(x, y)|}`` over the symmetrized balls."""
    neg = tuple(tuple(-a for a in r) for r in b.matrix)
    return _sup_forms([b.matrix, neg], _vrep(_sym(b.source1)), _vrep(_sym(b.source2)))[0]


# ---------------------------------------------------------------------------
# Rescaling lemma
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RescalingVerdict:
    beta: Fraction
    r: Fraction
    cond_i: bool  # ||T| <= beta / r^2
    cond_ii: bool  # sup over r-balls <= beta
    degenerate: bool  # B_{p1} has rays, i.e. p1 vanishes off 0
    zero_branch_ok: Optional[bool]  # q(T(x, y)) = 0 whenever p1(x) = 0

    @property
    def agree(self) -> bool:
        return self.cond_i == self.cond_ii


def rescaling_equivalence_check(T: BilinearOp, beta, r) -> RescalingVerdict:
    beta, r = Fraction(beta), Fraction(r)
    if r <= 0:
        raise InputError("r must be positive")
    if beta < 0:
        raise InputError("beta must be nonnegative")
    norm = bilin_norm(T)
    cond_i = norm <= beta / (r * r)
    mats = _gen_forms(T, T.target.generators)
    B1, B2 = _vrep(T.source1), _vrep(T.source2)
    on_r_balls = _sup_forms(mats, B1, B2, r, r)[0]
    cond_ii = on_r_balls <= beta
    degenerate = bool(B1.rays)
    zero_ok = None
    if degenerate and cond_i:
        zero_ok = all(
            eval_norm(T.target, T(x, y)) == 0
            for x in B1.rays
            for y in tuple(B2.vertices) + tuple(B2.rays)
        )
    return RescalingVerdict(beta, r, cond_i, cond_ii, degenerate, zero_ok)


# ---------------------------------------------------------------------------
# Adjoints
# ---------------------------------------------------------------------------


def bilinear_adjoint(T: BilinearOp, psi) -> BilinearForm:
    """``T^flat psi = psi o T``."""
    if isinstance(psi, Functional):
        psi = psi.vector
    psi = vec(psi)
    if len(psi) != T.target.dim:
        raise DimensionError("functional does not live on the target space")
    return BilinearForm(T.contract(psi), T.source1, T.source2)


def adjoint_norm(T: BilinearOp, limits: Limits = DEFAULT_LIMITS):
    """``||T^flat| = max form_norm(T^flat psi)`` over the vertices of ``B_{q^flat}``."""
    best = Fraction(0)
    for psi in dual_ball(T.target, limits).vertices:
        val = form_norm(bilinear_adjoint(T, psi))
        if val == INF:
            return INF
        best = max(best, val)
    return best


def adjoint_norm_lower_witness(T: BilinearOp):
    """``form_norm(T^flat psi)`` for the norming functional ``psi`` of ``T(x, y)``
    at a maximizing pair; this is at least ``||T|`` when ``||T|`` is positive."""
    val, wit = bilin_norm_witness(T)
    if val == INF or val == 0 or wit[0] != "vertex":
        return val, None
    psi = norming_functional(T.target, T(wit[1], wit[2]))
    return form_norm(bilinear_adjoint(T, psi)), psi


def arens_adjoint(T: BilinearOp, psi, x) -> Functional:
    """``T^star(psi, x) = psi(T(x, .))`` as a functional on the second source."""
    if isinstance(psi, Functional):
        psi = psi.vector
    psi, x = vec(psi), vec(x)
    if len(psi) != T.target.dim or len(x) != T.source1.dim:
        raise DimensionError("Arens adjoint arguments do not match the operator")
    M = T.contract(psi)
    return Functional(tuple(sum((x[i] * M[i][j] for i in range(len(x))), Fraction(0)) for j in range(T.source2.dim)), T.source2)


def arens_norm(T: BilinearOp, limits: Limits = DEFAULT_LIMITS) -> Fraction:
    """``||T^star||`` over the vertices of the dual ball of ``q^s`` and of ``B_{p1^s}``;
    the inner norm is an LP over ``B_{p2^s}``."""
    psis = dual_ball(_sym(T.target), limits).vertices
    xs = _vrep(_sym(T.source1)).vertices
    best = Fraction(0)
    for psi in psis:
        for x in xs:
            best = max(best, star_norm(arens_adjoint(T, psi, x)))
    return best


# ---------------------------------------------------------------------------
# Distances and convergence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OperatorDistance:
    forward: object
    symmetric: object


def operator_distance(T1: BilinearOp, T2: BilinearOp) -> OperatorDistance:
    """``d(T1, T2)`` under ``q`` and ``d_s(T1, T2)`` under ``q^s``, both over
    ``B_{p1} x B_{p2}``."""
    _same_signature(T1, T2)
    diff = T2 - T1
    B1, B2 = _vrep(T1.source1), _vrep(T1.source2)
    fwd = _sup_forms(_gen_forms(diff, T1.target.generators), B1, B2)[0]
    sym = _sup_forms(_gen_forms(diff, _sym(T1.target).generators), B1, B2)[0]
    return OperatorDistance(fwd, sym)


def form_distance(b1: BilinearForm, b2: BilinearForm):
    """``delta(b1, b2) = ||b2 - b1|``; infinite when ``b2 - b1`` leaves the cone."""
    return form_norm(b2 - b1)


@dataclass(frozen=True)
class W2Report:
    eps_schedule: tuple
    u_tails: tuple  # [probe][eps]
    abs_tails: tuple
    sym_u_tails: tuple  # u-tails over {(x, y), (-x, y)}

    @property
    def agree(self) -> bool:
        return self.sym_u_tails == self.abs_tails

    @property
    def u_convergent(self) -> bool:
        return all(t is not None for row in self.u_tails for t in row)

    @property
    def convergent(self) -> bool:
        return all(t is not None for row in self.abs_tails for t in row)


def w2_converges(seq: Sequence, b: BilinearForm, probes: Sequence, eps_schedule: Sequence) -> W2Report:
    if not seq:
        raise InputError("empty sequence")
    eps_schedule = tuple(Fraction(e) for e in eps_schedule)
    u_t, a_t, s_t = [], [], []
    for x, y in probes:
        x, y = vec(x), vec(y)
        diffs = [bi(x, y) - b(x, y) for bi in seq]
        up = [max(v, Fraction(0)) for v in diffs]
        down = [max(-v, Fraction(0)) for v in diffs]  # u at (-x, y)
        ab = [abs(v) for v in diffs]
        u_t.append(tuple(_tail_index(up, e) for e in eps_schedule))
        a_t.append(tuple(_tail_index(ab, e) for e in eps_schedule))
        s_t.append(tuple(_tail_index([max(a, c) for a, c in zip(up, down)], e) for e in eps_schedule))
    return W2Report(eps_schedule, tuple(u_t), tuple(a_t), tuple(s_t))


# ---------------------------------------------------------------------------
# Alaoglu at desk scale
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlaogluResult:
    indices: tuple  # strictly increasing subsequence (0-based)
    boxes: tuple  # per selected term, the entry box it lies in
    limit: BilinearForm
    limit_norm: Fraction
    bound_ok: bool

    def entry_errors(self, seq) -> tuple:
        """``max_ij |b_{n_k}[i][j] - limit[i][j]|`` along the subsequence."""
        L = self.limit.matrix
        return tuple(
            max(abs(a - c) for r, s in zip(seq[n].matrix, L) for a, c in zip(r, s)) for n in self.indices
        )


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational of least denominator in ``[lo, hi]``."""
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -_simplest_between(-hi, -lo)
    fl = math.floor(lo)
    if fl == lo or fl + 1 <= hi:
        return Fraction(fl if fl == lo else fl + 1)
    # lo, hi share integer part: recurse on reciprocals of fractional parts
    rest = _simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / rest


def _entry_bound(p1, p2, i, j) -> Fraction:
    s1, s2 = _sym(p1), _sym(p2)
    e1 = tuple(Fraction(int(k == i)) for k in range(p1.dim))
    e2 = tuple(Fraction(int(k == j)) for k in range(p2.dim))
    return eval_norm(s1, e1) * eval_norm(s2, e2)


def _probe_pairs(p1, p2, rng: random.Random, extra: int = 16):
    xs = list(_vrep(_sym(p1)).vertices)
    ys = list(_vrep(_sym(p2)).vertices)
    for _ in range(extra):
        xs.append(tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(p1.dim)))
        ys.append(tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(p2.dim)))
    return [(x, y) for x in xs for y in ys]


def _entry_bound_holds(b: BilinearForm, probes) -> bool:
    s1, s2 = _sym(b.source1), _sym(b.source2)
    return all(abs(b(x, y)) <= eval_norm(s1, x) * eval_norm(s2, y) for x, y in probes)


def alaoglu_desk_check(p1, p2, seq: Sequence, probes: Sequence = (), seed: int = 0, max_rounds: int = 64) -> AlaogluResult:
    """Diagonal extraction of an entrywise convergent subsequence.

    Entries are boxed by ``|b_ij| <= p1^s(e_i) p2^s(e_j)``.  Each round
    halves one entry's interval (entries in turn), keeping the half that
    holds the latest surviving term, the finite stand-in for "infinitely
    many terms", and then selects the next term from the survivors.  The
    halves are closed; a latest term on the midpoint goes to the half with
    fewer survivors, the side the sequence is moving to.  An entry is
    frozen once its half would keep fewer than two terms.  The k-th
    selected term lies in the k-th box.
    """
    if not seq:
        raise InputError("empty sequence")
    for n, b in enumerate(seq):
        if (b.source1, b.source2) != (p1, p2):
            raise InputError(f"form {n} lives on different spaces")
        if form_norm(b) > 1:
            raise InputError(f"form {n} is outside the unit ball (form norm {form_norm(b)})")
    n1, n2 = p1.dim, p2.dim
    entries = [(i, j) for i in range(n1) for j in range(n2)]
    box = {e: [-_entry_bound(p1, p2, *e), _entry_bound(p1, p2, *e)] for e in entries}
    alive = list(range(len(seq)))
    start = tuple(tuple(box[e]) for e in entries)
    chosen, boxes = [], []
    frozen = set()
    for rnd in range(max_rounds):
        if len(frozen) == len(entries):
            break
        e = entries[rnd % len(entries)]
        if e in frozen:
            continue
        lo, hi = box[e]
        mid = (lo + hi) / 2
        low = [n for n in alive if seq[n].matrix[e[0]][e[1]] <= mid]
        high = [n for n in alive if seq[n].matrix[e[0]][e[1]] >= mid]
        last = seq[alive[-1]].matrix[e[0]][e[1]]
        if last < mid or (last == mid and len(low) <= len(high)):
            keep, half = low, [lo, mid]
        else:
            keep, half = high, [mid, hi]
        nxt = [n for n in keep if not chosen or n > chosen[-1]]
        if len(keep) < 2 or not nxt:
            frozen.add(e)
            continue
        alive, box[e] = keep, half
        chosen.append(nxt[0])
        boxes.append(tuple(tuple(box[e2]) for e2 in entries))
    if not chosen:
        chosen, boxes = [alive[0]], [start]
    survivors = [n for n in alive if n >= chosen[-1]]
    lim = []
    for i in range(n1):
        row = []
        for j in range(n2):
            vals = {seq[n].matrix[i][j] for n in survivors}
            row.append(vals.pop() if len(vals) == 1 else _simplest_between(*box[(i, j)]))
        lim.append(tuple(row))
    limit = BilinearForm(tuple(lim), p1, p2)
    if form_norm(limit) > 1:
        # the box meets the (convex) ball: the survivors' mean lies in both
        k = len(survivors)
        limit = BilinearForm(
            tuple(tuple(sum(seq[n].matrix[i][j] for n in survivors) / k for j in range(n2)) for i in range(n1)), p1, p2
        )
    probes = list(probes) or _probe_pairs(p1, p2, random.Random(seed))
    ok = all(_entry_bound_holds(b, probes) for b in seq) and _entry_bound_holds(limit, probes)
    return AlaogluResult(tuple(chosen), tuple(boxes), limit, form_norm(limit), ok)


# ---------------------------------------------------------------------------
# Precompactness of bilinear operators
# ---------------------------------------------------------------------------


class Verdict3(enum.Enum):
    CERTIFIED = "Certified"
    REFUTED = "Refuted"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class PrecompactClass:
    q: Verdict3  # centers in the image
    qs: Verdict3
    q_outside: Verdict3  # centers anywhere
    witness: Optional[tuple] = None  # (kind, x-direction, y-direction, image ray)


def _image_rays(T: BilinearOp):
    """``T(r, w)``, ``T(v, s)``, ``T(r, s)``: each spans a ray of the image from 0."""
    B1, B2 = _vrep(T.source1), _vrep(T.source2)
    out = []
    for r in B1.rays:
        for w in B2.vertices:
            out.append(("ray-vertex", r, w, T(r, w)))
        for s in B2.rays:
            out.append(("ray-ray", r, s, T(r, s)))
    for v in B1.vertices:
        for s in B2.rays:
            out.append(("vertex-ray", v, s, T(v, s)))
    return out


def precompact_class(T: BilinearOp) -> PrecompactClass:
    """Classify ``T(B_{p1} x B_{p2})`` for ``q`` and ``q^s``.

    The image lies in ``conv{T(v, w)} + cone{image rays}`` and, since 0 is
    in both balls, contains every image ray from the origin.  So the rays
    decide outside precompactness exactly.  For ``q^s`` (a norm) this is
    also the inside notion.  For ``q`` with inside centers only the two
    implications are used; otherwise the verdict is Undetermined.
    """
    rays = _image_rays(T)
    qs_bad = next((w for w in rays if not is_zero(w[3])), None)
    q_bad = next((w for w in rays if eval_norm(T.target, w[3]) > 0), None)
    qs = Verdict3.REFUTED if qs_bad else Verdict3.CERTIFIED
    q_out = Verdict3.REFUTED if q_bad else Verdict3.CERTIFIED
    if qs is Verdict3.CERTIFIED:
        q = Verdict3.CERTIFIED
    elif q_out is Verdict3.REFUTED:
        q = Verdict3.REFUTED
    else:
        q = Verdict3.UNDETERMINED
    if q is Verdict3.CERTIFIED and bilin_norm(T) == INF:
        raise AssertionError("q-precompact operator with infinite norm")
    return PrecompactClass(q, qs, q_out, q_bad or qs_bad)


# ---------------------------------------------------------------------------
# Product-net certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProductNetCertificate:
    """A covering of ``T(B_{p1} x B_{p2})`` by closed ``gauge``-balls.

    ``kind`` fixes how a pair ``(x, y)`` is sent to its center:

    * ``grid``: cell points ``(x_k, y_k)`` of the grids, center ``T(x_k, y_k)``;
    * ``left``: ``R`` applied to the base certificate's center;
    * ``right``: base center of ``(S1 x / c, S2 y / c)`` times ``c^2``;
    * ``limit``: cell points of the base grids, center ``T(x_k, y_k)``.
    """

    operator: BilinearOp
    radius: Fraction
    gauge: AsymNorm
    kind: str = "grid"
    grid1: Optional[GridNet] = field(default=None, compare=False)
    grid2: Optional[GridNet] = field(default=None, compare=False)
    base: Optional["ProductNetCertificate"] = None
    post: Optional[LinearOp] = None
    pre: tuple = ()  # (S1, S2, c)

    @property
    def inside(self) -> bool:
        return self.kind in ("grid", "limit") or (self.kind == "left" and self.base.inside)

    def cell_pair(self, x, y):
        cert = self if self.kind == "grid" else self.base
        g1, g2 = cert.grid1, cert.grid2
        return g1.locate(g1.convex_part(x)), g2.locate(g2.convex_part(y))

    def center(self, x, y):
        if self.kind in ("grid", "limit"):
            return self.operator(*self.cell_pair(x, y))
        if self.kind == "left":
            return self.post(self.base.center(x, y))
        S1, S2, c = self.pre
        z = self.base.center(scale(1 / c, S1(x)), scale(1 / c, S2(y)))
        return scale(c * c, z)

    def net_size(self) -> int:
        cert = self
        while cert.kind not in ("grid",):
            cert = cert.base
        return len(cert.grid1.cells) * len(cert.grid2.cells)


def product_net(T: BilinearOp, eps) -> ProductNetCertificate:
    """``q^s`` grid certificate built in adapted coordinates ``u_i = G_i x``.

    For cell points ``(x_k, y_k)`` of cells of sides ``d1, d2``,
    ``q^s(T(x, y) - T(x_k, y_k)) <= d1 K1 + d2 K2`` with
    ``K1 = max q^s(T(G1^-1 a, w))`` over cube vertices ``a`` and hull
    vertices ``w`` of ``B_{p2}``, and ``K2 = max q^s(T(G1^-1 z, G2^-1 b))``
    over corners ``z`` of the first grid and cube vertices ``b``.  Only
    the convex parts matter: every image ray vanishes.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    cls = precompact_class(T)
    if cls.qs is not Verdict3.CERTIFIED:
        raise InputError("the image is not q^s-precompact")
    gauge = _sym(T.target)
    mats = _gen_forms(T, gauge.generators)
    V1, V2 = _vrep(T.source1).vertices, _vrep(T.source2).vertices

    def step(K, ext):
        return eps / (2 * K) if K else max(ext) + 1

    best = None
    for G1 in _candidate_bases(T.source1):
        K1 = _k1(mats, T.source1.dim, G1, V2)
        ext = _extent(G1, V1)
        d1 = step(K1, ext)
        size = math.prod(max(1, math.ceil(e / d1)) for e in ext)
        if best is None or size < best[0]:
            best = (size, G1, d1)
    _, G1, d1 = best
    g1 = GridNet.build(_with_rays(T.source1), d1, G1)
    corners = _grid_corners(g1)
    best = None
    for G2 in _candidate_bases(T.source2):
        K2 = _k2(mats, corners, T.source2.dim, G2)
        ext = _extent(G2, V2)
        d2 = step(K2, ext)
        size = math.prod(max(1, math.ceil(e / d2)) for e in ext)
        if best is None or size < best[0]:
            best = (size, G2, d2)
    _, G2, d2 = best
    g2 = GridNet.build(_with_rays(T.source2), d2, G2)
    return ProductNetCertificate(T, eps, gauge, "grid", g1, g2)


def _candidate_bases(p: AsymNorm) -> list:
    """The identity and every invertible choice of ``dim`` generator
    directions of ``p`` (up to sign)."""
    n = p.dim
    ident = tuple(unit(n, k) for k in range(n))
    dirs = []
    for g in p.generators:
        if any(g) and g not in dirs and neg(g) not in dirs:
            dirs.append(g)
    out = [ident]
    for combo in itertools.combinations(dirs, n):
        if rank(combo) == n:
            out.append(tuple(combo))
    return out


def _extent(G, verts) -> list:
    us = [matvec(G, v) for v in verts]
    return [max(u[k] for u in us) - min(u[k] for u in us) for k in range(len(G))]


def _cube(n) -> list:
    return [tuple(map(Fraction, a)) for a in itertools.product((-1, 1), repeat=n)]


def _k1(mats, n1, G1, V2) -> Fraction:
    Ginv = inverse(G1)
    dirs = [matvec(Ginv, a) for a in _cube(n1)]
    return max(_bil(M, a, w) for M in mats for a in dirs for w in V2)


def _k2(mats, corners, n2, G2) -> Fraction:
    Ginv = inverse(G2)
    dirs = [matvec(Ginv, b) for b in _cube(n2)]
    return max(_bil(M, z, b) for M in mats for z in corners for b in dirs)


def _grid_corners(g: GridNet) -> list:
    """Ambient corners of the region tiled by the cells of ``g``."""
    hi = tuple(l + c * g.delta for l, c in zip(g.lo, g.counts))
    zs = [tuple(z) for z in itertools.product(*zip(g.lo, hi))]
    if g.basis is None:
        return zs
    Ginv = inverse(g.basis)
    return [matvec(Ginv, z) for z in zs]


def _with_rays(p) -> Polyhedron:
    """The full unit ball with both representations: cell points come from
    the H-rep, ``convex_part`` strips ray components via the V-rep."""
    V = _vrep(p)
    return Polyhedron(p.dim, h_rep=unit_ball(p).h_rep, v_rep=(V.vertices, V.rays))


def _grid_bound(cert: ProductNetCertificate, T: BilinearOp) -> Fraction:
    g1, g2 = cert.grid1, cert.grid2
    if any(not is_zero(w[3]) for w in _image_rays(T)):
        return INF
    ident = lambda n: tuple(unit(n, k) for k in range(n))  # noqa: E731
    G1 = g1.basis or ident(T.source1.dim)
    G2 = g2.basis or ident(T.source2.dim)
    mats = _gen_forms(T, _sym(T.target).generators)
    V2 = _vrep(T.source2).vertices
    return g1.delta * _k1(mats, T.source1.dim, G1, V2) + g2.delta * _k2(mats, _grid_corners(g1), T.source2.dim, G2)


def _inclusion_holds(S: LinearOp, c: Fraction) -> bool:
    """``S(B') subset c B`` by one LP per generator (and domain ray) of ``B``."""
    ball = unit_ball(S.source)
    At = tuple(zip(*S.matrix))
    for g in S.target.generators:
        out = solve_lp(matvec(At, g), ball)
        if out.status is LpStatus.UNBOUNDED or out.optimum > c:
            return False
    return True


def certificate_bound(cert: ProductNetCertificate, T: BilinearOp):
    """Worst-case radius of ``cert`` for ``T``, recomputed from the data."""
    if cert.kind == "grid":
        if cert.operator.tensor != T.tensor:
            return INF
        return _grid_bound(cert, T)
    if cert.kind == "left":
        R = cert.post
        base_T = cert.base.operator
        expect = tuple(
            tuple(tuple(sum((R.matrix[k][l] * base_T.tensor[l][i][j] for l in range(len(base_T.tensor))), Fraction(0))
                        for j in range(T.source2.dim)) for i in range(T.source1.dim))
            for k in range(len(R.matrix))
        )
        if expect != T.tensor:
            return INF
        rs = op_norm(R.with_norms(_sym(base_T.target), _sym(R.target)))
        return ext_mul(rs, certificate_bound(cert.base, base_T))
    if cert.kind == "right":
        S1, S2, c = cert.pre
        base_T = cert.base.operator
        if not (_inclusion_holds(S1, c) and _inclusion_holds(S2, c)):
            return INF
        if _compose_right_tensor(base_T, S1, S2) != T.tensor:
            return INF
        return c * c * certificate_bound(cert.base, base_T)
    if cert.kind == "limit":
        base_T = cert.base.operator
        ds = operator_distance(T, base_T).symmetric
        return 2 * ds + certificate_bound(cert.base, base_T)
    raise InputError(f"unknown certificate kind {cert.kind!r}")


@dataclass(frozen=True)
class NetCheck:
    bound: object
    worst_sampled: Fraction
    samples: int
    inside_ok: bool

    def ok(self, radius) -> bool:
        return self.bound <= radius and self.worst_sampled <= radius and self.inside_ok


def verify_product_net(cert: ProductNetCertificate, T: BilinearOp, samples: int = 40, seed: int = 0) -> NetCheck:
    """Re-verify a certificate for ``T`` from scratch.

    Distances are recomputed at every vertex pair and at seeded samples of
    ``B_{p1} x B_{p2}``; the worst-case bound is recomputed from the data
    along the certificate's derivation.  Nothing stored is trusted.
    """
    rng = random.Random(seed)
    B1, B2 = _vrep(T.source1), _vrep(T.source2)
    xs = [v for v in B1.vertices] + [x for x, _ in sample_polyhedron(B1, samples, rng, ray_scale=5)]
    ys = [w for w in B2.vertices] + [y for y, _ in sample_polyhedron(B2, samples, rng, ray_scale=5)]
    pairs = [(v, w) for v in B1.vertices for w in B2.vertices] + list(zip(xs[len(B1.vertices):], ys[len(B2.vertices):]))
    g = cert.gauge
    worst = Fraction(0)
    inside = True
    for x, y in pairs:
        c = cert.center(x, y)
        worst = max(worst, eval_norm(g, sub(T(x, y), c)))
        if cert.inside and cert.kind in ("grid", "limit"):
            xk, yk = cert.cell_pair(x, y)
            inside = inside and unit_ball(T.source1).contains(xk) and unit_ball(T.source2).contains(yk)
    return NetCheck(certificate_bound(cert, T), worst, len(pairs), inside)


# ---------------------------------------------------------------------------
# Schauder construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BilinearSchauderResult:
    eps: Fraction
    certified: bool
    image_net: Optional[ProductNetCertificate] = None
    dual_net: tuple = ()  # centers psi_i in B_{q^flat}
    form_net: tuple = ()  # distinct matrices of T^flat psi_i
    radius: Optional[Fraction] = None
    witness: Optional[tuple] = None
    cover: tuple = field(default=(), compare=False, repr=False)


def schauder_bilinear_net(T: BilinearOp, eps, limits: Limits = DEFAULT_LIMITS) -> BilinearSchauderResult:
    """Finite ``3 eps``-net of ``T^flat(B_{q^flat})`` in the ``||.|`` gauge.

    Steps: an eps-net of the image under ``q^s``; a cover of the dual ball
    by simplices on which ``max_k (psi - psi_i).T(x_k, y_k) < eps``; the
    measured radius ``max form_norm(T^flat w - T^flat psi_i)`` over all
    simplex vertices ``w``.  The rows are the vertex-pair images, which
    dominate every net point because each row test is bilinear in the
    pair.
    """
    eps = Fraction(eps)
    cls = precompact_class(T)
    if cls.qs is not Verdict3.CERTIFIED:
        return BilinearSchauderResult(eps, False, witness=cls.witness)
    net = product_net(T, eps)
    B1, B2 = _vrep(T.source1), _vrep(T.source2)
    rows = list(dict.fromkeys(T(v, w) for v in B1.vertices for w in B2.vertices))
    dball = dual_ball(T.target, limits)
    cover = cover_dual_ball(dball, rows, eps)
    radius = Fraction(0)
    seen = {}
    for S, c in cover:
        for w in S:
            key = (w, c)
            if key not in seen:
                seen[key] = form_norm(bilinear_adjoint(T, sub(w, c)))
            radius = max(radius, seen[key])
    centers = tuple(dict.fromkeys(c for _, c in cover))
    forms = tuple(dict.fromkeys(T.contract(c) for c in centers))
    return BilinearSchauderResult(eps, radius <= 3 * eps, net, centers, forms, radius, cover=tuple(cover))


def verify_schauder(result: BilinearSchauderResult, T: BilinearOp, limits: Limits = DEFAULT_LIMITS) -> Fraction:
    """Independent re-check of a dual net; returns the worst verified distance.

    Every simplex vertex is compared with its center using the LP route
    for the form norm, and every vertex of a freshly computed ``B_{q^flat}``
    is matched to its nearest emitted form.
    """
    worst = Fraction(0)
    done = set()
    for S, c in result.cover:
        Mc = T.contract(c)
        for w in S:
            if (w, c) in done:
                continue
            done.add((w, c))
            diff = BilinearForm(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(T.contract(w), Mc)), T.source1, T.source2)
            worst = max(worst, form_norm_lp(diff))
    for psi in dual_ball(T.target, limits).vertices:
        M = T.contract(psi)
        best = min(
            form_norm_lp(BilinearForm(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(M, F)), T.source1, T.source2))
            for F in result.form_net
        )
        worst = max(worst, best)
    return worst


# ---------------------------------------------------------------------------
# Bideal laws
# ---------------------------------------------------------------------------


def bideal_compose_left(R: LinearOp, T: BilinearOp) -> BilinearOp:
    """``R o T``."""
    if R.source.dim != T.target.dim:
        raise InputError("R does not act on the target of T")
    n1, n2 = T.source1.dim, T.source2.dim
    tensor = tuple(
        tuple(
            tuple(sum((R.matrix[k][l] * T.tensor[l][i][j] for l in range(T.target.dim)), Fraction(0)) for j in range(n2))
            for i in range(n1)
        )
        for k in range(R.target.dim)
    )
    return BilinearOp(tensor, T.source1, T.source2, R.target)


def transport_left(R: LinearOp, T: BilinearOp, cert: ProductNetCertificate) -> Optional[ProductNetCertificate]:
    """Certificate for ``R o T`` with radius ``||R|_s * eps``; ``None`` if that is infinite."""
    RT = bideal_compose_left(R, T)
    rs = op_norm(R.with_norms(_sym(T.target), _sym(R.target)))
    if rs == INF:
        return None
    return ProductNetCertificate(RT, ext_mul(rs, cert.radius), _sym(R.target), "left", base=cert, post=R)


def _compose_right_tensor(T: BilinearOp, S1: LinearOp, S2: LinearOp) -> tuple:
    m1, m2 = S1.source.dim, S2.source.dim
    out = []
    for k in range(T.target.dim):
        TS2 = [[sum((T.tensor[k][i][j] * S2.matrix[j][b] for j in range(T.source2.dim)), Fraction(0)) for b in range(m2)]
               for i in range(T.source1.dim)]
        out.append(tuple(
            tuple(sum((S1.matrix[i][a] * TS2[i][b] for i in range(T.source1.dim)), Fraction(0)) for b in range(m2))
            for a in range(m1)
        ))
    return tuple(out)


@dataclass(frozen=True)
class RightComposition:
    operator: Optional[BilinearOp]
    beta1: object
    beta2: object
    beta: object
    inclusion_verified: bool
    certificate: Optional[ProductNetCertificate] = None


def bideal_compose_right(T: BilinearOp, S1: LinearOp, S2: LinearOp, cert: Optional[ProductNetCertificate] = None) -> RightComposition:
    """``T o (S1, S2)`` with ``beta = max(||S1|, ||S2|)`` and the LP check
    ``S_i(B'_i) subset beta B_i``.  The image then sits in
    ``beta^2 T(B x B)``, so a transported certificate has radius
    ``beta^2 eps`` with centers outside the new image."""
    if S1.target.dim != T.source1.dim or S2.target.dim != T.source2.dim:
        raise InputError("S1, S2 do not map into the sources of T")
    if (S1.target, S2.target) != (T.source1, T.source2):
        raise InputError("S1, S2 target norms differ from the sources of T")
    b1, b2 = op_norm(S1), op_norm(S2)
    beta = max(b1, b2)
    if beta == INF:
        return RightComposition(None, b1, b2, beta, False)
    TS = BilinearOp(_compose_right_tensor(T, S1, S2), S1.source, S2.source, T.target)
    c = beta if beta > 0 else Fraction(1)
    incl = _inclusion_holds(S1, c) and _inclusion_holds(S2, c)
    out = None
    if cert is not None and incl:
        out = transport_right(TS, cert, S1, S2, c)
    return RightComposition(TS, b1, b2, beta, incl, out)


def transport_right(TS: BilinearOp, cert: ProductNetCertificate, S1: LinearOp, S2: LinearOp, c) -> ProductNetCertificate:
    c = Fraction(c)
    return ProductNetCertificate(TS, c * c * cert.radius, cert.gauge, "right", base=cert, pre=(S1, S2, c))


def rank_one_form_tensor(phi: BilinearForm, z, target: AsymNorm) -> BilinearOp:
    """``(phi (x) z)(x, y) = phi(x, y) z``."""
    z = vec(z)
    if len(z) != target.dim:
        raise DimensionError("z does not live on the target space")
    tensor = tuple(tuple(scale(zk, row) for row in phi.matrix) for zk in z)
    return BilinearOp(tensor, phi.source1, phi.source2, target)


def rank_one_norm(phi: BilinearForm, z, target: AsymNorm):
    """``||phi (x) z| = max(||phi| q(z), ||-phi| q(-z))`` with ``0 * inf = 0``."""
    z = vec(z)
    negphi = BilinearForm(tuple(tuple(-a for a in r) for r in phi.matrix), phi.source1, phi.source2)
    return max(
        ext_mul(eval_norm(target, z), form_norm(phi)),
        ext_mul(eval_norm(target, tuple(-a for a in z)), form_norm(negphi)),
    )


# ---------------------------------------------------------------------------
# Closedness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosednessVerdict:
    eps_schedule: tuple
    tails: tuple  # per eps: 1-based n0 with d_s(T_m, T) <= eps for m >= n0, or None
    certificates: tuple  # per eps: limit certificate of radius 3 eps, or None
    verified: tuple  # per eps: re-verification outcome

    @property
    def uniformly_convergent(self) -> bool:
        return all(t is not None for t in self.tails)

    @property
    def certified(self) -> bool:
        return self.uniformly_convergent and all(self.verified)


def closedness_limit_check(
    seq: Sequence, T: BilinearOp, eps_schedule: Sequence, certificates: Optional[Sequence] = None
) -> ClosednessVerdict:
    """Transfer precompactness to a ``d_s``-limit.

    For a tail index ``n0`` with ``d_s(T_{n0}, T) <= eps`` the grids of an
    ``eps``-certificate for ``T_{n0}`` give centers ``T(x_k, y_k)`` within
    ``eps + eps + eps`` of every ``T(x, y)``.
    """
    if not seq:
        raise InputError("empty sequence")
    for n, Tn in enumerate(seq):
        _same_signature(Tn, T)
    eps_schedule = tuple(Fraction(e) for e in eps_schedule)
    dists = [operator_distance(Tn, T).symmetric for Tn in seq]
    tails, certs, ver = [], [], []
    for e in eps_schedule:
        n0 = None
        for i in range(len(dists) - 1, -1, -1):
            if dists[i] <= e:
                n0 = i + 1
            else:
                break
        tails.append(n0)
        if n0 is None:
            certs.append(None)
            ver.append(False)
            continue
        Tn0 = seq[n0 - 1]
        if certificates is not None:
            base = certificates[n0 - 1]
            if base is None:
                raise InputError(f"operator {n0} carries no certificate")
        else:
            base = product_net(Tn0, e)
        cert = ProductNetCertificate(T, 3 * e, _sym(T.target), "limit", base=base)
        certs.append(cert)
        ver.append(verify_product_net(cert, T).ok(3 * e))
    return ClosednessVerdict(eps_schedule, tuple(tails), tuple(certs), tuple(ver))
