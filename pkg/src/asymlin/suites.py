"""Seeded check suites and machine-readable reports.

Each suite owns a deterministic corpus and one check per corpus item.
``run_check`` replays a single item by id, so any failing record can be
reproduced on its own.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from ._rational import INF, InputError, fmt, fmt_vec, neg, rank
from .bilinear import (
    BilinearForm,
    BilinearOp,
    Verdict3,
    adjoint_norm,
    adjoint_norm_lower_witness,
    alaoglu_desk_check,
    arens_norm,
    bideal_compose_left,
    bideal_compose_right,
    bilin_norm,
    bilin_norm_lp,
    bilin_norm_witness,
    closedness_limit_check,
    form_norm,
    precompact_class,
    product_net,
    rank_one_form_tensor,
    rank_one_norm,
    rescaling_equivalence_check,
    schauder_bilinear_net,
    sym_norm,
    transport_left,
    verify_product_net,
    verify_schauder,
)
from .instances import generate_instances, random_norm_generators
from .linear import LinearOp, adjoint, adjoint_norm_by_vertices, op_norm, op_norm_witness
from .polyhedral import DEFAULT_LIMITS, Limits, Polyhedron, enumerate_v_rep
from .precompact import (
    escape_point,
    greedy_eps_net,
    is_bounded,
    polyhedron_precompact,
    sample_polyhedron,
    verify_certificate,
)
from .space import (
    AsymNorm,
    conjugate,
    eval_norm,
    linf_norm,
    quasi_metric,
    symmetrize,
    unit_ball,
)

__all__ = ["SuiteOptions", "CheckRecord", "SuiteReport", "SUITES", "run_suite", "run_check"]


@dataclass(frozen=True)
class SuiteOptions:
    seed: int = 0
    count: Optional[int] = None  # corpus size; suite default when None
    eps: Optional[Fraction] = None
    dim_cap: int = 4
    generator_cap: int = 8
    samples: int = 1000

    @property
    def limits(self) -> Limits:
        return Limits(max(self.dim_cap, DEFAULT_LIMITS.dim_cap), max(self.generator_cap, DEFAULT_LIMITS.generator_cap))


@dataclass(frozen=True)
class CheckRecord:
    suite: str
    tag: str
    instance: str
    status: str  # pass | fail | refused
    values: dict = field(default_factory=dict)
    witness: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "tag": self.tag,
            "instance": self.instance,
            "status": self.status,
            "values": dict(sorted(self.values.items())),
            "witness": self.witness,
        }


@dataclass
class SuiteReport:
    name: str
    seed: int
    records: list
    wall_time: float = 0.0

    @property
    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "refused": 0}
        for r in self.records:
            out[r.status] += 1
        return out

    @property
    def ok(self) -> bool:
        return self.counts["fail"] == 0

    def to_json(self, with_time: bool = True) -> str:
        data = {
            "suite": self.name,
            "seed": self.seed,
            "counts": self.counts,
            "records": [r.to_dict() for r in self.records],
        }
        if with_time:
            data["wall_time"] = f"{self.wall_time:.3f}"
        return json.dumps(data, indent=1, sort_keys=True)

    def to_text(self) -> str:
        c = self.counts
        lines = [f"suite {self.name} seed={self.seed}: {c['pass']} pass, {c['fail']} fail, {c['refused']} refused"]
        for r in self.records:
            vals = " ".join(f"{k}={v}" for k, v in sorted(r.values.items()))
            line = f"  [{r.status}] {r.instance} {r.tag} {vals}".rstrip()
            if r.witness:
                line += f" witness={r.witness}"
            lines.append(line)
        return "\n".join(lines)


def _v(x) -> str:
    if isinstance(x, tuple):
        return fmt_vec(x)
    return fmt(x)


def _rec(suite, tag, inst, ok, values, witness=None, refused=False) -> CheckRecord:
    status = "refused" if refused else ("pass" if ok else "fail")
    if status == "fail" and witness is None:
        witness = "see values"
    return CheckRecord(suite, tag, inst, status, {k: _v(v) if not isinstance(v, str) else v for k, v in values.items()}, witness)


def _rq(rng, lo=-3, hi=3, dens=(1, 1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(lo * 6, hi * 6), 6) if rng.random() < 0.2 else Fraction(rng.randint(lo, hi), rng.choice(dens))


def _rvec(rng, n, lo=-3, hi=3):
    return tuple(_rq(rng, lo, hi) for _ in range(n))


# ---------------------------------------------------------------------------
# Axioms and conjugation
# ---------------------------------------------------------------------------


def _norm_corpus(opts: SuiteOptions, default: int):
    insts = generate_instances(opts.seed, "mixed", opts.count or default, opts.dim_cap, opts.generator_cap)
    return [(i.name, i) for i in insts]


_POOL = tuple(sorted({Fraction(n, d) for d in (1, 2, 3, 6) for n in range(-3 * d, 3 * d + 1)}))
_SCALARS = tuple(sorted({Fraction(n, d) for d in (1, 2, 4) for n in range(0, 4 * d + 1)}))


def _check_axioms(item, opts: SuiteOptions) -> CheckRecord:
    name, inst = item
    dim, gens = inst.spaces["p"]
    p = AsymNorm(dim, gens, limits=opts.limits)
    rng = random.Random(f"axioms:{name}")
    rays = enumerate_v_rep(unit_ball(p), opts.limits).rays
    structural = rank(p.generators) == dim
    zero = (Fraction(0),) * dim
    for k in range(opts.samples):
        flat = rng.choices(_POOL, k=3 * dim)
        x, y, z = tuple(flat[:dim]), tuple(flat[dim:2 * dim]), tuple(flat[2 * dim:])
        if rays and k % 4 == 0:
            c = rng.choice(_SCALARS)
            x = tuple(c * a for a in rays[k % len(rays)])
        t = rng.choice(_SCALARS)
        px = p(x)
        dxy = quasi_metric(p, x, y)
        checks = {
            "AN1": px != 0 or x == zero or p(neg(x)) != 0,
            "AN2": p(tuple(t * a for a in x)) == t * px,
            "AN3": p(tuple(a + b for a, b in zip(x, y))) <= px + p(y),
            "nonneg": px >= 0,
            "QM1": quasi_metric(p, x, x) == 0 and (x == y or dxy != 0 or quasi_metric(p, y, x) != 0),
            "QM3": quasi_metric(p, x, z) <= dxy + quasi_metric(p, y, z),
        }
        bad = [c for c, ok in checks.items() if not ok]
        if bad:
            return _rec("axioms", ",".join(bad), name, False, {"triple": k}, f"x={_v(x)} y={_v(y)} z={_v(z)} t={fmt(t)}")
    return _rec("axioms", "AN1-AN3,QM1-QM3", name, structural, {"triples": opts.samples, "rays": len(rays)})


def _check_conjugation(item, opts: SuiteOptions) -> CheckRecord:
    name, inst = item
    dim, gens = inst.spaces["p"]
    p = AsymNorm(dim, gens, limits=opts.limits)
    pb, ps = conjugate(p), symmetrize(p)
    rng = random.Random(f"conj:{name}")
    if conjugate(pb).generators != p.generators:
        return _rec("conjugation", "involution", name, False, {}, "conjugate(conjugate(p)) != p")
    n = max(1, opts.samples // 5)
    for k in range(n):
        x, y = _rvec(rng, dim), _rvec(rng, dim)
        a = quasi_metric(pb, x, y) == quasi_metric(p, y, x)
        b = quasi_metric(ps, x, y) == max(quasi_metric(p, x, y), quasi_metric(pb, x, y))
        if not (a and b):
            return _rec("conjugation", "dbar,ds", name, False, {"pair": k}, f"x={_v(x)} y={_v(y)}")
    return _rec("conjugation", "dbar=d^T,ds=max,involution", name, True, {"pairs": n})


# ---------------------------------------------------------------------------
# Linear operators
# ---------------------------------------------------------------------------


def _linear_corpus(opts: SuiteOptions, default: int):
    insts = generate_instances(opts.seed, "mixed", opts.count or default, min(opts.dim_cap, 3), opts.generator_cap)
    return [(i.name, i) for i in insts]


def _linear_op(inst, opts) -> LinearOp:
    objs = inst.build(opts.limits)
    return objs["A"]


def _check_linear(item, opts: SuiteOptions) -> CheckRecord:
    name, inst = item
    A = _linear_op(inst, opts)
    p, q = A.source, A.target
    n, wit = op_norm_witness(A)
    n_bar = op_norm(A.with_norms(conjugate(p), conjugate(q)))
    n_sym = op_norm(A.with_norms(symmetrize(p), symmetrize(q)))
    adj = op_norm(adjoint(A, opts.limits))
    adj_v = adjoint_norm_by_vertices(A, opts.limits)
    vals = {"norm": n, "conj_norm": n_bar, "sym_norm": n_sym, "adjoint": adj, "adjoint_vertices": adj_v}
    fails = []
    if n != n_bar:
        fails.append("conj-equality")
    if not n_sym <= n:
        fails.append("sym-inequality")
    if n == INF:
        if not (adj == INF and adj_v == INF):
            fails.append("adjoint-joint-infinite")
        if not (eval_norm(q, A(wit)) > 0 and eval_norm(p, wit) == 0):
            fails.append("ray-witness")
    else:
        if not (adj == n and adj_v == n):
            fails.append("adjoint-equality")
        if not (eval_norm(p, wit) <= 1 and eval_norm(q, A(wit)) == n):
            fails.append("smallest-constant")
        t = Fraction(3, 2)
        if op_norm(A.scaled(t)) != t * n:
            fails.append("homogeneity")
    return _rec("linear-norms", ",".join(fails) or "norm-identities", name, not fails, vals,
                f"witness={_v(wit)}" if fails else None)


def _check_sup_equivalence(item, opts: SuiteOptions) -> CheckRecord:
    name, inst = item
    A = _linear_op(inst, opts)
    lhs = op_norm(A.with_norms(conjugate(A.source), A.target))
    rhs = op_norm(A.with_norms(A.source, conjugate(A.target)))
    return _rec("sup-equivalence", "sup_Bpbar q = sup_Bp qbar", name, lhs == rhs, {"lhs": lhs, "rhs": rhs})


# ---------------------------------------------------------------------------
# Bilinear norms
# ---------------------------------------------------------------------------


def _bilinear_corpus(opts: SuiteOptions, default: int):
    insts = generate_instances(opts.seed, "mixed", opts.count or default, min(opts.dim_cap, 2), opts.generator_cap)
    return [(i.name, i) for i in insts]


def _kill_rays(tensor, rays):
    """Project each slice so that ``T(r, .) = 0`` for every ray ``r``."""
    if not rays:
        return tensor
    n1 = len(tensor[0])
    # Gram-Schmidt basis of span(rays)
    basis = []
    for r in rays:
        v = list(r)
        for b in basis:
            c = sum(a * e for a, e in zip(v, b)) / sum(e * e for e in b)
            v = [a - c * e for a, e in zip(v, b)]
        if any(v):
            basis.append(v)
    out = []
    for M in tensor:
        M = [list(row) for row in M]
        for b in basis:
            bb = sum(e * e for e in b)
            for j in range(len(M[0])):
                c = sum(b[i] * M[i][j] for i in range(n1)) / bb
                for i in range(n1):
                    M[i][j] -= c * b[i]
        out.append(tuple(tuple(r) for r in M))
    return tuple(out)


def _rescaling_corpus(opts: SuiteOptions, default: int):
    """Mixed instances, with every other one built so that ``p1`` has rays
    but ``||T|`` is finite (``T`` vanishes on the rays of ``B_{p1}``)."""
    total = opts.count or default
    insts = generate_instances(opts.seed, "mixed", total, min(opts.dim_cap, 2), opts.generator_cap)
    rng = random.Random(f"rescaling:{opts.seed}")
    out = []
    for k, inst in enumerate(insts):
        if k % 2 == 1:
            d1 = inst.spaces["p"][0]
            inst.spaces["p"] = (d1, random_norm_generators(rng, d1, opts.generator_cap, False))
            d2 = inst.spaces["r"][0]
            inst.spaces["r"] = (d2, random_norm_generators(rng, d2, opts.generator_cap, True))
            p1 = AsymNorm(d1, inst.spaces["p"][1], limits=opts.limits)
            rays = enumerate_v_rep(unit_ball(p1), opts.limits).rays
            tensor, s1, s2, t = inst.bilinear["T"]
            inst.bilinear["T"] = (_kill_rays(tensor, rays), s1, s2, t)
        out.append((inst.name, inst))
    return out


def _check_rescaling(item, opts: SuiteOptions) -> CheckRecord:
    name, inst = item
    T = inst.build(opts.limits)["T"]
    norm = bilin_norm(T)
    vals = {"norm": norm}
    fails, degenerate = [], False
    for r in (Fraction(1, 2), Fraction(1), Fraction(3)):
        betas = [Fraction(1), Fraction(0)]
        if norm != INF:
            betas += [norm * r * r, max(Fraction(0), norm * r * r - Fraction(1, 7)), norm * r * r + Fraction(1, 7)]
        for beta in betas:
            v = rescaling_equivalence_check(T, beta, r)
            if not v.agree:
                fails.append(f"r={fmt(r)},beta={fmt(beta)}")
            if v.zero_branch_ok is not None:
                degenerate = True
                if not v.zero_branch_ok:
                    fails.append(f"zero-branch r={fmt(r)}")
    vals["degenerate"] = "yes" if degenerate else "no"
    return _rec("rescaling", "conditions (i)<=>(ii)", name, not fails, vals, ";".join(fails) or None)


def _check_bilinear(item, opts: SuiteOptions) -> CheckRecord:
    name, inst = item
    T = inst.build(opts.limits)["T"]
    n, wit = bilin_norm_witness(T)
    n_lp = bilin_norm_lp(T)
    s = sym_norm(T)
    adj = adjoint_norm(T, opts.limits)
    lower, _ = adjoint_norm_lower_witness(T)
    ar = arens_norm(T, opts.limits)
    vals = {"norm": n, "norm_lp": n_lp, "sym_norm": s, "adjoint": adj, "arens": ar}
    fails = []
    if n != n_lp:
        fails.append("two-routes")
    if not s <= n:
        fails.append("sym<=norm")
    if n == INF:
        if adj != INF:
            fails.append("adjoint-joint-infinite")
    else:
        if adj != n:
            fails.append("adjoint-equality")
        if n > 0 and not lower >= n:
            fails.append("norming-functional")
    if ar != s:
        fails.append("arens-equality")
    vals["gap"] = "strict" if s < n == INF else "none"
    return _rec("bilinear-norms", ",".join(fails) or "norm-identities", name, not fails, vals,
                f"{wit[0]} x={_v(wit[1])} y={_v(wit[2])}" if fails else None)


# ---------------------------------------------------------------------------
# Schauder, bideal, closedness
# ---------------------------------------------------------------------------


def _small_tensor(rng, k, n1, n2):
    return tuple(
        tuple(tuple(Fraction(rng.randint(-2, 2), 2) for _ in range(n2)) for _ in range(n1)) for _ in range(k)
    )


def _small_norm(rng, dim, symmetric):
    """Generators with entries in [-1, 1] so unit balls stay moderate."""
    while True:
        gens = random_norm_generators(rng, dim, 6, symmetric)
        m = max(abs(x) for g in gens for x in g)
        gens = tuple(tuple(x / m for x in g) for g in gens)
        if min(max(abs(x) for x in g) for g in gens if any(g)) >= Fraction(1, 3):
            return gens


def _moderate_ball_norm(rng, dim, radius=2):
    """Symmetric norm whose unit ball lies in the l-infinity ball of ``radius``."""
    while True:
        p = AsymNorm(dim, _small_norm(rng, dim, True))
        if all(abs(c) <= radius for v in enumerate_v_rep(unit_ball(p)).vertices for c in v):
            return p


def _schauder_corpus(opts: SuiteOptions, default: int):
    """2 x 2 x 2 operators with bounded sources and asymmetric targets.

    Source balls stay inside ``[-2, 2]^2``: grid nets grow like the
    square of ball size over ``eps`` per factor.
    """
    rng = random.Random(f"schauder:{opts.seed}")
    out = []
    for k in range(opts.count or default):
        if k % 2 == 0:
            p1 = p2 = linf_norm(2)
        else:
            p1 = _moderate_ball_norm(rng, 2)
            p2 = _moderate_ball_norm(rng, 2)
        q = AsymNorm(2, _small_norm(rng, 2, False))
        T = BilinearOp(_small_tensor(rng, 2, 2, 2), p1, p2, q)
        out.append((f"schauder-{opts.seed}-{k:03d}", T))
    return out


def _check_schauder(item, opts: SuiteOptions) -> CheckRecord:
    name, T = item
    eps_list = [opts.eps] if opts.eps is not None else [Fraction(1, 2), Fraction(1, 4)]
    vals, fails = {}, []
    for e in eps_list:
        res = schauder_bilinear_net(T, e, opts.limits)
        if not res.certified and res.radius is None:
            return _rec("schauder-bilinear", "precondition", name, False, {}, "not q^s-precompact", refused=True)
        again = verify_schauder(res, T, opts.limits)
        net_ok = verify_product_net(res.image_net, T, samples=20).ok(e)
        vals[f"radius@{fmt(e)}"] = res.radius
        vals[f"verified@{fmt(e)}"] = again
        vals[f"dual_net@{fmt(e)}"] = len(res.dual_net)
        if not (res.certified and again <= 3 * e and net_ok):
            fails.append(f"eps={fmt(e)}")
    return _rec("schauder-bilinear", "3eps dual net", name, not fails, vals, ";".join(fails) or None)


def _rand_linear(rng, src: AsymNorm, tgt: AsymNorm) -> LinearOp:
    return LinearOp(tuple(tuple(Fraction(rng.randint(-2, 2), rng.choice((1, 2))) for _ in range(src.dim)) for _ in range(tgt.dim)), src, tgt)


def _check_bideal(item, opts: SuiteOptions) -> CheckRecord:
    name, T = item
    rng = random.Random(f"bideal:{name}")
    eps = opts.eps or Fraction(1, 2)
    vals, fails = {}, []
    cert = product_net(T, eps)
    # left composition
    q1 = AsymNorm(2, _small_norm(rng, 2, rng.random() < 0.5))
    R = _rand_linear(rng, T.target, q1)
    RT = bideal_compose_left(R, T)
    lc = transport_left(R, T, cert)
    if lc is None:
        vals["left"] = "refused"
    else:
        ok = verify_product_net(lc, RT, samples=20).ok(lc.radius)
        vals["left_radius"] = lc.radius
        if not ok:
            fails.append("left")
    # right composition
    p1s = AsymNorm(2, _small_norm(rng, 2, True))
    S1, S2 = _rand_linear(rng, p1s, T.source1), _rand_linear(rng, linf_norm(2), T.source2)
    rc = bideal_compose_right(T, S1, S2, cert)
    vals["beta"] = rc.beta
    if not rc.inclusion_verified:
        fails.append("inclusion")
    elif not verify_product_net(rc.certificate, rc.operator, samples=20).ok(rc.certificate.radius):
        fails.append("right")
    else:
        vals["right_radius"] = rc.certificate.radius
    # rank one
    phi = BilinearForm(tuple(tuple(Fraction(rng.randint(-2, 2), 2) for _ in range(2)) for _ in range(2)), T.source1, T.source2)
    z = tuple(Fraction(rng.randint(-2, 2)) for _ in range(2))
    P = rank_one_form_tensor(phi, z, T.target)
    direct, formula = bilin_norm(P), rank_one_norm(phi, z, T.target)
    vals["rank_one"] = direct
    if direct != formula:
        fails.append("rank-one-norm")
    if precompact_class(P).qs is not Verdict3.CERTIFIED:
        fails.append("rank-one-class")
    else:
        pc = product_net(P, eps)
        if not verify_product_net(pc, P, samples=20).ok(eps):
            fails.append("rank-one-net")
    return _rec("bideal", "compositions and rank one", name, not fails, vals, ";".join(fails) or None)


def _closedness_corpus(opts: SuiteOptions, default: int):
    base = _schauder_corpus(SuiteOptions(seed=opts.seed + 1000, count=opts.count or default), default)
    return base


def _check_closedness(item, opts: SuiteOptions) -> CheckRecord:
    name, T0 = item
    eps = opts.eps or Fraction(1, 2)
    idx = int(name.rsplit("-", 1)[1])
    uniform = idx % 3 != 2
    if uniform:
        n_terms = 12
        seq = [T0.scaled(1 - Fraction(1, n)) for n in range(1, n_terms + 1)]
        grow = sym_norm(T0)
        if grow > 0:
            # make sure the tail reaches within eps of T0
            m = int(grow / eps) + 2
            seq = [T0.scaled(1 - Fraction(1, n)) for n in range(1, max(n_terms, 2 * m) + 1)]
        v = closedness_limit_check(seq, T0, [eps])
        ok = v.certified
        return _rec("closedness", "uniform limit certified", name, ok,
                    {"n0": v.tails[0] or "none", "kind": "uniform"})
    seq = [T0.scaled(n) for n in range(1, 9)]
    if sym_norm(T0) == 0:
        return _rec("closedness", "non-uniform refused", name, True, {"kind": "zero"}, refused=True)
    v = closedness_limit_check(seq, T0.scaled(0), [eps])
    ok = not v.uniformly_convergent and v.certificates == (None,)
    return _rec("closedness", "non-uniform refused", name, ok, {"n0": v.tails[0] or "none", "kind": "non-uniform"})


# ---------------------------------------------------------------------------
# Alaoglu and precompactness
# ---------------------------------------------------------------------------


def _alaoglu_corpus(opts: SuiteOptions, default: int):
    out = []
    for k in range(opts.count or default):
        rng = random.Random(f"alaoglu:{opts.seed}:{k}")
        d1, d2 = rng.randint(1, 2), rng.randint(1, 2)
        p1 = AsymNorm(d1, _small_norm(rng, d1, True)) if k % 2 else linf_norm(d1)
        p2 = AsymNorm(d2, _small_norm(rng, d2, True))
        E = tuple(tuple(Fraction(rng.randint(-2, 2)) for _ in range(d2)) for _ in range(d1))
        if not any(any(r) for r in E):
            E = tuple(tuple(Fraction(1) for _ in range(d2)) for _ in range(d1))
        E = BilinearForm(E, p1, p2)
        E = _unit(E)
        seq = []
        kind = k % 4
        for i in range(1, 65):
            if kind == 0:
                M = [[Fraction(rng.randint(-8, 8), 8) for _ in range(d2)] for _ in range(d1)]
                b = _unit(BilinearForm(M, p1, p2))
            elif kind == 1:
                b = _scaled(E, Fraction((-1) ** i, 2))
            elif kind == 2:
                b = _scaled(E, 1 - Fraction(1, i))
            else:
                noise = [[Fraction(rng.randint(-4, 4), 4 * i) for _ in range(d2)] for _ in range(d1)]
                b = _unit(BilinearForm([[a / 2 + c for a, c in zip(r, s)] for r, s in zip(E.matrix, noise)], p1, p2))
            seq.append(b)
        out.append((f"alaoglu-{opts.seed}-{k:03d}", (p1, p2, tuple(seq))))
    return out


def _scaled(b: BilinearForm, t) -> BilinearForm:
    return BilinearForm(tuple(tuple(t * a for a in r) for r in b.matrix), b.source1, b.source2)


def _unit(b: BilinearForm) -> BilinearForm:
    n = form_norm(b)
    return _scaled(b, 1 / n) if n > 1 else b


def _check_alaoglu(item, opts: SuiteOptions) -> CheckRecord:
    name, (p1, p2, seq) = item
    res = alaoglu_desk_check(p1, p2, list(seq), seed=opts.seed)
    errs = res.entry_errors(list(seq))
    widths = [max(hi - lo for lo, hi in box) for box in res.boxes]
    increasing = all(a < b for a, b in zip(res.indices, res.indices[1:]))
    within = all(e <= w for e, w in zip(errs, widths))
    shrinking = all(b <= a for a, b in zip(widths, widths[1:]))
    ok = increasing and within and shrinking and res.limit_norm <= 1 and res.bound_ok and len(res.indices) >= 2
    vals = {"length": len(res.indices), "limit_norm": res.limit_norm, "final_width": widths[-1], "last_error": errs[-1]}
    return _rec("alaoglu", "convergent subsequence in B", name, ok, vals)


def _precompact_corpus(opts: SuiteOptions, default: int):
    out = []
    for k in range(opts.count or default):
        rng = random.Random(f"precompact:{opts.seed}:{k}")
        dim = rng.randint(1, min(opts.dim_cap, 2))
        verts = tuple(tuple(Fraction(rng.randint(-4, 4), 2) for _ in range(dim)) for _ in range(rng.randint(1, 4)))
        rays = ()
        if k % 2:
            rays = tuple(tuple(Fraction(rng.randint(-2, 2)) for _ in range(dim)) for _ in range(rng.randint(1, 2)))
            rays = tuple(r for r in rays if any(r))
        sym = rng.random() < 0.4
        q = AsymNorm(dim, _small_norm(rng, dim, sym))
        out.append((f"polyhedron-{opts.seed}-{k:03d}", (Polyhedron(dim, v_rep=(verts, rays)), q)))
    return out


def _check_precompact(item, opts: SuiteOptions) -> CheckRecord:
    name, (P, q) = item
    eps = opts.eps or Fraction(1)
    rng = random.Random(f"pc:{name}")
    samples = sample_polyhedron(P, 30, rng)
    verdict = polyhedron_precompact(P, q, eps=eps, samples=samples)
    d = lambda x, y: quasi_metric(q, x, y)  # noqa: E731
    if verdict.precompact:
        cert = verdict.certificate
        ok = verify_certificate(cert, d, P.contains)
        bound = is_bounded(P, q)
        ok = ok and bound != INF
        return _rec("precompactness", "certified", name, ok, {"net": len(cert.net), "sup_q": bound, "status": "Certified"})
    # sampling oracle: a sequence escaping every finite net built so far
    centers = list(greedy_eps_net([x for x, _ in samples], d, eps).net)
    escaped = 0
    for _ in range(5):
        w = escape_point(P, q, verdict.ray, centers, eps)
        if P.contains(w) and all(d(c, w) > eps for c in centers):
            escaped += 1
        centers.append(w)
    ok = escaped == 5
    return _rec("precompactness", "refuted", name, ok, {"ray": verdict.ray, "escaped": escaped, "status": "Refuted"})


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Suite:
    corpus: Callable
    check: Callable
    default: int


SUITES = {
    "axioms": _Suite(_norm_corpus, _check_axioms, 200),
    "conjugation": _Suite(_norm_corpus, _check_conjugation, 200),
    "linear-norms": _Suite(_linear_corpus, _check_linear, 100),
    "sup-equivalence": _Suite(_linear_corpus, _check_sup_equivalence, 100),
    "adjoint-norm-equality": _Suite(_linear_corpus, _check_linear, 100),
    "rescaling": _Suite(_rescaling_corpus, _check_rescaling, 50),
    "bilinear-norms": _Suite(_bilinear_corpus, _check_bilinear, 60),
    "schauder-bilinear": _Suite(_schauder_corpus, _check_schauder, 20),
    "bideal": _Suite(_schauder_corpus, _check_bideal, 12),
    "closedness": _Suite(_closedness_corpus, _check_closedness, 15),
    "alaoglu": _Suite(_alaoglu_corpus, _check_alaoglu, 20),
    "precompactness": _Suite(_precompact_corpus, _check_precompact, 100),
}


def _suite(name: str) -> _Suite:
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; available: {', '.join(sorted(SUITES))}")
    return SUITES[name]


def run_suite(name: str, options: Optional[SuiteOptions] = None) -> SuiteReport:
    opts = options or SuiteOptions()
    s = _suite(name)
    start = time.perf_counter()
    records = [s.check(item, opts) for item in s.corpus(opts, s.default)]
    records.sort(key=lambda r: (r.instance, r.tag))
    return SuiteReport(name, opts.seed, records, time.perf_counter() - start)


def run_check(name: str, instance: str, options: Optional[SuiteOptions] = None) -> CheckRecord:
    """Replay one corpus item of a suite by its instance id."""
    opts = options or SuiteOptions()
    s = _suite(name)
    for item in s.corpus(opts, s.default):
        if item[0] == instance:
            return s.check(item, opts)
    raise InputError(f"suite {name!r} has no instance {instance!r} for seed {opts.seed}")
