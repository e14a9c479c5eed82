"""Text instance files (header ``asymlin/1``) and seeded instance generation.

Layout::

    asymlin/1
    # comments and blank lines are ignored
    space p 2
      1 0
      -1/2 0
      0 1
    end
    linear A p q
      1 0
      0 2
    end
    bilinear T p p q
      1 0 | 0 1          # one line per target coordinate; rows split by |
    end
    check eval p [3,1] = 3
    check norm A report

Names are single tokens.  Vectors are written ``[a,b,...]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ._rational import InputError, fmt, parse_rational, rank
from .polyhedral import Limits

__all__ = [
    "HEADER",
    "ParseError",
    "InstanceError",
    "Directive",
    "InstanceFile",
    "parse_instance",
    "serialize_instance",
    "parse_vector",
    "generate_instances",
    "random_norm_generators",
    "PROFILES",
]

HEADER = "asymlin/1"
PROFILES = ("symmetric-bounded", "asymmetric-unbounded", "mixed")


class ParseError(InputError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line, self.col = line, col


class InstanceError(InputError):
    def __init__(self, message: str, key: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class Directive:
    op: str
    args: tuple
    expected: Optional[str] = None  # None means "report"
    line: int = field(default=0, compare=False)


@dataclass
class InstanceFile:
    name: str = "instance"
    spaces: dict = field(default_factory=dict)  # name -> (dim, generators)
    linear: dict = field(default_factory=dict)  # name -> (matrix, source, target)
    bilinear: dict = field(default_factory=dict)  # name -> (tensor, source1, source2, target)
    directives: list = field(default_factory=list)

    def build(self, limits: Optional[Limits] = None) -> dict:
        """Resolve names into norm and operator objects."""
        from .bilinear import BilinearOp
        from .linear import LinearOp
        from .space import AsymNorm

        kw = {"limits": limits} if limits is not None else {}
        objs = {}
        for name, (dim, gens) in self.spaces.items():
            try:
                objs[name] = AsymNorm(dim, gens, **kw)
            except InputError as exc:
                raise InstanceError(str(exc), f"space {name}") from None
        for name, (m, s, t) in self.linear.items():
            src, tgt = self._norm(objs, s, name), self._norm(objs, t, name)
            try:
                objs[name] = LinearOp(m, src, tgt)
            except InputError as exc:
                raise InstanceError(str(exc), f"linear {name}") from None
        for name, (tensor, s1, s2, t) in self.bilinear.items():
            args = [self._norm(objs, k, name) for k in (s1, s2, t)]
            try:
                objs[name] = BilinearOp(tensor, *args)
            except InputError as exc:
                raise InstanceError(str(exc), f"bilinear {name}") from None
        return objs

    def _norm(self, objs, key, owner):
        if key not in self.spaces:
            raise InstanceError(f"unknown space {key!r}", owner)
        return objs[key]


def parse_vector(token: str, line: int = 0, col: int = 0) -> tuple:
    if not (token.startswith("[") and token.endswith("]")):
        raise ParseError(f"expected a vector like [1,2], got {token!r}", line, col)
    body = token[1:-1].strip()
    if not body:
        return ()
    return tuple(_rat(t, line, col) for t in body.split(","))


def _rat(token: str, line: int, col: int) -> Fraction:
    try:
        return parse_rational(token)
    except InputError as exc:
        raise ParseError(str(exc), line, col) from None


def _tokens(text: str):
    """``(token, column)`` pairs, 1-based columns, comments stripped."""
    out, i = [], 0
    text = text.split("#", 1)[0]
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace():
            j += 1
        out.append((text[i:j], i + 1))
        i = j
    return out


def _row(toks, ln) -> tuple:
    return tuple(_rat(t, ln, c) for t, c in toks)


def parse_instance(text: str, name: str = "instance") -> InstanceFile:
    lines = text.splitlines()
    inst = InstanceFile(name)
    body = [(n + 1, _tokens(s)) for n, s in enumerate(lines)]
    body = [(n, t) for n, t in body if t]
    if not body or body[0][1][0][0] != HEADER or len(body[0][1]) != 1:
        ln = body[0][0] if body else 1
        raise ParseError(f"missing header {HEADER!r}", ln, 1)
    i = 1
    seen = set()
    while i < len(body):
        ln, toks = body[i]
        kw, col = toks[0]
        if kw in ("space", "linear", "bilinear"):
            want = {"space": 3, "linear": 4, "bilinear": 5}[kw]
            if len(toks) != want:
                raise ParseError(f"{kw} header needs {want - 1} fields", ln, col)
            key = toks[1][0]
            if key in seen:
                raise ParseError(f"duplicate name {key!r}", ln, toks[1][1])
            seen.add(key)
            rows = []
            i += 1
            while True:
                if i >= len(body):
                    raise ParseError(f"unterminated {kw} block", ln, col)
                rl, rt = body[i]
                if rt[0][0] == "end" and len(rt) == 1:
                    break
                rows.append((rl, rt))
                i += 1
            if kw == "space":
                try:
                    dim = int(toks[2][0])
                except ValueError:
                    raise ParseError(f"bad dimension {toks[2][0]!r}", ln, toks[2][1]) from None
                gens = tuple(_row(rt, rl) for rl, rt in rows)
                for (rl, rt), g in zip(rows, gens):
                    if len(g) != dim:
                        raise ParseError(f"generator has {len(g)} entries, expected {dim}", rl, rt[0][1])
                inst.spaces[key] = (dim, gens)
            elif kw == "linear":
                inst.linear[key] = (tuple(_row(rt, rl) for rl, rt in rows), toks[2][0], toks[3][0])
            else:
                tensor = []
                for rl, rt in rows:
                    mat, cur = [], []
                    for t, c in rt:
                        if t == "|":
                            mat.append(tuple(cur))
                            cur = []
                        else:
                            cur.append(_rat(t, rl, c))
                    mat.append(tuple(cur))
                    tensor.append(tuple(mat))
                inst.bilinear[key] = (tuple(tensor), toks[2][0], toks[3][0], toks[4][0])
        elif kw == "check":
            if len(toks) < 3:
                raise ParseError("check needs an operation and an outcome", ln, col)
            words = [t for t, _ in toks[1:]]
            if words[-1] == "report":
                op, args, expected = words[0], tuple(words[1:-1]), None
            elif len(words) >= 3 and words[-2] == "=":
                op, args, expected = words[0], tuple(words[1:-2]), words[-1]
            else:
                raise ParseError("check must end with '= VALUE' or 'report'", ln, toks[-1][1])
            inst.directives.append(Directive(op, args, expected, ln))
        else:
            raise ParseError(f"unexpected token {kw!r}", ln, col)
        i += 1
    return inst


def serialize_instance(inst: InstanceFile) -> str:
    out = [HEADER]
    for key, (dim, gens) in inst.spaces.items():
        out.append(f"space {key} {dim}")
        out += ["  " + " ".join(fmt(x) for x in g) for g in gens]
        out.append("end")
    for key, (m, s, t) in inst.linear.items():
        out.append(f"linear {key} {s} {t}")
        out += ["  " + " ".join(fmt(x) for x in r) for r in m]
        out.append("end")
    for key, (tensor, s1, s2, t) in inst.bilinear.items():
        out.append(f"bilinear {key} {s1} {s2} {t}")
        out += ["  " + " | ".join(" ".join(fmt(x) for x in r) for r in m) for m in tensor]
        out.append("end")
    for d in inst.directives:
        tail = "report" if d.expected is None else f"= {d.expected}"
        out.append(" ".join(["check", d.op, *d.args, tail]))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------


def _rand_q(rng: random.Random, lo: int = -3, hi: int = 3) -> Fraction:
    return Fraction(rng.randint(lo * 2, hi * 2), rng.choice((1, 1, 2)))


def random_norm_generators(rng: random.Random, dim: int, max_gens: int, symmetric: bool) -> tuple:
    """Generator rows of a valid asymmetric norm.

    Symmetric sets are closed under negation.  Asymmetric sets contain 0
    and satisfy ``<g, d> <= 0`` for a random direction ``d``, so ``d`` is a
    recession ray of the unit ball.
    """
    while True:
        if symmetric:
            half = rng.randint(dim, max(dim, max_gens // 2))
            base = [tuple(_rand_q(rng) for _ in range(dim)) for _ in range(half)]
            gens = []
            for g in base:
                for h in (g, tuple(-x for x in g)):
                    if h not in gens and any(h):
                        gens.append(h)
        else:
            d = tuple(Fraction(rng.randint(-2, 2)) for _ in range(dim))
            if not any(d):
                continue
            dd = sum(x * x for x in d)
            k = rng.randint(dim, max(dim, max_gens - 1))
            gens = [tuple(Fraction(0) for _ in range(dim))]
            for _ in range(k):
                g = tuple(_rand_q(rng) for _ in range(dim))
                gd = sum(a * b for a, b in zip(g, d))
                if gd > 0:
                    t = gd / dd + Fraction(rng.randint(0, 2), 2)
                    g = tuple(a - t * b for a, b in zip(g, d))
                if g not in gens:
                    gens.append(g)
        if len(gens) <= max_gens and rank(gens) == dim:
            return tuple(gens)


def _rand_matrix(rng, rows, cols):
    return tuple(tuple(_rand_q(rng, -2, 2) for _ in range(cols)) for _ in range(rows))


def generate_instances(
    seed: int,
    profile: str = "mixed",
    count: int = 10,
    dim_cap: int = 3,
    generator_cap: int = 8,
) -> list:
    """Deterministic corpus: each instance has spaces ``p``, ``r``, ``q``, an
    operator ``A: p -> q`` and a bilinear ``T: p x r -> q``."""
    if profile not in PROFILES:
        raise InputError(f"unknown profile {profile!r}; choose from {', '.join(PROFILES)}")
    if dim_cap < 1:
        raise InputError("dim_cap must be at least 1")
    rng = random.Random(f"{seed}:{profile}")
    out = []
    for n in range(count):
        inst = InstanceFile(f"{profile}-{seed}-{n:03d}")
        dims = {}
        for key in ("p", "r", "q"):
            dim = rng.randint(1, dim_cap)
            if profile == "symmetric-bounded":
                sym = True
            elif profile == "asymmetric-unbounded":
                sym = False
            else:
                sym = rng.random() < 0.5
            gcap = max(generator_cap, 2 * dim if sym else dim + 1)
            inst.spaces[key] = (dim, random_norm_generators(rng, dim, gcap, sym))
            dims[key] = dim
        inst.linear["A"] = (_rand_matrix(rng, dims["q"], dims["p"]), "p", "q")
        inst.bilinear["T"] = (
            tuple(_rand_matrix(rng, dims["p"], dims["r"]) for _ in range(dims["q"])),
            "p",
            "r",
            "q",
        )
        out.append(inst)
    return out

