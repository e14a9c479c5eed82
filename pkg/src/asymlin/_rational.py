"""Exact rational helpers shared by every module.

Vectors are tuples of :class:`fractions.Fraction`; matrices are tuples of
such rows.  The extended value ``INF`` is ``math.inf``: it compares
correctly against fractions and serializes as ``"inf"``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

INF = math.inf

Vector = tuple  # tuple[Fraction, ...]


class AsymlinError(Exception):
    """Base class for all library errors."""


class InputError(AsymlinError, ValueError):
    pass


class DimensionError(InputError):
    pass


class DomainError(AsymlinError, ValueError):
    pass


class CapacityError(AsymlinError):
    pass


def parse_rational(token) -> Fraction:
    """Parse an int, Fraction or ``"num/den"`` string into a Fraction."""
    if isinstance(token, Fraction):
        return token
    if isinstance(token, bool):
        raise InputError(f"not a rational: {token!r}")
    if isinstance(token, int):
        return Fraction(token)
    if isinstance(token, float):
        if not math.isfinite(token):
            raise InputError(f"not a finite rational: {token!r}")
        return Fraction(token)
    if isinstance(token, str):
        text = token.strip()
        num, sep, den = text.partition("/")
        try:
            n = int(num)
            d = int(den) if sep else 1
        except ValueError:
            raise InputError(f"malformed rational {token!r}") from None
        if d == 0:
            raise InputError(f"zero denominator in rational {token!r}")
        return Fraction(n, d)
    raise InputError(f"not a rational: {token!r}")


def vec(values: Iterable) -> Vector:
    return tuple(v if type(v) is Fraction else parse_rational(v) for v in values)


def mat(rows: Iterable[Iterable]) -> tuple:
    return tuple(vec(r) for r in rows)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def add(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def scale(t, a: Sequence) -> Vector:
    return tuple(t * x for x in a)


def neg(a: Sequence) -> Vector:
    return tuple(-x for x in a)


def zeros(n: int) -> Vector:
    return (Fraction(0),) * n


def unit(n: int, k: int) -> Vector:
    return tuple(Fraction(1) if i == k else Fraction(0) for i in range(n))


def matvec(m: Sequence[Sequence], x: Sequence) -> Vector:
    return tuple(dot(row, x) for row in m)


def transpose(m: Sequence[Sequence]) -> tuple:
    return tuple(zip(*m)) if m else ()


def is_zero(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def common_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for v in values:
        den = math.lcm(den, v.denominator)
    return den


def primitive(a: Sequence[Fraction]) -> Vector:
    """Positive rescaling of ``a`` to a primitive integer vector."""
    den = common_denominator(a)
    ints = [int(x * den) for x in a]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g == 0:
        return tuple(Fraction(0) for _ in a)
    return tuple(Fraction(v // g) for v in ints)


def inverse(m: Sequence[Sequence]) -> tuple:
    """Exact inverse of a square matrix by Gauss-Jordan elimination."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise DomainError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank by Gaussian elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            if f:
                f = f / pr[c]
                m[i] = [a - f * b for a, b in zip(m[i], pr)]
        r += 1
        if r == len(m):
            break
    return r


def fmt(value) -> str:
    """Serialize a rational or the extended value as ``num/den``/``inf``."""
    if value == INF:
        return "inf"
    if value == -INF:
        return "-inf"
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def fmt_vec(v: Sequence) -> str:
    return "[" + ",".join(fmt(x) for x in v) + "]"


def ext_mul(t, v):
    """Product on [0, inf] with the convention 0 * inf = 0."""
    if t == 0 or v == 0:
        return Fraction(0)
    return t * v
