"""Elementary Schur polynomials, Jacobi-Trudi determinants and the S*-series.

The elementary Schur polynomial S_k is the z^k coefficient of
exp(sum_n t_n z^n).  Four argument signatures occur on the boson side:
S_k(t) in the power-sum variables, and S_k(-x), S_k(x+y), S_k(-x-y) with
x_n, y_n the formal variables of the bosonic polynomial ring.  All are
computed by the derivative recurrence k S_k = sum_{n<=k} n t_n S_{k-n},
which stays inside exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Tuple

from .kernel import Caps, GradedPoly, Q


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of positive integers."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        if any(p <= 0 for p in self.parts):
            raise ValueError("partition parts must be positive")
        if any(self.parts[i] < self.parts[i + 1] for i in range(len(self.parts) - 1)):
            raise ValueError("partition parts must be weakly decreasing")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class ArgSignature:
    """Which variables feed the generating exponential, and with which sign.

    In the power-sum convention t_n is an independent formal variable; it is
    materialized in the x_n slot of GradedPoly (same grading deg t_n = n).
    """

    sign: int
    uses_x: bool = True
    uses_y: bool = False
    convention: str = "direct"

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if not (self.uses_x or self.uses_y):
            raise ValueError("at least one variable family must be used")


MINUS_X = ArgSignature(-1, True, False)
PLUS_X = ArgSignature(+1, True, False)
MINUS_XY = ArgSignature(-1, True, True)
PLUS_XY = ArgSignature(+1, True, True)
POWER_SUM = ArgSignature(+1, True, False, "power-sum")


def _tn(n: int, sig: ArgSignature, caps: Caps) -> GradedPoly:
    t = GradedPoly.zero(caps)
    if sig.uses_x:
        t = t + GradedPoly.x(n, caps)
    if sig.uses_y:
        t = t + GradedPoly.y(n, caps)
    return t.scale(sig.sign)


_SCHUR_CACHE: Dict[Tuple[ArgSignature, Caps], List[GradedPoly]] = {}


def elementary_schur(k: int, sig: ArgSignature, caps: Caps) -> GradedPoly:
    """S_k for the given signature; S_k = 0 for k < 0 and S_0 = 1."""
    if k < 0:
        return GradedPoly.zero(caps)
    cache = _SCHUR_CACHE.setdefault((sig, caps), [GradedPoly.one(caps)])
    while len(cache) <= k:
        m = len(cache)
        acc = GradedPoly.zero(caps)
        for n in range(1, m + 1):
            t = _tn(n, sig, caps)
            if t.is_zero():
                continue
            acc = acc + (t * cache[m - n]).scale(n)
        cache.append(acc.scale(Q(1, m)))
    return cache[k]


def schur_list(kmax: int, sig: ArgSignature, caps: Caps) -> List[GradedPoly]:
    return [elementary_schur(k, sig, caps) for k in range(kmax + 1)]


def schur_lambda(lam: Partition, sig: ArgSignature, caps: Caps) -> GradedPoly:
    """Jacobi-Trudi determinant det(S_{lambda_i - i + j})."""
    l = len(lam)
    if l == 0:
        return GradedPoly.one(caps)
    entries = [
        [elementary_schur(lam.parts[i] - (i + 1) + (j + 1), sig, caps) for j in range(l)]
        for i in range(l)
    ]
    out = GradedPoly.zero(caps)
    for perm, sign in _signed_permutations(l):
        prod = GradedPoly.one(caps)
        for i in range(l):
            prod = prod * entries[i][perm[i]]
            if prod.is_zero():
                break
        out = out + prod.scale(sign)
    return out


def _signed_permutations(n: int) -> Iterator[Tuple[Tuple[int, ...], int]]:
    import itertools

    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        yield perm, (-1) ** inv


_SSTAR_CACHE: Dict[Caps, List[GradedPoly]] = {}


def _sstar_mg(m: int, caps: Caps) -> GradedPoly:
    # m * g_m where the S*-generating exponent is sum_m g_m z^m:
    # g_m = -sum_{0<=i<=m} binom(m,i) S_1(x+y)^{m-i} (m+i) x_{m+i} / m
    s1 = elementary_schur(1, PLUS_XY, caps)
    acc = GradedPoly.zero(caps)
    for i in range(m + 1):
        xv = GradedPoly.x(m + i, caps)
        if xv.is_zero():
            continue
        term = (s1 ** (m - i)) * xv
        acc = acc + term.scale(Q(math.comb(m, i) * (m + i)))
    return -acc


def sstar(n: int, caps: Caps) -> GradedPoly:
    """The series S*_n: z^n coefficient of exp(sum_m g_m z^m), S*_0 = 1.

    Negative n gives the zero polynomial, matching the series convention.
    """
    if n < 0:
        return GradedPoly.zero(caps)
    cache = _SSTAR_CACHE.setdefault(caps, [GradedPoly.one(caps)])
    while len(cache) <= n:
        k = len(cache)
        acc = GradedPoly.zero(caps)
        for m in range(1, k + 1):
            mg = _sstar_mg(m, caps)
            if mg.is_zero():
                continue
            acc = acc + mg * cache[k - m]
        cache.append(acc.scale(Q(1, k)))
    return cache[n]


def partition_multiplicities(n: int) -> Iterator[Dict[int, int]]:
    """All partitions of n as {part: multiplicity} dicts (n = 0 gives {})."""

    def rec(remaining: int, largest: int, acc: Dict[int, int]):
        if remaining == 0:
            yield dict(acc)
            return
        for part in range(min(remaining, largest), 0, -1):
            for mult in range(remaining // part, 0, -1):
                acc[part] = mult
                yield from rec(remaining - part * mult, part - 1, acc)
                del acc[part]

    yield from rec(n, n, {})
