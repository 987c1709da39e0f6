"""Exact determinants and permanents; Cauchy and Borchardt verification.

Determinants use two-step fraction-free (Bareiss) elimination on the
denominator-cleared integer matrix, permanents use Ryser's inclusion-
exclusion with Gray-code row-sum updates; both are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .kernel import Q, QLike

RYSER_DIMENSION_CAP = 20  # 2^n subsets; enforced by the CLI driver


class PoleConfiguration(ValueError):
    """Raised when evaluation points collide."""


@dataclass
class RationalMatrix:
    n: int
    entries: List[List[QLike]]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[QLike]]) -> "RationalMatrix":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        return RationalMatrix(n, [[Q(v) for v in r] for r in rows])

    @staticmethod
    def identity(n: int) -> "RationalMatrix":
        return RationalMatrix(n, [[Q(1 if i == j else 0) for j in range(n)] for i in range(n)])

    def permute_rows(self, perm: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix(self.n, [self.entries[p][:] for p in perm])

    def permute_cols(self, perm: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix(self.n, [[row[p] for p in perm] for row in self.entries])


def _cleared_int_matrix(m: RationalMatrix) -> Tuple[List[List[int]], int]:
    """Scale all entries to integers; returns (matrix, common multiplier)."""
    L = 1
    for row in m.entries:
        for v in row:
            L = math.lcm(L, int(v.denominator))
    a = [[int(v.numerator) * (L // int(v.denominator)) for v in row] for row in m.entries]
    return a, L


def det_exact(m: RationalMatrix) -> QLike:
    """Exact determinant by fraction-free elimination."""
    n = m.n
    if n == 0:
        return Q(1)
    a, L = _cleared_int_matrix(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if pivot is None:
                return Q(0)
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return Q(sign * a[n - 1][n - 1], L**n)


def det_cofactor(m: RationalMatrix) -> QLike:
    """Cofactor-expansion oracle, exponential time: keep n small."""

    def rec(rows: List[int], cols: List[int]) -> QLike:
        if not rows:
            return Q(1)
        r = rows[0]
        acc = Q(0)
        for idx, c in enumerate(cols):
            v = m.entries[r][c]
            if v:
                sub = rec(rows[1:], cols[:idx] + cols[idx + 1 :])
                acc += (v if idx % 2 == 0 else -v) * sub
        return acc

    return rec(list(range(m.n)), list(range(m.n)))


def perm_exact(m: RationalMatrix) -> QLike:
    """Exact permanent by Ryser's formula with Gray-code updates."""
    n = m.n
    if n == 0:
        return Q(1)
    if n > RYSER_DIMENSION_CAP:
        raise ValueError(f"permanent dimension capped at {RYSER_DIMENSION_CAP}")
    a, L = _cleared_int_matrix(m)
    sums = [0] * n
    total = 0
    size = 0
    for g in range(1, 1 << n):
        bit = (g & -g).bit_length() - 1
        if (g ^ (g >> 1)) & (1 << bit):
            size += 1
            for i in range(n):
                sums[i] += a[i][bit]
        else:
            size -= 1
            for i in range(n):
                sums[i] -= a[i][bit]
        prod = 1
        for s in sums:
            prod *= s
            if prod == 0:
                break
        if prod:
            total += prod if (n - size) % 2 == 0 else -prod
    return Q(total, L**n)


def perm_sum(m: RationalMatrix) -> QLike:
    """Permutation-sum oracle: sum over S_n of the diagonal products."""
    import itertools

    acc = Q(0)
    for perm in itertools.permutations(range(m.n)):
        prod = Q(1)
        for i, p in enumerate(perm):
            prod *= m.entries[i][p]
            if prod == 0:
                break
        acc += prod
    return acc


# -- point configurations ------------------------------------------------------


@dataclass
class PointConfig:
    z: List[QLike]
    w: List[QLike]

    def __post_init__(self):
        self.z = [Q(v) for v in self.z]
        self.w = [Q(v) for v in self.w]
        if len(self.z) != len(self.w):
            raise ValueError("need equally many z and w points")
        n = len(self.z)
        if len(set(self.z)) != n or len(set(self.w)) != n:
            raise PoleConfiguration("pole configuration: repeated points")
        if set(self.z) & set(self.w):
            raise PoleConfiguration("pole configuration: z meets w")

    @property
    def n(self) -> int:
        return len(self.z)


def cauchy_matrix(pts: PointConfig) -> RationalMatrix:
    return RationalMatrix(
        pts.n, [[Q(1) / (zi - wj) for wj in pts.w] for zi in pts.z]
    )


def cauchy_matrix_squared(pts: PointConfig) -> RationalMatrix:
    return RationalMatrix(
        pts.n, [[Q(1) / ((zi - wj) * (zi - wj)) for wj in pts.w] for zi in pts.z]
    )


def cauchy_det(pts: PointConfig) -> QLike:
    """Closed product form of det(1/(z_i - w_j))."""
    n = pts.n
    num = Q(1)
    for i in range(n):
        for j in range(i + 1, n):
            num *= (pts.z[i] - pts.z[j]) * (pts.w[i] - pts.w[j])
    den = Q(1)
    for zi in pts.z:
        for wj in pts.w:
            den *= zi - wj
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * num / den


@dataclass
class BorchardtReport:
    n: int
    z: List[QLike]
    w: List[QLike]
    lhs: QLike  # det of the squared-entry matrix
    det_side: QLike
    perm_side: QLike

    @property
    def equal(self) -> bool:
        return self.lhs == self.det_side * self.perm_side

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "z": [str(v) for v in self.z],
            "w": [str(v) for v in self.w],
            "det_squared_matrix": str(self.lhs),
            "det_side": str(self.det_side),
            "perm_side": str(self.perm_side),
            "equal": self.equal,
        }


def borchardt_verify(pts: PointConfig) -> BorchardtReport:
    """det(1/(z-w)^2) against det(1/(z-w)) perm(1/(z-w)), all exact."""
    lhs = det_exact(cauchy_matrix_squared(pts))
    det_side = det_exact(cauchy_matrix(pts))
    perm_side = perm_exact(cauchy_matrix(pts))
    return BorchardtReport(pts.n, pts.z, pts.w, lhs, det_side, perm_side)


def random_config(rng, n: int, lo: int = -20, hi: int = 20) -> PointConfig:
    """Rejection-sample a valid configuration of rational points."""
    while True:
        pts = [Q(rng.randint(lo, hi), rng.randint(1, 4)) for _ in range(2 * n)]
        try:
            return PointConfig(pts[:n], pts[n:])
        except PoleConfiguration:
            continue
