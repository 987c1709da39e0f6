"""Schur polynomial tests against an independent generating-exponential oracle."""

import math

from btau.kernel import Caps, GradedPoly, LaurentPolyZ, Q, QSeries, shift_substitute, z_coeff
from btau.schur import (
    MINUS_X,
    MINUS_XY,
    PLUS_X,
    PLUS_XY,
    POWER_SUM,
    Partition,
    elementary_schur,
    partition_multiplicities,
    schur_lambda,
    sstar,
)

CAPS = Caps(degree=6, p_window=2, param_order=2)


def generating_oracle(sig, caps, kmax):
    """Coefficients of exp(sum_n t_n z^n) built by explicit factor expansion.

    Independent of the recurrence used by elementary_schur: multiplies the
    truncated exponential factors exp(t_n z^n) = sum_j t_n^j z^(nj) / j!.
    """
    out = LaurentPolyZ.from_poly(GradedPoly.one(caps))
    for n in range(1, kmax + 1):
        t = GradedPoly.zero(caps)
        if sig.uses_x:
            t = t + GradedPoly.x(n, caps)
        if sig.uses_y:
            t = t + GradedPoly.y(n, caps)
        t = t.scale(sig.sign)
        factor = {0: GradedPoly.one(caps)}
        power = GradedPoly.one(caps)
        for j in range(1, kmax // n + 1):
            power = power * t
            factor[n * j] = power.scale(Q(1, math.factorial(j)))
        out = out * LaurentPolyZ(caps, factor)
        out = LaurentPolyZ(caps, {m: f for m, f in out.parts.items() if m <= kmax})
    return [out.coeff(k) for k in range(kmax + 1)]


def test_schur_base_cases():
    for sig in (MINUS_X, PLUS_XY, MINUS_XY, POWER_SUM):
        assert elementary_schur(0, sig, CAPS) == GradedPoly.one(CAPS)
        assert elementary_schur(-3, sig, CAPS).is_zero()


def test_schur_frozen_examples():
    x1 = GradedPoly.x(1, CAPS)
    x2 = GradedPoly.x(2, CAPS)
    y1 = GradedPoly.y(1, CAPS)
    assert elementary_schur(2, MINUS_X, CAPS) == (x1 * x1).scale(Q(1, 2)) - x2
    assert elementary_schur(1, MINUS_XY, CAPS) == -(x1 + y1)


def test_generating_identity_all_signatures():
    for sig in (MINUS_X, PLUS_X, MINUS_XY, PLUS_XY):
        oracle = generating_oracle(sig, CAPS, CAPS.degree)
        for k in range(CAPS.degree + 1):
            assert elementary_schur(k, sig, CAPS) == oracle[k]


def test_jacobi_trudi_single_row():
    for k in range(5):
        assert schur_lambda(Partition((k,)) if k else Partition(()), MINUS_XY, CAPS) == elementary_schur(
            k, MINUS_XY, CAPS
        )


def test_jacobi_trudi_column_power_sum():
    # S_(1,1) = S_1^2 - S_2 = t1^2/2 - t2 (t_n lives in the x_n slot)
    t1 = GradedPoly.x(1, CAPS)
    t2 = GradedPoly.x(2, CAPS)
    got = schur_lambda(Partition((1, 1)), POWER_SUM, CAPS)
    assert got == (t1 * t1).scale(Q(1, 2)) - t2
    s1 = elementary_schur(1, POWER_SUM, CAPS)
    s2 = elementary_schur(2, POWER_SUM, CAPS)
    assert got == s1 * s1 - s2


def test_schur_lambda_homogeneous():
    from btau.kernel import key_xy_degree

    for parts in ((2, 1), (3, 1), (2, 2, 1)):
        lam = Partition(parts)
        f = schur_lambda(lam, POWER_SUM, CAPS)
        assert not f.is_zero()
        assert all(key_xy_degree(k) == lam.weight for k in f.terms)


def test_binomial_convention():
    # sum_{k>=m} C(k,m) t^(k-m) = (1-t)^(-m-1) through the truncation order
    order = 12
    geom = (QSeries.one(order) - QSeries.monomial(1, 1, order)).inv()
    for m in range(5):
        lhs = QSeries([Q(math.comb(k + m, m)) for k in range(order + 1)])
        rhs = GradedPoly.one  # placeholder to keep names close
        power = QSeries.one(order)
        for _ in range(m + 1):
            power = power * geom
        assert lhs == power


def test_cancellation_identity():
    # sum_{i>=1} i x_i S_{n-i}(-x) = -n S_n(-x)
    for n in range(1, CAPS.degree + 1):
        acc = GradedPoly.zero(CAPS)
        for i in range(1, n + 1):
            acc = acc + (GradedPoly.x(i, CAPS) * elementary_schur(n - i, MINUS_X, CAPS)).scale(i)
        assert acc == elementary_schur(n, MINUS_X, CAPS).scale(-n)


def test_shift_identity():
    # the kernel shift applied to S_n(-x) spreads it as sum_i S_i(-x) z^-(n-i)
    for n in range(CAPS.degree + 1):
        f = elementary_schur(n, MINUS_X, CAPS)
        shifted = shift_substitute(f, lambda m: Q(-1, m), lambda m: Q(1, m))
        for i in range(n + 1):
            assert z_coeff(shifted, -(n - i)) == elementary_schur(i, MINUS_X, CAPS)
        assert z_coeff(shifted, 1).is_zero()


def test_sstar_small_cases():
    assert sstar(0, CAPS) == GradedPoly.one(CAPS)
    assert sstar(-2, CAPS).is_zero()
    x1 = GradedPoly.x(1, CAPS)
    x2 = GradedPoly.x(2, CAPS)
    y1 = GradedPoly.y(1, CAPS)
    expected = -(x1 * (x1 + y1) + x2.scale(2))
    assert sstar(1, CAPS) == expected


def test_partition_multiplicities():
    assert list(partition_multiplicities(0)) == [{}]
    got = sorted(tuple(sorted(d.items())) for d in partition_multiplicities(4))
    assert len(got) == 5  # 4, 3+1, 2+2, 2+1+1, 1+1+1+1
    assert ((4, 1),) in got and ((1, 4),) in got
