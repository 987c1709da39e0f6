"""Kernel ring tests: q-series, graded polynomials, shifts, exponentials."""

import random

import pytest

from btau.kernel import (
    Caps,
    CapMismatch,
    GradedPoly,
    LaurentPolyZ,
    NonInvertibleSeries,
    NonNilpotentExponent,
    Q,
    QSeries,
    key_xy_degree,
    key_param_order,
    poly_exp,
    poly_log1,
    qs_pochhammer,
    shift_substitute,
    z_coeff,
)

CAPS = Caps(degree=4, p_window=3, param_order=2)


def qs(vals):
    return QSeries([Q(v) for v in vals])


# -- q-series -----------------------------------------------------------


def test_geometric_inverse():
    one_minus_q = qs([1, -1, 0, 0])
    assert one_minus_q.inv() == qs([1, 1, 1, 1])


def test_difference_of_squares():
    a = qs([1, 1, 0, 0, 0])
    b = qs([1, -1, 0, 0, 0])
    assert a * b == qs([1, 0, -1, 0, 0])


def count_partitions(n):
    """Brute-force partition count: enumerate all weakly decreasing sums."""

    def rec(remaining, largest):
        if remaining == 0:
            return 1
        return sum(rec(remaining - p, p) for p in range(min(remaining, largest), 0, -1))

    return rec(n, n)


def test_partition_generating_function():
    # 1 / prod_{j=1..N}(1 - q^j) counts partitions; oracle is enumeration
    n = 8
    prod = QSeries.one(n)
    for j in range(1, n + 1):
        prod = prod * (QSeries.one(n) - QSeries.monomial(1, j, n))
    inv = prod.inv()
    assert inv.coeffs == [Q(count_partitions(k)) for k in range(n + 1)]
    assert inv.to_text() == "1,1,2,3,5,7,11,15,22"


def test_inv_is_two_sided():
    rng = random.Random(1)
    for _ in range(50):
        a = QSeries([Q(rng.randint(1, 5))] + [Q(rng.randint(-4, 4)) for _ in range(10)])
        assert a * a.inv() == QSeries.one(10)
        assert a.inv() * a == QSeries.one(10)


def test_inv_rejects_zero_constant_term():
    with pytest.raises(NonInvertibleSeries):
        qs([0, 1, 2]).inv()


def test_qseries_ring_axioms():
    rng = random.Random(7)
    for _ in range(1000):
        a, b, c = (
            QSeries([Q(rng.randint(-3, 3)) for _ in range(6)]) for _ in range(3)
        )
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_truncation_order_is_min():
    a = QSeries.one(7)
    b = QSeries.one(4)
    assert (a * b).order == 4
    assert (a + b).order == 4


# -- graded polynomials -------------------------------------------------


def x(n, caps=CAPS):
    return GradedPoly.x(n, caps)


def y(n, caps=CAPS):
    return GradedPoly.y(n, caps)


def random_poly(rng, caps, nterms=3, params=("a", "b"), max_deg=None, p_range=0):
    """Random polynomial; keep p_range small so products stay in-window.

    The degree and parameter caps are ideal quotients, so identities survive
    pruning; the p-window is not, so property tests sample the exact regime.
    """
    out = GradedPoly.zero(caps)
    for _ in range(nterms):
        term = GradedPoly.const(Q(rng.randint(-5, 5), rng.randint(1, 3)), caps)
        budget = rng.randint(0, caps.degree if max_deg is None else max_deg)
        while budget > 0 and rng.random() < 0.7:
            n = rng.randint(1, budget)
            term = term * (x(n, caps) if rng.random() < 0.5 else y(n, caps))
            budget -= n
        if p_range:
            term = term * GradedPoly.p_power(rng.randint(-p_range, p_range), caps)
        if rng.random() < 0.4:
            term = term * GradedPoly.param(rng.choice(params), caps)
        out = out + term
    return out


def test_product_examples():
    caps = Caps(2, 1, 1)
    assert (x(1, caps) * x(1, caps)) == GradedPoly(caps, {(((1, 2),), (), 0, ()): Q(1)})
    assert (x(1, caps) * x(2, caps)).is_zero()  # degree 3 > cap
    p = GradedPoly.p_power(1, caps)
    pinv = GradedPoly.p_power(-1, caps)
    assert p * pinv == GradedPoly.one(caps)


def test_cap_mismatch_raises():
    with pytest.raises(CapMismatch):
        x(1, Caps(2, 1, 1)) * x(1, Caps(3, 1, 1))


def test_exp_examples():
    caps3 = Caps(3, 1, 1)
    e = poly_exp(x(1, caps3))
    expected = (
        GradedPoly.one(caps3)
        + x(1, caps3)
        + (x(1, caps3) * x(1, caps3)).scale(Q(1, 2))
        + (x(1, caps3) * x(1, caps3) * x(1, caps3)).scale(Q(1, 6))
    )
    assert e == expected
    assert poly_exp(GradedPoly.zero(caps3)) == GradedPoly.one(caps3)

    caps41 = Caps(4, 1, 1)
    a = GradedPoly.param("a", caps41)
    arg = a * x(1, caps41) * y(1, caps41)
    assert poly_exp(arg) == GradedPoly.one(caps41) + arg  # parameter cap kills a^2


def test_exp_rejects_non_nilpotent():
    with pytest.raises(NonNilpotentExponent):
        poly_exp(GradedPoly.one(CAPS))
    with pytest.raises(NonNilpotentExponent):
        poly_exp(GradedPoly.p_power(1, CAPS))


def test_poly_ring_axioms():
    rng = random.Random(11)
    caps = Caps(3, 6, 1)
    for _ in range(1000):
        a = random_poly(rng, caps, 2, p_range=1)
        b = random_poly(rng, caps, 2, p_range=1)
        c = random_poly(rng, caps, 2, p_range=1)
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def filter_to(f, caps):
    small = {}
    for k, c in f.terms.items():
        if (
            key_xy_degree(k) <= caps.degree
            and abs(k[2]) <= caps.p_window
            and key_param_order(k) <= caps.param_order
        ):
            small[k] = c
    return GradedPoly(caps, small)


def test_truncation_monotonicity():
    """Recomputing under larger caps agrees on all terms within the smaller caps."""
    rng = random.Random(3)
    small = Caps(4, 2, 1)
    big = Caps(6, 3, 2)
    for _ in range(100):
        fs = random_poly(rng, small, 3, p_range=1)
        gs = random_poly(rng, small, 3, p_range=1)
        fb = GradedPoly(big, dict(fs.terms))
        gb = GradedPoly(big, dict(gs.terms))
        assert fs * gs == filter_to(fb * gb, small)
        assert fs + gs == filter_to(fb + gb, small)


def test_shift_substitute_examples():
    f = x(1)
    shifted = shift_substitute(f, lambda n: Q(-1), lambda n: Q(0))
    assert z_coeff(shifted, 0) == x(1)
    assert z_coeff(shifted, -1) == GradedPoly.const(-1, CAPS)

    const = GradedPoly.const(Q(5), CAPS)
    assert shift_substitute(const, lambda n: Q(1), lambda n: Q(1)) == LaurentPolyZ.from_poly(const)

    f2 = x(2)
    shifted2 = shift_substitute(f2, lambda n: Q(-1, n), lambda n: Q(0))
    assert z_coeff(shifted2, 0) == x(2)
    assert z_coeff(shifted2, -2) == GradedPoly.const(Q(-1, 2), CAPS)
    assert z_coeff(shifted2, -1).is_zero()


def test_shift_substitute_is_ring_homomorphism():
    rng = random.Random(5)
    caps = Caps(4, 6, 1)
    for _ in range(40):
        f = random_poly(rng, caps, 2, max_deg=2, p_range=1)
        g = random_poly(rng, caps, 2, max_deg=2, p_range=1)
        sf = shift_substitute(f, lambda n: Q(-1, n), lambda n: Q(1, n))
        sg = shift_substitute(g, lambda n: Q(-1, n), lambda n: Q(1, n))
        sfg = shift_substitute(f * g, lambda n: Q(-1, n), lambda n: Q(1, n))
        assert sfg == sf * sg


def test_exp_is_additive_on_nilpotents():
    rng = random.Random(9)
    caps = Caps(4, 2, 2)
    for _ in range(40):
        a = random_poly(rng, caps, 2)
        b = random_poly(rng, caps, 2)
        # keep only nilpotent-capable terms
        a = GradedPoly(caps, {k: c for k, c in a.terms.items() if key_xy_degree(k) or key_param_order(k)})
        b = GradedPoly(caps, {k: c for k, c in b.terms.items() if key_xy_degree(k) or key_param_order(k)})
        assert poly_exp(a + b) == poly_exp(a) * poly_exp(b)


def test_log_inverts_exp():
    rng = random.Random(13)
    caps = Caps(4, 2, 2)
    for _ in range(20):
        a = random_poly(rng, caps, 2)
        a = GradedPoly(caps, {k: c for k, c in a.terms.items() if key_xy_degree(k) or key_param_order(k)})
        assert poly_log1(poly_exp(a)) == a


def test_z_coeff_examples():
    f = LaurentPolyZ(CAPS, {1: x(1), 0: GradedPoly.one(CAPS)})
    assert z_coeff(f, 1) == x(1)
    assert z_coeff(f, 5).is_zero()
    g = LaurentPolyZ(CAPS, {-1: GradedPoly.p_power(1, CAPS)})
    assert z_coeff(g, -1) == GradedPoly.p_power(1, CAPS)


def test_derive_and_p_euler():
    f = x(1) * x(1)
    assert f.derive("x", 1) == x(1).scale(2)
    g = GradedPoly.p_power(2, CAPS) * x(1)
    assert g.p_euler() == g.scale(2)
    assert GradedPoly.one(CAPS).p_euler().is_zero()
    h = GradedPoly.param("a", CAPS) * x(1)
    assert h.derive("a") == x(1)


def test_serialization_golden():
    f = (x(1) * x(1)).scale(Q(1, 2)) + x(2) - GradedPoly.p_power(-1, CAPS) * y(1)
    assert f.to_text() == "1/2*x1^2 + x2 - 1*p^-1*y1"
    assert GradedPoly.zero(CAPS).to_text() == "0"
    assert qs([1, 0, Q(-1, 2)]).to_text() == "1,0,-1/2"


def test_pochhammer_helper():
    # (q;q)_2 = (1-q)(1-q^2) = 1 - q - q^2 + q^3
    assert qs_pochhammer(1, 2, 4) == qs([1, -1, -1, 1, 0])
