"""Bosonization: field actions on C[[x,y;p,p^-1]], the embedding, closed-form taus.

The two fields act on a polynomial carrier where the vacuum is the constant 1:

    phistar(z) = p * exp(sum (x_n+y_n) z^n)
                   * (sum_k k x_k z^{k-1} + sum_k d/dx_k z^{-k-1} + p d/dp z^{-1})
                   * exp(-sum (d/dx_n - d/dy_n) z^{-n}/n)

    phi(z)     = p^{-1} * exp(-sum (x_n+y_n) z^n)
                   * exp(+sum (d/dx_n - d/dy_n) z^{-n}/n)

Factors apply right to left; the first-order derivation exponentials act as
variable shifts x_n -> x_n -+ z^{-n}/n, y_n -> y_n +- z^{-n}/n.  The p d/dp
summand acts on the state before the outer multiplication by p, so that
p d/dp kills the vacuum.  Modes are Laurent coefficients:
phi_i = [z^{-i-1}] phi(z), phistar_i = [z^{-i}] phistar(z).

Closed-form tau functions expand every denominator 1 - (parameter-positive)
by a geometric series; there is no polynomial division.
"""

from __future__ import annotations

import math
from typing import Dict, Optional, Sequence, Tuple

from .fock import FockMonomial, FockVector, Mode
from .kernel import (
    Caps,
    GradedPoly,
    LaurentPolyZ,
    Q,
    key_param_order,
    poly_exp,
    shift_substitute,
)
from .schur import MINUS_X, MINUS_XY, PLUS_XY, elementary_schur, sstar

BosonState = GradedPoly  # states of the bosonic carrier are plain ring elements


class TruncationOverflow(ValueError):
    """Raised when an embedded monomial cannot be represented under the caps."""


class WindowOverflow(ValueError):
    """Raised when a p-power leaves the window."""


_MULT_EXP_CACHE: Dict[Tuple[int, Caps, bool], LaurentPolyZ] = {}


def mult_exp(sign: int, caps: Caps, include_y: bool = True) -> LaurentPolyZ:
    """exp(sign * sum_n (x_n [+ y_n]) z^n) truncated by the caps; cached."""
    key = (sign, caps, include_y)
    got = _MULT_EXP_CACHE.get(key)
    if got is not None:
        return got
    out = LaurentPolyZ.from_poly(GradedPoly.one(caps))
    for n in range(1, caps.degree + 1):
        t = GradedPoly.x(n, caps)
        if include_y:
            t = t + GradedPoly.y(n, caps)
        t = t.scale(sign)
        factor: Dict[int, GradedPoly] = {0: GradedPoly.one(caps)}
        power = GradedPoly.one(caps)
        for k in range(1, caps.degree // n + 1):
            power = power * t
            if power.is_zero():
                break
            factor[n * k] = power.scale(Q(1, math.factorial(k)))
        out = out * LaurentPolyZ(caps, factor)
    _MULT_EXP_CACHE[key] = out
    return out


def middle_operator(L: LaurentPolyZ) -> LaurentPolyZ:
    """The operator sum_k k x_k z^{k-1} + sum_k d/dx_k z^{-k-1} + p d/dp z^{-1}."""
    caps = L.caps
    out: Dict[int, GradedPoly] = {}

    def acc(m: int, f: GradedPoly):
        if f.is_zero():
            return
        g = out.get(m)
        out[m] = f if g is None else g + f

    for m, f in L.parts.items():
        for k in range(1, caps.degree + 1):
            acc(m + k - 1, (GradedPoly.x(k, caps) * f).scale(k))
        xi, _ = f.variable_indices()
        for k in xi:
            acc(m - k - 1, f.derive("x", k))
        acc(m - 1, f.p_euler())
    return LaurentPolyZ(caps, out)


def _star_shift(s: GradedPoly) -> LaurentPolyZ:
    return shift_substitute(s, lambda n: Q(-1, n), lambda n: Q(1, n))


def _phi_shift(s: GradedPoly) -> LaurentPolyZ:
    return shift_substitute(s, lambda n: Q(1, n), lambda n: Q(-1, n))


def phistar_field(s: BosonState) -> LaurentPolyZ:
    """Full Laurent expansion of phistar(z) applied to s."""
    M = middle_operator(_star_shift(s))
    R = mult_exp(+1, s.caps) * M
    return R.map_coeffs(lambda f: f.shift_p(1))


def phi_field(s: BosonState) -> LaurentPolyZ:
    """Full Laurent expansion of phi(z) applied to s."""
    L = _phi_shift(s)
    R = mult_exp(-1, s.caps) * L
    return R.map_coeffs(lambda f: f.shift_p(-1))


def _convolve_at(E: LaurentPolyZ, M: LaurentPolyZ, target: int) -> GradedPoly:
    out = GradedPoly.zero(E.caps)
    for a, Ea in E.parts.items():
        f = M.parts.get(target - a)
        if f is None:
            continue
        out = out + Ea * f
    return out


def phistar_mode(i: int, s: BosonState) -> BosonState:
    """phistar_i s, extracting only the z^{-i} coefficient."""
    M = middle_operator(_star_shift(s))
    return _convolve_at(mult_exp(+1, s.caps), M, -i).shift_p(1)


def phi_mode(i: int, s: BosonState) -> BosonState:
    """phi_i s, extracting only the z^{-i-1} coefficient."""
    L = _phi_shift(s)
    return _convolve_at(mult_exp(-1, s.caps), L, -i - 1).shift_p(-1)


def apply_bmode(mode: Mode, s: BosonState) -> BosonState:
    kind, idx = mode
    if kind == "phi":
        return phi_mode(idx, s)
    if kind == "star":
        return phistar_mode(idx, s)
    raise ValueError(f"unknown mode kind {kind!r}")


# -- the embedding ---------------------------------------------------------


def embed(v: FockVector, caps: Caps) -> BosonState:
    """Embedding of the Fock space: |0> -> 1, creation modes -> field modes."""
    out = GradedPoly.zero(caps)
    for mono, c in v.terms.items():
        out = out + embed_monomial(mono, caps).scale(c)
    return out


def embed_monomial(mono: FockMonomial, caps: Caps) -> BosonState:
    if mono.degree() > caps.degree:
        raise TruncationOverflow(f"truncation overflow: {mono.to_text()}")
    if abs(mono.charge()) + 1 > caps.p_window:
        raise TruncationOverflow(f"truncation overflow (p-window): {mono.to_text()}")
    stars = [j for j, m in mono.stars for _ in range(m)]
    phis = [i for i, m in mono.phis for _ in range(m)]
    state = GradedPoly.one(caps)
    # interleave so the running p-exponent never strays past the final charge
    while stars or phis:
        if stars:
            state = phistar_mode(-stars.pop(), state)
        if phis:
            state = phi_mode(-phis.pop(), state)
    return state


def direct_exponential(
    pairs: Sequence[Tuple[str, int, int]],
    caps: Caps,
    state: Optional[BosonState] = None,
) -> BosonState:
    """Oracle: exp(sum_par par * phi_{-j} phistar_{-i}) applied by mode iteration.

    ``pairs`` lists (parameter name, j, i).  Each application multiplies by a
    fresh parameter factor, so the series stops at the parameter cap.
    """
    if state is None:
        state = GradedPoly.one(caps)
    out = state
    level = state
    k = 1
    while True:
        nxt = GradedPoly.zero(caps)
        for name, j, i in pairs:
            t = phistar_mode(-i, level)
            t = phi_mode(-j, t)
            nxt = nxt + t * GradedPoly.param(name, caps)
        level = nxt.scale(Q(1, k))
        if level.is_zero():
            return out
        out = out + level
        k += 1


# -- closed-form tau functions ----------------------------------------------


def geom_inv(u: GradedPoly) -> GradedPoly:
    """(1 - u)^{-1} = sum u^k, valid because u has positive parameter order."""
    for k in u.terms:
        if key_param_order(k) == 0:
            raise ValueError("geometric inverse needs a parameter-positive argument")
    out = GradedPoly.one(u.caps)
    power = GradedPoly.one(u.caps)
    while True:
        power = power * u
        if power.is_zero():
            return out
        out = out + power


def tau_th1(names: Sequence[str], caps: Caps) -> BosonState:
    """Closed form for exp(sum_j a_j phi_{-j} phistar_0) . 1, j = 1..s."""
    s = len(names)
    B = GradedPoly.zero(caps)
    A = GradedPoly.zero(caps)
    for j in range(1, s + 1):
        a = GradedPoly.param(names[j - 1], caps)
        B = B + a * elementary_schur(j, MINUS_XY, caps)
        A = A + a * elementary_schur(j - 1, MINUS_XY, caps)
    inv = geom_inv(B)
    w = (-A) * inv
    arg = GradedPoly.zero(caps)
    wpow = GradedPoly.one(caps)
    n = 1
    while True:
        wpow = wpow * w
        if wpow.is_zero():
            break
        arg = arg - GradedPoly.x(n, caps) * wpow
        n += 1
    return inv * poly_exp(arg)


def _sstar_exponent_times(w: GradedPoly) -> GradedPoly:
    """-sum_n sum_i binom(n,i) S_1(x+y)^{n-i} (n+i) x_{n+i} / n * w^n."""
    caps = w.caps
    s1 = elementary_schur(1, PLUS_XY, caps)
    arg = GradedPoly.zero(caps)
    wpow = GradedPoly.one(caps)
    n = 1
    while True:
        wpow = wpow * w
        if wpow.is_zero():
            return arg
        hn = GradedPoly.zero(caps)
        for i in range(n + 1):
            xv = GradedPoly.x(n + i, caps)
            if xv.is_zero():
                continue
            hn = hn + (s1 ** (n - i) * xv).scale(Q(math.comb(n, i) * (n + i), n))
        arg = arg - hn * wpow
        n += 1


def tau_th2(name: str, j: int, caps: Caps) -> BosonState:
    """Closed form for exp(a phi_{-j} phistar_{-1}) . 1, j >= 1."""
    if j < 1:
        raise ValueError("j must be >= 1")
    a = GradedPoly.param(name, caps)
    s1p = elementary_schur(1, PLUS_XY, caps)
    den_u = a * (
        elementary_schur(j + 1, MINUS_XY, caps)
        + s1p * elementary_schur(j, MINUS_XY, caps)
    )
    inv = geom_inv(den_u)
    w = (-(a * elementary_schur(j - 1, MINUS_XY, caps))) * inv
    return inv * poly_exp(_sstar_exponent_times(w))


def schur_window_a(s: int, t: int, caps: Caps) -> GradedPoly:
    """A_{s,t} = sum_{m=0..t} S_m(x+y) S_{s+t-m}(-x-y)."""
    out = GradedPoly.zero(caps)
    for m in range(t + 1):
        out = out + elementary_schur(m, PLUS_XY, caps) * elementary_schur(
            s + t - m, MINUS_XY, caps
        )
    return out


def _window_base(t: int, caps: Caps) -> LaurentPolyZ:
    """sum_{m=0..t} S_m(x+y) z^{-t-1+m}."""
    return LaurentPolyZ(
        caps,
        {-t - 1 + m: elementary_schur(m, PLUS_XY, caps) for m in range(t + 1)},
    )


def _exp_from_base(base: LaurentPolyZ) -> GradedPoly:
    """exp(-sum_n p_n / n) with p_n = sum_e [z^e](base^n) (-e) x_{-e}.

    The base carries parameter-positive coefficients, so base^n dies at the
    parameter cap and the sum is finite.
    """
    caps = base.caps
    arg = GradedPoly.zero(caps)
    power = base
    n = 1
    while power.parts:
        pn = GradedPoly.zero(caps)
        for e, f in power.parts.items():
            xv = GradedPoly.x(-e, caps) if -e >= 1 else GradedPoly.zero(caps)
            if xv.is_zero():
                continue
            pn = pn + (f * xv).scale(-e)
        arg = arg - pn.scale(Q(1, n))
        n += 1
        power = power * base
    return poly_exp(arg)


def tau_general(name: str, s: int, t: int, caps: Caps) -> BosonState:
    """Closed form for exp(a phi_{-s} phistar_{-t}) . 1, s >= 1, t >= 0."""
    if s < 1 or t < 0:
        raise ValueError("need s >= 1 and t >= 0")
    a = GradedPoly.param(name, caps)
    inv = geom_inv(a * schur_window_a(s, t, caps))
    w = (-(a * elementary_schur(s - 1, MINUS_XY, caps))) * inv
    base = _window_base(t, caps).map_coeffs(lambda f: f * w)
    return inv * _exp_from_base(base)


def tau_two_factor(
    cname: str, dname: str, i: int, j: int, k: int, l: int, caps: Caps
) -> BosonState:
    """Closed form for exp(d phi_{-j} phistar_{-k}) exp(c phi_{-i} phistar_{-l}) . 1.

    Requires i, j >= 1 and k >= l >= 0.  The two-variable exponential
    f(w1, w2) is materialized by substituting the parameter-positive
    expressions for w1, w2 before expanding.
    """
    if i < 1 or j < 1 or not (k >= l >= 0):
        raise ValueError("need i, j >= 1 and k >= l >= 0")
    c = GradedPoly.param(cname, caps)
    d = GradedPoly.param(dname, caps)
    a_il = schur_window_a(i, l, caps)
    a_jk = schur_window_a(j, k, caps)
    a_ik = schur_window_a(i, k, caps)
    a_jl = schur_window_a(j, l, caps)
    si = elementary_schur(i - 1, MINUS_XY, caps)
    sj = elementary_schur(j - 1, MINUS_XY, caps)
    e_u = c * a_il + d * a_jk - c * a_il * d * a_jk + c * a_ik * d * a_jl
    inv = geom_inv(e_u)
    w1 = (-(c * si) + c * si * d * a_jk - d * sj * c * a_ik) * inv
    w2 = (-(d * sj) + d * sj * c * a_il - c * si * d * a_jl) * inv
    base = _window_base(l, caps).map_coeffs(lambda f: f * w1) + _window_base(
        k, caps
    ).map_coeffs(lambda f: f * w2)
    return inv * _exp_from_base(base)


# -- power formulas ----------------------------------------------------------


def phistar_zero_power(n: int, caps: Caps) -> BosonState:
    """Closed form (-1)^n n! p^n S_n(-x) for phistar_0^n . 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > caps.p_window:
        raise WindowOverflow(f"p-window overflow: need window >= {n}")
    sign = -1 if n % 2 else 1
    return (
        elementary_schur(n, MINUS_X, caps) * GradedPoly.p_power(n, caps)
    ).scale(sign * math.factorial(n))


def phistar_minus1_power(n: int, caps: Caps) -> BosonState:
    """Closed form (-1)^n n! p^n S*_n for phistar_{-1}^n . 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > caps.p_window:
        raise WindowOverflow(f"p-window overflow: need window >= {n}")
    sign = -1 if n % 2 else 1
    return (sstar(n, caps) * GradedPoly.p_power(n, caps)).scale(sign * math.factorial(n))


def mode_power_oracle(mode: Mode, n: int, caps: Caps) -> BosonState:
    """n-fold mode application to the vacuum, the oracle for the closed forms."""
    state = GradedPoly.one(caps)
    for _ in range(n):
        state = apply_bmode(mode, state)
    return state
