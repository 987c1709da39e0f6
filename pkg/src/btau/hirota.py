"""Hirota bilinear machinery: the residue operator, its Schur-expanded form,
and the two derived scalar PDEs.

The residue operator acts on pairs of carrier states (primed and
double-primed copies of the variables) as

    Res_z p' p''^-1 exp(sum (x'-x''+y'-y'') z^n)
        (sum_k k x'_k z^{k-1} + sum_k d/dx'_k z^{-k-1} + p' d/dp' z^{-1})
        exp(-sum (d/dx'_n - d/dx''_n - d/dy'_n + d/dy''_n) z^{-n}/n)

and must agree with the mode pairing sum_i (phistar_i tau1) (x) (phi_{-i}
tau2); both routes are implemented and cross-checked.

Degree bookkeeping: applying the operator to degree-D-truncated inputs is
trusted through total xy-degree D-1 only, so every zero-assertion filters to
that reliable degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .fock import FockTensor
from .fms import embed_monomial, middle_operator, phi_field, phistar_field
from .kernel import (
    Caps,
    GradedPoly,
    Key,
    LaurentPolyZ,
    ParExps,
    Q,
    QLike,
    ZERO,
    key_param_order,
    key_xy_degree,
    poly_log1,
    shift_substitute,
)
from .schur import (
    MINUS_X,
    MINUS_XY,
    PLUS_X,
    PLUS_XY,
    elementary_schur,
    partition_multiplicities,
)


class BosonTensor:
    """Element of the tensor square of the carrier, primed (x) double-primed."""

    __slots__ = ("caps", "terms")

    def __init__(self, caps: Caps, terms: Optional[Dict[Tuple[Key, Key], QLike]] = None):
        self.caps = caps
        self.terms = terms if terms is not None else {}

    def is_zero(self) -> bool:
        return not self.terms

    def add_term(self, k1: Key, k2: Key, c) -> None:
        # parameters are global scalars, not per-slot content: canonicalize
        # by carrying all parameter exponents on the left key
        if k2[3]:
            k1 = (k1[0], k1[1], k1[2], _merge_pars(k1[3], k2[3]))
            k2 = (k2[0], k2[1], k2[2], ())
        pair = (k1, k2)
        s = self.terms.get(pair, ZERO) + c
        if s:
            self.terms[pair] = s
        elif pair in self.terms:
            del self.terms[pair]

    def __add__(self, other: "BosonTensor") -> "BosonTensor":
        out = BosonTensor(self.caps, dict(self.terms))
        for (k1, k2), c in other.terms.items():
            out.add_term(k1, k2, c)
        return out

    def __sub__(self, other: "BosonTensor") -> "BosonTensor":
        out = BosonTensor(self.caps, dict(self.terms))
        for (k1, k2), c in other.terms.items():
            out.add_term(k1, k2, -c)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, BosonTensor):
            return NotImplemented
        return self.caps == other.caps and self.terms == other.terms

    __hash__ = None

    @staticmethod
    def outer(f: GradedPoly, g: GradedPoly) -> "BosonTensor":
        out = BosonTensor(f.caps)
        for k1, c1 in f.terms.items():
            for k2, c2 in g.terms.items():
                out.add_term(k1, k2, c1 * c2)
        return out

    def filter_total_degree(self, dmax: int) -> "BosonTensor":
        return BosonTensor(
            self.caps,
            {
                (k1, k2): c
                for (k1, k2), c in self.terms.items()
                if key_xy_degree(k1) + key_xy_degree(k2) <= dmax
            },
        )

    def filter_param_order(self, pmax: int) -> "BosonTensor":
        return BosonTensor(
            self.caps,
            {
                (k1, k2): c
                for (k1, k2), c in self.terms.items()
                if key_param_order(k1) + key_param_order(k2) <= pmax
            },
        )

    def project_y_free(self) -> "BosonTensor":
        return BosonTensor(
            self.caps,
            {(k1, k2): c for (k1, k2), c in self.terms.items() if not k1[1] and not k2[1]},
        )

    def eval_at_point(self, point: "HirotaPoint") -> GradedPoly:
        """Evaluate primed variables at xbar+x, double-primed at xbar-x.

        The p-exponents are dropped (p set to 1); parameters from both sides
        merge, so the value is a polynomial in the parameters.
        """
        xp = {n: Q(point.xbar.get(n, 0)) + Q(point.x.get(n, 0)) for n in set(point.xbar) | set(point.x)}
        yp = {n: Q(point.ybar.get(n, 0)) + Q(point.y.get(n, 0)) for n in set(point.ybar) | set(point.y)}
        xm = {n: Q(point.xbar.get(n, 0)) - Q(point.x.get(n, 0)) for n in set(point.xbar) | set(point.x)}
        ym = {n: Q(point.ybar.get(n, 0)) - Q(point.y.get(n, 0)) for n in set(point.ybar) | set(point.y)}
        out = GradedPoly.zero(self.caps)
        for (k1, k2), c in self.terms.items():
            v = c
            for n, e in k1[0]:
                v = v * Q(xp.get(n, 0)) ** e
                if v == 0:
                    break
            if v == 0:
                continue
            for n, e in k1[1]:
                v = v * Q(yp.get(n, 0)) ** e
                if v == 0:
                    break
            if v == 0:
                continue
            for n, e in k2[0]:
                v = v * Q(xm.get(n, 0)) ** e
                if v == 0:
                    break
            if v == 0:
                continue
            for n, e in k2[1]:
                v = v * Q(ym.get(n, 0)) ** e
                if v == 0:
                    break
            if v == 0:
                continue
            pars = _merge_pars(k1[3], k2[3])
            key = ((), (), 0, pars)
            s = out.terms.get(key, ZERO) + v
            if s:
                out.terms[key] = s
            elif key in out.terms:
                del out.terms[key]
        return out


def _merge_pars(a: ParExps, b: ParExps) -> ParExps:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for name, e in b:
        d[name] = d.get(name, 0) + e
    return tuple(sorted(d.items()))


# -- the residue operator ----------------------------------------------------


def _shift_flat(poly: GradedPoly, xsign: int, ysign: int, beta: bool):
    ycoef = (lambda n: Q(ysign, n)) if not beta else (lambda n: Q(0))
    L = shift_substitute(poly, lambda n: Q(xsign, n), ycoef)
    return [(m, k, c) for m, f in L.parts.items() for k, c in f.terms.items()]


def omega_residue(tau1: GradedPoly, tau2: GradedPoly, beta_reduction: bool = False) -> BosonTensor:
    """The combined-operator form of the bilinear residue on tau1 (x) tau2.

    With beta_reduction the y-channels are removed throughout (inputs must
    then be y-free).
    """
    caps = tau1.caps
    if caps != tau2.caps:
        raise ValueError("operands must share caps")
    if beta_reduction:
        for t in (tau1, tau2):
            if any(k[1] for k in t.terms):
                raise ValueError("beta reduction needs y-free inputs")
    # combined shift exponential, one shared z
    s1 = _shift_flat(tau1, -1, +1, beta_reduction)
    s2 = _shift_flat(tau2, +1, -1, beta_reduction)
    combined: Dict[Key, Dict[int, Dict[Key, QLike]]] = {}
    for m2, k2, c2 in s2:
        bucket = combined.setdefault(k2, {})
        for m1, k1, c1 in s1:
            slot = bucket.setdefault(m1 + m2, {})
            s = slot.get(k1, ZERO) + c1 * c2
            if s:
                slot[k1] = s
            elif k1 in slot:
                del slot[k1]
    # middle operator on the primed side, then the outer exponential pairing
    sig_plus = PLUS_X if beta_reduction else PLUS_XY
    sig_minus = MINUS_X if beta_reduction else MINUS_XY
    sp = [elementary_schur(a, sig_plus, caps) for a in range(caps.degree + 1)]
    sm = [elementary_schur(b, sig_minus, caps) for b in range(caps.degree + 1)]
    out = BosonTensor(caps)
    for k2, zparts in combined.items():
        right_base = GradedPoly(caps, {k2: Q(1)})
        mid = middle_operator(
            LaurentPolyZ(caps, {m: GradedPoly(caps, t) for m, t in zparts.items()})
        )
        for m, f1 in mid.parts.items():
            if m > -1:
                continue
            for a in range(0, min(-1 - m, caps.degree) + 1):
                b = -1 - m - a
                if b > caps.degree:
                    continue
                left = (sp[a] * f1).shift_p(1)
                if left.is_zero():
                    continue
                right = (sm[b] * right_base).shift_p(-1)
                if right.is_zero():
                    continue
                for lk, lc in left.terms.items():
                    for rk, rc in right.terms.items():
                        out.add_term(lk, rk, lc * rc)
    return out


def omega_modesum(tau1: GradedPoly, tau2: GradedPoly) -> BosonTensor:
    """The mode pairing sum_i (phistar_i tau1) (x) (phi_{-i} tau2)."""
    f1 = phistar_field(tau1)
    f2 = phi_field(tau2)
    out = BosonTensor(tau1.caps)
    for m, left in f1.parts.items():
        right = f2.parts.get(-1 - m)
        if right is None:
            continue
        for lk, lc in left.terms.items():
            for rk, rc in right.terms.items():
                out.add_term(lk, rk, lc * rc)
    return out


def embed_tensor(t: FockTensor, caps: Caps) -> BosonTensor:
    """Push a Fock tensor through the embedding on both slots."""
    out = BosonTensor(caps)
    for (a, b), c in t.terms.items():
        fa = embed_monomial(a, caps)
        fb = embed_monomial(b, caps)
        for k1, c1 in fa.terms.items():
            for k2, c2 in fb.terms.items():
                out.add_term(k1, k2, c * c1 * c2)
    return out


# -- the Schur-expanded generating checker ------------------------------------


@dataclass
class HirotaPoint:
    """Rational sample values for the difference and average variables."""

    x: Dict[int, QLike] = field(default_factory=dict)
    y: Dict[int, QLike] = field(default_factory=dict)
    xbar: Dict[int, QLike] = field(default_factory=dict)
    ybar: Dict[int, QLike] = field(default_factory=dict)


def _affine_sub(tau: GradedPoly, point: HirotaPoint, sign: int, lam_caps: Caps) -> GradedPoly:
    """Substitute x_n -> xbar_n + sign lam_n, y_n -> ybar_n + sign mu_n.

    The shift variables live in the x/y slots of the target ring, which has a
    doubled degree cap so the product of two copies stays exact.
    """
    out = GradedPoly.zero(lam_caps)
    sgn = Q(sign)
    for key, c in tau.terms.items():
        if key[2]:
            raise ValueError("p^0 sector required")
        partial = [([], c)]
        for slot in (0, 1):
            vals = point.xbar if slot == 0 else point.ybar
            for n, e in key[slot]:
                const = Q(vals.get(n, 0))
                nxt = []
                for entries, cc in partial:
                    for i in range(e + 1):
                        w = Q(math.comb(e, i)) * const ** (e - i) * sgn**i
                        if w == 0:
                            continue
                        ent = list(entries)
                        if i:
                            ent.append((slot, n, i))
                        nxt.append((ent, cc * w))
                partial = nxt
        for entries, cc in partial:
            xs = tuple(sorted((n, i) for sl, n, i in entries if sl == 0))
            ys = tuple(sorted((n, i) for sl, n, i in entries if sl == 1))
            nk: Key = (xs, ys, 0, key[3])
            s = out.terms.get(nk, ZERO) + cc
            if s:
                out.terms[nk] = s
            elif nk in out.terms:
                del out.terms[nk]
    return out


def _sj_operator(j: int, g: GradedPoly) -> GradedPoly:
    """S_j of the scaled derivative arguments t_r = (-d/dlam_r + d/dmu_r)/r."""
    if j == 0:
        return g
    out = GradedPoly.zero(g.caps)
    for pm in partition_multiplicities(j):
        h = g
        coeff = Q(1)
        for r, m in pm.items():
            coeff = coeff / Q(math.factorial(m) * r**m)
            for _ in range(m):
                h = -h.derive("x", r) + h.derive("y", r)
                if h.is_zero():
                    break
            if h.is_zero():
                break
        if not h.is_zero():
            out = out + h.scale(coeff)
    return out


def _numeric_schur(tvals: Dict[int, QLike], kmax: int) -> List[QLike]:
    """[z^k] exp(sum t_n z^n) for rational t_n, by the derivative recurrence."""
    out = [Q(1)] + [ZERO] * kmax
    for k in range(1, kmax + 1):
        acc = ZERO
        for n, t in tvals.items():
            if n <= k and t:
                acc += Q(n) * Q(t) * out[k - n]
        out[k] = acc / k
    return out


def hirota_schur_form(tau: GradedPoly, point: HirotaPoint) -> GradedPoly:
    """Evaluate the Schur-expanded bilinear identity at a rational point.

    The shift variables are materialized as a polynomial ring, the
    derivative operators applied formally, and the shift variables then
    evaluated at the difference values; the result is a polynomial in the
    parameters carried by tau (a plain rational when tau has none).  For a
    tau function the value vanishes at every point.
    """
    caps = tau.caps
    lam_caps = Caps(2 * caps.degree, caps.p_window, caps.param_order)
    tm = _affine_sub(tau, point, -1, lam_caps)
    tp = _affine_sub(tau, point, +1, lam_caps)
    g = tm * tp

    xidx = sorted({n for k in tau.terms for n, _ in k[0]})
    hk: Dict[int, GradedPoly] = {}
    for k in xidx:
        dtau = tau.derive("x", k)
        hk[k] = _affine_sub(dtau, point, -1, lam_caps) * tp + tm * _affine_sub(
            dtau, point, +1, lam_caps
        )

    jmax = g.max_xy_degree()
    kpmax = max(
        (
            n
            for n in set(point.x) | set(point.xbar)
            if Q(point.x.get(n, 0)) + Q(point.xbar.get(n, 0)) != 0
        ),
        default=0,
    )
    kdmax = max(xidx, default=0)
    imax = jmax + max(kpmax, kdmax)
    tvals = {}
    for n in set(point.x) | set(point.y):
        t = 2 * (Q(point.x.get(n, 0)) + Q(point.y.get(n, 0)))
        if t:
            tvals[n] = t
    shat = _numeric_schur(tvals, imax)

    xd = {n: Q(v) for n, v in point.x.items()}
    yd = {n: Q(v) for n, v in point.y.items()}

    total = GradedPoly.zero(lam_caps)
    for j in range(jmax + 1):
        uj = _sj_operator(j, g)
        if uj.is_zero():
            continue
        # multiplication piece: i < j pairs with the value of k(x_k + xbar_k)
        uj_eval = uj.eval_xy(xd, yd)
        if not uj_eval.is_zero():
            for k in range(1, min(j, kpmax) + 1):
                i = j - k
                cval = Q(k) * (Q(point.x.get(k, 0)) + Q(point.xbar.get(k, 0)))
                if cval and shat[i]:
                    total = total + uj_eval.scale(shat[i] * cval)
        # derivative piece: i = j + k with (d/dlam_k + d/dxbar_k)/2
        for k in range(1, kdmax + 1):
            i = j + k
            if shat[i] == 0:
                continue
            dlam = uj.derive("x", k).eval_xy(xd, yd)
            dxbar = (
                _sj_operator(j, hk[k]).eval_xy(xd, yd) if k in hk else GradedPoly.zero(lam_caps)
            )
            piece = (dlam + dxbar).scale(Q(1, 2) * shat[i])
            total = total + piece
    return total


# -- restricted scalar PDEs ----------------------------------------------------


@dataclass
class BivariateSeries:
    """Truncated series in two variables u, v with exact coefficients."""

    order: int
    coeffs: Dict[Tuple[int, int], QLike] = field(default_factory=dict)

    def clean(self) -> "BivariateSeries":
        return BivariateSeries(
            self.order,
            {k: c for k, c in self.coeffs.items() if c and sum(k) <= self.order},
        )

    def is_zero(self) -> bool:
        return not self.clean().coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        return self.order == other.order and self.clean().coeffs == other.clean().coeffs

    def scale(self, c: QLike) -> "BivariateSeries":
        c = Q(c)
        return BivariateSeries(self.order, {k: v * c for k, v in self.coeffs.items()})

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, ZERO) + c
        return BivariateSeries(min(self.order, other.order), out).clean()

    def __sub__(self, other: "BivariateSeries") -> "BivariateSeries":
        return self + other.scale(-1)

    def du(self) -> "BivariateSeries":
        return BivariateSeries(
            self.order - 1,
            {(a - 1, b): c * a for (a, b), c in self.coeffs.items() if a},
        ).clean()

    def dv(self) -> "BivariateSeries":
        return BivariateSeries(
            self.order - 1,
            {(a, b - 1): c * b for (a, b), c in self.coeffs.items() if b},
        ).clean()

    def mul_u(self) -> "BivariateSeries":
        return BivariateSeries(
            self.order, {(a + 1, b): c for (a, b), c in self.coeffs.items()}
        ).clean()


def pde_residual_first(g: BivariateSeries) -> BivariateSeries:
    """u(-g_uv + g_vv) + g_u, trusted through total degree order-2."""
    res = (g.dv().dv() - g.du().dv()).mul_u() + g.du()
    return BivariateSeries(g.order - 2, res.coeffs).clean()


def pde_residual_harmonic(f: BivariateSeries) -> BivariateSeries:
    """f_uu - 2 f_uv + f_vv, trusted through total degree order-2."""
    res = f.du().du() - f.du().dv().scale(2) + f.dv().dv()
    return BivariateSeries(f.order - 2, res.coeffs).clean()


def to_light_cone(f: BivariateSeries) -> BivariateSeries:
    """Rewrite f(u, v) in the coordinates t = u - v, s = u + v.

    The returned series represents f~(t, s) with t in the first slot:
    substitute u = (s + t)/2, v = (s - t)/2.
    """
    out: Dict[Tuple[int, int], QLike] = {}
    for (a, b), c in f.coeffs.items():
        # ((s+t)/2)^a ((s-t)/2)^b
        for i in range(a + 1):
            wa = Q(math.comb(a, i))
            for jj in range(b + 1):
                w = c * wa * Q(math.comb(b, jj)) * Q((-1) ** jj, 2 ** (a + b))
                key = (i + jj, a + b - i - jj)  # (t-power, s-power)
                s = out.get(key, ZERO) + w
                if s:
                    out[key] = s
                elif key in out:
                    del out[key]
    return BivariateSeries(f.order, out).clean()


def dtt(f_ts: BivariateSeries) -> BivariateSeries:
    """Second derivative in the first (t) slot."""
    return f_ts.du().du()


def restrict_to_uv(tau: GradedPoly) -> GradedPoly:
    """Set x_i = y_i = 0 for i >= 2; keep x_1 (as u) and y_1 (as v)."""
    out = GradedPoly.zero(tau.caps)
    for k, c in tau.terms.items():
        if k[2]:
            raise ValueError("p^0 sector required")
        if any(n != 1 for n, _ in k[0]) or any(n != 1 for n, _ in k[1]):
            continue
        out.terms[k] = c
    return out


def restrict_log_tau(tau: GradedPoly) -> Dict[ParExps, BivariateSeries]:
    """log tau restricted to (u, v), split by parameter monomial."""
    r = restrict_to_uv(tau)
    g = poly_log1(r)
    out: Dict[ParExps, BivariateSeries] = {}
    order = tau.caps.degree
    for k, c in g.terms.items():
        a = dict(k[0]).get(1, 0)
        b = dict(k[1]).get(1, 0)
        series = out.setdefault(k[3], BivariateSeries(order))
        series.coeffs[(a, b)] = series.coeffs.get((a, b), ZERO) + c
    return {pk: s.clean() for pk, s in out.items()}
