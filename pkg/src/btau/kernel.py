"""Exact arithmetic carriers: rationals, truncated q-series, graded sparse polynomials.

Everything in this module is exact.  Coefficients are arbitrary-precision
rationals (gmpy2.mpq when available, fractions.Fraction otherwise); there is
no floating point anywhere.

Two truncated rings are provided:

* ``QSeries`` -- univariate power series in q with coefficients 0..N kept.
* ``GradedPoly`` -- sparse polynomials in the variables x1,x2,..., y1,y2,...,
  a Laurent variable p and a set of named degree-0 formal parameters.
  Terms are kept only while xy-degree <= D, |p exponent| <= C and total
  parameter order <= P; discarding over-cap terms is the only lossy step
  and is monotone in the caps.

The grading is deg x_n = deg y_n = n, deg p^l = -l; parameters have degree 0
and are truncated by total order instead.

Caveat: discarding xy-degree or parameter overflow is an ideal quotient, so
ring identities survive truncation unconditionally.  The p-window is not an
ideal (p-exponents can leave the window and cancel back), so exactness is
guaranteed only for computations whose intermediate p-support stays inside
the window.  Every verification in this package keeps |p-exponent| <= 1
against the default window of 6.

Values are immutable after construction and may be shared freely between
threads.
"""

from __future__ import annotations

import math
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Tuple

try:  # gmpy2 is optional; it only makes the same exact arithmetic faster
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

QLike = object  # anything Q() accepts: int, Q

ZERO = Q(0)
ONE = Q(1)


class CapMismatch(ValueError):
    """Raised when two operands carry different truncation caps."""

    def __init__(self, a: "Caps", b: "Caps"):
        super().__init__(f"cap mismatch: {a} vs {b}")


class NonInvertibleSeries(ValueError):
    """Raised when inverting a q-series with zero constant term."""


class NonNilpotentExponent(ValueError):
    """Raised by poly_exp when a term cannot die under the caps."""


class Caps(NamedTuple):
    """Truncation caps: xy-degree D, p-window C, total parameter order P."""

    degree: int = 8
    p_window: int = 6
    param_order: int = 3


# A monomial key: (x-exps, y-exps, p-exp, param-exps) with the exponent
# lists stored as sorted tuples of (index, exponent) / (name, exponent).
VarExps = Tuple[Tuple[int, int], ...]
ParExps = Tuple[Tuple[str, int], ...]
Key = Tuple[VarExps, VarExps, int, ParExps]

KEY_ONE: Key = ((), (), 0, ())


def key_xy_degree(key: Key) -> int:
    return sum(n * e for n, e in key[0]) + sum(n * e for n, e in key[1])


def key_param_order(key: Key) -> int:
    return sum(e for _, e in key[3])


def key_graded_degree(key: Key) -> int:
    """Full grading including deg p^l = -l."""
    return key_xy_degree(key) - key[2]


def _merge_exps(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for n, e in b:
        d[n] = d.get(n, 0) + e
    return tuple(sorted(d.items()))


def merge_keys(k1: Key, k2: Key) -> Key:
    return (
        _merge_exps(k1[0], k2[0]),
        _merge_exps(k1[1], k2[1]),
        k1[2] + k2[2],
        _merge_exps(k1[3], k2[3]),
    )


class GradedPoly:
    """Sparse multivariate polynomial under the (D, C, P) truncation regime.

    ``terms`` maps monomial keys to nonzero rational coefficients.  All
    arithmetic discards over-cap terms; within the caps it is exact.
    """

    __slots__ = ("caps", "terms")

    def __init__(self, caps: Caps, terms: Optional[Dict[Key, QLike]] = None):
        self.caps = caps
        self.terms: Dict[Key, QLike] = terms if terms is not None else {}

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(caps: Caps) -> "GradedPoly":
        return GradedPoly(caps)

    @staticmethod
    def const(c: QLike, caps: Caps) -> "GradedPoly":
        c = Q(c)
        return GradedPoly(caps, {KEY_ONE: c} if c != 0 else {})

    @staticmethod
    def one(caps: Caps) -> "GradedPoly":
        return GradedPoly.const(1, caps)

    @staticmethod
    def x(n: int, caps: Caps, exp: int = 1) -> "GradedPoly":
        if n < 1 or exp < 0:
            raise ValueError("x variables are indexed by n >= 1")
        if n * exp > caps.degree:
            return GradedPoly.zero(caps)
        return GradedPoly(caps, {(((n, exp),), (), 0, ()): ONE})

    @staticmethod
    def y(n: int, caps: Caps, exp: int = 1) -> "GradedPoly":
        if n < 1 or exp < 0:
            raise ValueError("y variables are indexed by n >= 1")
        if n * exp > caps.degree:
            return GradedPoly.zero(caps)
        return GradedPoly(caps, {((), ((n, exp),), 0, ()): ONE})

    @staticmethod
    def p_power(l: int, caps: Caps) -> "GradedPoly":
        if abs(l) > caps.p_window:
            return GradedPoly.zero(caps)
        return GradedPoly(caps, {((), (), l, ()): ONE})

    @staticmethod
    def param(name: str, caps: Caps, exp: int = 1) -> "GradedPoly":
        if exp > caps.param_order:
            return GradedPoly.zero(caps)
        return GradedPoly(caps, {((), (), 0, ((name, exp),)): ONE})

    # -- predicates / accessors ---------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, key: Key) -> QLike:
        return self.terms.get(key, ZERO)

    def constant(self) -> QLike:
        return self.terms.get(KEY_ONE, ZERO)

    def max_xy_degree(self) -> int:
        return max((key_xy_degree(k) for k in self.terms), default=0)

    def max_param_order(self) -> int:
        return max((key_param_order(k) for k in self.terms), default=0)

    def variable_indices(self) -> Tuple[set, set]:
        """Sets of x- and y-indices that actually occur."""
        xi, yi = set(), set()
        for k in self.terms:
            xi.update(n for n, _ in k[0])
            yi.update(n for n, _ in k[1])
        return xi, yi

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.caps == other.caps and self.terms == other.terms

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    __hash__ = None  # mutable dict inside; structural equality only

    # -- arithmetic ----------------------------------------------------

    def _require_caps(self, other: "GradedPoly") -> None:
        if self.caps != other.caps:
            raise CapMismatch(self.caps, other.caps)

    def __add__(self, other: "GradedPoly") -> "GradedPoly":
        self._require_caps(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, ZERO) + c
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return GradedPoly(self.caps, out)

    def __neg__(self) -> "GradedPoly":
        return GradedPoly(self.caps, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "GradedPoly") -> "GradedPoly":
        return self + (-other)

    def scale(self, c: QLike) -> "GradedPoly":
        c = Q(c)
        if c == 0:
            return GradedPoly.zero(self.caps)
        return GradedPoly(self.caps, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, GradedPoly):
            return self.scale(other)
        self._require_caps(other)
        D, C, P = self.caps
        # iterate with the smaller operand outside
        a, b = (self, other) if len(self.terms) <= len(other.terms) else (other, self)
        bmeta = [
            (k, c, key_xy_degree(k), key_param_order(k)) for k, c in b.terms.items()
        ]
        out: Dict[Key, QLike] = {}
        for k1, c1 in a.terms.items():
            d1 = key_xy_degree(k1)
            q1 = key_param_order(k1)
            p1 = k1[2]
            for k2, c2, d2, q2 in bmeta:
                if d1 + d2 > D or q1 + q2 > P or abs(p1 + k2[2]) > C:
                    continue
                k = merge_keys(k1, k2)
                s = out.get(k, ZERO) + c1 * c2
                if s:
                    out[k] = s
                elif k in out:
                    del out[k]
        return GradedPoly(self.caps, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "GradedPoly":
        if e < 0:
            raise ValueError("negative powers are not defined for GradedPoly")
        out = GradedPoly.one(self.caps)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    # -- calculus ------------------------------------------------------

    def derive(self, family: str, n: int = 0) -> "GradedPoly":
        """Formal partial derivative: family is 'x', 'y' or a parameter name."""
        slot = 0 if family == "x" else 1 if family == "y" else 3
        var = n if slot != 3 else family
        out: Dict[Key, QLike] = {}
        for k, c in self.terms.items():
            exps = dict(k[slot])
            e = exps.get(var, 0)
            if not e:
                continue
            if e == 1:
                del exps[var]
            else:
                exps[var] = e - 1
            nk = list(k)
            nk[slot] = tuple(sorted(exps.items()))
            key = tuple(nk)
            s = out.get(key, ZERO) + c * e
            if s:
                out[key] = s
            elif key in out:
                del out[key]
        return GradedPoly(self.caps, out)

    def p_euler(self) -> "GradedPoly":
        """The operator p d/dp: multiplies each term by its p-exponent."""
        out = {}
        for k, c in self.terms.items():
            if k[2]:
                out[k] = c * k[2]
        return GradedPoly(self.caps, out)

    def shift_p(self, delta: int) -> "GradedPoly":
        """Multiply by p**delta; terms leaving the window are discarded."""
        C = self.caps.p_window
        out = {}
        for k, c in self.terms.items():
            l = k[2] + delta
            if abs(l) <= C:
                out[(k[0], k[1], l, k[3])] = c
        return GradedPoly(self.caps, out)

    # -- substitution / projection ------------------------------------

    def eval_xy(self, xvals: Dict[int, QLike], yvals: Dict[int, QLike]) -> "GradedPoly":
        """Evaluate every x_n / y_n at a rational (absent means 0)."""
        out: Dict[Key, QLike] = {}
        for k, coeff in self.terms.items():
            c = coeff
            for n, e in k[0]:
                v = Q(xvals.get(n, 0))
                if v == 0:
                    c = ZERO
                    break
                c = c * v**e
            if c == 0:
                continue
            for n, e in k[1]:
                v = Q(yvals.get(n, 0))
                if v == 0:
                    c = ZERO
                    break
                c = c * v**e
            if c == 0:
                continue
            key = ((), (), k[2], k[3])
            s = out.get(key, ZERO) + c
            if s:
                out[key] = s
            elif key in out:
                del out[key]
        return GradedPoly(self.caps, out)

    def by_params(self) -> Dict[ParExps, "GradedPoly"]:
        """Split into parameter-monomial coefficients (parameters stripped)."""
        out: Dict[ParExps, GradedPoly] = {}
        for k, c in self.terms.items():
            stripped = (k[0], k[1], k[2], ())
            out.setdefault(k[3], GradedPoly.zero(self.caps)).terms[stripped] = c
        return out

    def filter_xy_degree(self, dmax: int) -> "GradedPoly":
        return GradedPoly(
            self.caps,
            {k: c for k, c in self.terms.items() if key_xy_degree(k) <= dmax},
        )

    def filter_param_order(self, pmax: int) -> "GradedPoly":
        return GradedPoly(
            self.caps,
            {k: c for k, c in self.terms.items() if key_param_order(k) <= pmax},
        )

    def drop_y(self) -> "GradedPoly":
        """Project onto the y-free part (set every y_n to 0)."""
        return GradedPoly(self.caps, {k: c for k, c in self.terms.items() if not k[1]})

    # -- serialization -------------------------------------------------

    def sorted_keys(self) -> List[Key]:
        """Graded-lexicographic term order used by the canonical text form."""
        D = self.caps.degree

        def sk(k: Key):
            xv, yv = dict(k[0]), dict(k[1])
            return (
                -key_xy_degree(k),
                tuple(-xv.get(n, 0) for n in range(1, D + 1)),
                tuple(-yv.get(n, 0) for n in range(1, D + 1)),
                -k[2],
                tuple((name, -e) for name, e in k[3]),
            )

        return sorted(self.terms, key=sk)

    def to_text(self) -> str:
        """Canonical text form: graded order, rationals as num/den."""
        if not self.terms:
            return "0"
        pieces: List[str] = []
        for i, k in enumerate(self.sorted_keys()):
            c = self.terms[k]
            neg = c < 0
            mag = -c if neg else c
            mono = _render_monomial(k)
            if mono and mag == 1 and not neg:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = f"{mag}"
            if i == 0:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append(("- " if neg else "+ ") + body)
        return " ".join(pieces)

    def __repr__(self) -> str:  # pragma: no cover
        return f"GradedPoly({self.to_text()})"


def _render_monomial(k: Key) -> str:
    atoms = []
    for n, e in k[0]:
        atoms.append(f"x{n}" if e == 1 else f"x{n}^{e}")
    if k[2]:
        atoms.append("p" if k[2] == 1 else f"p^{k[2]}")
    for n, e in k[1]:
        atoms.append(f"y{n}" if e == 1 else f"y{n}^{e}")
    for name, e in k[3]:
        atoms.append(name if e == 1 else f"{name}^{e}")
    return "*".join(atoms)


def poly_exp(a: GradedPoly) -> GradedPoly:
    """exp(a) = sum a^k / k!, requiring every term of a to be nilpotent.

    A term dies under the caps only if it has positive xy-degree or positive
    parameter order; a bare constant or a pure p-power never would, so those
    are rejected.
    """
    for k in a.terms:
        if key_xy_degree(k) == 0 and key_param_order(k) == 0:
            raise NonNilpotentExponent(
                f"non-nilpotent exponent: term {_render_monomial(k) or '1'}"
            )
    out = GradedPoly.one(a.caps)
    power = GradedPoly.one(a.caps)
    k = 1
    while True:
        power = (power * a).scale(Q(1, k))
        if power.is_zero():
            return out
        out = out + power
        k += 1


def poly_log1(f: GradedPoly) -> GradedPoly:
    """log f for f = 1 + w with w nilpotent (positive degree or parameter order)."""
    w = f - GradedPoly.one(f.caps)
    for k in w.terms:
        if key_xy_degree(k) == 0 and key_param_order(k) == 0:
            raise NonNilpotentExponent("log argument is not 1 + nilpotent")
    out = GradedPoly.zero(f.caps)
    power = GradedPoly.one(f.caps)
    k = 1
    sign = 1
    while True:
        power = power * w
        if power.is_zero():
            return out
        out = out + power.scale(Q(sign, k))
        sign = -sign
        k += 1


class LaurentPolyZ:
    """Finite Laurent polynomial in z with GradedPoly coefficients."""

    __slots__ = ("caps", "parts")

    def __init__(self, caps: Caps, parts: Optional[Dict[int, GradedPoly]] = None):
        self.caps = caps
        self.parts: Dict[int, GradedPoly] = {}
        if parts:
            for m, f in parts.items():
                if not f.is_zero():
                    self.parts[m] = f

    @staticmethod
    def from_poly(f: GradedPoly, zexp: int = 0) -> "LaurentPolyZ":
        return LaurentPolyZ(f.caps, {zexp: f})

    def coeff(self, k: int) -> GradedPoly:
        return self.parts.get(k, GradedPoly.zero(self.caps))

    def support(self) -> List[int]:
        return sorted(self.parts)

    def __add__(self, other: "LaurentPolyZ") -> "LaurentPolyZ":
        if self.caps != other.caps:
            raise CapMismatch(self.caps, other.caps)
        out = dict(self.parts)
        for m, f in other.parts.items():
            g = out.get(m)
            out[m] = f if g is None else g + f
        return LaurentPolyZ(self.caps, out)

    def __mul__(self, other: "LaurentPolyZ") -> "LaurentPolyZ":
        if self.caps != other.caps:
            raise CapMismatch(self.caps, other.caps)
        out: Dict[int, GradedPoly] = {}
        for m1, f1 in self.parts.items():
            for m2, f2 in other.parts.items():
                f = f1 * f2
                if f.is_zero():
                    continue
                m = m1 + m2
                g = out.get(m)
                out[m] = f if g is None else g + f
        return LaurentPolyZ(self.caps, out)

    def map_coeffs(self, fn: Callable[[GradedPoly], GradedPoly]) -> "LaurentPolyZ":
        return LaurentPolyZ(self.caps, {m: fn(f) for m, f in self.parts.items()})

    def shift_z(self, delta: int) -> "LaurentPolyZ":
        return LaurentPolyZ(self.caps, {m + delta: f for m, f in self.parts.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPolyZ):
            return NotImplemented
        return self.caps == other.caps and self.parts == other.parts

    __hash__ = None


def z_coeff(f: LaurentPolyZ, k: int) -> GradedPoly:
    """Extract the z^k coefficient (zero outside the support)."""
    return f.coeff(k)


def shift_substitute(
    f: GradedPoly,
    xcoef: Callable[[int], QLike],
    ycoef: Callable[[int], QLike],
) -> LaurentPolyZ:
    """Substitute x_n -> x_n + xcoef(n) z^-n and y_n -> y_n + ycoef(n) z^-n.

    This realizes first-order derivation exponentials acting as variable
    shifts.  The z-support of the result is finite because f is.
    """
    out: Dict[int, Dict[Key, QLike]] = {}
    for key, coeff in f.terms.items():
        # partial expansions: (zexp, x-exps, y-exps, coefficient)
        partial: List[List] = [[0, [], [], coeff]]
        for slot, coef_fn in ((0, xcoef), (1, ycoef)):
            for n, e in key[slot]:
                c = Q(coef_fn(n))
                if c == 0:
                    for part in partial:
                        part[1 + slot].append((n, e))
                    continue
                powers = [(i, Q(math.comb(e, i)) * c**i) for i in range(e + 1)]
                nxt: List[List] = []
                for z0, xs, ys, c0 in partial:
                    for i, w in powers:
                        entry = [z0 - n * i, list(xs), list(ys), c0 * w]
                        if e - i:
                            entry[1 + slot].append((n, e - i))
                        nxt.append(entry)
                partial = nxt
        for z0, xs, ys, c0 in partial:
            nk: Key = (tuple(sorted(xs)), tuple(sorted(ys)), key[2], key[3])
            bucket = out.setdefault(z0, {})
            s = bucket.get(nk, ZERO) + c0
            if s:
                bucket[nk] = s
            elif nk in bucket:
                del bucket[nk]
    return LaurentPolyZ(f.caps, {m: GradedPoly(f.caps, t) for m, t in out.items()})


class QSeries:
    """Power series in q, exact coefficients kept through a truncation order."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable[QLike], order: Optional[int] = None):
        cs = [Q(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if len(cs) != order + 1:
            raise ValueError("coefficient list must have length order+1")
        self.order = order
        self.coeffs = cs

    @staticmethod
    def zero(order: int) -> "QSeries":
        return QSeries([ZERO] * (order + 1), order)

    @staticmethod
    def one(order: int) -> "QSeries":
        c = [ZERO] * (order + 1)
        c[0] = ONE
        return QSeries(c, order)

    @staticmethod
    def monomial(c: QLike, k: int, order: int) -> "QSeries":
        cs = [ZERO] * (order + 1)
        if 0 <= k <= order:
            cs[k] = Q(c)
        return QSeries(cs, order)

    def truncate(self, order: int) -> "QSeries":
        if order >= self.order:
            return self
        return QSeries(self.coeffs[: order + 1], order)

    def _common(self, other: "QSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other: "QSeries") -> "QSeries":
        n = self._common(other)
        return QSeries([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)], n)

    def __neg__(self) -> "QSeries":
        return QSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            c = Q(other)
            return QSeries([v * c for v in self.coeffs], self.order)
        n = self._common(other)
        out = [ZERO] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return QSeries(out, n)

    __rmul__ = __mul__

    def inv(self) -> "QSeries":
        """Multiplicative inverse through the truncation order."""
        a0 = self.coeffs[0]
        if a0 == 0:
            raise NonInvertibleSeries("non-invertible series: zero constant term")
        n = self.order
        out = [ZERO] * (n + 1)
        out[0] = Q(1) / a0
        for k in range(1, n + 1):
            s = ZERO
            for i in range(1, k + 1):
                if self.coeffs[i]:
                    s += self.coeffs[i] * out[k - i]
            out[k] = -s / a0
        return QSeries(out, n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    __hash__ = None

    def first_difference(self, other: "QSeries") -> Optional[int]:
        """Smallest index where the two disagree (through the common order)."""
        n = self._common(other)
        for i in range(n + 1):
            if self.coeffs[i] != other.coeffs[i]:
                return i
        return None

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    def __repr__(self) -> str:  # pragma: no cover
        return f"QSeries({self.to_text()})"


def qs_pochhammer(a_power: int, n: int, order: int) -> QSeries:
    """(q^a_power; q)_n = prod_{j=0..n-1} (1 - q^(a_power+j)), truncated."""
    out = QSeries.one(order)
    for j in range(n):
        out = out * (QSeries.one(order) - QSeries.monomial(1, a_power + j, order))
    return out


def qs_pochhammer_inf(order: int) -> QSeries:
    """(q; q)_infinity, exact through the truncation order."""
    return qs_pochhammer(1, order, order)
