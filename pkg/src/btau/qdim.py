"""Partition-class generating functions and the q-dimension identities.

Pochhammer symbols are truncated products, exact through the series order;
the alternating sums are cut once their exponent passes the order, which is
exact because the exponent is monotone in the summation index.

Charge-l monomials have (number of phi factors) - (number of phistar
factors) = l; the census enumerates actual basis monomials and counts by
degree, which is the adjudication test for that sign convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

from .fock import FockMonomial
from .kernel import Q, QSeries, qs_pochhammer_inf


@dataclass(frozen=True)
class PartitionClassSpec:
    """Length-s tuples with k <= l_1 <= ... <= l_s (strict: <)."""

    lower_bound: int
    length: int
    strict: bool = False

    def __post_init__(self):
        if self.lower_bound < 0 or self.length < 0:
            raise ValueError("need lower_bound >= 0 and length >= 0")


def class_gf(spec: PartitionClassSpec, order: int) -> QSeries:
    """Closed form: q^{ks}/(q;q)_s, resp. q^{(2k+s-1)s/2}/(q;q)_s."""
    k, s = spec.lower_bound, spec.length
    shift = (2 * k + s - 1) * s // 2 if spec.strict else k * s
    if shift > order:
        return QSeries.zero(order)
    out = QSeries.monomial(1, shift, order)
    for j in range(1, s + 1):
        out = out * (QSeries.one(order) - QSeries.monomial(1, j, order)).inv()
    return out


def class_gf_enum(spec: PartitionClassSpec, order: int) -> QSeries:
    """Brute-force twin: enumerate every qualifying tuple of weight <= order."""
    counts = [0] * (order + 1)

    def rec(pos: int, minval: int, weight: int):
        if pos == spec.length:
            counts[weight] += 1
            return
        remaining = spec.length - pos
        v = minval
        while weight + v * remaining <= order:
            rec(pos + 1, v + 1 if spec.strict else v, weight + v)
            v += 1

    rec(0, spec.lower_bound, 0)
    return QSeries([Q(c) for c in counts], order)


# -- q-dimensions ------------------------------------------------------------


def _pochhammer_list(order: int, mmax: int) -> List[QSeries]:
    """(q;q)_m for m = 0..mmax, truncated at the order."""
    out = [QSeries.one(order)]
    for m in range(1, mmax + 1):
        out.append(out[-1] * (QSeries.one(order) - QSeries.monomial(1, m, order)))
    return out


def qdim_sum(space: str, l: int, order: int) -> QSeries:
    """The combinatorial m-sums for the three graded spaces."""
    al = abs(l)
    dl = al if l >= 0 else 0  # delta_{l>=0} * |l|
    if space == "M":
        expo = lambda m: m + dl
    elif space == "Fbar":
        expo = lambda m: m * m + (al + 1) * m + al * (al + 1) // 2
    elif space == "F":
        expo = lambda m: m * m + m * al + l * (l + 1) // 2
    else:
        raise ValueError("space must be 'M', 'Fbar' or 'F'")
    mmax = 0
    while expo(mmax + 1) <= order:
        mmax += 1
    poch = _pochhammer_list(order, mmax + al)
    out = QSeries.zero(order)
    for m in range(mmax + 1):
        if expo(m) > order:
            continue
        term = QSeries.monomial(1, expo(m), order) * (poch[m] * poch[m + al]).inv()
        out = out + term
    return out


def qdim_closed(space: str, l: int, order: int) -> QSeries:
    """The alternating-sum closed forms for M and Fbar."""
    al = abs(l)
    inf = qs_pochhammer_inf(order)
    if space == "M":
        acc = QSeries.zero(order)
        s = 0
        while True:
            e = s * (s + 1) // 2 + (s + (1 if l >= 0 else 0)) * al
            if e > order:
                break
            sign = -1 if s % 2 else 1
            acc = acc + QSeries.monomial(sign, e, order)
            s += 1
        return acc * (inf * inf).inv()
    if space == "Fbar":
        acc = QSeries.zero(order)
        s = al
        while True:
            e = s * (s + 1) // 2
            if e > order:
                break
            sign = -1 if (s + l) % 2 else 1
            acc = acc + QSeries.monomial(sign, e, order)
            s += 1
        return acc * inf.inv()
    raise ValueError("closed forms cover 'M' and 'Fbar'")


def qdim_F_closed(l: int, order: int) -> QSeries:
    """q^{l(l+1)/2}/(q;q)_infinity."""
    shift = l * (l + 1) // 2
    if shift > order:
        return QSeries.zero(order)
    return QSeries.monomial(1, shift, order) * qs_pochhammer_inf(order).inv()


# -- the census ---------------------------------------------------------------


def _multisets(size: int, minpart: int, maxweight: int) -> Iterator[Tuple[Tuple[int, int], ...]]:
    """Multisets of `size` integers >= minpart with weight <= maxweight."""
    acc: Dict[int, int] = {}

    def rec(remaining: int, minval: int, budget: int):
        if remaining == 0:
            yield tuple(sorted(acc.items()))
            return
        v = minval
        while v * remaining <= budget:
            for mult in range(remaining, 0, -1):
                if v * mult > budget:
                    continue
                acc[v] = mult
                yield from rec(remaining - mult, v + 1, budget - v * mult)
                del acc[v]
            v += 1

    yield from rec(size, minpart, maxweight)


def census_monomials(l: int, order: int) -> Iterator[FockMonomial]:
    """All basis monomials of charge l and degree <= order."""
    for nphi in range(max(l, 0), order + max(l, 0) + 1):
        nstar = nphi - l
        if nstar < 0:
            continue
        if nphi > order:  # each phi factor carries degree >= 1
            break
        for phis in _multisets(nphi, 1, order):
            used = sum(i * m for i, m in phis)
            for stars in _multisets(nstar, 0, order - used):
                yield FockMonomial(phis, stars)


def fock_census(l: int, order: int) -> QSeries:
    """Count the charge-l basis monomials by degree."""
    counts = [0] * (order + 1)
    for mono in census_monomials(l, order):
        assert mono.charge() == l
        counts[mono.degree()] += 1
    return QSeries([Q(c) for c in counts], order)


# -- identity reports ----------------------------------------------------------


@dataclass
class QDimReport:
    """Two q-series compared coefficient-wise."""

    label: str
    l: int
    order: int
    lhs: QSeries
    rhs: QSeries
    equal_through: int
    first_difference: Optional[int]

    @property
    def equal(self) -> bool:
        return self.first_difference is None

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "l": self.l,
            "order": self.order,
            "lhs": self.lhs.to_text(),
            "rhs": self.rhs.to_text(),
            "equal_through": self.equal_through,
            "first_difference": self.first_difference,
        }


def _report(label: str, l: int, order: int, lhs: QSeries, rhs: QSeries) -> QDimReport:
    diff = lhs.first_difference(rhs)
    return QDimReport(
        label=label,
        l=l,
        order=order,
        lhs=lhs,
        rhs=rhs,
        equal_through=order if diff is None else diff - 1,
        first_difference=diff,
    )


def verify_identity(which: str, l: int, order: int) -> QDimReport:
    """The three q-series identity families.

    identity-1 and identity-2 are stated for l >= 0; euler-family holds for
    every integer l and reduces to Euler's identity at l = 0.
    """
    if which in ("identity-1", "identity-2"):
        if l < 0:
            raise ValueError(f"{which} requires l >= 0")
        poch = _pochhammer_list(order, 2 * order + l + 2)
        inf = qs_pochhammer_inf(order)
        lhs = QSeries.zero(order)
        m = 0
        while True:
            e = m if which == "identity-1" else m * m + (l + 1) * m
            if e > order:
                break
            lhs = lhs + QSeries.monomial(1, e, order) * (poch[m] * poch[m + l]).inv()
            m += 1
        acc = QSeries.zero(order)
        s = 0
        while True:
            e = s * (s + 1) // 2 + s * l
            if e > order:
                break
            acc = acc + QSeries.monomial(-1 if s % 2 else 1, e, order)
            s += 1
        rhs = acc * (inf * inf).inv() if which == "identity-1" else acc * inf.inv()
        return _report(which, l, order, lhs, rhs)
    if which == "euler-family":
        al = abs(l)
        poch = _pochhammer_list(order, 2 * order + al + 2)
        lhs = QSeries.zero(order)
        m = 0
        while True:
            e = m * m + m * al
            if e > order:
                break
            lhs = lhs + QSeries.monomial(1, e, order) * (poch[m] * poch[m + al]).inv()
            m += 1
        rhs = qs_pochhammer_inf(order).inv()
        return _report(which, l, order, lhs, rhs)
    raise ValueError("identity must be 'identity-1', 'identity-2' or 'euler-family'")


def linked_sum_identity(l: int, order: int) -> QDimReport:
    """The linear-exponent m-sum equals (q;q)_inf^{-1} times the quadratic one."""
    if l < 0:
        raise ValueError("the linked-sum identity is stated for l >= 0")
    a = verify_identity("identity-1", l, order)
    b = verify_identity("identity-2", l, order)
    rhs = qs_pochhammer_inf(order).inv() * b.lhs
    return _report("linked-sums", l, order, a.lhs, rhs)
