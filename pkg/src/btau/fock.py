"""The charged-free-boson Fock space: modes, currents, gradings, Hirota operator.

The space is realized as polynomials in the creation modes applied to the
vacuum: monomials in phi_{-i} (i >= 1) and phistar_{-j} (j >= 0).  The mode
conventions follow the commutator [phi_i, phistar_j] = delta_{i,-j} together
with the vacuum law phi_i |0> = phistar_{i+1} |0> = 0 for i >= 0, which force
the annihilation actions

    phi_i      = + d/d(phistar_{-i})   for i >= 0,
    phistar_j  = - d/d(phi_{-j})       for j >= 1.

Charge is the eigenvalue l with J0_0 x = -l x; on a monomial this counts
(number of phi factors) - (number of phistar factors), the convention
validated against the q-dimension census of module qdim.  Degree is the
J1_0 eigenvalue sum(i * mult_i) + sum(j * mult_j).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .kernel import Q, QLike, ZERO

Mode = Tuple[str, int]  # ("phi", i) or ("star", i) for the operators phi_i, phistar_i

Exps = Tuple[Tuple[int, int], ...]


class IndexOutOfCreationRange(ValueError):
    """Raised for quadratic-exponential coefficients outside i >= 0, j >= 1."""


@dataclass(frozen=True)
class FockMonomial:
    """Normal-ordered basis monomial phi_{-i}^n ... phistar_{-j}^m ... |0>.

    ``phis`` maps i -> multiplicity for phi_{-i} (i >= 1), ``stars`` maps
    j -> multiplicity for phistar_{-j} (j >= 0); both stored as sorted
    tuples with all multiplicities >= 1.
    """

    phis: Exps
    stars: Exps

    def degree(self) -> int:
        return sum(i * m for i, m in self.phis) + sum(j * m for j, m in self.stars)

    def charge(self) -> int:
        return sum(m for _, m in self.phis) - sum(m for _, m in self.stars)

    def factor_count(self) -> int:
        return sum(m for _, m in self.phis) + sum(m for _, m in self.stars)

    def to_text(self) -> str:
        atoms = [f"phi[{-i}]^{m}" for i, m in sorted(self.phis, reverse=True)]
        atoms += [f"phistar[{-j}]^{m}" for j, m in sorted(self.stars, reverse=True)]
        return " ".join(atoms + ["|0>"])


VACUUM = FockMonomial((), ())


def _bump(exps: Exps, idx: int, delta: int) -> Exps:
    d = dict(exps)
    m = d.get(idx, 0) + delta
    if m < 0:
        raise ValueError("negative multiplicity")
    if m:
        d[idx] = m
    elif idx in d:
        del d[idx]
    return tuple(sorted(d.items()))


class FockVector:
    """Finite rational linear combination of basis monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[FockMonomial, QLike]] = None):
        self.terms: Dict[FockMonomial, QLike] = terms if terms is not None else {}

    @staticmethod
    def vacuum() -> "FockVector":
        return FockVector({VACUUM: Q(1)})

    @staticmethod
    def from_monomial(mono: FockMonomial, c: QLike = 1) -> "FockVector":
        c = Q(c)
        return FockVector({mono: c} if c else {})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "FockVector") -> "FockVector":
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, ZERO) + c
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return FockVector(out)

    def __neg__(self) -> "FockVector":
        return FockVector({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-other)

    def scale(self, c: QLike) -> "FockVector":
        c = Q(c)
        if c == 0:
            return FockVector()
        return FockVector({k: v * c for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def max_degree(self) -> int:
        return max((m.degree() for m in self.terms), default=0)

    def filter_degree(self, dmax: int) -> "FockVector":
        return FockVector({m: c for m, c in self.terms.items() if m.degree() <= dmax})

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda m: (m.degree(), m.phis, m.stars))
        return " + ".join(f"({self.terms[k]})*{k.to_text()}" for k in keys)

    def __repr__(self) -> str:  # pragma: no cover
        return f"FockVector({self.to_text()})"


def apply_mode(mode: Mode, v: FockVector) -> FockVector:
    """Apply a single mode: creation multiplies, annihilation differentiates."""
    kind, idx = mode
    out: Dict[FockMonomial, QLike] = {}

    def acc(mono: FockMonomial, c):
        s = out.get(mono, ZERO) + c
        if s:
            out[mono] = s
        elif mono in out:
            del out[mono]

    for mono, c in v.terms.items():
        if kind == "phi":
            if idx <= -1:
                acc(FockMonomial(_bump(mono.phis, -idx, 1), mono.stars), c)
            else:  # d/d(phistar_{-idx})
                mult = dict(mono.stars).get(idx, 0)
                if mult:
                    acc(FockMonomial(mono.phis, _bump(mono.stars, idx, -1)), c * mult)
        elif kind == "star":
            if idx <= 0:
                acc(FockMonomial(mono.phis, _bump(mono.stars, -idx, 1)), c)
            else:  # - d/d(phi_{-idx})
                mult = dict(mono.phis).get(idx, 0)
                if mult:
                    acc(FockMonomial(_bump(mono.phis, idx, -1), mono.stars), -c * mult)
        else:
            raise ValueError(f"unknown mode kind {kind!r}")
    return FockVector(out)


def _is_creation(mode: Mode) -> bool:
    kind, idx = mode
    return idx <= -1 if kind == "phi" else idx <= 0


def _normal_ordered_pair(phi_i: int, star_j: int, v: FockVector) -> FockVector:
    """:phi_i phistar_j: applied to v (annihilation part acts first)."""
    if phi_i >= 0 and star_j <= 0:
        return apply_mode(("star", star_j), apply_mode(("phi", phi_i), v))
    return apply_mode(("phi", phi_i), apply_mode(("star", star_j), v))


def apply_current(which: str, k: int, v: FockVector) -> FockVector:
    """J0_k = sum_i :phi_i phistar_{k-i}:  or  J1_k = sum_i (i-k) :phi_i phistar_{k-i}:.

    J1 comes from the z-expansion of :phi(z) d(phistar)(z): with modes at
    z^{-k-2}, which weights the pair (phi_i, phistar_j) by -j = i - k.
    Only finitely many i contribute on a finite vector.
    """
    if which not in ("J0", "J1"):
        raise ValueError("current must be 'J0' or 'J1'")
    out = FockVector()
    for mono, c in v.terms.items():
        single = FockVector.from_monomial(mono, c)
        cands = set()
        for j, _ in mono.stars:
            cands.add(j)  # phi_i annihilation needs phistar_{-i} present
        for i_phi, _ in mono.phis:
            cands.add(k - i_phi)  # phistar_{k-i} annihilation needs phi_{-(k-i)}
        if k <= -1:
            cands.update(range(k, 0))  # both factors creation
        for i in cands:
            j = k - i
            w = 1 if which == "J0" else -j
            if w == 0:
                continue
            out = out + _normal_ordered_pair(i, j, single).scale(w)
    return out


def grade(v: FockVector) -> List[Tuple[int, int, FockVector]]:
    """Split into joint (charge, degree) eigencomponents, sorted."""
    buckets: Dict[Tuple[int, int], FockVector] = {}
    for mono, c in v.terms.items():
        key = (mono.charge(), mono.degree())
        buckets.setdefault(key, FockVector()).terms[mono] = c
    return [(l, d, buckets[(l, d)]) for l, d in sorted(buckets)]


class FockTensor:
    """Element of the two-sided Fock tensor square."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Tuple[FockMonomial, FockMonomial], QLike]] = None):
        self.terms = terms if terms is not None else {}

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "FockTensor") -> "FockTensor":
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, ZERO) + c
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return FockTensor(out)

    def __sub__(self, other: "FockTensor") -> "FockTensor":
        return self + other.scale(-1)

    def scale(self, c: QLike) -> "FockTensor":
        c = Q(c)
        if c == 0:
            return FockTensor()
        return FockTensor({k: v * c for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockTensor):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def filter_total_degree(self, dmax: int) -> "FockTensor":
        return FockTensor(
            {
                (a, b): c
                for (a, b), c in self.terms.items()
                if a.degree() + b.degree() <= dmax
            }
        )

    @staticmethod
    def outer(v: FockVector, w: FockVector) -> "FockTensor":
        out = {}
        for a, ca in v.terms.items():
            for b, cb in w.terms.items():
                out[(a, b)] = ca * cb
        return FockTensor(out)

    def apply_left(self, mode: Mode) -> "FockTensor":
        return self._apply(mode, 0)

    def apply_right(self, mode: Mode) -> "FockTensor":
        return self._apply(mode, 1)

    def _apply(self, mode: Mode, side: int) -> "FockTensor":
        out = FockTensor()
        for (a, b), c in self.terms.items():
            target = FockVector.from_monomial(a if side == 0 else b, c)
            r = apply_mode(mode, target)
            for mono, cc in r.terms.items():
                pair = (mono, b) if side == 0 else (a, mono)
                s = out.terms.get(pair, ZERO) + cc
                if s:
                    out.terms[pair] = s
                elif pair in out.terms:
                    del out.terms[pair]
        return out


def omega_u(v: FockVector, w: FockVector) -> FockTensor:
    """The Hirota operator sum_i (phistar_i v) (x) (phi_{-i} w).

    The sum is finite: for i >= 1 the annihilator phistar_i needs some
    phi_{-i} in v, and for i <= 0 the annihilator phi_{-i} needs some
    phistar_{i} in w, so only the supported indices contribute.
    """
    return omega_u_tensor(FockTensor.outer(v, w))


def omega_u_tensor(t: FockTensor) -> FockTensor:
    """omega_u as an operator on the tensor square."""
    iset = set()
    for a, b in t.terms:
        iset.update(i for i, _ in a.phis)
        iset.update(-j for j, _ in b.stars)
    out = FockTensor()
    for i in iset:
        piece = t.apply_right(("phi", -i)).apply_left(("star", i))
        out = out + piece
    return out


def tau_quadratic_exp(coeffs: Dict[Tuple[int, int], QLike], cap: int) -> FockVector:
    """exp(sum c_{ij} phistar_{-i} phi_{-j}) |0> expanded through degree cap.

    Keys are (i, j) with i >= 0, j >= 1; each factor raises degree by
    i + j >= 1, so the expansion below the cap is finite.
    """
    for (i, j), _ in coeffs.items():
        if i < 0 or j <= 0:
            raise IndexOutOfCreationRange(
                f"index out of creation range: (i, j) = ({i}, {j})"
            )
    pairs = [((i, j), Q(c)) for (i, j), c in coeffs.items() if Q(c) != 0]
    out = FockVector.vacuum()
    level = FockVector.vacuum()
    k = 1
    while True:
        nxt = FockVector()
        for (i, j), c in pairs:
            bumped = FockVector(
                {
                    FockMonomial(_bump(m.phis, j, 1), _bump(m.stars, i, 1)): cc * c
                    for m, cc in level.terms.items()
                }
            )
            nxt = nxt + bumped
        level = nxt.filter_degree(cap).scale(Q(1, k))
        if level.is_zero():
            return out
        out = out + level
        k += 1


def vacuum_obstruction(
    v: FockVector,
) -> Optional[Tuple[FockMonomial, FockMonomial, QLike]]:
    """The surviving tensor component predicted for a non-tau candidate.

    Locates the largest N with phi_{-N} present and the top multiplicity m;
    the component (phi_{-N}^{m-1} Q*, phi_{-N}^{m+1} Q*) built from any
    monomial Q* of the top layer must appear in omega_u(v, v) with
    coefficient -m c(Q*)^2, because no other summand can reach
    phi_{-N}-power m+1 on the right.  Returns None when v has no phi factor
    (such v must be handled by direct evaluation instead).
    """
    N = 0
    for mono in v.terms:
        for i, _ in mono.phis:
            N = max(N, i)
    if N == 0:
        return None
    m = max(dict(mono.phis).get(N, 0) for mono in v.terms)
    layer = {
        FockMonomial(_bump(mono.phis, N, -m), mono.stars): c
        for mono, c in v.terms.items()
        if dict(mono.phis).get(N, 0) == m
    }
    qstar = min(layer, key=lambda mo: (mo.degree(), mo.phis, mo.stars))
    c = layer[qstar]
    left = FockMonomial(_bump(qstar.phis, N, m - 1), qstar.stars)
    right = FockMonomial(_bump(qstar.phis, N, m + 1), qstar.stars)
    return (left, right, -Q(m) * c * c)
