"""Named verification checks backing the CLI subcommands.

Every check is pure given (config, rng): it returns None on success or a
witness string describing the first failure.  Randomness is confined to
test-case generation and is fully determined by the seed, so reports are
reproducible byte for byte.
"""

from __future__ import annotations

import math
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from . import detperm, fms, fock, hirota, qdim
from .kernel import Caps, GradedPoly, LaurentPolyZ, Q, QSeries
from .schur import (
    MINUS_X,
    MINUS_XY,
    PLUS_X,
    PLUS_XY,
    POWER_SUM,
    Partition,
    elementary_schur,
    schur_lambda,
    sstar,
)


@dataclass
class RunConfig:
    """Caps, series order and selection flags for one driver invocation."""

    degree: int = 8
    p_window: int = 6
    param_order: int = 3
    q_order: int = 40
    seed: int = 0
    output_json: bool = False
    trials: Optional[int] = None
    ell: Optional[int] = None
    n: Optional[int] = None
    identity: Optional[str] = None

    def caps(self) -> Caps:
        return Caps(self.degree, self.p_window, self.param_order)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "p_window": self.p_window,
            "param_order": self.param_order,
            "q_order": self.q_order,
            "seed": self.seed,
            "trials": self.trials,
            "l": self.ell,
            "n": self.n,
            "identity": self.identity,
        }


@dataclass
class CheckResult:
    id: str
    anchor: str
    status: str
    witness: Optional[str]
    ms: float
    detail: Optional[str] = None

    def to_dict(self) -> dict:
        out = {"id": self.id, "anchor": self.anchor, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


class CheckFailure(Exception):
    """Carries the witness of the first failing comparison."""


def expect(cond: bool, witness: str) -> None:
    if not cond:
        raise CheckFailure(witness)


@dataclass
class CheckSpec:
    id: str
    anchor: str
    fn: Callable[[RunConfig, random.Random], Optional[str]]


def run_suite(specs: Sequence[CheckSpec], config: RunConfig) -> List[CheckResult]:
    """Run every declared check; report records keep the declared order."""

    def run_one(spec: CheckSpec) -> CheckResult:
        rng = random.Random((config.seed, spec.id).__repr__())
        t0 = time.perf_counter()
        try:
            detail = spec.fn(config, rng)
            status, witness = "pass", None
        except CheckFailure as exc:
            status, witness, detail = "fail", str(exc), None
        except Exception as exc:  # a crash is a failure, never a silent skip
            status, witness, detail = "fail", f"error: {exc!r}", None
        ms = (time.perf_counter() - t0) * 1000.0
        return CheckResult(spec.id, spec.anchor, status, witness, ms, detail)

    threads = max(1, int(os.environ.get("BTAU_THREADS", "1") or "1"))
    if threads == 1:
        return [run_one(s) for s in specs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run_one, specs))


# -- small generators ----------------------------------------------------------


def random_fock_vector(rng, max_index=4, max_degree=6, nterms=3) -> fock.FockVector:
    out = fock.FockVector()
    for _ in range(nterms):
        phis, stars = {}, {}
        budget = rng.randint(0, max_degree)
        while budget > 0 and rng.random() < 0.75:
            i = rng.randint(1, min(max_index, budget))
            target = phis if rng.random() < 0.5 else stars
            target[i] = target.get(i, 0) + 1
            budget -= i
        if rng.random() < 0.5:
            stars[0] = stars.get(0, 0) + rng.randint(1, 2)
        mono = fock.FockMonomial(tuple(sorted(phis.items())), tuple(sorted(stars.items())))
        out = out + fock.FockVector.from_monomial(mono, Q(rng.randint(-4, 4), rng.randint(1, 3)))
    return out


def random_boson_state(rng, caps, max_deg, nterms=2, p_range=1, y_free=False) -> GradedPoly:
    out = GradedPoly.zero(caps)
    for _ in range(nterms):
        t = GradedPoly.const(Q(rng.randint(-3, 3), rng.randint(1, 2)), caps)
        budget = rng.randint(0, max_deg)
        while budget > 0 and rng.random() < 0.7:
            n = rng.randint(1, budget)
            use_x = y_free or rng.random() < 0.5
            t = t * (GradedPoly.x(n, caps) if use_x else GradedPoly.y(n, caps))
            budget -= n
        if p_range:
            t = t * GradedPoly.p_power(rng.randint(-p_range, p_range), caps)
        out = out + t
    return out


# -- schur checks ----------------------------------------------------------------


def check_schur_generating(config, rng):
    caps = config.caps()
    kmax = caps.degree
    for sig in (MINUS_X, PLUS_X, MINUS_XY, PLUS_XY):
        series = LaurentPolyZ.from_poly(GradedPoly.one(caps))
        for n in range(1, kmax + 1):
            t = GradedPoly.x(n, caps)
            if sig.uses_y:
                t = t + GradedPoly.y(n, caps)
            t = t.scale(sig.sign)
            factor = {0: GradedPoly.one(caps)}
            power = GradedPoly.one(caps)
            for k in range(1, kmax // n + 1):
                power = power * t
                factor[n * k] = power.scale(Q(1, math.factorial(k)))
            series = series * LaurentPolyZ(caps, factor)
            series = LaurentPolyZ(caps, {m: f for m, f in series.parts.items() if m <= kmax})
        for k in range(kmax + 1):
            expect(
                elementary_schur(k, sig, caps) == series.coeff(k),
                f"S_{k} mismatch at signature {sig}",
            )
    return None


def check_schur_jacobi_trudi(config, rng):
    from .kernel import key_xy_degree

    caps = config.caps()
    for k in range(5):
        lam = Partition((k,)) if k else Partition(())
        expect(
            schur_lambda(lam, MINUS_XY, caps) == elementary_schur(k, MINUS_XY, caps),
            f"single-row determinant failed at k={k}",
        )
    for parts in ((1, 1), (2, 1), (2, 2, 1)):
        lam = Partition(parts)
        if lam.weight > caps.degree:
            continue  # the whole polynomial lies beyond the cap
        f = schur_lambda(lam, POWER_SUM, caps)
        expect(not f.is_zero(), f"vanishing Schur polynomial at {parts}")
        expect(
            all(key_xy_degree(key) == lam.weight for key in f.terms),
            f"inhomogeneous Schur polynomial at {parts}",
        )
    return None


def check_schur_binomial(config, rng):
    order = config.q_order
    geom = (QSeries.one(order) - QSeries.monomial(1, 1, order)).inv()
    for m in range(6):
        lhs = QSeries([Q(math.comb(k + m, m)) for k in range(order + 1)])
        rhs = QSeries.one(order)
        for _ in range(m + 1):
            rhs = rhs * geom
        expect(lhs == rhs, f"negative-binomial identity failed at m={m}")
    return None


def check_schur_cancellation(config, rng):
    caps = config.caps()
    for n in range(1, caps.degree + 1):
        acc = GradedPoly.zero(caps)
        for i in range(1, n + 1):
            acc = acc + (GradedPoly.x(i, caps) * elementary_schur(n - i, MINUS_X, caps)).scale(i)
        expect(
            acc == elementary_schur(n, MINUS_X, caps).scale(-n),
            f"alternating cancellation failed at n={n}",
        )
    return None


def check_schur_shift(config, rng):
    from .kernel import shift_substitute, z_coeff

    caps = config.caps()
    for n in range(caps.degree + 1):
        shifted = shift_substitute(
            elementary_schur(n, MINUS_X, caps), lambda m: Q(-1, m), lambda m: Q(1, m)
        )
        for i in range(n + 1):
            expect(
                z_coeff(shifted, -(n - i)) == elementary_schur(i, MINUS_X, caps),
                f"shift spread failed at n={n}, i={i}",
            )
    return None


def check_schur_sstar(config, rng):
    caps = config.caps()
    expect(sstar(0, caps) == GradedPoly.one(caps), "S*_0 != 1")
    expect(sstar(-1, caps).is_zero(), "S*_{-1} != 0")
    lhs = fms.phistar_mode(-1, GradedPoly.one(caps))
    rhs = (GradedPoly.p_power(1, caps) * sstar(1, caps)).scale(-1)
    expect(lhs == rhs, "field value of phistar_{-1}.1 disagrees with -p S*_1")
    return None


SCHUR_CHECKS = [
    CheckSpec("schur-generating-functions", "sum_k S_k z^k = exp(sum_n t_n z^n), four signatures", check_schur_generating),
    CheckSpec("schur-jacobi-trudi", "det(S_{lam_i-i+j}) single rows and homogeneity", check_schur_jacobi_trudi),
    CheckSpec("schur-negative-binomial", "sum_{k>=m} C(k,m) t^{k-m} = (1-t)^{-m-1}", check_schur_binomial),
    CheckSpec("schur-alternating-cancellation", "sum_i i x_i S_{n-i}(-x) = -n S_n(-x)", check_schur_cancellation),
    CheckSpec("schur-shift-spread", "kernel shift spreads S_n(-x) into sum_i S_i(-x) z^{i-n}", check_schur_shift),
    CheckSpec("schur-sstar-base", "S*_0 = 1 and phistar_{-1}.1 = -p S*_1", check_schur_sstar),
]


# -- fock checks -------------------------------------------------------------------


def check_fock_commutators(config, rng):
    vectors = [random_fock_vector(rng) for _ in range(50)]
    for i in range(-4, 5):
        for j in range(-4, 5):
            delta = Q(1 if i == -j else 0)
            for v in vectors:
                lhs = fock.apply_mode(("phi", i), fock.apply_mode(("star", j), v)) - fock.apply_mode(
                    ("star", j), fock.apply_mode(("phi", i), v)
                )
                expect(lhs == v.scale(delta), f"[phi_{i}, phistar_{j}] != delta")
    for kind in ("phi", "star"):
        for i, j in ((-2, 1), (-3, -1), (2, 3)):
            for v in vectors[:10]:
                lhs = fock.apply_mode((kind, i), fock.apply_mode((kind, j), v))
                rhs = fock.apply_mode((kind, j), fock.apply_mode((kind, i), v))
                expect(lhs == rhs, f"[{kind}_{i}, {kind}_{j}] != 0")
    return None


def check_fock_heisenberg(config, rng):
    vectors = [random_fock_vector(rng, max_degree=5, nterms=2) for _ in range(3)]
    for i in range(-4, 5):
        for j in range(-4, 5):
            for v in vectors:
                lhs = fock.apply_current("J0", i, fock.apply_current("J0", j, v)) - fock.apply_current(
                    "J0", j, fock.apply_current("J0", i, v)
                )
                expect(
                    lhs == (v.scale(-i) if i == -j else fock.FockVector()),
                    f"[J0_{i}, J0_{j}] != -i delta",
                )
    return None


def check_fock_virasoro(config, rng):
    vectors = [random_fock_vector(rng, max_degree=5, nterms=2) for _ in range(3)]
    for m in range(-3, 4):
        for n in range(-3, 4):
            for v in vectors:
                lhs = fock.apply_current("J1", m, fock.apply_current("J1", n, v)) - fock.apply_current(
                    "J1", n, fock.apply_current("J1", m, v)
                )
                rhs = fock.apply_current("J1", m + n, v).scale(m - n)
                if m == -n:
                    rhs = rhs + v.scale(Q(m**3 - m, 6))
                expect(lhs == rhs, f"[J1_{m}, J1_{n}] bracket failed")
    return None


def check_fock_gradings(config, rng):
    for _ in range(20):
        v = random_fock_vector(rng)
        for l, d, comp in fock.grade(v):
            expect(fock.apply_current("J1", 0, comp) == comp.scale(d), "degree eigenvalue")
            expect(fock.apply_current("J0", 0, comp) == comp.scale(-l), "charge eigenvalue")
    return None


def check_fock_commutant(config, rng):
    for _ in range(8):
        v = random_fock_vector(rng, max_degree=4, nterms=2)
        w = random_fock_vector(rng, max_degree=4, nterms=2)
        t = fock.FockTensor.outer(v, w)
        for m in (0, -1, -2):
            for n in (1, 2):

                def op(tt):
                    return tt.apply_left(("phi", n)).apply_left(("star", m)) + tt.apply_right(
                        ("phi", n)
                    ).apply_right(("star", m))

                expect(
                    fock.omega_u_tensor(op(t)) == op(fock.omega_u_tensor(t)),
                    f"hirota operator does not commute with phistar_{m} phi_{n}",
                )
    return None


def check_fock_quadratic_taus(config, rng):
    cap = config.degree
    trials = config.trials or 20
    for _ in range(trials):
        coeffs = {}
        for _ in range(rng.randint(1, 3)):
            i, j = rng.randint(0, 2), rng.randint(1, 3)
            coeffs[(i, j)] = Q(rng.randint(-3, 3), rng.randint(1, 2))
        tau = fock.tau_quadratic_exp(coeffs, cap)
        bad = fock.omega_u(tau, tau).filter_total_degree(cap - 1)
        expect(bad.is_zero(), f"quadratic exponential failed at coefficients {sorted(coeffs)}")
    return None


def _degree4_monomials():
    out = []

    def parts(budget, largest):
        if budget == 0:
            yield {}
            return
        for p in range(min(budget, largest), 0, -1):
            for mult in range(budget // p, 0, -1):
                for rest in parts(budget - p * mult, p - 1):
                    d = dict(rest)
                    d[p] = mult
                    yield d

    for dphi in range(5):
        for phis in parts(dphi, 4):
            for dstar in range(5 - dphi):
                for stars in parts(dstar, 4):
                    for s0 in range(3):
                        st = dict(stars)
                        if s0:
                            st[0] = s0
                        out.append(
                            fock.FockMonomial(tuple(sorted(phis.items())), tuple(sorted(st.items())))
                        )
    return out


def check_fock_vacuum_uniqueness(config, rng):
    for mono in _degree4_monomials():
        if mono == fock.VACUUM:
            continue
        v = fock.FockVector.from_monomial(mono)
        t = fock.omega_u(v, v)
        expect(not t.is_zero(), f"monomial passes the bilinear equation: {mono.to_text()}")
        wit = fock.vacuum_obstruction(v)
        if wit is not None:
            left, right, coeff = wit
            expect(
                t.terms.get((left, right), Q(0)) == coeff,
                f"obstruction witness missing for {mono.to_text()}",
            )
    trials = config.trials or 100
    count = 0
    while count < trials:
        v = random_fock_vector(rng, max_index=3, max_degree=4, nterms=2)
        nonvac = [m for m in v.terms if m != fock.VACUUM]
        if not nonvac:
            continue
        count += 1
        t = fock.omega_u(v, v)
        expect(not t.is_zero(), f"random combination passes: {v.to_text()}")
        wit = fock.vacuum_obstruction(v)
        if wit is not None:
            left, right, coeff = wit
            expect(
                t.terms.get((left, right), Q(0)) == coeff,
                f"obstruction witness missing for {v.to_text()}",
            )
    return None


FOCK_CHECKS = [
    CheckSpec("fock-mode-commutators", "[phi_i, phistar_j] = delta_{i,-j}, |i|,|j| <= 4", check_fock_commutators),
    CheckSpec("fock-heisenberg-bracket", "[J0_i, J0_j] = -i delta_{i,-j} (level -1)", check_fock_heisenberg),
    CheckSpec("fock-virasoro-bracket", "[J1_m, J1_n] = (m-n) J1_{m+n} + (m^3-m)/6 delta_{m,-n}", check_fock_virasoro),
    CheckSpec("fock-gradings", "grade components are joint J0_0/J1_0 eigenvectors", check_fock_gradings),
    CheckSpec("fock-hirota-commutant", "omega commutes with phistar_m phi_n (x) 1 + 1 (x) phistar_m phi_n", check_fock_commutant),
    CheckSpec("fock-quadratic-taus", "exp(sum c_ij phistar_{-i} phi_{-j})|0> solves the bilinear equation", check_fock_quadratic_taus),
    CheckSpec("fock-vacuum-uniqueness", "every nonvacuum candidate of degree <= 4 fails, with witness", check_fock_vacuum_uniqueness),
]


# -- fms checks ----------------------------------------------------------------------


def check_fms_vacuum(config, rng):
    caps = config.caps()
    one = GradedPoly.one(caps)
    for i in range(caps.degree + 1):
        expect(fms.phi_mode(i, one).is_zero(), f"phi_{i}.1 != 0")
        expect(fms.phistar_mode(i + 1, one).is_zero(), f"phistar_{i+1}.1 != 0")
    return None


def check_fms_commutation(config, rng):
    caps = Caps(config.degree + 4, config.p_window, config.param_order)
    states = [random_boson_state(rng, caps, config.degree - 2) for _ in range(3)]
    for i in range(-3, 4):
        for j in range(-3, 4):
            delta = Q(1 if i == -j else 0)
            for s in states:
                lhs = fms.phi_mode(i, fms.phistar_mode(j, s)) - fms.phistar_mode(
                    j, fms.phi_mode(i, s)
                )
                expect(lhs == s.scale(delta), f"transported [phi_{i}, phistar_{j}]")
    return None


def check_fms_embedding(config, rng):
    caps = config.caps()
    for _ in range(5):
        v = random_fock_vector(rng, max_index=3, max_degree=caps.degree - 3, nterms=2)
        bv = fms.embed(v, caps)
        for idx in range(-3, 4):
            for kind in ("phi", "star"):
                lhs = fms.embed(fock.apply_mode((kind, idx), v), caps)
                rhs = fms.apply_bmode((kind, idx), bv)
                expect(lhs == rhs, f"embedding does not intertwine mode ({kind}, {idx})")
    return None


def check_fms_current_transport(config, rng):
    """The level -1 current through the embedding is the Heisenberg action."""
    from .kernel import key_xy_degree

    caps = Caps(config.degree, config.p_window, min(2, config.param_order))
    for _ in range(4):
        v = random_fock_vector(rng, max_index=3, max_degree=min(4, caps.degree - 3), nterms=2)
        bv = fms.embed(v, caps)
        for k in range(-3, 4):
            lhs = fms.embed(fock.apply_current("J0", k, v), caps)
            if k == 0:
                rhs = bv.p_euler()
            elif k > 0:
                rhs = bv.derive("y", k)
            else:
                rhs = (GradedPoly.y(-k, caps) * bv).scale(k)
            expect(lhs == rhs, f"current mode {k} does not transport to the Heisenberg action")
        lhs1 = fms.embed(fock.apply_current("J1", 0, v), caps)
        rhs1 = GradedPoly(
            caps,
            {
                key: c * (key_xy_degree(key) - key[2])
                for key, c in bv.terms.items()
                if key_xy_degree(key) != key[2]
            },
        )
        expect(lhs1 == rhs1, "degree operator does not transport to the graded degree")
    return None


def check_fms_zero_powers(config, rng):
    caps = config.caps()
    for n in range(min(6, caps.p_window) + 1):
        expect(
            fms.phistar_zero_power(n, caps) == fms.mode_power_oracle(("star", 0), n, caps),
            f"phistar_0^{n}.1 closed form disagrees with the mode oracle",
        )
    return None


def check_fms_minus1_powers(config, rng):
    caps = config.caps()
    for n in range(min(5, caps.p_window) + 1):
        expect(
            fms.phistar_minus1_power(n, caps) == fms.mode_power_oracle(("star", -1), n, caps),
            f"phistar_-1^{n}.1 closed form disagrees with the mode oracle",
        )
    return None


def check_fms_appendix_binomial(config, rng):
    caps = config.caps()
    for j in (1, 2, 3):
        for n in (1, 2, 3):
            state = fms.mode_power_oracle(("star", -1), n, caps)
            for _ in range(n):
                state = fms.phi_mode(-j, state)
            dj = elementary_schur(j - 1, MINUS_XY, caps)
            den = elementary_schur(j + 1, MINUS_XY, caps) + elementary_schur(
                1, PLUS_XY, caps
            ) * elementary_schur(j, MINUS_XY, caps)
            rhs = GradedPoly.zero(caps)
            for i in range(n + 1):
                rhs = rhs + ((dj**i) * (den ** (n - i)) * sstar(i, caps)).scale(
                    Q((-1) ** i * math.comb(n, i) * math.factorial(n))
                )
            expect(state == rhs, f"power expansion failed at j={j}, n={n}")
    return None


def check_fms_tau_th1(config, rng):
    caps = Caps(config.degree, config.p_window, max(4, config.param_order))
    for s in (1, 2, 3):
        names = [f"a{j}" for j in range(1, s + 1)]
        closed = fms.tau_th1(names, caps)
        oracle = fms.direct_exponential([(names[j - 1], j, 0) for j in range(1, s + 1)], caps)
        expect(closed == oracle, f"closed form disagrees with the operator expansion at s={s}")
    return None


def check_fms_tau_th2(config, rng):
    caps = config.caps()
    for j in (1, 2, 3):
        closed = fms.tau_th2("a", j, caps)
        oracle = fms.direct_exponential([("a", j, 1)], caps)
        expect(closed == oracle, f"closed form disagrees with the operator expansion at j={j}")
    return None


def check_fms_tau_general(config, rng):
    caps = config.caps()
    for s, t in ((1, 2), (2, 2)):
        closed = fms.tau_general("a", s, t, caps)
        oracle = fms.direct_exponential([("a", s, t)], caps)
        expect(closed == oracle, f"closed form disagrees at (s, t) = ({s}, {t})")
    expect(
        fms.tau_general("a", 1, 1, caps) == fms.tau_th2("a", 1, caps),
        "t = 1 does not collapse to the single-j family",
    )
    return None


def check_fms_tau_two_factor(config, rng):
    caps = config.caps()
    closed = fms.tau_two_factor("c", "d", 1, 1, 1, 0, caps)
    inner = fms.direct_exponential([("c", 1, 0)], caps)
    oracle = fms.direct_exponential([("d", 1, 1)], caps, state=inner)

    def through_first_order(f):
        out = GradedPoly.zero(caps)
        for k, c in f.terms.items():
            pars = dict(k[3])
            if pars.get("c", 0) <= 1 and pars.get("d", 0) <= 1:
                out.terms[k] = c
        return out

    expect(
        through_first_order(closed) == through_first_order(oracle),
        "two-factor closed form disagrees through order c^1 d^1",
    )
    return None


FMS_CHECKS = [
    CheckSpec("fms-vacuum-laws", "phi_i.1 = 0 and phistar_{i+1}.1 = 0 for i >= 0", check_fms_vacuum),
    CheckSpec("fms-commutation-transport", "[phi_i, phistar_j] = delta on the carrier, |i|,|j| <= 3", check_fms_commutation),
    CheckSpec("fms-embedding-module-map", "embedding intertwines every mode, |index| <= 3", check_fms_embedding),
    CheckSpec("fms-current-transport", "level -1 current = Heisenberg action p d/dp, d/dy_k, k y_{-k}", check_fms_current_transport),
    CheckSpec("fms-phistar-zero-powers", "phistar_0^n.1 = (-1)^n n! p^n S_n(-x), n <= 6", check_fms_zero_powers),
    CheckSpec("fms-phistar-minus1-powers", "phistar_-1^n.1 = (-1)^n n! p^n S*_n, n <= 5", check_fms_minus1_powers),
    CheckSpec("fms-appendix-binomial", "phi_{-j}^n phistar_{-1}^n.1 expands through the S* family, n <= 3", check_fms_appendix_binomial),
    CheckSpec("fms-tau-single-zero-column", "exp(sum a_j phi_{-j} phistar_0).1 closed form, s <= 3, order 4", check_fms_tau_th1),
    CheckSpec("fms-tau-single-minus1-column", "exp(a phi_{-j} phistar_{-1}).1 closed form, j <= 3", check_fms_tau_th2),
    CheckSpec("fms-tau-general-column", "exp(a phi_{-s} phistar_{-t}).1 closed form, (s,t) in {(1,2),(2,2)}", check_fms_tau_general),
    CheckSpec("fms-tau-two-factor", "two-exponential closed form through order c^1 d^1", check_fms_tau_two_factor),
]


# -- hirota checks ---------------------------------------------------------------------


def check_hirota_residue_modes(config, rng):
    caps = config.caps()
    trials = config.trials or 200
    for _ in range(trials):
        s1 = random_boson_state(rng, caps, 3, nterms=2)
        s2 = random_boson_state(rng, caps, 3, nterms=2)
        expect(
            hirota.omega_residue(s1, s2) == hirota.omega_modesum(s1, s2),
            "combined residue disagrees with the mode pairing",
        )
    return None


def check_hirota_fock_agreement(config, rng):
    caps = config.caps()
    for _ in range(8):
        v = random_fock_vector(rng, max_index=2, max_degree=3, nterms=2)
        lhs = hirota.embed_tensor(fock.omega_u(v, v), caps)
        rhs = hirota.omega_residue(fms.embed(v, caps), fms.embed(v, caps))
        expect(
            (lhs - rhs).filter_total_degree(caps.degree - 1).is_zero(),
            "residue disagrees with the embedded Fock-side operator",
        )
    return None


def check_hirota_stability(config, rng):
    caps = config.caps()
    taus = [
        ("zero-column family", fms.tau_th1(["a1", "a2"], caps)),
        ("minus1-column family j=1", fms.tau_th2("a", 1, caps)),
        ("minus1-column family j=2", fms.tau_th2("a", 2, caps)),
        ("general column (1,2)", fms.tau_general("a", 1, 2, caps)),
        ("general column (2,2)", fms.tau_general("a", 2, 2, caps)),
        ("two-factor (1,1,1,0)", fms.tau_two_factor("c", "d", 1, 1, 1, 0, caps)),
    ]
    for label, tau in taus:
        bad = (
            hirota.omega_residue(tau, tau)
            .filter_total_degree(caps.degree - 1)
            .filter_param_order(caps.param_order)
        )
        expect(bad.is_zero(), f"residue does not vanish for the {label}")
    return None


def _random_point(rng, nvars=3):
    def draw():
        return {
            n: Q(rng.randint(-3, 3), rng.randint(1, 4))
            for n in range(1, nvars + 1)
            if rng.random() < 0.8
        }

    return hirota.HirotaPoint(x=draw(), y=draw(), xbar=draw(), ybar=draw())


def check_hirota_schur_points(config, rng):
    """Point vanishing through the reliable parameter order.

    A parameter power of the (s, t) family carries homogeneous degree s + t,
    so the order-m layer of the closed form is complete only while
    m (s + t) <= D; the value is asserted zero through that order.
    """
    caps = config.caps()
    trials = config.trials or 20
    families = [
        ("zero-column s=1", fms.tau_th1(["a"], caps), 1),
        ("minus1-column j=1", fms.tau_th2("a", 1, caps), 2),
        ("minus1-column j=2", fms.tau_th2("a", 2, caps), 3),
        ("general (1,2)", fms.tau_general("a", 1, 2, caps), 3),
    ]
    for label, tau, per_order in families:
        reliable = caps.degree // per_order
        for _ in range(trials):
            val = hirota.hirota_schur_form(tau, _random_point(rng))
            expect(
                val.filter_param_order(reliable).is_zero(),
                f"nonzero value at a sample point for the {label} family",
            )
    return None


def check_hirota_schur_agreement(config, rng):
    caps = config.caps()
    for _ in range(6):
        s = random_boson_state(rng, caps, 2, nterms=2, p_range=0)
        s = GradedPoly.one(caps) + s
        pt = _random_point(rng, nvars=2)
        lhs = hirota.hirota_schur_form(s, pt)
        rhs = hirota.omega_residue(s, s).eval_at_point(pt)
        lvals = {k[3]: c for k, c in lhs.terms.items()}
        rvals = {k[3]: c for k, c in rhs.terms.items()}
        expect(
            lvals == rvals,
            "generating form disagrees with the residue (normalization constant is 1)",
        )
    return None


def check_hirota_beta(config, rng):
    caps = config.caps()
    for _ in range(8):
        s = random_boson_state(rng, caps, 3, nterms=2, y_free=True)
        full = hirota.omega_residue(s, s).project_y_free()
        beta = hirota.omega_residue(s, s, beta_reduction=True)
        expect(full == beta, "y-free slice of the full residual differs from the reduction")
    return None


def check_hirota_pde_first(config, rng):
    caps = config.caps()
    for label, tau in (("zero-column", fms.tau_th1(["a"], caps)), ("minus1-column", fms.tau_th2("a", 1, caps))):
        for par_key, series in hirota.restrict_log_tau(tau).items():
            if not par_key:
                continue
            expect(
                hirota.pde_residual_first(series).is_zero(),
                f"first restricted equation fails for the {label} family at {par_key}",
            )
    return None


def check_hirota_pde_harmonic(config, rng):
    caps = config.caps()
    for label, tau in (("zero-column", fms.tau_th1(["a"], caps)), ("minus1-column", fms.tau_th2("a", 1, caps))):
        for par_key, series in hirota.restrict_log_tau(tau).items():
            if not par_key:
                continue
            expect(
                hirota.pde_residual_harmonic(series).is_zero(),
                f"second restricted equation fails for the {label} family at {par_key}",
            )
    return None


def check_hirota_light_cone(config, rng):
    for _ in range(30):
        f = hirota.BivariateSeries(
            6,
            {
                (rng.randint(0, 3), rng.randint(0, 3)): Q(rng.randint(-5, 5), rng.randint(1, 3))
                for _ in range(4)
            },
        ).clean()
        lhs = hirota.to_light_cone(hirota.pde_residual_harmonic(f))
        rhs = hirota.dtt(hirota.to_light_cone(f)).scale(4)
        expect(lhs == rhs, "light-cone transform does not reproduce 4 d^2/dt^2")
    return None


HIROTA_CHECKS = [
    CheckSpec("hirota-residue-mode-equivalence", "combined residue = sum_i phistar_i (x) phi_{-i}", check_hirota_residue_modes),
    CheckSpec("hirota-fock-side-agreement", "residue of embeddings = embedded Fock-side operator", check_hirota_fock_agreement),
    CheckSpec("hirota-solution-stability", "closed-form taus vanish through the reliable degree", check_hirota_stability),
    CheckSpec("hirota-schur-form-points", "generating form vanishes at rational sample points", check_hirota_schur_points),
    CheckSpec("hirota-schur-form-agreement", "generating form = residue extraction at matching points", check_hirota_schur_agreement),
    CheckSpec("hirota-beta-reduction", "reduced residual = y-free slice on y-free states", check_hirota_beta),
    CheckSpec("hirota-pde-first", "u(-g_uv + g_vv) + g_u = 0 for restricted log-taus", check_hirota_pde_first),
    CheckSpec("hirota-pde-harmonic", "f_uu - 2 f_uv + f_vv = 0 for restricted log-taus", check_hirota_pde_harmonic),
    CheckSpec("hirota-light-cone", "f_uu - 2 f_uv + f_vv = 4 d^2/dt^2 under t = u-v, s = u+v", check_hirota_light_cone),
]


# -- qdim checks --------------------------------------------------------------------------


def check_qdim_class_gf(config, rng):
    for k in range(0, 4):
        for s in range(0, 6):
            for strict in (False, True):
                spec = qdim.PartitionClassSpec(k, s, strict)
                expect(
                    qdim.class_gf(spec, 15) == qdim.class_gf_enum(spec, 15),
                    f"class generating function disagrees at (k={k}, s={s}, strict={strict})",
                )
    return None


def check_qdim_m_closed(config, rng):
    for l in range(-4, 5):
        expect(
            qdim.qdim_sum("M", l, config.q_order) == qdim.qdim_closed("M", l, config.q_order),
            f"sum and closed form disagree for the charge-{l} boson sector",
        )
    return None


def check_qdim_fbar_closed(config, rng):
    for l in range(-4, 5):
        expect(
            qdim.qdim_sum("Fbar", l, config.q_order) == qdim.qdim_closed("Fbar", l, config.q_order),
            f"sum and closed form disagree for the charge-{l} reduced fermion sector",
        )
    return None


def check_qdim_f_closed(config, rng):
    for l in range(-4, 5):
        expect(
            qdim.qdim_sum("F", l, config.q_order) == qdim.qdim_F_closed(l, config.q_order),
            f"sum and closed form disagree for the charge-{l} fermion sector",
        )
    return None


def check_qdim_census(config, rng):
    for l in range(-3, 4):
        expect(
            qdim.fock_census(l, 10) == qdim.qdim_sum("M", l, 10),
            f"basis census disagrees with the m-sum at charge {l}",
        )
    expect(qdim.fock_census(0, 2).coeffs[2] == 3, "charge-0 degree-2 count is not 3")
    return None


def _identity_check(which):
    def run(config, rng):
        ells = [config.ell] if config.ell is not None else list(range(0, 6))
        details = []
        for l in ells:
            if which != "euler-family" and l < 0:
                raise CheckFailure(f"identity requires l >= 0, got {l}")
            rep = qdim.verify_identity(which, l, config.q_order)
            if not rep.equal:
                raise CheckFailure(
                    f"first disagreement at q^{rep.first_difference} for l={l}: "
                    f"{rep.lhs.coeffs[rep.first_difference]} vs {rep.rhs.coeffs[rep.first_difference]}"
                )
            details.append(f"l={l}: equal through q^{rep.equal_through}")
        if config.ell is not None:
            rep = qdim.verify_identity(which, config.ell, config.q_order)
            return "; ".join(details) + f"; lhs={rep.lhs.to_text()}"
        return "; ".join(details)

    return run


def check_qdim_euler_family(config, rng):
    ells = [config.ell] if config.ell is not None else list(range(-5, 6))
    for l in ells:
        rep = qdim.verify_identity("euler-family", l, config.q_order)
        if not rep.equal:
            raise CheckFailure(f"first disagreement at q^{rep.first_difference} for l={l}")
    if config.ell is not None:
        rep = qdim.verify_identity("euler-family", config.ell, config.q_order)
        return f"l={config.ell}: equal through q^{rep.equal_through}; lhs={rep.lhs.to_text()}"
    return f"l in [-5, 5] equal through q^{config.q_order}"


def check_qdim_linked(config, rng):
    for l in range(0, 6):
        rep = qdim.linked_sum_identity(l, config.q_order)
        expect(rep.equal, f"linked-sum identity fails at l={l}, q^{rep.first_difference}")
    return None


QDIM_CHECKS = [
    CheckSpec("qdim-class-gf", "closed partition-class generating functions match enumeration", check_qdim_class_gf),
    CheckSpec("qdim-boson-sum-vs-closed", "m-sum = alternating closed form, boson sectors |l| <= 4", check_qdim_m_closed),
    CheckSpec("qdim-reduced-fermion-sum-vs-closed", "m-sum = alternating closed form, reduced fermion sectors", check_qdim_fbar_closed),
    CheckSpec("qdim-fermion-sum-vs-closed", "m-sum = q^{l(l+1)/2}/(q;q)_inf, fermion sectors", check_qdim_f_closed),
    CheckSpec("qdim-census", "basis-monomial census = m-sum, |l| <= 3 through q^10", check_qdim_census),
    CheckSpec("qdim-identity-1", "sum q^m/((q;q)_m (q;q)_{m+l}) = (q;q)_inf^-2 sum (-1)^s q^{s(s+1)/2+sl}", _identity_check("identity-1")),
    CheckSpec("qdim-identity-2", "sum q^{m^2+(l+1)m}/(...) = (q;q)_inf^-1 sum (-1)^s q^{s(s+1)/2+sl}", _identity_check("identity-2")),
    CheckSpec("qdim-euler-family", "sum q^{m^2+m|l|}/(...) = 1/(q;q)_inf; l = 0 is Euler's identity", check_qdim_euler_family),
    CheckSpec("qdim-linked-sums", "the m-sum equals (q;q)_inf^-1 times the quadratic-exponent sum", check_qdim_linked),
]


# -- borchardt checks ------------------------------------------------------------------------


def check_det_oracle(config, rng):
    trials = config.trials or 1000
    for _ in range(trials):
        n = rng.randint(1, 6)
        m = detperm.RationalMatrix.from_rows(
            [[Q(rng.randint(-9, 9)) for _ in range(n)] for _ in range(n)]
        )
        expect(
            detperm.det_exact(m) == detperm.det_cofactor(m),
            f"fraction-free determinant disagrees with cofactor expansion at n={n}",
        )
    return None


def check_perm_oracle(config, rng):
    trials = config.trials or 200
    for _ in range(trials):
        n = rng.randint(1, 8)
        m = detperm.RationalMatrix.from_rows(
            [[Q(rng.randint(-9, 9)) for _ in range(n)] for _ in range(n)]
        )
        expect(
            detperm.perm_exact(m) == detperm.perm_sum(m),
            f"inclusion-exclusion permanent disagrees with the permutation sum at n={n}",
        )
    return None


def check_cauchy(config, rng):
    trials = config.trials or 100
    for _ in range(trials):
        n = config.n or rng.randint(1, 5)
        pts = detperm.random_config(rng, n)
        expect(
            detperm.cauchy_det(pts) == detperm.det_exact(detperm.cauchy_matrix(pts)),
            f"closed determinant form disagrees at n={n}",
        )
    return None


def check_borchardt(config, rng):
    trials = config.trials or 100
    sizes = [config.n] if config.n else list(range(1, 6))
    count = 0
    for n in sizes:
        for _ in range(trials):
            rep = detperm.borchardt_verify(detperm.random_config(rng, n))
            expect(
                rep.equal,
                f"identity fails at n={n}, z={[str(v) for v in rep.z]}, w={[str(v) for v in rep.w]}",
            )
            count += 1
    return f"{count} exact equalities at n in {sizes}"


def check_borchardt_invariance(config, rng):
    for _ in range(20):
        n = rng.randint(2, 5)
        pts = detperm.random_config(rng, n)
        rep = detperm.borchardt_verify(pts)
        perm = list(range(n))
        rng.shuffle(perm)
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        sign = -1 if inv % 2 else 1
        zp = detperm.PointConfig([pts.z[p] for p in perm], pts.w)
        rep2 = detperm.borchardt_verify(zp)
        expect(rep2.det_side == sign * rep.det_side, "determinant side does not alternate")
        expect(rep2.perm_side == rep.perm_side, "permanent side is not invariant")
        expect(rep2.lhs == sign * rep.lhs, "squared-matrix determinant does not alternate")
        expect(rep2.equal, "identity broken by a row permutation")
    return None


BORCHARDT_CHECKS = [
    CheckSpec("det-fraction-free-oracle", "elimination determinant = cofactor expansion, n <= 6", check_det_oracle),
    CheckSpec("perm-inclusion-exclusion-oracle", "subset-sum permanent = permutation sum, n <= 8", check_perm_oracle),
    CheckSpec("cauchy-determinant", "det(1/(z_i - w_j)) equals the closed product form", check_cauchy),
    CheckSpec("borchardt-identity", "det(1/(z-w)^2) = det(1/(z-w)) perm(1/(z-w))", check_borchardt),
    CheckSpec("borchardt-permutation-invariance", "det sides alternate, permanent invariant, identity stable", check_borchardt_invariance),
]


SUITES: Dict[str, List[CheckSpec]] = {
    "schur": SCHUR_CHECKS,
    "fock": FOCK_CHECKS,
    "fms": FMS_CHECKS,
    "hirota": HIROTA_CHECKS,
    "qdim": QDIM_CHECKS,
    "borchardt": BORCHARDT_CHECKS,
}
SUITES["verify-all"] = [spec for name in ("schur", "fock", "fms", "hirota", "qdim", "borchardt") for spec in SUITES[name]]


def checks_for(subcommand: str, config: RunConfig) -> List[CheckSpec]:
    if subcommand not in SUITES:
        raise KeyError(subcommand)
    specs = SUITES[subcommand]
    if subcommand == "qdim" and config.identity:
        alias = {"euler": "euler-family", "euler-family": "euler-family",
                 "identity-1": "identity-1", "identity-2": "identity-2"}
        if config.identity not in alias:
            raise KeyError(config.identity)
        target = {"euler-family": "qdim-euler-family",
                  "identity-1": "qdim-identity-1",
                  "identity-2": "qdim-identity-2"}[alias[config.identity]]
        return [s for s in specs if s.id == target]
    if subcommand == "borchardt" and config.n:
        return [s for s in specs if s.id in ("borchardt-identity", "cauchy-determinant")]
    return specs
