"""Equivariant elliptic genera of toric CY 3-folds.

The genus of a diagram is the sum over trivalent vertices of

    prod_{j=1..3} theta_1(tau, z + w_j) / theta_1(tau, w_j),   w_j = a_j t1 + b_j t2.

Two backends: ``*_numeric`` evaluates at a complex point, ``*_qexp``
expands exactly in q with RatFunc coefficients in (Yh, U, V).  The
reference form (chi/2) theta_1(tau, 2z)/theta_1(tau, z) is available in
both.  Residue helpers at the end check the conifold pole cancellations.
"""

from __future__ import annotations

import cmath
import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import PoleProximity, QuadratureNonconvergence
from .report import Check, GenusReport
from .series import QSeries, RatFunc, SparseLaurent, ratfunc_sum
from .theta import (
    DEFAULT_TOL,
    TWO_PI_I,
    ComplexParams,
    a_numeric,
    b_numeric,
    theta1_numeric,
    theta_quotient_qexp,
    theta_ratio_qexp,
    vertex_parts_qexp,
)
from .toric import (
    ToricDiagram,
    WeightVector,
    balanced_pairing,
    builtin,
    euler_characteristic,
    negate_weights,
    require_valid,
)

POLE_THRESHOLD = 1e-6
GENUS_TOL = 1e-9
DEFAULT_TRUNC = 12
DEFAULT_SEED = 20130801
GENERIC_MARGIN = 0.05
# extra directions kept away from poles when drawing default samples
_GENERIC_WEIGHTS = ((1, 0), (0, 1), (1, 1), (1, -1), (2, -1), (1, -2))


@dataclass
class GenusValue:
    value: complex | QSeries
    diagram: str
    params: ComplexParams | None = None
    trunc: int | None = None


@dataclass
class IndependenceReport:
    samples: list[tuple[complex, complex]]
    values: list[complex]
    max_deviation: float
    skipped: list[tuple[complex, complex]] = field(default_factory=list)


# numeric backend


def vertex_term_numeric(
    weights: Sequence,
    p: ComplexParams,
    tol: float = DEFAULT_TOL,
    pole_threshold: float = POLE_THRESHOLD,
) -> complex:
    val = 1 + 0j
    for j, w in enumerate(weights):
        a, b = (w.a, w.b) if isinstance(w, WeightVector) else w
        x = a * p.t1 + b * p.t2
        den = theta1_numeric(p.tau, x, tol)
        if abs(den) < pole_threshold:
            raise PoleProximity(f"|theta_1(tau, {a}*t1 + {b}*t2)| = {abs(den):.2e} is below threshold", slot=j)
        val *= theta1_numeric(p.tau, p.z + x, tol) / den
    return val


def genus_numeric(
    d: ToricDiagram,
    p: ComplexParams,
    tol: float = DEFAULT_TOL,
    pole_threshold: float = POLE_THRESHOLD,
) -> GenusValue:
    require_valid(d)
    total = 0j
    for v in d.trivalent:
        try:
            total += vertex_term_numeric(v.weights, p, tol, pole_threshold)
        except PoleProximity as exc:
            raise PoleProximity(f"vertex {v.id}: {exc}", slot=exc.slot, vertex=v.id) from None
    return GenusValue(total, d.name, params=p)


def reference_genus_numeric(
    chi: int, tau: complex, z: complex, tol: float = DEFAULT_TOL, pole_threshold: float = POLE_THRESHOLD
) -> complex:
    """(chi/2) theta_1(tau, 2z) / theta_1(tau, z)."""
    if chi == 0:
        return 0j
    den = theta1_numeric(tau, z, tol)
    if abs(den) < pole_threshold:
        raise PoleProximity(f"|theta_1(tau, z)| = {abs(den):.2e} is below threshold")
    return chi / 2 * theta1_numeric(tau, 2 * z, tol) / den


# exact backend


def _vertex_term_qexp(weights, n: int) -> list[RatFunc]:
    pref, s = vertex_parts_qexp(weights, n)
    return [RatFunc(pref.num * c, pref.den) for c in s.coeffs]


def _sum_vertex_terms(weight_triples: Iterable, n: int) -> QSeries:
    terms = [_vertex_term_qexp(ws, n) for ws in weight_triples]
    if not terms:
        return QSeries([RatFunc(0)], 0, n)
    return QSeries([ratfunc_sum(t[k] for t in terms) for k in range(n)])


def genus_qexp(d: ToricDiagram, n: int = DEFAULT_TRUNC) -> GenusValue:
    require_valid(d)
    if n < 1:
        raise ValueError("trunc must be >= 1")
    return GenusValue(_sum_vertex_terms((v.weights for v in d.trivalent), n), d.name, trunc=n)


def theta_quotient_ratfunc(n: int) -> QSeries:
    return theta_quotient_qexp(n).map(RatFunc)


def reference_genus_qexp(chi: int, n: int = DEFAULT_TRUNC) -> QSeries:
    """(chi/2) theta_1(2z)/theta_1(z) as a series over RatFunc (denominator 2)."""
    return theta_quotient_qexp(n).map(lambda c: RatFunc(c * chi, 2))


def averaged_genus(
    d: ToricDiagram,
    backend: str = "numeric",
    params: ComplexParams | None = None,
    n: int = DEFAULT_TRUNC,
    tol: float = DEFAULT_TOL,
) -> GenusValue:
    """(Z(t1, t2) + Z(-t1, -t2)) / 2, computed on the weight-negated diagram."""
    require_valid(d)
    neg = negate_weights(d)
    if backend == "numeric":
        if params is None:
            raise ValueError("numeric backend needs params")
        val = (genus_numeric(d, params, tol).value + genus_numeric(neg, params, tol).value) / 2
        return GenusValue(val, d.name, params=params)
    if backend == "exact":
        triples = [v.weights for v in d.trivalent] + [v.weights for v in neg.trivalent]
        s = _sum_vertex_terms(triples, n).map(lambda c: RatFunc(c.num, c.den * 2))
        return GenusValue(s, d.name, trunc=n)
    raise ValueError(f"unknown backend {backend!r}")


def yh_parity_odd(s: QSeries) -> bool:
    """Every coefficient has odd Yh exponents (numerator) over an even-parity denominator."""
    for c in s.coeffs:
        if isinstance(c, RatFunc):
            if any(e % 2 == 0 for e in c.num.exponents(0)) or any(e % 2 for e in c.den.exponents(0)):
                return False
        elif any(e % 2 == 0 for e in SparseLaurent.coerce(c).exponents(0)):
            return False
    return True


def conifold_identity_lhs(n: int) -> QSeries:
    """The two-vertex conifold sum built from individual theta-ratio series."""

    def r(a, b):
        return theta_ratio_qexp((a, b), n)

    return r(1, 0) * r(0, 1) * r(-1, -1) + r(-1, 0) * r(0, -1) * r(1, 1)


def check_theta_identity(n: int = 8) -> GenusReport:
    rep = GenusReport("conifold theta identity", {"trunc": n})
    lhs = conifold_identity_lhs(n)
    rhs = theta_quotient_ratfunc(n)
    for k in range(n):
        rep.add(Check(f"q^{k} coefficient", passed=lhs[k] == rhs[k], note="exact"))
    return rep


# samples and scans


def default_t_samples(
    tau: complex,
    count: int = 6,
    seed: int = DEFAULT_SEED,
    weights: Iterable = (),
    margin: float = GENERIC_MARGIN,
) -> list[tuple[complex, complex]]:
    """Seeded (t1, t2) points with |Re| <= 1/2, |Im| <= Im(tau)/2, kept off pole loci."""
    rng = random.Random(seed)
    h = 0.5 * complex(tau).imag
    dirs = set(_GENERIC_WEIGHTS)
    for w in weights:
        a, b = (w.a, w.b) if isinstance(w, WeightVector) else w
        dirs.add((a, b))
    out = []
    while len(out) < count:
        t1 = complex(rng.uniform(-0.5, 0.5), rng.uniform(-h, h))
        t2 = complex(rng.uniform(-0.5, 0.5), rng.uniform(-h, h))
        if all(abs(theta1_numeric(tau, a * t1 + b * t2)) > margin for a, b in dirs):
            out.append((t1, t2))
    return out


def diagram_weights(d: ToricDiagram) -> list[WeightVector]:
    return [w for v in d.trivalent for w in v.weights]


def independence_scan(
    d: ToricDiagram,
    tau: complex,
    z: complex,
    samples: Sequence[tuple[complex, complex]] | None = None,
    tol: float = DEFAULT_TOL,
) -> IndependenceReport:
    require_valid(d)
    if samples is None:
        samples = default_t_samples(tau, 6, DEFAULT_SEED, diagram_weights(d))
    used, values, skipped = [], [], []
    for t1, t2 in samples:
        try:
            values.append(genus_numeric(d, ComplexParams(tau, z, t1, t2), tol).value)
            used.append((t1, t2))
        except PoleProximity:
            skipped.append((t1, t2))
    dev = max((abs(a - b) for a, b in itertools.combinations(values, 2)), default=0.0)
    return IndependenceReport(used, values, dev, skipped)


def check_balanced(
    d: ToricDiagram,
    tau: complex = 2j,
    z: complex = 0.3,
    samples: Sequence[tuple[complex, complex]] | None = None,
    n: int = 8,
    tol: float = GENUS_TOL,
) -> GenusReport:
    """Balanced collapse: genus == (chi/2) theta_1(2z)/theta_1(z), numerically and exactly."""
    chi = euler_characteristic(d)
    pairing = balanced_pairing(d)
    rep = GenusReport(f"balanced check for {d.name}", {"chi": chi, "tau": complex(tau), "z": complex(z), "trunc": n})
    if pairing is None:
        rep.add(Check("balanced pairing exists", passed=False, note="no pairing; theorem does not apply"))
        return rep
    rep.info["pairing"] = ", ".join(f"{a}<->{b}" for a, b in sorted(pairing.items()) if a < b)
    rep.add(Check("balanced pairing exists", passed=True))
    if samples is None:
        samples = default_t_samples(tau, 6, DEFAULT_SEED, diagram_weights(d))
    ref = reference_genus_numeric(chi, tau, z)
    for t1, t2 in samples:
        val = genus_numeric(d, ComplexParams(tau, z, t1, t2)).value
        rep.check(f"numeric at t1={t1.real:.4f}{t1.imag:+.4f}i, t2={t2.real:.4f}{t2.imag:+.4f}i", abs(val - ref), tol, val, ref)
    exact = genus_qexp(d, n).value == reference_genus_qexp(chi, n)
    rep.add(Check(f"exact through q^{n - 1}", passed=exact, note="cross-multiplied"))
    return rep


# residues


def residue_numeric(
    f: Callable[[complex], complex],
    center: complex,
    radius: float,
    nodes: int = 64,
    tol: float = 1e-10,
    max_nodes: int = 4096,
) -> complex:
    """(1/2 pi i) * contour integral of f around a circle, by the trapezoid rule.

    Nodes double until two successive estimates agree to tol * max(1, |I|).
    """

    def trap(m: int) -> complex:
        acc = 0j
        for k in range(m):
            e = cmath.exp(TWO_PI_I * k / m)
            acc += f(center + radius * e) * e
        return acc * radius / m

    prev = trap(nodes)
    m = nodes
    while m < max_nodes:
        m *= 2
        cur = trap(m)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise QuadratureNonconvergence(f"residue estimate did not settle by {max_nodes} nodes")


def _radius(center: complex, candidates: Iterable[complex], frac: float = 0.05) -> float:
    dists = [abs(c - center) for c in candidates]
    dists = [x for x in dists if x > 1e-12 * max(1.0, abs(center))]
    return frac * min(dists)


def _rel(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(1.0, abs(rhs))


def conifold_residue_report(
    tau: complex = 2j,
    z: complex = 0.3,
    t2: complex = -0.4 + 0.23j,
    m_range: Iterable[int] = (-1, 0, 1),
    tol: float = 1e-8,
) -> GenusReport:
    """Numerically confirm the residue and specialization identities of A(q, y, u).

    Deviations are relative, |lhs - rhs| / max(1, |rhs|), because the
    quantities scale like |q|^m.
    """
    p = ComplexParams(tau, z, 0j, t2)
    q = p.q
    y = cmath.exp(TWO_PI_I * z)
    v = cmath.exp(TWO_PI_I * t2)
    bval = b_numeric(tau, z)
    rep = GenusReport("conifold residue ledger", {"tau": complex(tau), "z": complex(z), "t2": complex(t2)})

    def A(u):
        return a_numeric(tau, z, u)

    m_list = list(m_range)
    for m in m_list:
        qm = q**m
        ym = y**m
        near = [q ** (m + s) for s in (-2, -1, 1, 2)]
        r0 = _radius(qm, near)
        rv = _radius(qm / v, [c / v for c in near])

        items = [
            ("res_{u=q^m} A(u) du = -q^m y^-m B", residue_numeric(A, qm, r0), -qm / ym * bval),
            ("res_{u=q^m} A(1/u) du = q^m y^m B", residue_numeric(lambda u: A(1 / u), qm, r0), qm * ym * bval),
            ("A(uv)|_{u=q^m} = y^-m A(v)", A(qm * v), A(v) / ym),
            ("A(1/(uv))|_{u=q^m} = y^m A(1/v)", A(1 / (qm * v)), ym * A(1 / v)),
            ("A(u)|_{u=q^m/v} = y^-m A(1/v)", A(qm / v), A(1 / v) / ym),
            ("A(1/u)|_{u=q^m/v} = y^m A(v)", A(v / qm), ym * A(v)),
            (
                "res_{u=q^m/v} A(uv) du = -q^m y^-m B / v",
                residue_numeric(lambda u: A(u * v), qm / v, rv),
                -qm / ym * bval / v,
            ),
            (
                "res_{u=q^m/v} A(1/(uv)) du = q^m y^m B / v",
                residue_numeric(lambda u: A(1 / (u * v)), qm / v, rv),
                qm * ym * bval / v,
            ),
        ]
        for name, lhs, rhs in items:
            rep.check(f"m={m}: {name}", _rel(lhs, rhs), tol, lhs, rhs, note="relative")
    return rep


def _t1_pole_candidates(d: ToricDiagram, tau: complex, t2: complex, reach: int = 3) -> list[complex]:
    out = []
    dirs = {(w.a, w.b) for w in diagram_weights(d)}
    for a, b in dirs:
        if a == 0:
            continue
        for j in range(-reach, reach + 1):
            for k in range(-reach, reach + 1):
                out.append((j * tau + k - b * t2) / a)
    return out


def genus_residue_report(
    tau: complex = 2j,
    z: complex = 0.3,
    t2: complex = -0.4 + 0.23j,
    mn: Iterable[tuple[int, int]] | None = None,
    tol: float = 1e-8,
    d: ToricDiagram | None = None,
) -> GenusReport:
    """Residues of the genus in t1 at t1 = m tau + n and t1 = -t2 + m tau + n; all should vanish."""
    d = d or builtin("resolved_conifold")
    if mn is None:
        mn = list(itertools.product((-1, 0, 1), repeat=2))
    rep = GenusReport(f"genus residues in t1 for {d.name}", {"tau": complex(tau), "z": complex(z), "t2": complex(t2)})
    cands = _t1_pole_candidates(d, tau, t2)

    def f(t1):
        return genus_numeric(d, ComplexParams(tau, z, t1, t2)).value

    for m, n in mn:
        for label, center in ((f"t1={m}*tau{n:+d}", m * tau + n), (f"t1=-t2{m:+d}*tau{n:+d}", -t2 + m * tau + n)):
            res = residue_numeric(f, center, _radius(center, cands))
            rep.check(f"res at {label}", abs(res), tol, res, 0j)
    return rep


def default_jacobi_samples(count: int = 3, seed: int = DEFAULT_SEED, weights: Iterable = ()) -> list[ComplexParams]:
    """Generic (tau, z, t1, t2) points with Im(tau) near 1 so tau and -1/tau both converge fast."""
    rng = random.Random(seed + 1)
    out = []
    while len(out) < count:
        tau = complex(rng.uniform(-0.3, 0.3), rng.uniform(0.9, 1.2))
        z = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.1, 0.1))
        (t1, t2), = default_t_samples(tau, 1, rng.randrange(1 << 30), weights)
        if abs(theta1_numeric(tau, z)) > GENERIC_MARGIN:
            out.append(ComplexParams(tau, z, t1, t2))
    return out


def genus_evaluator(d: ToricDiagram, tol: float = DEFAULT_TOL) -> Callable[[complex, complex, complex, complex], complex]:
    require_valid(d)

    def f(tau, z, t1, t2):
        return genus_numeric(d, ComplexParams(tau, z, t1, t2), tol).value

    return f

