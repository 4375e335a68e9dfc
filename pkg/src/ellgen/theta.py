"""The odd Jacobi theta function and the q-series built from it.

Branch conventions: q^(1/8) = exp(pi i tau / 4), y^(+-1/2) = exp(+-pi i z).
With these the classical shift, T and S laws hold exactly as stated.

Numeric routines work on Python ``complex``.  Exact routines return
:class:`~ellgen.series.QSeries` over ``SparseLaurent`` or ``RatFunc`` in the
variables Yh = y^(1/2), U = exp(2 pi i t1), V = exp(2 pi i t2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import NonconvergentDomain, ZeroWeight
from .series import (
    QSeries,
    RatFunc,
    SparseLaurent,
    geometric,
    one_minus,
    qseries_prod,
)

TWO_PI_I = 2j * math.pi
DEFAULT_TOL = 1e-16
MIN_FACTORS = 8
MAX_FACTORS = 100_000

YH = SparseLaurent.monomial(1, 0, 0)
Y = SparseLaurent.monomial(2, 0, 0)


@dataclass(frozen=True)
class ComplexParams:
    tau: complex
    z: complex = 0j
    t1: complex = 0j
    t2: complex = 0j

    def __post_init__(self):
        _check_tau(self.tau)

    @property
    def q(self) -> complex:
        return cmath.exp(TWO_PI_I * self.tau)


def _check_tau(tau: complex) -> None:
    if complex(tau).imag <= 0:
        raise NonconvergentDomain(f"Im(tau) must be positive, got tau={tau}")


def _product_length(q_abs: float, x_max: float, tol: float) -> int:
    """Number of factors m so that |q|^(M) * x_max < tol/10, at least MIN_FACTORS."""
    if q_abs == 0.0:
        return MIN_FACTORS
    target = tol / 10
    m = MIN_FACTORS
    bound = q_abs**m * x_max
    while bound >= target:
        m += 1
        bound *= q_abs
        if m > MAX_FACTORS:
            raise NonconvergentDomain("theta product does not converge (|q| too close to 1)")
    return m


def theta1_numeric(tau: complex, z: complex, tol: float = DEFAULT_TOL) -> complex:
    """theta_1 from the triple product, truncated adaptively."""
    _check_tau(tau)
    q = cmath.exp(TWO_PI_I * tau)
    y = cmath.exp(TWO_PI_I * z)
    ay = abs(y)
    x_max = max(ay, 1 / ay) if ay else math.inf
    n = _product_length(abs(q), x_max, tol)
    prod = 1 + 0j
    qm1 = 1 + 0j  # q^(m-1)
    yinv = 1 / y
    for _ in range(n):
        qm = qm1 * q
        prod *= (1 - qm) * (1 - y * qm1) * (1 - yinv * qm)
        qm1 = qm
    return 1j * cmath.exp(1j * math.pi * tau / 4) * cmath.exp(-1j * math.pi * z) * prod


def theta1_sum_numeric(tau: complex, z: complex, tol: float = DEFAULT_TOL) -> complex:
    """theta_1 from its bilateral series, summed outward from the largest term."""
    _check_tau(tau)
    tau = complex(tau)
    z = complex(z)

    def term(n: int) -> complex:
        h = n - 0.5
        sign = -1 if n % 2 else 1
        return sign * cmath.exp(1j * math.pi * tau * h * h + TWO_PI_I * z * h)

    # |term| is a Gaussian in n peaked near n = 1/2 - Im z / Im tau
    center = round(0.5 - z.imag / tau.imag)
    total = term(center)
    biggest = abs(total)
    k = 0
    while True:
        k += 1
        hi, lo = term(center + k), term(center - k)
        total += hi + lo
        biggest = max(biggest, abs(hi), abs(lo))
        if k >= 2 and max(abs(hi), abs(lo)) < tol / 10 * max(1.0, biggest):
            break
        if k > MAX_FACTORS:
            raise NonconvergentDomain("theta series does not converge")
    return 1j * total


@dataclass(frozen=True)
class ThetaQExp:
    """theta_1 = i * q^(q_offset) * Yh^(yh_offset) * body, body exact in q."""

    body: QSeries
    q_offset: Fraction = Fraction(1, 8)
    yh_offset: int = -1
    scalar_i: bool = True

    @property
    def trunc(self) -> int:
        return self.body.trunc

    def evaluate(self, tau: complex, z: complex) -> complex:
        q = cmath.exp(TWO_PI_I * tau)
        yh = cmath.exp(1j * math.pi * z)
        qoff = cmath.exp(TWO_PI_I * tau * float(self.q_offset))
        val = self.body.evaluate(qoff, q, lambda c: c.evaluate(yh))
        return (1j if self.scalar_i else 1) * yh**self.yh_offset * val


def _theta_body(half: SparseLaurent, n: int) -> QSeries:
    """prod_m (1-q^m)(1-X q^(m-1))(1-X^-1 q^m) with X = half^2, to n coefficients."""
    x = half * half
    xinv = x.inverse()
    one = SparseLaurent.const(1)
    factors = [one_minus(x, 0, n)]
    for m in range(1, n):
        factors += [one_minus(one, m, n), one_minus(x, m, n), one_minus(xinv, m, n)]
    return qseries_prod(factors)


def theta1_qexp(n: int, half: SparseLaurent = YH) -> ThetaQExp:
    """Exact q-expansion of theta_1 from the product form.

    ``half`` is the monomial standing for exp(pi i x) where x is the theta
    argument; the default Yh gives theta_1(tau, z), ``Yh^2`` gives
    theta_1(tau, 2z).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not half.is_unit():
        raise ValueError("half-argument must be a monomial")
    (ey, eu, ev), = half.terms
    if eu or ev or half.terms[(ey, eu, ev)] != 1:
        raise ValueError("theta1_qexp only takes pure Yh powers")
    return ThetaQExp(_theta_body(half, n), yh_offset=-ey)


def theta1_sum_qexp(n: int) -> ThetaQExp:
    """Exact expansion from the bilateral sum: body = sum (-1)^k q^(k(k-1)/2) Yh^(2k)."""
    terms: dict[int, SparseLaurent] = {}
    k = 1
    while k * (k - 1) // 2 < n:
        for j in {k, 1 - k}:
            power = j * (j - 1) // 2
            c = SparseLaurent.monomial(2 * j, 0, 0, -1 if j % 2 else 1)
            terms[power] = terms.get(power, SparseLaurent()) + c
        k += 1
    return ThetaQExp(QSeries.from_terms(terms, n, SparseLaurent()))


def weight_monomial(a: int, b: int) -> SparseLaurent:
    return SparseLaurent.monomial(0, a, b)


def _is_negative(a: int, b: int) -> bool:
    return a < 0 or (a == 0 and b < 0)


@lru_cache(maxsize=256)
def _a_parts(a: int, b: int, n: int) -> tuple[RatFunc, QSeries]:
    """Split A(q, y, U^a V^b) into a q-free quotient and a unit series.

    The quotient (1 - yM)/(1 - M) carries the only non-unit factors.  Its
    denominator is written with the lexicographically positive monomial so
    that vertices with opposite weights share denominators.
    """
    if a == 0 and b == 0:
        raise ZeroWeight("weight (0, 0) has no theta ratio")
    m = weight_monomial(a, b)
    minv = m.inverse()
    ym = Y * m
    ymi = ym.inverse()
    if _is_negative(a, b):
        pref = RatFunc((1 - ym) * (-minv), 1 - minv)
    else:
        pref = RatFunc(1 - ym, 1 - m)
    factors = [QSeries([SparseLaurent.const(1)], 0, n)]
    for k in range(1, n):
        factors += [
            one_minus(ym, k, n),
            one_minus(ymi, k, n),
            geometric(m, k, n),
            geometric(minv, k, n),
        ]
    return pref, qseries_prod(factors)


def _lift(pref: RatFunc, s: QSeries) -> QSeries:
    return QSeries([RatFunc(pref.num * c, pref.den) for c in s.coeffs], s.offset)


def a_series(n: int, a: int = 1, b: int = 0) -> QSeries:
    """A(q, y, M) for M = U^a V^b, as a q-series over RatFunc.

    A(q,y,u) = prod_{k>=1} (1 - y u q^(k-1))(1 - (yu)^-1 q^k)
                          / ((1 - u q^(k-1))(1 - u^-1 q^k)).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return _lift(*_a_parts(a, b, n))


def b_series(n: int) -> QSeries:
    """B(q, y) = prod (1 - y q^(k-1))(1 - y^-1 q^k) / (1 - q^k)^2 over SparseLaurent."""
    if n < 1:
        raise ValueError("n must be >= 1")
    yi = Y.inverse()
    one = SparseLaurent.const(1)
    factors = [one_minus(Y, 0, n)]
    for k in range(1, n):
        factors += [one_minus(Y, k, n), one_minus(yi, k, n), geometric(one, k, n), geometric(one, k, n)]
    return qseries_prod(factors)


def theta_ratio_qexp(w, n: int) -> QSeries:
    """theta_1(tau, z + w.t) / theta_1(tau, w.t) as an exact q-series.

    ``w`` is a pair (a, b) or anything with ``.a`` and ``.b``; w.t means
    a*t1 + b*t2.  The q^(1/8) and (1 - q^m) factors cancel; the leftover
    y^(-1/2) is folded into the coefficients as Yh^-1.
    """
    a, b = (w.a, w.b) if hasattr(w, "a") else w
    pref, s = _a_parts(a, b, n)
    return _lift(RatFunc(pref.num * YH.inverse(), pref.den), s)


def vertex_parts_qexp(weights, n: int) -> tuple[RatFunc, QSeries]:
    """(q-free quotient, unit series) whose product is one vertex term."""
    num = YH ** -len(weights)
    den = SparseLaurent.const(1)
    series = None
    for w in weights:
        a, b = (w.a, w.b) if hasattr(w, "a") else w
        pref, s = _a_parts(a, b, n)
        num = num * pref.num
        den = den * pref.den
        series = s if series is None else series * s
    return RatFunc(num, den), series


def theta_quotient_qexp(n: int) -> QSeries:
    """theta_1(tau, 2z) / theta_1(tau, z) over SparseLaurent in Yh.

    The only q-free factor (1 - y^2)/(1 - y) reduces to 1 + y; every other
    factor is a unit power series.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    y2 = Y * Y
    factors = [QSeries([YH.inverse() * (1 + Y)], 0, n)]
    for k in range(1, n):
        factors += [
            one_minus(y2, k, n),
            one_minus(y2.inverse(), k, n),
            geometric(Y, k, n),
            geometric(Y.inverse(), k, n),
        ]
    return qseries_prod(factors)


def _ab_length(q: complex, xs, tol: float) -> int:
    x_max = max(max(abs(x), 1 / abs(x)) for x in xs)
    return _product_length(abs(q), x_max, tol)


def a_numeric(tau: complex, z: complex, u: complex, tol: float = DEFAULT_TOL) -> complex:
    """A(q, y, u) evaluated from its product with u given directly."""
    _check_tau(tau)
    q = cmath.exp(TWO_PI_I * tau)
    y = cmath.exp(TWO_PI_I * z)
    yu = y * u
    n = _ab_length(q, (yu, u), tol)
    val = 1 + 0j
    qk1 = 1 + 0j
    for _ in range(n):
        qk = qk1 * q
        val *= (1 - yu * qk1) * (1 - qk / yu) / ((1 - u * qk1) * (1 - qk / u))
        qk1 = qk
    return val


def b_numeric(tau: complex, z: complex, tol: float = DEFAULT_TOL) -> complex:
    _check_tau(tau)
    q = cmath.exp(TWO_PI_I * tau)
    y = cmath.exp(TWO_PI_I * z)
    n = _ab_length(q, (y,), tol)
    val = 1 + 0j
    qk1 = 1 + 0j
    for _ in range(n):
        qk = qk1 * q
        val *= (1 - y * qk1) * (1 - qk / y) / (1 - qk) ** 2
        qk1 = qk
    return val


def specialize(series: QSeries, tau: complex, z: complex, t1: complex = 0j, t2: complex = 0j) -> complex:
    """Numeric value of an exact series at (tau, z, t1, t2)."""
    q = cmath.exp(TWO_PI_I * tau)
    qoff = cmath.exp(TWO_PI_I * tau * float(series.offset))
    yh = cmath.exp(1j * math.pi * z)
    u = cmath.exp(TWO_PI_I * t1)
    v = cmath.exp(TWO_PI_I * t2)
    return series.evaluate(qoff, q, lambda c: c.evaluate(yh, u, v))
