"""Checks for the weight-0 generalized weak Jacobi form laws.

A function f(tau, z; t1, t2) of index r (passed as the integer 2r) should
satisfy

    f(tau, z + 1)          = (-1)^(2r) f
    f(tau, z + tau)        = (-exp(-2 pi i z - pi i tau))^(2r) f
    f(t_j + 1), f(t_j + tau), f(tau + 1) = f
    f(-1/tau, z/tau; t/tau) = exp(2r pi i z^2 / tau) f
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import PoleProximity
from .series import QSeries
from .theta import ComplexParams

LAWS = (
    "Z_PLUS_1",
    "Z_PLUS_TAU",
    "T1_PLUS_1",
    "T1_PLUS_TAU",
    "T2_PLUS_1",
    "T2_PLUS_TAU",
    "TAU_PLUS_1",
    "S_TRANSFORM",
)

Evaluator = Callable[[complex, complex, complex, complex], complex]


@dataclass(frozen=True)
class LawReport:
    """One law at one sample.

    ``lhs`` is f at the transformed arguments divided by the law's
    multiplier and ``rhs`` is f at the sample, so both sides sit at the
    scale of f.  The z + tau multiplier alone can reach 1e5 for Im(tau) ~ 1.
    """

    law: str
    sample: ComplexParams
    lhs: complex
    rhs: complex
    deviation: float
    tol: float
    flag: str = ""  # "pole" when an evaluation hit PoleProximity

    @property
    def passed(self) -> bool:
        return not self.flag and self.deviation < self.tol


def _transformed(law: str, p: ComplexParams, two_r: int) -> tuple[tuple, complex]:
    """(arguments for the left side, multiplier applied to f at p)."""
    tau, z, t1, t2 = p.tau, p.z, p.t1, p.t2
    if law == "Z_PLUS_1":
        return (tau, z + 1, t1, t2), (-1) ** two_r
    if law == "Z_PLUS_TAU":
        return (tau, z + tau, t1, t2), (-cmath.exp(-2j * math.pi * z - 1j * math.pi * tau)) ** two_r
    if law == "T1_PLUS_1":
        return (tau, z, t1 + 1, t2), 1
    if law == "T1_PLUS_TAU":
        return (tau, z, t1 + tau, t2), 1
    if law == "T2_PLUS_1":
        return (tau, z, t1, t2 + 1), 1
    if law == "T2_PLUS_TAU":
        return (tau, z, t1, t2 + tau), 1
    if law == "TAU_PLUS_1":
        return (tau + 1, z, t1, t2), 1
    if law == "S_TRANSFORM":
        return (-1 / tau, z / tau, t1 / tau, t2 / tau), cmath.exp(two_r * 1j * math.pi * z * z / tau)
    raise ValueError(f"unknown law {law!r}")


def check_laws(
    f: Evaluator,
    index2r: int,
    samples: Iterable[ComplexParams],
    tol: float = 1e-9,
    laws: Iterable[str] = LAWS,
) -> list[LawReport]:
    """Evaluate every law at every sample; pole hits are flagged, not raised."""
    laws = tuple(laws)
    out: list[LawReport] = []
    nan = complex(math.nan, math.nan)
    for p in samples:
        try:
            base = f(p.tau, p.z, p.t1, p.t2)
        except PoleProximity:
            out.extend(LawReport(law, p, nan, nan, math.inf, tol, "pole") for law in laws)
            continue
        for law in laws:
            args, mult = _transformed(law, p, index2r)
            try:
                lhs = f(*args) / mult
            except PoleProximity:
                out.append(LawReport(law, p, nan, base, math.inf, tol, "pole"))
                continue
            out.append(LawReport(law, p, lhs, base, abs(lhs - base), tol))
    return out


def fourier_nonnegative(s: QSeries) -> bool:
    """True when the expansion has no negative powers of q.

    Coefficients are stored from q^offset upward, so only the offset can
    introduce negative powers.
    """
    return s.offset >= 0
