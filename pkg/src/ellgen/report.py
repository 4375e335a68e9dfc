"""Result records and their two text renderings (human lines, key=value)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


def fmt_complex(c: complex) -> str:
    c = complex(c)
    return f"{c.real:+.15e}{c.imag:+.15e}i"


def fmt_value(x: Any) -> str:
    if isinstance(x, complex):
        return fmt_complex(x)
    if isinstance(x, float):
        return f"{x:.6e}"
    return str(x)


@dataclass
class Check:
    """One verified statement.  ``passed`` is None for informational rows."""

    name: str
    deviation: float | None = None
    tol: float | None = None
    passed: bool | None = None
    lhs: Any = None
    rhs: Any = None
    note: str = ""


@dataclass
class GenusReport:
    title: str
    info: dict[str, Any] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)  # free-form payload, e.g. q^k rows

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def check(self, name: str, deviation: float, tol: float, lhs=None, rhs=None, note: str = "") -> Check:
        return self.add(Check(name, deviation, tol, deviation < tol, lhs, rhs, note))

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.passed is False]

    def max_deviation(self) -> float:
        devs = [c.deviation for c in self.checks if c.deviation is not None]
        return max(devs, default=0.0)


def render_text(r: GenusReport) -> str:
    out = [f"== {r.title} =="]
    for k, v in r.info.items():
        out.append(f"{k}: {fmt_value(v)}")
    out.extend(r.lines)
    for c in r.checks:
        status = {True: "PASS", False: "FAIL", None: "INFO"}[c.passed]
        row = f"[{status}] {c.name}"
        if c.deviation is not None:
            row += f"  deviation={c.deviation:.3e}"
        if c.tol is not None:
            row += f"  tol={c.tol:.1e}"
        if c.note:
            row += f"  ({c.note})"
        out.append(row)
    out.append(f"result: {'PASS' if r.passed else 'FAIL'}")
    return "\n".join(out) + "\n"


def render_kv(r: GenusReport) -> str:
    out = [f"title={r.title}"]
    for k, v in r.info.items():
        out.append(f"info.{k}={fmt_value(v)}")
    for i, line in enumerate(r.lines):
        out.append(f"line.{i}={line}")
    for i, c in enumerate(r.checks):
        p = f"check.{i}"
        out.append(f"{p}.name={c.name}")
        status = {True: "pass", False: "fail", None: "info"}[c.passed]
        out.append(f"{p}.status={status}")
        if c.deviation is not None:
            out.append(f"{p}.deviation={c.deviation:.6e}")
        if c.tol is not None:
            out.append(f"{p}.tol={c.tol:.1e}")
        if c.lhs is not None:
            out.append(f"{p}.lhs={fmt_value(c.lhs)}")
        if c.rhs is not None:
            out.append(f"{p}.rhs={fmt_value(c.rhs)}")
        if c.note:
            out.append(f"{p}.note={c.note}")
    out.append(f"passed={'true' if r.passed else 'false'}")
    return "\n".join(out) + "\n"


def render(r: GenusReport, fmt: str = "text") -> str:
    return render_kv(r) if fmt == "kv" else render_text(r)
