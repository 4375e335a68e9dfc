"""``ellgen`` command line.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from pathlib import Path

from . import genus as G
from .errors import EllgenError, PoleProximity
from .jacobi import check_laws, fourier_nonnegative
from .report import Check, GenusReport, fmt_complex, render
from .theta import ComplexParams
from .toric import (
    BUILTINS,
    ToricDiagram,
    balanced_pairing,
    builtin,
    euler_characteristic,
    parse_diagram,
    validate,
)

_REAL = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^(?:(?P<re>[+-]?{_REAL})(?:(?P<im>[+-]{_REAL})i)?|(?P<pure>[+-]?{_REAL})i)$")


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """Accept ``a``, ``bi``, ``a+bi`` and ``a-bi`` with decimal reals."""
    m = _COMPLEX.match(text.strip())
    if not m:
        raise argparse.ArgumentTypeError(f"invalid complex literal {text!r}")
    if m["pure"] is not None:
        return complex(0.0, float(m["pure"]))
    return complex(float(m["re"]), float(m["im"] or 0.0))


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer list {text!r}") from None


def load_diagram(src: str) -> ToricDiagram:
    if src.startswith("builtin:"):
        return builtin(src.split(":", 1)[1])
    path = Path(src)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read diagram file {src!r}: {exc.strerror}") from None
    return parse_diagram(text)


def default_seed() -> int:
    env = os.environ.get("ELLGEN_SEED")
    if env is None:
        return G.DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"ELLGEN_SEED must be an integer, got {env!r}") from None


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let "-0.4+0.23i" through as a value rather than an option
        self._negative_number_matcher = re.compile(r"^-\.?\d")

    def error(self, message):
        self.exit(2, f"{self.prog}: error: {message}\n")


def _numeric_opts(p, t=True):
    p.add_argument("--tau", type=parse_complex, default=2j)
    p.add_argument("--z", type=parse_complex, default=0.3 + 0j)
    if t:
        p.add_argument("--t1", type=parse_complex, default=0.17 + 0.11j)
        p.add_argument("--t2", type=parse_complex, default=-0.4 + 0.23j)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ellgen", description="Equivariant elliptic genera of toric CY 3-folds.")
    parser.add_argument("--format", choices=("text", "kv"), default="text")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_, diagram=True, **kw):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--format", choices=("text", "kv"), default=argparse.SUPPRESS)
        if diagram:
            p.add_argument("--diagram", required=kw.get("required", True), help="builtin:<name> or a file path")
        return p

    cmd("list-builtins", "list builtin diagrams", diagram=False)
    cmd("validate", "check vertex and edge balancing")

    p = cmd("genus-eval", "evaluate the genus numerically")
    _numeric_opts(p)
    p.add_argument("--tol", type=float, default=G.GENUS_TOL)

    p = cmd("genus-qexp", "exact q-expansion of the genus")
    p.add_argument("--trunc", type=int, default=G.DEFAULT_TRUNC)

    p = cmd("averaged", "averaged genus against (chi/2) theta1(2z)/theta1(z)")
    p.add_argument("--backend", choices=("numeric", "exact"), default="numeric")
    _numeric_opts(p)
    p.add_argument("--trunc", type=int, default=G.DEFAULT_TRUNC)
    p.add_argument("--tol", type=float, default=G.GENUS_TOL)

    p = cmd("check-identity", "exact two-vertex conifold theta identity", diagram=False)
    p.add_argument("--trunc", type=int, default=G.DEFAULT_TRUNC)

    p = cmd("check-balanced", "balanced-diagram collapse, numeric and exact")
    _numeric_opts(p, t=False)
    p.add_argument("--samples", type=int, default=6)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trunc", type=int, default=8)
    p.add_argument("--tol", type=float, default=G.GENUS_TOL)

    p = cmd("check-jacobi", "the eight transformation laws plus q-nonnegativity", required=False)
    p.add_argument("--samples", type=int, default=3)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trunc", type=int, default=8)
    p.add_argument("--tol", type=float, default=G.GENUS_TOL)

    p = cmd("residue-check", "conifold residue identities and vanishing genus residues", diagram=False)
    _numeric_opts(p, t=False)
    p.add_argument("--t2", type=parse_complex, default=-0.4 + 0.23j)
    p.add_argument("--m-range", type=parse_int_list, default=[-1, 0, 1])
    p.add_argument("--tol", type=float, default=1e-8)

    p = cmd("independence", "scan the genus over (t1, t2) samples")
    _numeric_opts(p, t=False)
    p.add_argument("--samples", type=int, default=6)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--expect", choices=("auto", "independent", "dependent", "none"), default="auto")
    p.add_argument("--tol", type=float, default=G.GENUS_TOL)
    p.add_argument("--dependence-threshold", type=float, default=1e-3)
    return parser


# subcommand bodies; each returns a GenusReport


def _list_builtins(args) -> GenusReport:
    rep = GenusReport("builtin diagrams")
    for name in sorted(BUILTINS):
        d = builtin(name)
        bal = balanced_pairing(d) is not None
        rep.lines.append(f"{name}: chi={euler_characteristic(d)} balanced={'yes' if bal else 'no'}")
    return rep


def _validate(args) -> GenusReport:
    d = load_diagram(args.diagram)
    rep = GenusReport(f"validate {d.name}", {"trivalent": len(d.trivalent), "edges": len(d.edges)})
    bad = validate(d)
    for v in bad:
        rep.add(Check(v.kind, passed=False, note=f"{v.where}, sum {v.total}"))
    if not bad:
        rep.add(Check("vertex and edge balancing", passed=True))
    return rep


def _short(c: complex) -> str:
    return f"{c.real:.6f}{c.imag:+.6f}i"


def _params(args) -> ComplexParams:
    return ComplexParams(args.tau, args.z, getattr(args, "t1", 0j), getattr(args, "t2", 0j))


def _genus_eval(args) -> GenusReport:
    d = load_diagram(args.diagram)
    p = _params(args)
    chi = euler_characteristic(d)
    val = G.genus_numeric(d, p).value
    ref = G.reference_genus_numeric(chi, p.tau, p.z)
    balanced = balanced_pairing(d) is not None
    rep = GenusReport(
        f"genus of {d.name}",
        {"tau": p.tau, "z": p.z, "t1": p.t1, "t2": p.t2, "chi": chi, "value": val, "reference": ref},
    )
    if balanced:
        rep.check("value equals (chi/2) theta1(2z)/theta1(z)", abs(val - ref), args.tol, val, ref)
    else:
        rep.add(Check("distance to (chi/2) theta1(2z)/theta1(z)", abs(val - ref), note="diagram not balanced"))
    return rep


def _series_lines(s) -> list[str]:
    return [f"q^{k}: {c}" for k, c in enumerate(s.coeffs)]


def _genus_qexp(args) -> GenusReport:
    d = load_diagram(args.diagram)
    chi = euler_characteristic(d)
    s = G.genus_qexp(d, args.trunc).value
    rep = GenusReport(f"q-expansion of {d.name}", {"chi": chi, "trunc": args.trunc, "q_offset": str(s.offset)})
    rep.lines.extend(_series_lines(s))
    rep.add(Check("no negative q-powers", passed=fourier_nonnegative(s)))
    rep.add(Check("odd Yh parity (index 3/2)", passed=G.yh_parity_odd(s)))
    same = s == G.reference_genus_qexp(chi, args.trunc)
    if balanced_pairing(d) is not None:
        rep.add(Check("equals (chi/2) theta1(2z)/theta1(z)", passed=same, note="exact"))
    else:
        rep.add(Check("equals (chi/2) theta1(2z)/theta1(z)", note=f"{'yes' if same else 'no'}; not balanced"))
    return rep


def _averaged(args) -> GenusReport:
    d = load_diagram(args.diagram)
    chi = euler_characteristic(d)
    rep = GenusReport(f"averaged genus of {d.name}", {"chi": chi, "backend": args.backend})
    if args.backend == "numeric":
        p = _params(args)
        rep.info.update(tau=p.tau, z=p.z, t1=p.t1, t2=p.t2)
        val = G.averaged_genus(d, "numeric", p).value
        ref = G.reference_genus_numeric(chi, p.tau, p.z)
        rep.info.update(value=val, reference=ref)
        rep.check("averaged equals (chi/2) theta1(2z)/theta1(z)", abs(val - ref), args.tol, val, ref)
    else:
        rep.info["trunc"] = args.trunc
        s = G.averaged_genus(d, "exact", n=args.trunc).value
        ref = G.reference_genus_qexp(chi, args.trunc)
        for k in range(args.trunc):
            rep.add(Check(f"q^{k} coefficient", passed=s[k] == ref[k], note="exact"))
    return rep


def _check_identity(args) -> GenusReport:
    return G.check_theta_identity(args.trunc)


def _seed(args) -> int:
    return args.seed if args.seed is not None else default_seed()


def _check_balanced(args) -> GenusReport:
    d = load_diagram(args.diagram)
    seed = _seed(args)
    samples = G.default_t_samples(args.tau, args.samples, seed, G.diagram_weights(d))
    rep = G.check_balanced(d, args.tau, args.z, samples, args.trunc, args.tol)
    rep.info["seed"] = seed
    return rep


def _check_jacobi(args) -> GenusReport:
    diagrams = [load_diagram(args.diagram)] if args.diagram else [builtin(n) for n in sorted(BUILTINS)]
    seed = _seed(args)
    rep = GenusReport("generalized weak Jacobi form laws, index 3/2", {"seed": seed, "trunc": args.trunc})
    for d in diagrams:
        samples = G.default_jacobi_samples(args.samples, seed, G.diagram_weights(d))
        for r in check_laws(G.genus_evaluator(d), 3, samples, args.tol):
            i = samples.index(r.sample)
            if r.flag:
                rep.add(Check(f"{d.name} {r.law} sample {i}", passed=False, note="pole"))
            else:
                rep.check(f"{d.name} {r.law} sample {i}", r.deviation, args.tol, r.lhs, r.rhs)
        s = G.genus_qexp(d, args.trunc).value
        rep.add(Check(f"{d.name} no negative q-powers", passed=fourier_nonnegative(s)))
    return rep


def _residue_check(args) -> GenusReport:
    a = G.conifold_residue_report(args.tau, args.z, args.t2, args.m_range, args.tol)
    mn = [(m, n) for m in args.m_range for n in args.m_range]
    b = G.genus_residue_report(args.tau, args.z, args.t2, mn, args.tol)
    a.title = "conifold residues"
    a.checks.extend(b.checks)
    return a


def _independence(args) -> GenusReport:
    d = load_diagram(args.diagram)
    seed = _seed(args)
    samples = G.default_t_samples(args.tau, args.samples, seed, G.diagram_weights(d))
    scan = G.independence_scan(d, args.tau, args.z, samples)
    rep = GenusReport(
        f"t-independence scan for {d.name}",
        {"tau": complex(args.tau), "z": complex(args.z), "seed": seed, "max_deviation": scan.max_deviation},
    )
    for (t1, t2), v in zip(scan.samples, scan.values):
        rep.lines.append(f"t1={_short(t1)} t2={_short(t2)} value={fmt_complex(v)}")
    for t1, t2 in scan.skipped:
        rep.add(Check(f"sample t1={_short(t1)} t2={_short(t2)}", passed=False, note="pole, skipped"))
    expect = args.expect
    if expect == "auto":
        expect = "independent" if balanced_pairing(d) is not None else "none"
    if expect == "independent":
        rep.check("max pairwise deviation below tol", scan.max_deviation, args.tol)
    elif expect == "dependent":
        rep.add(
            Check(
                "max pairwise deviation above dependence threshold",
                scan.max_deviation,
                args.dependence_threshold,
                scan.max_deviation > args.dependence_threshold,
            )
        )
    else:
        rep.add(Check("max pairwise deviation", scan.max_deviation))
    return rep


HANDLERS = {
    "list-builtins": _list_builtins,
    "validate": _validate,
    "genus-eval": _genus_eval,
    "genus-qexp": _genus_qexp,
    "averaged": _averaged,
    "check-identity": _check_identity,
    "check-balanced": _check_balanced,
    "check-jacobi": _check_jacobi,
    "residue-check": _residue_check,
    "independence": _independence,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "trunc", 1) < 1:
        print("ellgen: error: --trunc must be >= 1", file=sys.stderr)
        return 2
    if hasattr(args, "tau") and args.tau.imag <= 0:
        print(f"ellgen: error: --tau needs positive imaginary part, got {args.tau}", file=sys.stderr)
        return 2
    try:
        rep = HANDLERS[args.command](args)
    except (UsageError, EllgenError) as exc:
        if isinstance(exc, PoleProximity):
            print(f"ellgen: error: evaluation too close to a pole: {exc}", file=sys.stderr)
        else:
            print(f"ellgen: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(render(rep, args.format))
    return 0 if rep.passed else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
