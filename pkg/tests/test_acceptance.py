"""Acceptance criteria 1-9.

Each test prints one line ``criterion N: PASS|FAIL  <title>  (<detail>)``
even without ``-s``, then asserts.  Tolerances are fixed here on purpose.
"""

import random
import time

import pytest

from diagram_ops import permute_slots, relabel
from ellgen.cli import run
from ellgen.genus import (
    averaged_genus,
    check_theta_identity,
    conifold_identity_lhs,
    conifold_residue_report,
    default_jacobi_samples,
    default_t_samples,
    diagram_weights,
    genus_evaluator,
    genus_numeric,
    genus_qexp,
    genus_residue_report,
    independence_scan,
    reference_genus_numeric,
    reference_genus_qexp,
    theta_quotient_ratfunc,
    yh_parity_odd,
)
from ellgen.jacobi import LAWS, check_laws, fourier_nonnegative
from ellgen.series import QSeries, RatFunc, SparseLaurent
from ellgen.theta import ComplexParams, theta1_numeric, theta1_qexp, theta1_sum_numeric, theta1_sum_qexp
from ellgen.toric import BUILTINS, balanced_pairing, builtin, euler_characteristic, parse_diagram, serialize, validate

TAU, Z = 2j, 0.3


@pytest.fixture
def verdict(capsys):
    def emit(n, title, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {title}  ({detail})")
        assert ok, f"criterion {n} failed: {detail}"

    return emit


def theta_grid():
    """25 (tau, z) points; Im(tau) cycles through 0.5, 1, 2."""
    pts = []
    for k in range(25):
        tau = complex(-0.5 + k / 24, (0.5, 1.0, 2.0)[k % 3])
        z = complex(-0.45 + 0.9 * ((7 * k) % 25) / 24, 0.15 * ((3 * k) % 5 - 2))
        pts.append((tau, z))
    return pts


def test_criterion_1_theta_backends(verdict):
    t0 = time.perf_counter()
    dev = max(abs(theta1_numeric(t, z) - theta1_sum_numeric(t, z)) for t, z in theta_grid())
    exact = theta1_qexp(17).body == theta1_sum_qexp(17).body
    elapsed = time.perf_counter() - t0
    ok = dev < 1e-12 and exact and elapsed < 1.0
    verdict(1, "theta sum/product agreement", ok, f"grid max |diff|={dev:.2e}, exact to q^16={exact}, {elapsed:.2f}s")


def test_criterion_2_conifold(verdict):
    t0 = time.perf_counter()
    d = builtin("resolved_conifold")
    scan = independence_scan(d, TAU, Z)
    ref = reference_genus_numeric(2, TAU, Z)
    to_ref = max(abs(v - ref) for v in scan.values)
    exact = genus_qexp(d, 8).value == reference_genus_qexp(2, 8)
    elapsed = time.perf_counter() - t0
    ok = len(scan.values) == 6 and scan.max_deviation < 1e-9 and to_ref < 1e-9 and exact and elapsed < 10.0
    verdict(
        2,
        "conifold genus independent of t",
        ok,
        f"maxDeviation={scan.max_deviation:.2e}, max |Z-ref|={to_ref:.2e}, exact N=8 {exact}, {elapsed:.2f}s",
    )


def test_criterion_3_theta_identity(verdict, capsys):
    n = 9
    lib = check_theta_identity(n).passed
    via_genus = genus_qexp(builtin("resolved_conifold"), n).value == theta_quotient_ratfunc(n)
    via_ratios = conifold_identity_lhs(n) == theta_quotient_ratfunc(n)
    code = run(["check-identity", "--trunc", str(n)])
    capsys.readouterr()
    ok = lib and via_genus and via_ratios and code == 0
    verdict(3, "theta identity through q^8", ok, f"ratio route {via_ratios}, genus route {via_genus}, cli exit {code}")


def test_criterion_4_balanced(verdict):
    d = builtin("local_p1xp1")
    ref = reference_genus_numeric(4, TAU, Z)
    samples = default_t_samples(TAU, 6, weights=diagram_weights(d))
    dev = max(abs(genus_numeric(d, ComplexParams(TAU, Z, *s)).value - ref) for s in samples)
    exact = genus_qexp(d, 9).value == reference_genus_qexp(4, 9)
    ok = euler_characteristic(d) == 4 and dev < 1e-9 and exact
    verdict(4, "balanced local_p1xp1 collapses to 2 theta1(2z)/theta1(z)", ok, f"max dev={dev:.2e}, exact to q^8 {exact}")


def test_criterion_5_averaged(verdict):
    d = builtin("local_p2")
    ref = reference_genus_numeric(3, TAU, Z)
    samples = default_t_samples(TAU, 6, weights=diagram_weights(d))
    dev = max(abs(averaged_genus(d, "numeric", ComplexParams(TAU, Z, *s)).value - ref) for s in samples)
    exact = averaged_genus(d, "exact", n=9).value == reference_genus_qexp(3, 9)
    spread = independence_scan(d, TAU, Z, samples).max_deviation
    ok = dev < 1e-9 and exact and spread > 1e-3
    verdict(
        5,
        "averaged local_p2 equals (3/2) theta1(2z)/theta1(z)",
        ok,
        f"max dev={dev:.2e}, exact to q^8 {exact}, unaveraged maxDeviation={spread:.3g}",
    )


def test_criterion_6_jacobi(verdict):
    worst = 0.0
    count = 0
    all_pass = True
    nonneg = True
    for name in sorted(BUILTINS):
        d = builtin(name)
        samples = default_jacobi_samples(3, weights=diagram_weights(d))
        reports = check_laws(genus_evaluator(d), 3, samples, tol=1e-9)
        count += len(reports)
        all_pass &= all(r.passed for r in reports) and len(reports) == 3 * len(LAWS)
        worst = max([worst] + [r.deviation for r in reports])
        nonneg &= fourier_nonnegative(genus_qexp(d, 8).value)
    ok = all_pass and nonneg
    verdict(6, "generalized weak Jacobi laws, index 3/2", ok, f"{count} law checks, worst deviation={worst:.2e}, nonneg q-powers {nonneg}")


def test_criterion_7_residues(verdict):
    ledger = conifold_residue_report(TAU, Z, -0.4 + 0.23j, (-1, 0, 1), 1e-8)
    genus = genus_residue_report(TAU, Z, -0.4 + 0.23j, tol=1e-8)
    ok = ledger.passed and len(ledger.checks) == 24 and genus.passed and len(genus.checks) == 18
    verdict(
        7,
        "conifold residue ledger",
        ok,
        f"24 identities worst={ledger.max_deviation():.2e}, 18 genus residues worst={genus.max_deviation():.2e}",
    )


def test_criterion_8_structure(verdict):
    chis = [euler_characteristic(builtin(n)) for n in ("resolved_conifold", "local_p2", "local_p1xp1")]
    pairs = [balanced_pairing(builtin(n)) is not None for n in ("resolved_conifold", "local_p2", "local_p1xp1")]
    z0 = 0.0
    for name in BUILTINS:
        d = builtin(name)
        val = genus_numeric(d, ComplexParams(TAU, 0, 0.17 + 0.11j, -0.4 + 0.23j)).value
        z0 = max(z0, abs(val - euler_characteristic(d)))
    ok = chis == [2, 3, 4] and pairs == [True, False, True] and z0 < 1e-12
    verdict(8, "structural invariants", ok, f"chi={chis}, pairing={pairs}, max |Z(z=0)-chi|={z0:.1e}")


def _rand_poly(rng):
    return SparseLaurent({(rng.randint(-2, 2), rng.randint(-2, 2), rng.randint(-2, 2)): rng.randint(-4, 4) for _ in range(rng.randint(0, 4))})


def _rand_nonzero(rng):
    p = _rand_poly(rng)
    return p if p else SparseLaurent.const(1)


def _ring_ok(a, b, c, one, zero):
    return (
        a + b == b + a
        and a * b == b * a
        and (a + b) + c == a + (b + c)
        and (a * b) * c == a * (b * c)
        and a * (b + c) == a * b + a * c
        and a * one == a
        and a + zero == a
        and a - a == zero
    )


def ring_axiom_failures(n=1000, seed=9):
    rng = random.Random(seed)
    bad = {"SparseLaurent": 0, "RatFunc": 0, "QSeries": 0}
    one, zero = SparseLaurent.const(1), SparseLaurent()
    for _ in range(n):
        a, b, c = (_rand_poly(rng) for _ in range(3))
        bad["SparseLaurent"] += not _ring_ok(a, b, c, one, zero)
        r = [RatFunc(_rand_poly(rng), _rand_nonzero(rng)) for _ in range(3)]
        bad["RatFunc"] += not _ring_ok(*r, RatFunc(1), RatFunc(0))
        s = [QSeries([_rand_poly(rng) for _ in range(4)]) for _ in range(3)]
        bad["QSeries"] += not _ring_ok(*s, QSeries([one, zero, zero, zero]), QSeries([zero] * 4))
    return bad


def test_criterion_9_properties(verdict):
    bad = ring_axiom_failures()
    rng = random.Random(4)
    trips = inv = 0
    for name in sorted(BUILTINS):
        d = builtin(name)
        trips += parse_diagram(serialize(d)) == d
        for _ in range(5):
            perms = {v.id: tuple(rng.sample(range(3), 3)) for v in d.trivalent}
            tag = rng.randint(0, 99)
            e = relabel(permute_slots(d, perms), lambda s: f"n{tag}_{s}")
            same = (
                parse_diagram(serialize(e)) == e
                and validate(e) == []
                and genus_qexp(e, 4).value == genus_qexp(d, 4).value
            )
            inv += same
    parity = all(yh_parity_odd(genus_qexp(builtin(n), 8).value) for n in BUILTINS)
    parity &= yh_parity_odd(averaged_genus(builtin("local_p2"), "exact", n=8).value)
    ok = not any(bad.values()) and trips == 3 and inv == 15 and parity
    verdict(
        9,
        "property suites",
        ok,
        f"ring axiom failures in 1000 instances {bad}, round trips {trips}/3, invariance {inv}/15, Yh parity {parity}",
    )
