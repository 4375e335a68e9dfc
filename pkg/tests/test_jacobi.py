import cmath
import math
from fractions import Fraction

import pytest

from ellgen.errors import PoleProximity
from ellgen.genus import default_jacobi_samples, diagram_weights, genus_evaluator, genus_qexp, reference_genus_qexp
from ellgen.jacobi import LAWS, check_laws, fourier_nonnegative
from ellgen.series import QSeries, SparseLaurent
from ellgen.theta import ComplexParams, theta1_numeric
from ellgen.toric import BUILTINS, builtin


def quotient(tau, z, t1, t2):
    return theta1_numeric(tau, 2 * z) / theta1_numeric(tau, z)


@pytest.mark.parametrize("name", ["resolved_conifold", "local_p2"])
def test_genus_satisfies_all_laws(name):
    d = builtin(name)
    samples = default_jacobi_samples(3, weights=diagram_weights(d))
    reports = check_laws(genus_evaluator(d), 3, samples)
    assert len(reports) == 3 * len(LAWS)
    bad = [(r.law, r.deviation) for r in reports if not r.passed]
    assert bad == []


def test_constant_with_index_zero():
    samples = [ComplexParams(1j, 0.2, 0.1, 0.3)]
    reports = check_laws(lambda *a: 1 + 0j, 0, samples)
    assert all(r.passed and r.deviation == 0 for r in reports)


def test_wrong_index_is_rejected():
    samples = default_jacobi_samples(2)
    reports = check_laws(quotient, 1, samples, laws=["Z_PLUS_TAU"])
    assert not any(r.passed for r in reports)
    assert all(r.passed for r in check_laws(quotient, 3, samples))


def test_t_dependent_function_fails_t_shift():
    samples = [ComplexParams(1j, 0.2, 0.1 + 0.05j, 0.3)]
    reports = check_laws(lambda tau, z, t1, t2: t1, 0, samples, laws=["T1_PLUS_1", "T2_PLUS_1"])
    assert [r.passed for r in reports] == [False, True]


def test_pole_hits_are_flagged():
    def f(tau, z, t1, t2):
        raise PoleProximity("boom")

    reports = check_laws(f, 3, [ComplexParams(1j, 0.2)], laws=["Z_PLUS_1", "S_TRANSFORM"])
    assert [r.flag for r in reports] == ["pole", "pole"]
    assert not any(r.passed for r in reports)


def test_order_of_samples_does_not_matter():
    samples = default_jacobi_samples(3)
    a = {(r.law, r.sample): r.deviation for r in check_laws(quotient, 3, samples)}
    b = {(r.law, r.sample): r.deviation for r in check_laws(quotient, 3, samples[::-1])}
    assert a == b


def test_unknown_law():
    with pytest.raises(ValueError):
        check_laws(quotient, 3, [ComplexParams(1j, 0.2)], laws=["Z_PLUS_2"])


def test_samples_avoid_poles():
    for p in default_jacobi_samples(5, weights=diagram_weights(builtin("local_p2"))):
        assert 0.9 <= p.tau.imag <= 1.2
        assert abs(theta1_numeric(p.tau, p.z)) > 0.05


def test_multiplier_for_z_plus_tau_is_classical():
    tau, z = 1j, 0.2
    # theta_1 alone has index 1/2
    r, = check_laws(lambda tau, z, t1, t2: theta1_numeric(tau, z), 1, [ComplexParams(tau, z)], laws=["Z_PLUS_TAU"])
    assert r.passed
    mult = -cmath.exp(-2j * math.pi * z - 1j * math.pi * tau)
    assert abs(r.lhs * mult - theta1_numeric(tau, z + tau)) < 1e-12


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_fourier_nonnegative_for_genera(name):
    assert fourier_nonnegative(genus_qexp(builtin(name), 8).value)


def test_fourier_examples():
    assert fourier_nonnegative(reference_genus_qexp(2, 8))
    assert not fourier_nonnegative(QSeries([SparseLaurent.const(1)], -1))
    assert fourier_nonnegative(QSeries([SparseLaurent.const(1)], Fraction(1, 8)))
