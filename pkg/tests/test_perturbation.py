import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptosc import DomainError, LevelIndex, exact_energy, reparameterize, rs_first_order, rs_second_order, w_components
from ptosc.errors import CancellationError
from ptosc.perturbation import (
    exact_vs_perturbative,
    first_order_oracle,
    second_order_oracle,
    unperturbed_energy,
    unperturbed_level,
)

LOW = [LevelIndex(1, 0), LevelIndex(-1, 0), LevelIndex(1, 1), LevelIndex(-1, 1)]


def energy_of_G(level, G):
    return exact_energy(level, math.sqrt(G + 0.25))


@pytest.mark.parametrize("level", LOW)
def test_oracles_match_finite_differences(level):
    h = 1e-4
    d1 = (energy_of_G(level, h) - energy_of_G(level, -h)) / (2 * h)
    d2 = (energy_of_G(level, h) - 2 * energy_of_G(level, 0) + energy_of_G(level, -h)) / h**2
    assert first_order_oracle(level) == pytest.approx(d1, abs=1e-6)
    assert second_order_oracle(level) == pytest.approx(d2 / 2, abs=1e-5)


def test_w_components_at_origin():
    c = 1.7
    w1, w2, w3 = w_components(0.0, c)
    assert w1 == pytest.approx(1 / c**2) and w2 == 0 and w3 == pytest.approx(-2 / c**2)
    assert w1 + w2 + w3 == pytest.approx(1 / (-1j * c) ** 2)


def test_w2_at_x_equals_c():
    c = 0.6
    assert w_components(c, c)[1] == pytest.approx(1j / (2 * c * c))


def test_w_components_reject_nonpositive_c():
    with pytest.raises(DomainError):
        w_components(1.0, 0.0)


@given(st.floats(-50, 50), st.floats(0.1, 10))
def test_decomposition_identity(x, c):
    total = sum(w_components(x, c))
    assert abs(total - 1 / (x - 1j * c) ** 2) < 1e-12 * c**-2


def test_component_symmetries():
    x = np.linspace(-7, 7, 57)
    w1, w2, w3 = w_components(x, 1.3)
    w1m, w2m, w3m = w_components(-x, 1.3)
    assert np.all(w1.imag == 0) and np.all(w3.imag == 0) and np.all(w2.real == 0)
    assert np.array_equal(w1, w1m) and np.array_equal(w3, w3m) and np.array_equal(w2, -w2m)


def test_decay_exponents():
    x = np.logspace(2, 4, 50)
    for comp, slope in zip(w_components(x, 1.0), (-2, -3, -4)):
        fit = np.polyfit(np.log(x), np.log(np.abs(comp)), 1)[0]
        assert fit == pytest.approx(slope, abs=0.1)


def test_reparameterize():
    d = reparameterize(1.0)
    assert (d.mu, d.g, d.lam) == (1.0, 1.0, -1.0)
    d = reparameterize(10.0)
    assert (d.mu, d.g, d.lam) == pytest.approx((0.01, 0.01, -1e-4), rel=1e-15)
    with pytest.raises(DomainError):
        reparameterize(-1.0)


@pytest.mark.parametrize("c", [0.3, 1.0, 10.0])
def test_rational_form_of_even_core(c):
    x = np.linspace(-20, 20, 401)
    d = reparameterize(c)
    assert np.max(np.abs(d.w1(x) - 1 / (x * x + c * c))) < 1e-14 * max(1, c**-2)


def test_unperturbed_ladder():
    assert [str(unperturbed_level(m)) for m in range(4)] == ["(+,0)", "(-,0)", "(+,1)", "(-,1)"]
    assert [unperturbed_energy(unperturbed_level(m)) for m in range(6)] == [1, 3, 5, 7, 9, 11]


@pytest.mark.parametrize("level", LOW)
def test_first_order(level):
    e1 = rs_first_order(level, 1.0)
    assert e1 == pytest.approx(-2 * level.q, abs=1e-6)
    assert abs(rs_first_order(level, 0.5) - rs_first_order(level, 2.0)) < 1e-8


def test_second_order_minus_branch_converges_fast():
    lv = LevelIndex(-1, 0)
    r20, r40 = rs_second_order(lv, 1.0, 20), rs_second_order(lv, 1.0, 40)
    assert r40.value == pytest.approx(-2.0, rel=0.05)
    assert abs(r40.delta) * 2 <= abs(r20.delta)
    assert r40.extrapolated == pytest.approx(-2.0, abs=1e-3)


def test_second_order_plus_branch_slow_tail():
    # the perturbed q=+ state carries log(x - ic); the ladder sum converges like M^(-1/2)
    lv = LevelIndex(1, 0)
    r20, r40 = rs_second_order(lv, 1.0, 20), rs_second_order(lv, 1.0, 40)
    assert 2.0 < r40.value < r20.value
    assert abs(r40.delta) < abs(r20.delta)
    assert r40.extrapolated == pytest.approx(2.0, rel=0.02)


def test_second_order_monotone_in_basis():
    for lv in LOW[:2]:
        vals = [rs_second_order(lv, 1.0, M).value for M in (10, 20, 40)]
        gaps = [abs(v - second_order_oracle(lv)) for v in vals]
        assert gaps[0] > gaps[1] > gaps[2]


def test_second_order_c_independent():
    lv = LevelIndex(-1, 1)
    a, b = rs_second_order(lv, 0.5, 30), rs_second_order(lv, 1.0, 30)
    assert a.value == pytest.approx(b.value, abs=1e-8)


def test_second_order_guards():
    with pytest.raises(DomainError):
        rs_second_order(LevelIndex(1, 0), 1.0, 8)
    with pytest.raises(DomainError):
        rs_second_order(LevelIndex(1, 6), 1.0, 10)
    with pytest.raises(CancellationError):
        rs_second_order(LevelIndex(1, 0), 2.0, 60)


def test_exact_vs_perturbative_zero_coupling():
    assert exact_vs_perturbative(LevelIndex(1, 0), 0.0, 1.0).residual == 0


@pytest.mark.parametrize("level", LOW[:2])
def test_cubic_remainder(level):
    a = exact_vs_perturbative(level, 0.05, 1.0, 40)
    b = exact_vs_perturbative(level, 0.025, 1.0, 40)
    assert 6 <= a.residual / b.residual <= 10


@pytest.mark.parametrize("level", LOW[:2])
def test_cubic_remainder_attractive_core(level):
    a = exact_vs_perturbative(level, -0.05, 0.5, 80)
    b = exact_vs_perturbative(level, -0.025, 0.5, 80)
    assert 6 <= a.residual / b.residual <= 10


def test_perturbative_regime_enforced():
    with pytest.raises(DomainError):
        exact_vs_perturbative(LevelIndex(1, 0), 0.2, 1.0)
