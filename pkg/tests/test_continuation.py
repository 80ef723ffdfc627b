import math

import mpmath

import numpy as np
import pytest

from erlangloss import core
from erlangloss.continuation import (
    QuadratureConfig,
    erlang_b_real,
    log_inverse_blocking,
    phi_real,
    phi_real_complement,
    second_difference,
)
from erlangloss.errors import ConvergenceError, DomainError

from oracles import blocking_real

LOADS = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0]


def test_zero_servers():
    assert erlang_b_real(0.0, 3.0) == 1.0


def test_one_server():
    assert erlang_b_real(1.0, 1.0) == pytest.approx(0.5, rel=1e-14)


def test_half_server_against_incomplete_gamma():
    value = erlang_b_real(0.5, 1.0)
    assert 0.5 < value < 1.0
    assert value == pytest.approx(0.72519677735834862829, rel=1e-13)


@pytest.mark.parametrize("x", [0.01, 0.3, 0.99, 1.5, 4.25, 19.9, 37.5])
@pytest.mark.parametrize("lam", [1e-6, 0.1, 1.0, 13.0, 100.0, 1e4])
def test_matches_incomplete_gamma_closed_form(x, lam):
    ref = float(blocking_real(x, lam))
    assert erlang_b_real(x, lam) == pytest.approx(ref, rel=1e-12)


def test_integer_agreement():
    worst = 0.0
    for lam in LOADS:
        for n in range(51):
            exact = core.erlang_b_int(n, lam)
            worst = max(worst, abs(erlang_b_real(n, lam) - exact) / exact)
    assert worst <= 1e-10


def test_recursion_at_real_arguments():
    for lam in LOADS:
        for x in np.linspace(0.0, 10.0, 41):
            lhs = 1.0 / erlang_b_real(x + 1.0, lam)
            rhs = 1.0 + (x + 1.0) / lam / erlang_b_real(x, lam)
            assert lhs == pytest.approx(rhs, rel=1e-9)


def test_without_argument_reduction_agrees():
    direct = QuadratureConfig(reduction_threshold=math.inf)
    for x in (1.5, 3.25, 6.0):
        assert erlang_b_real(x, 2.0, direct) == pytest.approx(erlang_b_real(x, 2.0), rel=1e-11)


def test_log_space_far_tail():
    # 1/B exceeds 1e300 here; B underflows but -log B stays exact
    lam, x = 0.5, 300.25
    lib = log_inverse_blocking(x, lam)
    ref = -float(mpmath.log(blocking_real(x, lam)))
    assert lib == pytest.approx(ref, rel=1e-12)
    assert erlang_b_real(x, lam) == 0.0


def test_monotone_decreasing_along_grid():
    for lam in LOADS:
        values = [erlang_b_real(x, lam) for x in np.arange(0.0, 20.0, 0.1)]
        assert all(a > b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("lam", LOADS)
def test_convexity_probe(lam):
    h = 0.01
    for x in np.arange(0.01 + h, 20.0, 0.37):
        d2 = second_difference(lambda y: erlang_b_real(y, lam), x, h)
        noise = 10 * 1e-12 * erlang_b_real(x - h, lam)
        assert d2 > noise


@pytest.mark.parametrize("lam", LOADS)
def test_concavity_probe(lam):
    h = 0.01
    for x in np.arange(-1.0 + h + 1e-3, 20.0, 0.37):
        d2 = second_difference(lambda y: phi_real_complement(y, lam), x, h)
        noise = 10 * 1e-12 * phi_real_complement(x - h, lam)
        assert -d2 < -noise
        if lam <= 5.0 and x < 3.0:
            # where phi is resolvable the direct difference agrees in sign
            assert second_difference(lambda y: phi_real(y, lam), x, h) < 0


def test_phi_real_examples():
    assert phi_real(-1.0, 2.0) == 0.0
    assert phi_real(0.0, 1.0) == pytest.approx(0.5, rel=1e-14)
    assert phi_real(0.5, 1.0) == pytest.approx(1.0 - 0.32590231333125914435, rel=1e-13)


@pytest.mark.parametrize("x", [-0.9, -0.5, 0.0, 0.7, 3.0])
def test_phi_real_for_heavy_load(x):
    lam = 1e6
    ref = 1 - blocking_real(x + 1, lam)
    assert phi_real(x, lam) == pytest.approx(float(ref), rel=1e-11)


def test_phi_real_matches_integer_phi():
    for n in range(-1, 15):
        assert phi_real(n, 3.0) == pytest.approx(core.phi(n, 3.0), rel=1e-12, abs=0)


def test_second_difference_examples():
    assert second_difference(lambda y: y, 5.0, 0.1) == pytest.approx(0.0, abs=1e-15)
    assert second_difference(lambda y: y * y, 0.0, 1.0) == 2.0
    assert second_difference(lambda y: core.erlang_b_int(int(y), 1.0), 1.0, 1.0) == pytest.approx(0.2, rel=1e-15)


def test_second_difference_step_must_be_positive():
    with pytest.raises(DomainError):
        second_difference(abs, 1.0, 0.0)


@pytest.mark.parametrize("x", [-0.5, math.nan, math.inf])
def test_invalid_x(x):
    with pytest.raises(DomainError):
        erlang_b_real(x, 1.0)


def test_phi_real_below_domain():
    with pytest.raises(DomainError):
        phi_real(-1.5, 1.0)


def test_convergence_error_carries_bracket():
    # fewer refinements than the minimum number of levels compared
    cfg = QuadratureConfig(max_refinements=2)
    with pytest.raises(ConvergenceError) as info:
        erlang_b_real(0.5, 1.0, cfg)
    prev, last = info.value.bracket
    # both are coarse estimates of 1/B(0.5, 1)
    assert prev == pytest.approx(1 / 0.72519677735834862829, rel=1e-2)
    assert last == pytest.approx(1 / 0.72519677735834862829, rel=1e-2)


@pytest.mark.parametrize("kwargs", [{"rel_tol": 0.0}, {"max_refinements": 0}, {"rel_tol": -1.0}])
def test_quadrature_config_validation(kwargs):
    with pytest.raises(DomainError):
        QuadratureConfig(**kwargs)
