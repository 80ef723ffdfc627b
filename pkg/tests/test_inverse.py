import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from erlangloss import core
from erlangloss.continuation import erlang_b_real
from erlangloss.errors import ConvergenceError, DomainError
from erlangloss.inverse import SolveOptions, min_servers, solve_servers_real, solve_traffic

LOADS = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0)


def scan_min_servers(lam, target):
    n = 0
    while core.erlang_b_int(n, lam) > target:
        n += 1
    return n


def test_min_servers_examples():
    assert min_servers(1.0, 0.2) == 2
    assert min_servers(37.0, 1.0) == 0
    # exact rational scan: B(17, 10) = 0.01295 > 0.01 >= B(18, 10) = 0.00714
    assert min_servers(10.0, 0.01) == 18 == scan_min_servers(10.0, 0.01)


@settings(max_examples=200, deadline=None)
@given(lam=st.floats(min_value=1e-3, max_value=500.0), target=st.floats(min_value=1e-12, max_value=1.0))
def test_min_servers_postcondition(lam, target):
    m = min_servers(lam, target)
    assert core.erlang_b_int(m, lam) <= target
    assert m == 0 or core.erlang_b_int(m - 1, lam) > target


def test_min_servers_iteration_cap():
    with pytest.raises(ConvergenceError):
        min_servers(1e6, 1e-6, SolveOptions(max_iter=3))


def test_round_trip_min_servers():
    for lam in LOADS:
        for n in range(61):
            assert min_servers(lam, core.erlang_b_int(n, lam)) == n


def test_solve_servers_real_examples():
    assert solve_servers_real(1.0, 1.0) == 0.0
    assert solve_servers_real(1.0, 0.5) == pytest.approx(1.0, abs=1e-9)
    x = solve_servers_real(1.0, 0.35)
    # root of the incomplete-gamma closed form, bisected in 40-digit arithmetic
    assert 1.0 < x < 2.0
    assert x == pytest.approx(1.421242127906663775, abs=2e-9)


@pytest.mark.parametrize("lam", [0.1, 3.0, 100.0])
def test_solve_servers_real_round_trip(lam):
    for x in (0.25, 2.75, 9.25, 20.25):
        assert solve_servers_real(lam, erlang_b_real(x, lam)) == pytest.approx(x, abs=1e-6)


def test_solve_traffic_examples():
    assert solve_traffic(1, 0.5) == pytest.approx(1.0, rel=1e-9)
    assert solve_traffic(1, 0.9) == pytest.approx(9.0, rel=1e-9)
    # exact-sum Erlang B solved with mpmath to 40 digits
    assert solve_traffic(5, 0.01) == pytest.approx(1.3607867966625458135, rel=2e-9)


@settings(max_examples=100, deadline=None)
@given(n=st.integers(min_value=1, max_value=40), lam=st.sampled_from(LOADS))
def test_solve_traffic_round_trip(n, lam):
    assert solve_traffic(n, core.erlang_b_int(n, lam)) == pytest.approx(lam, rel=1e-6)


def test_solve_traffic_target_far_below_seed():
    # B(30, 0.1) ~ 4e-63, about sixty decades under the starting guess
    target = core.erlang_b_int(30, 0.1)
    assert solve_traffic(30, target) == pytest.approx(0.1, rel=1e-9)
    assert solve_traffic(40, 1e-300) > 0


def test_blocking_increases_with_load():
    for n in range(1, 41):
        values = [core.erlang_b_int(n, lam) for lam in LOADS]
        assert all(a < b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("target", [0.0, -0.1, 1.5, float("nan")])
def test_bad_targets(target):
    with pytest.raises(DomainError):
        min_servers(1.0, target)
    with pytest.raises(DomainError):
        solve_servers_real(1.0, target)


def test_solve_traffic_rejects_unit_target_and_zero_servers():
    with pytest.raises(DomainError):
        solve_traffic(3, 1.0)
    with pytest.raises(DomainError):
        solve_traffic(0, 0.5)


@pytest.mark.parametrize("kwargs", [{"x_tol": 0.0}, {"max_iter": 0}, {"bracket_growth": 1.0}])
def test_options_validation(kwargs):
    with pytest.raises(DomainError):
        SolveOptions(**kwargs)
