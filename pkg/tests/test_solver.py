import math

import pytest

from renorm.scaling import FeasibleDomain, Period
from renorm.solver import (
    NoRoot,
    _scan_roots,
    continuum_sweep,
    solve_fixed_point,
    solve_fixed_point_eps,
)
from reference_values import (
    C3_6DP,
    C3_STAR,
    C5_6DP,
    C5_STAR,
    C_EPS_098,
    C_EPS_102,
    R3_DERIV,
    R5_DERIV,
)


def test_tripling_fixed_point(rep3):
    assert abs(rep3.c_star - C3_6DP) < 1e-5
    assert abs(rep3.c_star - C3_STAR) < 1e-9
    assert rep3.residual <= 1e-12
    assert rep3.expanding
    assert rep3.derivative_estimate == pytest.approx(R3_DERIV, rel=1e-6)


def test_quintupling_fixed_point(rep5):
    assert abs(rep5.c_star - C5_6DP) < 1e-5
    assert abs(rep5.c_star - C5_STAR) < 1e-9
    assert rep5.residual <= 1e-12
    assert rep5.expanding
    assert rep5.derivative_estimate == pytest.approx(R5_DERIV, rel=1e-6)


def test_no_root_in_first_component(fd3):
    first_only = FeasibleDomain(
        Period.THREE, [fd3.intervals[0]], fd3.boundary_tol
    )
    with pytest.raises(NoRoot):
        solve_fixed_point(Period.THREE, first_only)


def test_no_root_in_first_component_five(fd5):
    first_only = FeasibleDomain(Period.FIVE, [fd5.intervals[0]], fd5.boundary_tol)
    with pytest.raises(NoRoot):
        solve_fixed_point(Period.FIVE, first_only)


def test_eps_one_coincides_with_unperturbed(rep3):
    rep = solve_fixed_point_eps(1.0)
    assert abs(rep.c_star - rep3.c_star) < 1e-11


def test_eps_ordering(rep3):
    lo = solve_fixed_point_eps(0.98)
    hi = solve_fixed_point_eps(1.02)
    assert abs(lo.c_star - C_EPS_098) < 1e-8
    assert abs(hi.c_star - C_EPS_102) < 1e-8
    assert hi.c_star < rep3.c_star < lo.c_star
    assert lo.expanding and hi.expanding


def test_eps_window_default_extent():
    # the solvable window extends at least across [0.9, 1.1]
    for e in (0.9, 1.1):
        rep = solve_fixed_point_eps(e)
        assert rep.expanding and rep.derivative_estimate > 2.0
        assert rep.residual <= 1e-12


def test_continuum_sweep_decreasing(rep3):
    table = continuum_sweep(0.98, 1.02, 5)
    assert len(table.rows) == 5
    cs = [r[1] for r in table.rows]
    assert all(b < a for a, b in zip(cs[:-1], cs[1:]))
    assert abs(table.rows[2][1] - rep3.c_star) < 1e-10  # middle row is eps = 1


def test_continuum_sweep_degenerate(rep3):
    table = continuum_sweep(1.0, 1.0, 1)
    assert len(table.rows) == 1
    assert abs(table.rows[0][1] - rep3.c_star) < 1e-11


def test_continuum_sweep_three_rows(rep3):
    table = continuum_sweep(0.99, 1.01, 3)
    assert abs(table.rows[1][1] - rep3.c_star) < 1e-10


def test_continuum_sweep_validates():
    with pytest.raises(ValueError):
        continuum_sweep(1.01, 0.99, 5)
    with pytest.raises(ValueError):
        continuum_sweep(0.99, 1.01, 0)


def test_scan_finds_multiple_brackets():
    hits = _scan_roots(math.sin, 1.0, 7.0, 0.01)
    assert len(hits) == 2  # pi and 2*pi


def test_tolerance_validation():
    with pytest.raises(ValueError):
        solve_fixed_point(Period.THREE, tol=1e-16)
