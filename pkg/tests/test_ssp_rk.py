from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from conftest import BOTH_RULES, periodic_mesh
from rksv.mesh import SubdivisionRule
from rksv.ssp_rk import integrate, rk_step, ssp_tableau
from rksv.sv_space import Problem, materialize_operator, project_initial


def test_tableau_reference_rows():
    assert ssp_tableau(1).final_weights == (Fraction(1),)
    assert ssp_tableau(3).final_weights == (Fraction(1, 3), Fraction(1, 2), Fraction(1, 6))
    assert ssp_tableau(4).final_weights == (
        Fraction(3, 8), Fraction(1, 3), Fraction(1, 4), Fraction(1, 24))


@pytest.mark.parametrize("s", range(1, 13))
def test_tableau_invariants(s):
    tab = ssp_tableau(s)
    final = tab.final_weights
    assert tab.g[0][0] == 1
    assert final[-1] == Fraction(1, factorial(s))
    assert sum(final) == 1
    assert all(w > 0 for w in final)
    assert all(factorial(s) % w.denominator == 0 for w in final)


def test_tableau_shu_osher_matrices():
    tab = ssp_tableau(3)
    c = tab.c_matrix
    d = tab.d_matrix
    assert np.allclose(c[:2], np.eye(3)[:2])
    assert np.allclose(c[2], [1.0 / 3.0, 0.5, 1.0 / 6.0])
    assert np.allclose(d[:2], np.eye(3)[:2])
    assert np.allclose(d[2], [0.0, 0.0, 1.0 / 6.0])


def test_tableau_rejects_out_of_range():
    with pytest.raises(ValueError):
        ssp_tableau(0)
    with pytest.raises(ValueError):
        ssp_tableau(13)


def test_single_stage_is_forward_euler():
    mesh = periodic_mesh(6, SubdivisionRule.LSV, 1)
    problem = Problem(u0=np.sin)
    state = project_initial(problem, mesh, 1)
    tau = 0.01
    from rksv.sv_space import apply_L

    stepped = rk_step(state, problem, ssp_tableau(1), tau)
    euler = state.values + tau * apply_L(state, problem)
    assert np.allclose(stepped.values, euler, atol=1e-15)
    assert stepped.t == tau


@pytest.mark.parametrize("s", (1, 3, 5))
def test_constant_state_is_fixed_point(s):
    mesh = periodic_mesh(5, SubdivisionRule.RRSV, 2)
    problem = Problem(u0=lambda x: np.ones_like(x))
    state = project_initial(problem, mesh, 2)
    stepped = rk_step(state, problem, ssp_tableau(s), 0.037)
    assert np.max(np.abs(stepped.values - state.values)) < 1e-13


@pytest.mark.parametrize("rule", BOTH_RULES)
@pytest.mark.parametrize("s", range(1, 9))
def test_step_equals_truncated_exponential(rule, s):
    mesh = periodic_mesh(8, rule, 1)
    problem = Problem(u0=np.sin)
    mat = materialize_operator(mesh, problem)
    state = project_initial(problem, mesh, 1)
    tau = 0.02
    stepped = rk_step(state, problem, ssp_tableau(s), tau)
    u = state.values.ravel()
    acc = u.copy()
    term = u.copy()
    for j in range(1, s + 1):
        term = tau * (mat @ term) / j
        acc = acc + term
    assert np.max(np.abs(stepped.values.ravel() - acc)) < 1e-12 * np.max(np.abs(acc))


def test_integrate_exact_step_counts():
    mesh = periodic_mesh(4, SubdivisionRule.LSV, 1)
    problem = Problem(u0=np.sin)
    state = project_initial(problem, mesh, 1)
    tau = 0.125
    taken = []
    out = integrate(state, problem, ssp_tableau(2), tau, 3 * tau,
                    on_step=lambda s: taken.append(s.t))
    assert len(taken) == 3
    assert out.t == 3 * tau

    taken.clear()
    out = integrate(state, problem, ssp_tableau(2), tau, 2.5 * tau,
                    on_step=lambda s: taken.append(s.t))
    assert len(taken) == 3
    assert abs((taken[-1] - taken[-2]) - tau / 2.0) < 1e-15
    assert out.t == 2.5 * tau


def test_integrate_zero_width_is_identity():
    mesh = periodic_mesh(4, SubdivisionRule.LSV, 1)
    problem = Problem(u0=np.sin)
    state = project_initial(problem, mesh, 1)
    out = integrate(state, problem, ssp_tableau(3), 0.1, 0.0)
    assert out is state


def test_integrate_rejects_bad_tau():
    mesh = periodic_mesh(4, SubdivisionRule.LSV, 1)
    problem = Problem(u0=np.sin)
    state = project_initial(problem, mesh, 1)
    with pytest.raises(ValueError):
        integrate(state, problem, ssp_tableau(3), 0.0, 1.0)
    with pytest.raises(ValueError):
        integrate(state, problem, ssp_tableau(3), -0.1, 1.0)


@pytest.mark.parametrize("s", (2, 4))
def test_mass_conserved_per_step(s):
    mesh = periodic_mesh(12, SubdivisionRule.RRSV, 2)
    problem = Problem(u0=lambda x: np.sin(x) + 0.5 * np.cos(2 * x))
    state = project_initial(problem, mesh, 2)
    mass0 = state.total_mass
    for _ in range(20):
        state = rk_step(state, problem, ssp_tableau(s), 5e-3)
        assert abs(state.total_mass - mass0) < 1e-12
