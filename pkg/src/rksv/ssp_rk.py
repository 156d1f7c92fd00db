"""SSP Runge-Kutta tableaus (exact rationals) and the time-stepping loop.

The s-stage scheme is a chain of s-1 forward-Euler stages followed by a
convex recombination: u^{n+1} = sum_k g_k u^{n,k} + tau * g_{s-1} F(u^{n,s-1}).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .sv_space import Problem, SpatialOperator, SvState

__all__ = ["MAX_STAGES", "RkTableau", "ssp_tableau", "rk_step", "integrate"]

MAX_STAGES = 12


@dataclass(frozen=True)
class RkTableau:
    """Shu-Osher form of the s-stage linear SSP scheme.

    ``g`` holds rows 0..s-1 of the coefficient triangle; row r is the final
    recombination of the (r+1)-stage method, so the last row drives this
    scheme and every earlier stage is plain forward Euler.
    """

    s: int
    g: tuple[tuple[Fraction, ...], ...]

    @property
    def final_weights(self) -> tuple[Fraction, ...]:
        return self.g[self.s - 1]

    @property
    def c_matrix(self) -> np.ndarray:
        c = np.eye(self.s)
        c[-1, :] = [float(w) for w in self.final_weights]
        return c

    @property
    def d_matrix(self) -> np.ndarray:
        d = np.eye(self.s)
        d[-1, -1] = float(self.final_weights[-1])
        d[-1, :-1] = 0.0
        return d


@lru_cache(maxsize=None)
def ssp_tableau(s: int) -> RkTableau:
    """Exact coefficients from g_{r,l} = g_{r-1,l-1}/l, g_{r,r} = 1/(r+1)!."""
    if not 1 <= s <= MAX_STAGES:
        raise ValueError(f"s must be in 1..{MAX_STAGES}, got {s}")
    rows = [(Fraction(1),)]
    for r in range(1, s):
        prev = rows[r - 1]
        row = [Fraction(0)] * (r + 1)
        for ell in range(1, r):
            row[ell] = prev[ell - 1] / ell
        row[r] = Fraction(1, factorial(r + 1))
        row[0] = 1 - sum(row[1:])
        rows.append(tuple(row))
    tab = RkTableau(s, tuple(rows))
    final = tab.final_weights
    if final[-1] != Fraction(1, factorial(s)) or sum(final) != 1:
        raise AssertionError("SSP recursion produced an inconsistent row")
    if any(w <= 0 for w in final):
        raise AssertionError(f"non-positive SSP weight at s={s}")
    return tab


@lru_cache(maxsize=None)
def _tail_weights(tableau: RkTableau) -> tuple[np.ndarray, float]:
    """(W_j = sum of the final weights after stage j, last weight), as floats."""
    final = tableau.final_weights
    tails = np.array([float(sum(final[j + 1:])) for j in range(tableau.s - 1)])
    return tails, float(final[-1])


def step_increment(values: np.ndarray, t: float, tableau: RkTableau, tau: float,
                   op: SpatialOperator) -> np.ndarray:
    """u^{n+1} - u^n, assembled purely from O(tau) stage increments.

    Since the final weights sum to one, the recombination collapses to
    u^n + sum_j W_j d^j + w_{s-1} tau F(u^{n,s-1}); keeping only the
    increments avoids swallowing them in O(u)-sized additions, which
    matters for runs with ~1e5 steps.
    """
    tails, w_last = _tail_weights(tableau)
    u = values
    delta = np.zeros_like(values)
    for ell in range(tableau.s - 1):
        d = tau * op.tendency(u, t + ell * tau)
        delta += tails[ell] * d
        u = u + d
    delta += (w_last * tau) * op.tendency(u, t + (tableau.s - 1) * tau)
    return delta


def rk_step(state: SvState, problem: Problem, tableau: RkTableau, tau: float,
            op: SpatialOperator | None = None) -> SvState:
    """Advance one step of length tau; sources are evaluated at t^n + l*tau."""
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    if op is None:
        op = SpatialOperator(state.mesh, problem)
    delta = step_increment(state.values, state.t, tableau, tau, op)
    return SvState(state.mesh, state.k, state.values + delta, state.t + tau)


def integrate(state: SvState, problem: Problem, tableau: RkTableau, tau: float,
              t_final: float, on_step=None) -> SvState:
    """Step repeatedly to t_final, shortening only the last step.

    ``on_step(state)`` is invoked after every completed step.  The state is
    accumulated with a compensated (Kahan) sum so that the many tiny step
    increments of strongly CFL-restricted runs are not lost to rounding.
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    if t_final < state.t - 1e-14:
        raise ValueError(f"t_final={t_final} is before state time {state.t}")
    op = SpatialOperator(state.mesh, problem)
    tol = 1e-14 * max(1.0, abs(t_final))
    if t_final - state.t <= tol:
        return state
    values = state.values.copy()
    comp = np.zeros_like(values)
    t = state.t
    step = 0
    while t_final - t > tol:
        dt = min(tau, t_final - t)
        delta = step_increment(values, t, tableau, dt, op)
        y = delta + comp
        new_values = values + y
        comp = (values - new_values) + y
        values = new_values
        step += 1
        t = state.t + step * dt if dt == tau else t_final
        if on_step is not None:
            on_step(SvState(state.mesh, state.k, values + comp, t))
    return SvState(state.mesh, state.k, values + comp, t_final)
