"""Executable analysis machinery: trial-to-test mapping, bilinear form, energy norm.

Piecewise polynomials are passed as (N, k+1) arrays of per-element Legendre
coefficients on the reference element, matching Reconstruction.coeffs.
"""

from __future__ import annotations

import weakref

import numpy as np

from ._basis import antiderivative_matrix, derivative_matrix, legendre_vandermonde
from .mesh import BoundaryCondition, Mesh1D, SubdivisionRule
from .quadrature import gauss_rule, interpolatory_weights
from .sv_space import workspace

__all__ = [
    "node_weights",
    "map_to_test",
    "bilinear_ah",
    "inner_star",
    "quadrature_residual",
    "energy_norm",
    "boundary_traces",
    "derivative_coeffs",
    "l2_inner",
    "global_antiderivative",
    "lagrange_interpolant",
    "interpolation_nodes_values",
    "piecewise_eval",
]

_RESIDUAL_POINTS = 20  # reference rule for R_i, exact to degree 39


class _PgWorkspace:
    """Per-mesh cache of basis/weight tables used by the analysis surface."""

    def __init__(self, mesh: Mesh1D):
        k = mesh.k
        ws = workspace(mesh)
        self.deriv = derivative_matrix(k)
        self.weights = []       # reference weights A_0..A_{k+1}, per variant
        self.node_basis = []    # L_m at the k+2 subdivision points, per variant
        self.interp_inv = []    # inverse Vandermonde at interpolation nodes y_1..y_{k+1}
        base = SubdivisionRule.LSV if mesh.rule == SubdivisionRule.LSV else SubdivisionRule.RRSV
        ref = interpolatory_weights(base, k)
        for ops, left in zip(ws.variants, ws.left_flags):
            w = ref.weights[::-1] if left else ref.weights  # mirrored rule for left-Radau
            self.weights.append(np.asarray(w))
            self.node_basis.append(ops.trace)
            self.interp_inv.append(np.linalg.inv(legendre_vandermonde(ops.y[1:], k)))


_pg_workspaces: "weakref.WeakKeyDictionary[Mesh1D, _PgWorkspace]" = weakref.WeakKeyDictionary()


def _pg(mesh: Mesh1D) -> _PgWorkspace:
    ws = _pg_workspaces.get(mesh)
    if ws is None:
        ws = _PgWorkspace(mesh)
        _pg_workspaces[mesh] = ws
    return ws


def node_weights(mesh: Mesh1D) -> np.ndarray:
    """Physical quadrature weights A_{i,j} = (h_i/2) A_j; shape (N, k+2)."""
    pg = _pg(mesh)
    out = np.empty((mesh.n_elements, mesh.k + 2))
    for idx, w in zip(workspace(mesh).groups, pg.weights):
        out[idx] = w
    return out * 0.5 * mesh.lengths[:, None]


def _node_values_and_derivs(coeffs: np.ndarray, mesh: Mesh1D):
    """(values, x-derivatives) of the piecewise polynomial at all CV bounds."""
    pg = _pg(mesh)
    ws = workspace(mesh)
    n, k1 = coeffs.shape
    vals = np.empty((n, mesh.k + 2))
    derivs = np.empty((n, mesh.k + 2))
    dcoeffs = coeffs @ pg.deriv.T
    for idx, basis in zip(ws.groups, pg.node_basis):
        vals[idx] = coeffs[idx] @ basis.T
        derivs[idx] = dcoeffs[idx] @ basis.T
    derivs *= (2.0 / mesh.lengths)[:, None]
    return vals, derivs


def map_to_test(coeffs: np.ndarray, mesh: Mesh1D) -> np.ndarray:
    """The trial-to-test mapping: piecewise constants w*_{i,j}; shape (N, k+1).

    w*_{i,0} = w(x_{i,0}^+) + A_{i,0} w_x(x_{i,0}) and each later constant adds
    A_{i,j} w_x(x_{i,j}).
    """
    vals, derivs = _node_values_and_derivs(coeffs, mesh)
    a = node_weights(mesh)
    star = np.empty((mesh.n_elements, mesh.k + 1))
    star[:, 0] = vals[:, 0] + a[:, 0] * derivs[:, 0]
    increments = a[:, 1:-1] * derivs[:, 1:-1]
    star[:, 1:] = star[:, [0]] + np.cumsum(increments, axis=1)
    return star


def boundary_traces(coeffs: np.ndarray, mesh: Mesh1D) -> tuple[np.ndarray, np.ndarray]:
    """Element traces (left-endpoint values, right-endpoint values)."""
    vals, _ = _node_values_and_derivs(coeffs, mesh)
    return vals[:, 0].copy(), vals[:, -1].copy()


def derivative_coeffs(coeffs: np.ndarray, mesh: Mesh1D) -> np.ndarray:
    """Reference-coordinate Legendre coefficients of d/dy of each element polynomial."""
    return coeffs @ _pg(mesh).deriv.T


def interpolation_nodes_values(coeffs: np.ndarray, mesh: Mesh1D) -> np.ndarray:
    """Values of each element polynomial at its own nodes x_{i,1}..x_{i,k+1}."""
    pg_ws = _pg(mesh)
    out = np.empty((mesh.n_elements, mesh.k + 1))
    for idx, basis in zip(workspace(mesh).groups, pg_ws.node_basis):
        out[idx] = coeffs[idx] @ basis[1:].T
    return out


def _upwind_traces(coeffs: np.ndarray, mesh: Mesh1D) -> np.ndarray:
    """u^- at the k+2 CV bounds of each element, honouring the bc at x_{i,0}."""
    vals, _ = _node_values_and_derivs(coeffs, mesh)
    out = np.empty_like(vals)
    out[:, 1:] = vals[:, 1:]
    out[1:, 0] = vals[:-1, -1]
    if mesh.bc == BoundaryCondition.PERIODIC:
        out[0, 0] = vals[-1, -1]
    else:
        out[0, 0] = 0.0
    return out


def bilinear_ah(v: np.ndarray, w: np.ndarray, mesh: Mesh1D) -> float:
    """a_h(v, w*) = -sum_{i,j} w*_{i,j} (v^-_{i,j+1} - v^-_{i,j})."""
    star = map_to_test(w, mesh)
    vm = _upwind_traces(v, mesh)
    return float(-np.sum(star * np.diff(vm, axis=1)))


def inner_star(v: np.ndarray, w: np.ndarray, mesh: Mesh1D) -> float:
    """(v, w*) = sum_{i,j} w*_{i,j} * integral of v over C_{i,j}."""
    star = map_to_test(w, mesh)
    ws = workspace(mesh)
    total = 0.0
    half_h = 0.5 * mesh.lengths
    for idx, ops in ws.pairs():
        cell_integrals = half_h[idx][:, None] * (v[idx] @ ops.mass.T)
        total += float(np.sum(star[idx] * cell_integrals))
    return total


def quadrature_residual(f, element: int, mesh: Mesh1D) -> float:
    """R_i(f): Gauss reference integral over I_i minus the weighted node sum."""
    gy, gw = gauss_rule(_RESIDUAL_POINTS)
    xl, xr = mesh.boundaries[element], mesh.boundaries[element + 1]
    mid, half = 0.5 * (xl + xr), 0.5 * (xr - xl)
    integral = half * float(gw @ np.asarray(f(mid + half * gy), dtype=float))
    nodes = mesh.cv_bounds[element]
    a = node_weights(mesh)[element]
    return integral - float(a @ np.asarray(f(nodes), dtype=float))


def energy_norm(w: np.ndarray, mesh: Mesh1D) -> float:
    """sqrt of (w, w*); raises if the radicand is negative beyond roundoff."""
    sq = inner_star(w, w, mesh)
    if sq < -1e-12:
        raise ValueError(f"energy norm radicand {sq} is negative: broken rule")
    return float(np.sqrt(max(sq, 0.0)))


def l2_inner(v: np.ndarray, w: np.ndarray, mesh: Mesh1D) -> float:
    """Exact L2 inner product from Legendre orthogonality."""
    k = mesh.k
    mode = 2.0 / (2 * np.arange(k + 1) + 1)
    return float(np.sum(0.5 * mesh.lengths[:, None] * v * w * mode[None, :]))


def global_antiderivative(v: np.ndarray, mesh: Mesh1D) -> np.ndarray:
    """Coefficients (N, k+2) of the primitive of v vanishing at the left domain end."""
    k = mesh.k
    anti = v @ antiderivative_matrix(k).T * (0.5 * mesh.lengths)[:, None]
    ends = legendre_vandermonde(np.array([-1.0, 1.0]), k + 1)
    left_vals = anti @ ends[0]
    right_vals = anti @ ends[1]
    jumps = np.concatenate([[0.0], np.cumsum(right_vals[:-1] - left_vals[1:])])
    anti[:, 0] += jumps - left_vals[0]
    return anti


def lagrange_interpolant(u, mesh: Mesh1D) -> np.ndarray:
    """Coefficients of the piecewise interpolant of u at x_{i,1}..x_{i,k+1}."""
    pg = _pg(mesh)
    coeffs = np.empty((mesh.n_elements, mesh.k + 1))
    for idx, inv in zip(workspace(mesh).groups, pg.interp_inv):
        x = mesh.cv_bounds[idx][:, 1:]
        coeffs[idx] = np.asarray(u(x), dtype=float) @ inv.T
    return coeffs


def piecewise_eval(coeffs: np.ndarray, mesh: Mesh1D, x) -> np.ndarray:
    """Evaluate a coefficient array at physical points (element-interior limits)."""
    from .sv_space import Reconstruction

    return Reconstruction(mesh, coeffs).evaluate(x)
