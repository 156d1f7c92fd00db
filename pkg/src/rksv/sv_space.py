"""The spatial side of the SV scheme: reconstruction, upwind fluxes, residuals.

The unknowns are control-volume integrals I_{i,j} of a piecewise degree-k
polynomial; the tendency of each I_{i,j} is the flux difference across its
control volume plus the source integral.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._basis import legendre_vandermonde, mass_matrix
from .mesh import BoundaryCondition, Mesh1D, SubdivisionRule
from .quadrature import gauss_rule

__all__ = [
    "Problem",
    "SvState",
    "Reconstruction",
    "SpatialOperator",
    "cv_mass_matrix",
    "reconstruct",
    "apply_L",
    "project_initial",
    "error_norms",
    "snapshot_table",
    "materialize_operator",
]

_COND_LIMIT = 1e12


@dataclass
class Problem:
    """A scalar conservation law u_t + (alpha(x) u)_x = g(x, t) on the mesh domain."""

    u0: Callable[[np.ndarray], np.ndarray]
    alpha: Optional[Callable[[np.ndarray], np.ndarray]] = None  # None: constant 1
    source: Optional[Callable[[np.ndarray, float], np.ndarray]] = None
    u_exact: Optional[Callable[[np.ndarray, float], np.ndarray]] = None
    t_final: float = 1.0

    def alpha_values(self, x: np.ndarray) -> np.ndarray:
        if self.alpha is None:
            return np.ones_like(x)
        return np.asarray(self.alpha(x), dtype=float)


@dataclass
class SvState:
    """Control-volume integrals of u_h: values[i, j] = integral over C_{i,j}."""

    mesh: Mesh1D
    k: int
    values: np.ndarray  # (N, k+1)
    t: float = 0.0

    def __post_init__(self):
        expected = (self.mesh.n_elements, self.k + 1)
        if self.values.shape != expected:
            raise ValueError(f"values shape {self.values.shape} != {expected}")

    def copy(self) -> "SvState":
        return SvState(self.mesh, self.k, self.values.copy(), self.t)

    @property
    def total_mass(self) -> float:
        return float(self.values.sum())


@dataclass
class Reconstruction:
    """Per-element Legendre coefficients of u_h on the reference element."""

    mesh: Mesh1D
    coeffs: np.ndarray  # (N, k+1)

    def evaluate(self, x) -> np.ndarray:
        """Evaluate u_h at physical points (element-interior values at jumps)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        idx = np.clip(np.searchsorted(self.mesh.boundaries, x, side="right") - 1, 0,
                      self.mesh.n_elements - 1)
        y = (x - self.mesh.centers[idx]) * 2.0 / self.mesh.lengths[idx]
        k = self.coeffs.shape[1] - 1
        basis = legendre_vandermonde(y, k)
        return np.einsum("pm,pm->p", self.coeffs[idx], basis)


def _reference_nodes(rule, k, left_oriented=False):
    from .mesh import reference_interior_points

    interior = reference_interior_points(rule, k, left_oriented)
    return np.concatenate([[-1.0], interior, [1.0]])


def cv_mass_matrix(rule, k: int) -> np.ndarray:
    """M[j, m] = integral of L_m over the j-th reference CV of the rule."""
    rule = SubdivisionRule(rule)
    if rule == SubdivisionRule.RSV_ADAPTIVE:
        raise ValueError("RSV_ADAPTIVE has per-element orientations; use the mesh workspace")
    return _checked_mass_matrix(_reference_nodes(rule, k))


def _checked_mass_matrix(y: np.ndarray) -> np.ndarray:
    m = mass_matrix(y)
    if np.linalg.cond(m) > _COND_LIMIT:
        raise RuntimeError("CV mass matrix is numerically singular")
    return m


class _VariantOps:
    """Geometry factors shared by all elements with the same reference nodes."""

    def __init__(self, y: np.ndarray, k: int):
        self.y = y
        self.mass = _checked_mass_matrix(y)
        self.mass_inv = np.linalg.inv(self.mass)
        self.trace = legendre_vandermonde(y, k)        # (k+2, k+1), values at CV bounds
        q = k + 3
        gy, gw = gauss_rule(q)
        # per-CV quadrature in element coordinates: (k+1, q)
        mid = 0.5 * (y[:-1] + y[1:])
        half = 0.5 * np.diff(y)
        self.quad_y = mid[:, None] + half[:, None] * gy[None, :]
        self.quad_w = half[:, None] * gw[None, :]      # weights on the reference element
        self.quad_basis = legendre_vandermonde(self.quad_y.ravel(), k).reshape(k + 1, q, k + 1)


class _MeshWorkspace:
    """Per-mesh cache: element groups by orientation plus their variant ops."""

    def __init__(self, mesh: Mesh1D):
        k = mesh.k
        self.k = k
        self.variants: list[_VariantOps] = []
        self.groups: list[np.ndarray | slice] = []
        self.left_flags: list[bool] = []
        if mesh.left_oriented.any():
            for flag in (False, True):
                idx = np.nonzero(mesh.left_oriented == flag)[0]
                if idx.size:
                    self.variants.append(_VariantOps(_reference_nodes(mesh.rule, k, flag), k))
                    self.groups.append(idx)
                    self.left_flags.append(flag)
        else:
            self.variants.append(_VariantOps(_reference_nodes(mesh.rule, k, False), k))
            self.groups.append(slice(None))
            self.left_flags.append(False)

    def pairs(self):
        return zip(self.groups, self.variants)


_workspaces: "weakref.WeakKeyDictionary[Mesh1D, _MeshWorkspace]" = weakref.WeakKeyDictionary()


def workspace(mesh: Mesh1D) -> _MeshWorkspace:
    ws = _workspaces.get(mesh)
    if ws is None:
        ws = _MeshWorkspace(mesh)
        _workspaces[mesh] = ws
    return ws


def reconstruct(state: SvState) -> Reconstruction:
    """Recover per-element Legendre coefficients from CV integrals."""
    return Reconstruction(state.mesh, _coefficients(state.mesh, state.values))


def _coefficients(mesh: Mesh1D, values: np.ndarray) -> np.ndarray:
    ws = workspace(mesh)
    scale = 2.0 / mesh.lengths
    coeffs = np.empty_like(values)
    for idx, ops in ws.pairs():
        coeffs[idx] = (values[idx] * scale[idx][:, None]) @ ops.mass_inv.T
    return coeffs


class SpatialOperator:
    """Precomputed tendency evaluator for one (mesh, problem) pair."""

    def __init__(self, mesh: Mesh1D, problem: Problem):
        self.mesh = mesh
        self.problem = problem
        self.ws = workspace(mesh)
        self.scale = 2.0 / mesh.lengths
        # interior CV faces: the trace is single-valued, so the flux needs no upwinding
        self.alpha_interior = problem.alpha_values(mesh.cv_bounds[:, 1:-1])
        a_if = problem.alpha_values(mesh.boundaries)
        if mesh.bc == BoundaryCondition.PERIODIC:
            a_if[-1] = a_if[0]
        self.alpha_interface = a_if
        self.upwind_left = a_if >= 0.0  # use the left (u^-) trace where alpha >= 0
        if problem.source is not None:
            half_h = 0.5 * mesh.lengths
            self.src_x = np.empty((mesh.n_elements, mesh.k + 1, mesh.k + 3))
            self.src_w = np.empty_like(self.src_x)
            for idx, ops in self.ws.pairs():
                self.src_x[idx] = mesh.centers[idx][:, None, None] + \
                    half_h[idx][:, None, None] * ops.quad_y[None, :, :]
                self.src_w[idx] = half_h[idx][:, None, None] * ops.quad_w[None, :, :]

    def tendency(self, values: np.ndarray, t: float) -> np.ndarray:
        mesh = self.mesh
        traces = np.empty((mesh.n_elements, mesh.k + 2))
        for idx, ops in self.ws.pairs():
            c = (values[idx] * self.scale[idx][:, None]) @ ops.mass_inv.T
            traces[idx] = c @ ops.trace.T
        # element interfaces 0..N: upwind between neighbour traces
        n = mesh.n_elements
        u_minus = np.empty(n + 1)
        u_plus = np.empty(n + 1)
        u_minus[1:] = traces[:, -1]
        u_plus[:-1] = traces[:, 0]
        if mesh.bc == BoundaryCondition.PERIODIC:
            u_minus[0] = traces[-1, -1]
            u_plus[-1] = traces[0, 0]
        else:
            u_minus[0] = 0.0
            u_plus[-1] = 0.0
        f_if = self.alpha_interface * np.where(self.upwind_left, u_minus, u_plus)
        flux = np.empty((n, mesh.k + 2))
        flux[:, 0] = f_if[:-1]
        flux[:, -1] = f_if[1:]
        flux[:, 1:-1] = self.alpha_interior * traces[:, 1:-1]
        out = flux[:, :-1] - flux[:, 1:]
        if self.problem.source is not None:
            g = np.asarray(self.problem.source(self.src_x, t), dtype=float)
            out += np.einsum("ijq,ijq->ij", g, self.src_w)
        return out


def apply_L(state: SvState, problem: Problem, t: float | None = None) -> np.ndarray:
    """Tendency of the CV integrals at stage time t (defaults to state.t)."""
    op = SpatialOperator(state.mesh, problem)
    return op.tendency(state.values, state.t if t is None else t)


def project_initial(problem: Problem, mesh: Mesh1D, k: int) -> SvState:
    """CV integrals of u0 by (k+3)-point Gauss quadrature per control volume."""
    if k != mesh.k:
        raise ValueError(f"k={k} does not match mesh.k={mesh.k}")
    mid = 0.5 * (mesh.cv_bounds[:, :-1] + mesh.cv_bounds[:, 1:])
    half = 0.5 * mesh.cv_widths
    gy, gw = gauss_rule(k + 3)
    x = mid[..., None] + half[..., None] * gy
    vals = np.asarray(problem.u0(x), dtype=float)
    return SvState(mesh, k, half * (vals @ gw), 0.0)


def error_norms(state: SvState, problem: Problem, t: float | None = None) -> tuple[float, float]:
    """(L2, Linf) error against problem.u_exact at time t."""
    if problem.u_exact is None:
        raise ValueError("problem has no exact solution")
    t = state.t if t is None else t
    mesh = state.mesh
    ws = workspace(mesh)
    coeffs = _coefficients(mesh, state.values)
    half_h = 0.5 * mesh.lengths
    l2_sq = 0.0
    linf = 0.0
    for idx, ops in ws.pairs():
        c = coeffs[idx]
        centers = mesh.centers[idx]
        half = half_h[idx]
        xq = centers[:, None, None] + half[:, None, None] * ops.quad_y[None, :, :]
        uh = np.einsum("pm,jqm->pjq", c, ops.quad_basis)
        err = uh - np.asarray(problem.u_exact(xq, t), dtype=float)
        l2_sq += float(np.sum(err * err * ops.quad_w[None, :, :] * half[:, None, None]))
        y_pts = np.unique(np.concatenate([np.linspace(-1.0, 1.0, 20), ops.y]))
        basis = legendre_vandermonde(y_pts, mesh.k)
        xs = centers[:, None] + half[:, None] * y_pts[None, :]
        us = c @ basis.T
        linf = max(linf, float(np.max(np.abs(us - problem.u_exact(xs, t)))))
    return float(np.sqrt(l2_sq)), linf


def snapshot_table(state: SvState, points_per_element: int = 8) -> str:
    """Plain-text (x, u_h(x)) records sampled uniformly inside each element."""
    if points_per_element < 2:
        raise ValueError("need at least 2 sample points per element")
    recon = reconstruct(state)
    mesh = state.mesh
    y = np.linspace(-1.0, 1.0, points_per_element)
    basis = legendre_vandermonde(y, mesh.k)
    lines = ["# x u_h"]
    for i in range(mesh.n_elements):
        xs = mesh.centers[i] + 0.5 * mesh.lengths[i] * y
        us = basis @ recon.coeffs[i]
        lines.extend(f"{x:.15g} {u:.15g}" for x, u in zip(xs, us))
    return "\n".join(lines)


def materialize_operator(mesh: Mesh1D, problem: Problem) -> np.ndarray:
    """Dense matrix of the linear part of the tendency (source excluded)."""
    op = SpatialOperator(mesh, Problem(u0=problem.u0, alpha=problem.alpha))
    n = mesh.n_elements * (mesh.k + 1)
    mat = np.empty((n, n))
    basis = np.zeros((mesh.n_elements, mesh.k + 1))
    flat = basis.ravel()
    for j in range(n):
        flat[j] = 1.0
        mat[:, j] = op.tendency(basis, 0.0).ravel()
        flat[j] = 0.0
    return mat
