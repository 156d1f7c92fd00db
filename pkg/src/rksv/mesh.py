"""1D spectral-volume partitions and their control-volume subdivisions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .quadrature import gauss_legendre_nodes, right_radau_nodes

__all__ = [
    "SubdivisionRule",
    "BoundaryCondition",
    "Mesh1D",
    "reference_interior_points",
    "uniform_mesh",
    "perturbed_mesh",
    "splitmix64_stream",
    "mesh_table",
]


class SubdivisionRule(str, enum.Enum):
    """How a spectral volume is split into control volumes."""

    LSV = "lsv"             # Gauss-Legendre interior points
    RRSV = "rrsv"           # right-Radau interior points
    RSV_ADAPTIVE = "rsv"    # per-element Radau orientation from the sign of alpha


class BoundaryCondition(str, enum.Enum):
    PERIODIC = "periodic"
    INFLOW_ZERO = "inflow_zero"


def reference_interior_points(rule, k: int, left_oriented: bool = False) -> np.ndarray:
    """Interior subdivision points y_1..y_k on the reference element."""
    rule = SubdivisionRule(rule)
    if rule == SubdivisionRule.LSV:
        return gauss_legendre_nodes(k).nodes
    pts = right_radau_nodes(k + 1).nodes[:-1]
    if rule == SubdivisionRule.RSV_ADAPTIVE and left_oriented:
        return -pts[::-1]
    return pts


@dataclass(frozen=True, eq=False)
class Mesh1D:
    """Partition of [a, b] into N spectral volumes, each split into k+1 CVs.

    ``cv_bounds[i]`` holds x_{i,0} < ... < x_{i,k+1} with x_{i,0} and
    x_{i,k+1} the element boundaries; ``left_oriented[i]`` marks elements
    whose subdivision uses the mirrored (left-Radau) reference points.
    """

    rule: SubdivisionRule
    k: int
    bc: BoundaryCondition
    boundaries: np.ndarray          # (N+1,)
    cv_bounds: np.ndarray           # (N, k+2)
    left_oriented: np.ndarray       # (N,) bool
    domain: tuple[float, float] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "domain", (float(self.boundaries[0]), float(self.boundaries[-1])))
        if np.any(np.diff(self.boundaries) <= 0):
            raise ValueError("element boundaries must be strictly increasing")
        if np.any(np.diff(self.cv_bounds, axis=1) <= 0):
            raise ValueError("CV boundaries must be strictly increasing")

    @property
    def n_elements(self) -> int:
        return len(self.boundaries) - 1

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.boundaries)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.boundaries[:-1] + self.boundaries[1:])

    @property
    def cv_widths(self) -> np.ndarray:
        return np.diff(self.cv_bounds, axis=1)

    @property
    def regularity_ratio(self) -> float:
        h = self.lengths
        return float(h.max() / h.min())

    @property
    def min_cv_width(self) -> float:
        return float(self.cv_widths.min())

    def reference_nodes(self, element: int) -> np.ndarray:
        """Reference coordinates y_0..y_{k+1} used by the given element."""
        x = self.cv_bounds[element]
        h = x[-1] - x[0]
        return (x - 0.5 * (x[0] + x[-1])) * (2.0 / h)


def _resolve_orientation(rule, boundaries, alpha):
    """Per-element left/right Radau orientation for the adaptive rule."""
    n = len(boundaries) - 1
    rule = SubdivisionRule(rule)
    if rule != SubdivisionRule.RSV_ADAPTIVE:
        return np.zeros(n, dtype=bool)
    if alpha is None:
        raise ValueError("RSV_ADAPTIVE needs the coefficient alpha to orient elements")
    a_vals = np.asarray(alpha(np.asarray(boundaries, dtype=float)), dtype=float)
    a_left, a_right = a_vals[:-1], a_vals[1:]
    # right-Radau when both endpoints are >= 0 and on a genuine sign change;
    # left-Radau only for fully non-positive elements
    return (a_left <= 0.0) & (a_right <= 0.0) & ~((a_left >= 0.0) & (a_right >= 0.0))


def _build_mesh(boundaries, rule, k, bc, alpha):
    rule = SubdivisionRule(rule)
    bc = BoundaryCondition(bc)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    boundaries = np.asarray(boundaries, dtype=float)
    left = _resolve_orientation(rule, boundaries, alpha)
    h = np.diff(boundaries)
    centers = 0.5 * (boundaries[:-1] + boundaries[1:])
    y_right = np.concatenate([[-1.0], reference_interior_points(rule, k, False), [1.0]])
    cv = centers[:, None] + 0.5 * h[:, None] * y_right[None, :]
    if left.any():
        y_left = np.concatenate([[-1.0], reference_interior_points(rule, k, True), [1.0]])
        cv[left] = centers[left, None] + 0.5 * h[left, None] * y_left[None, :]
    cv[:, 0] = boundaries[:-1]
    cv[:, -1] = boundaries[1:]
    return Mesh1D(rule, k, bc, boundaries, cv, left)


def uniform_mesh(a, b, n, rule, k, bc, alpha=None) -> Mesh1D:
    """N equal spectral volumes on [a, b], subdivided per the rule."""
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    if n < 2:
        raise ValueError(f"need at least 2 elements, got {n}")
    return _build_mesh(np.linspace(a, b, n + 1), rule, k, bc, alpha)


def splitmix64_stream(seed: int):
    """Deterministic uniform (0,1) stream from the splitmix64 generator."""
    mask = (1 << 64) - 1
    state = seed & mask
    while True:
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        z ^= z >> 31
        yield ((z >> 11) + 0.5) * 2.0**-53


def perturbed_mesh(n, seed, rule, k, bc, alpha=None) -> Mesh1D:
    """Randomly perturbed partition of [0, 2*pi]: x_i = 2*pi*i/N + sin(i*pi/N)/(100N) * u_i."""
    if n < 4:
        raise ValueError(f"need at least 4 elements, got {n}")
    stream = splitmix64_stream(seed)
    i = np.arange(1, n)
    u = np.array([next(stream) for _ in i])
    boundaries = np.empty(n + 1)
    boundaries[0] = 0.0
    boundaries[-1] = 2.0 * np.pi
    boundaries[1:-1] = 2.0 * np.pi * i / n + np.sin(i * np.pi / n) / (100.0 * n) * u
    if np.any(np.diff(boundaries) <= 0):
        raise RuntimeError("perturbation broke monotonicity")  # unreachable for n >= 4
    return _build_mesh(boundaries, rule, k, bc, alpha)


def mesh_table(mesh: Mesh1D) -> str:
    """Plain-text dump: element index, boundaries, and CV boundaries."""
    lines = ["# element  x_left  x_right  cv_bounds..."]
    for i in range(mesh.n_elements):
        cvs = " ".join(f"{x:.15g}" for x in mesh.cv_bounds[i])
        lines.append(f"{i} {mesh.boundaries[i]:.15g} {mesh.boundaries[i + 1]:.15g} {cvs}")
    return "\n".join(lines)
