import numpy as np
import pytest

from rksv.mesh import BoundaryCondition, SubdivisionRule, uniform_mesh
from rksv.sv_space import SvState, workspace


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_coeffs(rng, mesh):
    return rng.uniform(-1.0, 1.0, size=(mesh.n_elements, mesh.k + 1))


def periodic_mesh(n, rule, k):
    return uniform_mesh(0.0, 2.0 * np.pi, n, rule, k, BoundaryCondition.PERIODIC)


def state_from_coeffs(mesh, coeffs):
    """SvState whose CV integrals are the exact integrals of the given polynomial."""
    values = np.empty_like(coeffs)
    for idx, ops in workspace(mesh).pairs():
        values[idx] = 0.5 * mesh.lengths[idx][:, None] * (coeffs[idx] @ ops.mass.T)
    return SvState(mesh, mesh.k, values, 0.0)


BOTH_RULES = (SubdivisionRule.LSV, SubdivisionRule.RRSV)
