import itertools
import math

import numpy as np
import pytest

from rksv.mesh import (BoundaryCondition, SubdivisionRule, mesh_table, perturbed_mesh,
                       splitmix64_stream, uniform_mesh)


def test_uniform_lsv_k1_splits_at_centers():
    mesh = uniform_mesh(0.0, 2.0 * np.pi, 4, SubdivisionRule.LSV, 1,
                        BoundaryCondition.PERIODIC)
    assert np.allclose(mesh.lengths, np.pi / 2.0)
    assert np.allclose(mesh.cv_bounds[:, 1], mesh.centers)


def test_uniform_rrsv_k1_interior_point():
    mesh = uniform_mesh(0.0, 1.0, 2, SubdivisionRule.RRSV, 1,
                        BoundaryCondition.INFLOW_ZERO)
    local = (mesh.cv_bounds[:, 1] - mesh.centers) * 2.0 / mesh.lengths
    assert np.allclose(local, -1.0 / 3.0, atol=1e-15)


def test_uniform_rrsv_k2_interior_points():
    mesh = uniform_mesh(0.0, 1.0, 2, SubdivisionRule.RRSV, 2, BoundaryCondition.PERIODIC)
    local = (mesh.cv_bounds[:, 1:3] - mesh.centers[:, None]) * 2.0 / mesh.lengths[:, None]
    r6 = math.sqrt(6.0)
    assert np.allclose(local, [(-1.0 - r6) / 5.0, (-1.0 + r6) / 5.0], atol=1e-14)


def test_uniform_rejects_bad_input():
    with pytest.raises(ValueError):
        uniform_mesh(0.0, 1.0, 1, SubdivisionRule.LSV, 1, BoundaryCondition.PERIODIC)
    with pytest.raises(ValueError):
        uniform_mesh(1.0, 0.0, 4, SubdivisionRule.LSV, 1, BoundaryCondition.PERIODIC)
    with pytest.raises(ValueError):
        uniform_mesh(0.0, 1.0, 4, SubdivisionRule.LSV, 0, BoundaryCondition.PERIODIC)


@pytest.mark.parametrize("rule,k", list(itertools.product(
    (SubdivisionRule.LSV, SubdivisionRule.RRSV), (1, 2, 3, 4))))
def test_cvs_tile_each_element(rule, k):
    mesh = uniform_mesh(-1.0, 3.0, 7, rule, k, BoundaryCondition.PERIODIC)
    assert np.max(np.abs(mesh.cv_widths.sum(axis=1) - mesh.lengths)) < 1e-14


@pytest.mark.parametrize("rule", (SubdivisionRule.LSV, SubdivisionRule.RRSV))
def test_affine_map_consistency(rule):
    from rksv.mesh import reference_interior_points

    mesh = perturbed_mesh(16, 3, rule, 3, BoundaryCondition.PERIODIC)
    ref = np.concatenate([[-1.0], reference_interior_points(rule, 3), [1.0]])
    for i in (0, 5, 15):
        assert np.max(np.abs(mesh.reference_nodes(i) - ref)) < 1e-14


def test_perturbed_endpoints_exact_and_deterministic():
    a = perturbed_mesh(32, 1, SubdivisionRule.LSV, 1, BoundaryCondition.PERIODIC)
    b = perturbed_mesh(32, 1, SubdivisionRule.LSV, 1, BoundaryCondition.PERIODIC)
    assert a.boundaries[0] == 0.0 and a.boundaries[-1] == 2.0 * np.pi
    assert np.array_equal(a.boundaries, b.boundaries)
    assert np.array_equal(a.cv_bounds, b.cv_bounds)
    c = perturbed_mesh(32, 2, SubdivisionRule.LSV, 1, BoundaryCondition.PERIODIC)
    assert not np.array_equal(a.boundaries, c.boundaries)


def test_perturbed_amplitude_bound():
    n = 32
    mesh = perturbed_mesh(n, 1, SubdivisionRule.LSV, 1, BoundaryCondition.PERIODIC)
    drift = mesh.boundaries - 2.0 * np.pi * np.arange(n + 1) / n
    assert np.max(np.abs(drift)) <= 1.0 / (100.0 * n)
    assert np.all(np.diff(mesh.boundaries) > 0)


def test_perturbed_rejects_small_n():
    with pytest.raises(ValueError):
        perturbed_mesh(3, 1, SubdivisionRule.LSV, 1, BoundaryCondition.PERIODIC)


def test_rsv_adaptive_orientation_follows_sign_of_alpha():
    mesh = uniform_mesh(0.0, 2.0 * np.pi, 16, SubdivisionRule.RSV_ADAPTIVE, 2,
                        BoundaryCondition.PERIODIC, alpha=np.sin)
    inside_pos = (mesh.boundaries[:-1] > 0) & (mesh.boundaries[1:] < np.pi)
    inside_neg = (mesh.boundaries[:-1] > np.pi) & (mesh.boundaries[1:] < 2.0 * np.pi)
    assert not mesh.left_oriented[inside_pos].any()
    assert mesh.left_oriented[inside_neg].all()
    # left-oriented elements use the mirrored Radau points
    left = np.nonzero(mesh.left_oriented)[0][0]
    right = np.nonzero(~mesh.left_oriented)[0][0]
    assert np.allclose(mesh.reference_nodes(left), -mesh.reference_nodes(right)[::-1])


def test_rsv_adaptive_sign_change_falls_back_to_right():
    # boundary exactly at pi: the downward crossing lands inside one element
    mesh = uniform_mesh(0.5, 2.0 * np.pi - 0.5, 5, SubdivisionRule.RSV_ADAPTIVE, 1,
                        BoundaryCondition.INFLOW_ZERO, alpha=np.sin)
    a = np.sin(mesh.boundaries)
    straddle = (a[:-1] > 0) & (a[1:] < 0)
    assert straddle.any()
    assert not mesh.left_oriented[straddle].any()


def test_rsv_adaptive_requires_alpha():
    with pytest.raises(ValueError):
        uniform_mesh(0.0, 1.0, 4, SubdivisionRule.RSV_ADAPTIVE, 1,
                     BoundaryCondition.PERIODIC)


def test_splitmix64_range_and_determinism():
    s1 = splitmix64_stream(42)
    s2 = splitmix64_stream(42)
    vals = [next(s1) for _ in range(1000)]
    assert vals == [next(s2) for _ in range(1000)]
    assert all(0.0 < v < 1.0 for v in vals)


def test_mesh_table_lists_every_element():
    mesh = uniform_mesh(0.0, 1.0, 5, SubdivisionRule.LSV, 2, BoundaryCondition.PERIODIC)
    text = mesh_table(mesh)
    lines = text.splitlines()
    assert len(lines) == 6
    assert lines[1].startswith("0 0 ")
    assert f"{mesh.cv_bounds[3, 1]:.15g}" in lines[4]


def test_regularity_ratio_reported():
    mesh = perturbed_mesh(16, 5, SubdivisionRule.RRSV, 2, BoundaryCondition.PERIODIC)
    assert mesh.regularity_ratio >= 1.0
    assert mesh.regularity_ratio < 1.1
