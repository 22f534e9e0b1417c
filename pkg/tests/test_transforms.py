"""Cauchy/Beurling transform identities, oracle agreement and calibration.

Closed forms used as calibration targets (unit-disk indicator input):
T[1_D](z) = conj(z) for |z| <= 1 and 1/z outside; H[1_D] = 0 on the open
disk and -1/z^2 outside.
"""

import numpy as np
import pytest

import qcx
from qcx.transforms import TransformConfig


def disk_one(grid):
    return qcx.GridFunction.constant(grid, 1.0)


def test_config_validation():
    with pytest.raises(ValueError, match="pad_factor"):
        TransformConfig(pad_factor=1)
    with pytest.raises(ValueError, match="method"):
        TransformConfig(method="magic")


def test_cauchy_closed_forms(grid256):
    one = disk_one(grid256)
    assert qcx.cauchy_transform(one, 0.3) == pytest.approx(0.3, abs=5e-3)
    assert qcx.cauchy_transform(one, 2.0) == pytest.approx(0.5, abs=1e-3)
    zero = qcx.GridFunction.constant(grid256, 0.0)
    assert qcx.cauchy_transform(zero, 0.7 + 0.1j) == 0.0


def test_cauchy_boundary_continuity_point(grid256):
    # conj(z) and 1/z agree at z = 1, so the transform is unambiguous there
    one = disk_one(grid256)
    assert qcx.cauchy_transform(one, 1.0) == pytest.approx(1.0, abs=5e-3)


def test_cauchy_field_matches_pointwise(grid64):
    one = disk_one(grid64)
    targets = [0.3, 2.0, -0.1 + 0.4j]
    batch = qcx.cauchy_transform_field(one, targets)
    single = [qcx.cauchy_transform(one, z) for z in targets]
    assert np.array_equal(batch, np.array(single))
    assert qcx.cauchy_transform_field(one, []).size == 0


def test_cauchy_grid_fast_equals_oracle(grid64):
    w = qcx.random_smooth_field(grid64, seed=3)
    fast = qcx.cauchy_transform_grid(w, TransformConfig(method="fast"))
    slow = qcx.cauchy_transform_grid(w, TransformConfig(method="direct-oracle"))
    assert np.max(np.abs(fast.values - slow.values)) <= 1e-10


def test_beurling_closed_forms(grid256):
    one = disk_one(grid256)
    H = qcx.beurling_transform(one)
    inner = np.abs(grid256.centers) <= 0.9
    assert np.max(np.abs(H.values[inner])) <= 5e-3
    # exterior diagnostic value via the direct p.v. oracle
    assert qcx.beurling_transform_at(one, 2.0) == pytest.approx(-0.25, abs=5e-3)
    zero = qcx.GridFunction.constant(grid256, 0.0)
    assert np.all(qcx.beurling_transform(zero).values == 0.0)


def test_beurling_fast_agrees_with_direct_oracle(grid128):
    w = qcx.random_smooth_field(grid128, seed=4)
    fast = qcx.beurling_transform(w, TransformConfig(pad_factor=2, method="fast"))
    slow = qcx.beurling_transform(w, TransformConfig(method="direct-oracle"))
    inner = np.abs(grid128.centers) <= 0.9
    gap = np.max(np.abs(fast.values - slow.values)[inner])
    assert gap <= 2e-2   # spec tolerance for the agreement check
    assert gap <= 1e-9   # the fast path reproduces the oracle exactly


def test_beurling_pad_factor_guard(grid64):
    with pytest.raises(ValueError, match="pad_factor"):
        qcx.beurling_transform(disk_one(grid64), TransformConfig(pad_factor=1))


def test_transform_linearity(grid64):
    f = qcx.random_smooth_field(grid64, seed=10)
    g = qcx.random_smooth_field(grid64, seed=11)
    a, b = 0.3 - 1.1j, 2.0 + 0.5j
    combo = qcx.beurling_transform(a * f + b * g)
    parts = a * qcx.beurling_transform(f) + b * qcx.beurling_transform(g)
    assert np.max(np.abs(combo.values - parts.values)) <= 1e-10
    z = 1.4 - 0.2j
    lhs = qcx.cauchy_transform(a * f + b * g, z)
    rhs = a * qcx.cauchy_transform(f, z) + b * qcx.cauchy_transform(g, z)
    assert abs(lhs - rhs) <= 1e-12


def test_dbar_of_cauchy_recovers_input(grid128):
    """Centered differences of z -> T[omega](z) reproduce omega away from
    the support boundary (the transform inverts d/dzbar)."""
    omega = qcx.bump_field(grid128, order=3)
    T = qcx.cauchy_transform_grid(omega)
    V, h = T.values, grid128.h
    dx = np.zeros_like(V)
    dy = np.zeros_like(V)
    dx[1:-1, :] = (V[2:, :] - V[:-2, :]) / (2 * h)
    dy[:, 1:-1] = (V[:, 2:] - V[:, :-2]) / (2 * h)
    dbar = 0.5 * (dx + 1j * dy)
    inner = np.abs(grid128.centers) <= 0.8
    assert np.max(np.abs(dbar - omega.values)[inner]) <= 5e-3


def test_beurling_is_derivative_of_cauchy(grid128):
    omega = qcx.bump_field(grid128, order=3)
    T = qcx.cauchy_transform_grid(omega)
    Hf = qcx.beurling_transform(omega)
    V, h = T.values, grid128.h
    dx = np.zeros_like(V)
    dy = np.zeros_like(V)
    dx[1:-1, :] = (V[2:, :] - V[:-2, :]) / (2 * h)
    dy[:, 1:-1] = (V[:, 2:] - V[:, :-2]) / (2 * h)
    dz = 0.5 * (dx - 1j * dy)
    inner = np.abs(grid128.centers) <= 0.8
    assert np.max(np.abs(dz - Hf.values)[inner]) <= 5e-3


def test_l2_bound_on_smooth_fields(grid256):
    for seed in (1, 2, 3):
        w = qcx.random_smooth_field(grid256, seed)
        ratio = qcx.norm(qcx.beurling_transform(w), 2) / qcx.norm(w, 2)
        assert ratio <= 1.05


def test_operator_norm_bound():
    assert qcx.operator_norm_bound(2) == 1.0
    assert qcx.operator_norm_bound(3, a_q=2.0) == 2.0
    with pytest.raises(ValueError, match="q"):
        qcx.operator_norm_bound(1.5)
    with pytest.raises(ValueError, match="A_q not configured"):
        qcx.operator_norm_bound(3)
