"""Deterministic synthetic fields for demos and verification runs."""

from __future__ import annotations

import numpy as np

from .grid import DiskGrid, GridFunction
from .neumann import DilatationField

__all__ = ["random_smooth_field", "random_dilatation", "bump_field"]


def random_smooth_field(
    grid: DiskGrid, seed: int, modes: int = 3, max_freq: int = 2
) -> GridFunction:
    """Band-limited random complex field, sup-normalized to 1 on the mask.

    A fixed seed gives a reproducible field: a short sum of plane waves
    exp(i pi (fx x + fy y)) with Gaussian coefficients and integer
    frequencies bounded by max_freq.
    """
    rng = np.random.default_rng(seed)
    z = grid.centers
    vals = np.zeros_like(z)
    for _ in range(modes):
        coef = rng.normal() + 1j * rng.normal()
        fx = int(rng.integers(-max_freq, max_freq + 1))
        fy = int(rng.integers(-max_freq, max_freq + 1))
        vals = vals + coef * np.exp(1j * np.pi * (fx * z.real + fy * z.imag))
    vals = np.where(grid.mask, vals, 0.0)
    sup = np.max(np.abs(vals[grid.mask]))
    if sup == 0.0:  # all-zero draw: fall back to a constant
        return GridFunction.constant(grid, 1.0)
    return GridFunction(grid, vals / sup)


def random_dilatation(grid: DiskGrid, k: float, seed: int, modes: int = 3) -> DilatationField:
    """Random smooth dilatation with ||mu||_inf = k exactly (up to rounding)."""
    g = random_smooth_field(grid, seed, modes)
    vals = k * g.values
    mag = np.abs(vals)
    vals = np.where(mag > k, vals * (k / np.where(mag > 0, mag, 1.0)), vals)
    return DilatationField(GridFunction(grid, vals), k)


def bump_field(grid: DiskGrid, order: int = 3) -> GridFunction:
    """Radial bump (1 - r^2)^order, C^{order-1} across the circle."""
    r2 = np.abs(grid.centers) ** 2
    vals = np.where(grid.mask, (1.0 - r2) ** order, 0.0).astype(complex)
    return GridFunction(grid, vals)
