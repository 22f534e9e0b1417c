"""Rebuilding the mapping from a solved dilatation and its asymptotics.

With omega the solved field and p the pole parameter, the exterior-variable
map and the disk map are

    psi(w) = w/(1 - p w) + T[omega](w),        f(z) = psi(1/z),

so f(z) = 1/(z - p) + T[omega](1/z). The first-order (small-k) surrogate
replaces omega by the source term alone, giving the single-quadrature
representation

    f(z) ~ 1/(z - p) - (1/pi) iint z mu(zeta) / [(1-p zeta)^2 (z zeta - 1)] dA,

with the truncation gap controlled by c * k^2 where c depends only on the
cutoff k0 (budget_c). deviation_bound evaluates the corresponding explicit
bound on |f(z) - 1/(z-p)|, and pointwise_extremal_dilatation constructs the
unimodular-times-k field that saturates it at a chosen point.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grid import DiskGrid, GridFunction, build_grid
from .neumann import (
    DilatationField,
    NeumannSolution,
    as_pole_value,
    cpq_constant,
    solve_beltrami,
)
from .transforms import TransformConfig, cauchy_transform

__all__ = [
    "ReconstructedMap",
    "AsymptoticBudget",
    "reconstruct_psi",
    "reconstruct_f",
    "first_order_map",
    "budget_c",
    "deviation_bound",
    "pointwise_extremal_dilatation",
    "tune_extremal_phase",
    "numerical_fprime",
    "FAR_FIELD_POINT",
]

# |w| used to realize f(0) as the limit of psi at infinity; the principal
# part dominates there and the neglected tail is O(1/|w|).
FAR_FIELD_POINT = 1e3


def reconstruct_psi(sol: NeumannSolution, p, z: complex) -> complex:
    """psi(z) = z/(1 - p z) + T[omega](z); rejects the principal-part pole."""
    p = as_pole_value(p)
    z = complex(z)
    if p > 0.0 and abs(z - 1.0 / p) < 1e-14:
        raise ValueError("z coincides with the principal-part pole 1/p")
    return z / (1.0 - p * z) + cauchy_transform(sol.omega, z)


def reconstruct_f(sol: NeumannSolution, p, z: complex) -> complex:
    """f(z) = 1/(z - p) + T[omega](1/z) = psi(1/z).

    z = p is the pole and is rejected. z = 0 is realized as the limit of
    psi at infinity, evaluated at |w| = FAR_FIELD_POINT.
    """
    p = as_pole_value(p)
    z = complex(z)
    if abs(z - p) < 1e-14:
        raise ValueError("z coincides with the pole p")
    if z == 0.0:
        return reconstruct_psi(sol, p, complex(FAR_FIELD_POINT))
    return reconstruct_psi(sol, p, 1.0 / z)


class ReconstructedMap:
    """Evaluation wrapper around a solved field: read-through cached psi/f."""

    def __init__(self, solution: NeumannSolution, p):
        self.p = as_pole_value(p)
        self.solution = solution
        self._cache: dict[complex, complex] = {}

    def psi(self, w: complex) -> complex:
        w = complex(w)
        hit = self._cache.get(w)
        if hit is None:
            hit = reconstruct_psi(self.solution, self.p, w)
            self._cache[w] = hit
        return hit

    def psi_remainder(self, w: complex) -> complex:
        """psi(w) - w/(1 - p w) = T[omega](w); finite at the principal-part pole."""
        return cauchy_transform(self.solution.omega, complex(w))

    def f(self, z: complex) -> complex:
        z = complex(z)
        if abs(z - self.p) < 1e-14:
            raise ValueError("z coincides with the pole p")
        if z == 0.0:
            return self.psi(complex(FAR_FIELD_POINT))
        return self.psi(1.0 / z)


def first_order_map(mu: DilatationField, p, z: complex) -> complex:
    """Principal part plus the single first-order quadrature.

    The kernel cell containing 1/z is skipped when it falls on the mask
    (principal-value sense for evaluation points with 1/z on the support).
    """
    p = as_pole_value(p)
    z = complex(z)
    if abs(z - p) < 1e-14:
        raise ValueError("z coincides with the pole p")
    grid = mu.grid
    zc = grid.masked_centers
    w = mu.mu.masked_values
    if z != 0.0:
        idx = grid.cell_index(1.0 / z)
        if idx is not None and grid.mask[idx]:
            keep = np.abs(zc - grid.centers[idx]) > 0.0
            zc, w = zc[keep], w[keep]
    kern = z * w / ((1.0 - p * zc) ** 2 * (z * zc - 1.0))
    return complex(1.0 / (z - p) - grid.cell_area / np.pi * np.sum(kern))


@dataclass(frozen=True)
class AsymptoticBudget:
    """Truncation budget |gap| <= c k^2, valid for k < k0 < 1."""

    k: float
    k0: float
    c: float

    def __post_init__(self):
        if not 0.0 <= self.k < self.k0 < 1.0:
            raise ValueError("need k < k0 < 1")
        if self.c <= 0.0:
            raise ValueError("c must be positive")

    @property
    def gap_bound(self) -> float:
        return self.c * self.k * self.k


@lru_cache(maxsize=8)
def _default_grid(n: int) -> DiskGrid:
    return build_grid(n)


@lru_cache(maxsize=16)
def _holder_sup(n: int, q: float) -> float:
    """sup_z (sum_{cells != self} |c - z|^(-s) h^2)^(1/s), 1/q + 1/s = 1.

    The sup is taken over a radial-angular z lattice covering |z| <= 2,
    with the same self-cell skip rule as the Cauchy oracle.
    """
    grid = _default_grid(n)
    s = q / (q - 1.0)
    zc = grid.masked_centers
    best = 0.0
    radii = np.linspace(0.0, 2.0, 21)
    for r in radii:
        angles = np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False) if r > 0 else [0.0]
        for t in angles:
            z = r * np.exp(1j * t)
            d = np.abs(zc - z)
            idx = grid.cell_index(z)
            if idx is not None and grid.mask[idx]:
                d = d[np.abs(zc - grid.centers[idx]) > 0.0]
            val = float(np.sum(grid.cell_area / d**s) ** (1.0 / s))
            best = max(best, val)
    return best


def budget_c(p, q: float, k0: float, hq: float, grid: DiskGrid | None = None) -> float:
    """The truncation-budget constant c = C'(p, q) hq^2 / (1 - k0 hq).

    C'(p, q) is the conservative numerical constant
    (1/pi) * C(p, q) * holder_sup, with holder_sup the worst-case conjugate
    Hoelder factor of the transform kernel over |z| <= 2 on the given grid.
    """
    p = as_pole_value(p)
    if k0 <= 0.0:
        raise ValueError("k0 must be positive (k < k0 is required)")
    if k0 * hq >= 1.0:
        raise ValueError(f"non-contractive budget: k0 * ||H||_q = {k0 * hq} >= 1")
    n = (grid or _default_grid(256)).n
    c_prime = cpq_constant(p, q) * _holder_sup(n, float(q)) / np.pi
    return float(c_prime * hq * hq / (1.0 - k0 * hq))


def deviation_bound(
    mu_k: float, p, z: complex, c: float, grid: DiskGrid | None = None
) -> float:
    """Explicit bound (k/pi) iint |z| / (|1-p zeta|^2 |z zeta - 1|) dA + c k^2."""
    p = as_pole_value(p)
    z = complex(z)
    if abs(z - p) < 1e-14:
        raise ValueError("z coincides with the pole p")
    grid = grid or _default_grid(256)
    zc = grid.masked_centers
    if z != 0.0:
        idx = grid.cell_index(1.0 / z)
        if idx is not None and grid.mask[idx]:
            zc = zc[np.abs(zc - grid.centers[idx]) > 0.0]
    integ = np.sum(
        abs(z) / (np.abs(1.0 - p * zc) ** 2 * np.abs(z * zc - 1.0))
    ) * grid.cell_area
    return float(mu_k / np.pi * integ + c * mu_k * mu_k)


def pointwise_extremal_dilatation(
    z: complex, p, k: float, theta: float, grid: DiskGrid | None = None
) -> DilatationField:
    """|mu| = k field saturating the pointwise deviation bound at z.

    mu(zeta) = k e^{i theta} (zeta - z)/|zeta - z| * ((1-p zeta)/|1-p zeta|)^2,
    with the unimodular direction factor set to 1 on a cell whose center
    coincides with z.
    """
    p = as_pole_value(p)
    if not 0.0 <= k < 1.0:
        raise ValueError("k must lie in [0, 1)")
    z = complex(z)
    grid = grid or _default_grid(256)
    zeta = grid.centers
    d = zeta - z
    ad = np.abs(d)
    direction = np.where(ad > 0.0, d / np.where(ad > 0.0, ad, 1.0), 1.0)
    u = 1.0 - p * zeta
    mu_vals = k * np.exp(1j * theta) * direction * (u / np.abs(u)) ** 2
    return DilatationField(GridFunction(grid, mu_vals), k)


def tune_extremal_phase(
    z: complex,
    p,
    k: float,
    grid: DiskGrid | None = None,
    cfg: TransformConfig = TransformConfig(),
    q: float = 2.0,
    n_theta: int = 4096,
    tol: float = 1e-8,
    max_terms: int = 64,
) -> tuple[float, float]:
    """Phase theta in [0, 2 pi) maximizing the solved deviation at z.

    Rotating the extremal field by e^{i theta} multiplies the i-th term of
    the solution by e^{i i theta}, so a single solve at theta = 0 yields the
    deviation |sum_i e^{i i theta} T[phi_i](z)| for every theta; the maximum
    is located on a uniform theta grid. Returns (theta, deviation).
    """
    grid = grid or _default_grid(256)
    base = pointwise_extremal_dilatation(z, p, k, 0.0, grid)
    sol = solve_beltrami(base, p, q=q, tol=tol, max_terms=max_terms, cfg=cfg)
    t_terms = np.array([cauchy_transform(t, z) for t in sol.terms])
    thetas = 2.0 * np.pi * np.arange(n_theta) / n_theta
    orders = np.arange(1, len(t_terms) + 1)
    dev = np.abs(np.exp(1j * np.outer(thetas, orders)) @ t_terms)
    best = int(np.argmax(dev))
    return float(thetas[best]), float(dev[best])


def numerical_fprime(f, z: complex, step: float = 1e-4) -> complex:
    """Centered difference derivative of a callable map at z."""
    z = complex(z)
    return (f(z + step) - f(z - step)) / (2.0 * step)
