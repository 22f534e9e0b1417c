"""Masked uniform grid over the closed unit disk and grid-function algebra.

The grid covers the square [-1, 1]^2 with n cells per axis (n even, >= 8),
spacing h = 2/n, cell centers at ((i+1/2)h - 1, (j+1/2)h - 1). A cell belongs
to the disk mask iff its center satisfies |c| <= 1; because centers sit at
half-integer multiples of h, no center ever lands exactly on |z| = 1.

Grid functions are complex fields supported on the masked cells; everything
downstream (singular transforms, L^q norms, quadrature) consumes them.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DiskGrid",
    "GridFunction",
    "build_grid",
    "integrate",
    "norm",
    "dump_csv",
    "load_csv",
]


@dataclass(frozen=True)
class DiskGrid:
    """Uniform Cartesian grid on [-1,1]^2 with a unit-disk cell-center mask."""

    n: int
    h: float
    centers: np.ndarray = field(repr=False)  # (n, n) complex cell centers
    mask: np.ndarray = field(repr=False)     # (n, n) bool, |center| <= 1

    @property
    def cell_area(self) -> float:
        return self.h * self.h

    @property
    def masked_centers(self) -> np.ndarray:
        """Centers of masked cells, flattened in row-major order."""
        return self.centers[self.mask]

    def cell_index(self, z: complex) -> tuple[int, int] | None:
        """Indices of the cell containing z, or None if z is off the square."""
        ix = int(np.floor((z.real + 1.0) / self.h))
        iy = int(np.floor((z.imag + 1.0) / self.h))
        if 0 <= ix < self.n and 0 <= iy < self.n:
            return ix, iy
        return None

    def __eq__(self, other) -> bool:
        return isinstance(other, DiskGrid) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("DiskGrid", self.n))


def build_grid(n: int) -> DiskGrid:
    """Build the masked disk grid with n cells per axis.

    n must be even and at least 8. Deterministic for fixed n.
    """
    if n < 8 or n % 2 != 0:
        raise ValueError("n must be even and >= 8")
    h = 2.0 / n
    axis = (np.arange(n) + 0.5) * h - 1.0
    x, y = np.meshgrid(axis, axis, indexing="ij")
    centers = x + 1j * y
    mask = np.abs(centers) <= 1.0
    centers.setflags(write=False)
    mask.setflags(write=False)
    return DiskGrid(n=n, h=h, centers=centers, mask=mask)


class GridFunction:
    """Complex field on the masked cells of a DiskGrid.

    Values are stored on the full (n, n) array and forced to zero off the
    mask, so off-support evaluation is zero by construction. Instances are
    immutable; arithmetic returns new objects.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: DiskGrid, values: np.ndarray):
        values = np.asarray(values, dtype=complex)
        if values.shape != (grid.n, grid.n):
            raise ValueError(
                f"values shape {values.shape} does not match grid ({grid.n}, {grid.n})"
            )
        values = np.where(grid.mask, values, 0.0)
        values.setflags(write=False)
        self.grid = grid
        self.values = values

    @classmethod
    def from_callable(cls, grid: DiskGrid, fn) -> "GridFunction":
        """Sample fn(zeta) at the masked cell centers (vectorized call)."""
        return cls(grid, np.asarray(fn(grid.centers), dtype=complex))

    @classmethod
    def constant(cls, grid: DiskGrid, value: complex) -> "GridFunction":
        return cls(grid, np.full((grid.n, grid.n), value, dtype=complex))

    @property
    def masked_values(self) -> np.ndarray:
        return self.values[self.grid.mask]

    def _check_same_grid(self, other: "GridFunction") -> None:
        if other.grid != self.grid:
            raise ValueError("grid mismatch")

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self._check_same_grid(other)
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        self._check_same_grid(other)
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, other) -> "GridFunction":
        if isinstance(other, GridFunction):
            self._check_same_grid(other)
            return GridFunction(self.grid, self.values * other.values)
        return GridFunction(self.grid, self.values * complex(other))

    __rmul__ = __mul__

    def __neg__(self) -> "GridFunction":
        return GridFunction(self.grid, -self.values)


def integrate(f: GridFunction) -> complex:
    """Midpoint quadrature sum f(c) h^2 over the masked cells."""
    return complex(np.sum(f.masked_values) * f.grid.cell_area)


def norm(f: GridFunction, q: float) -> float:
    """L^q norm of f over the masked disk: (sum |f|^q h^2)^(1/q), or sup for q=inf."""
    if q == np.inf:
        m = f.masked_values
        return float(np.max(np.abs(m))) if m.size else 0.0
    q = float(q)
    if q < 1.0:
        raise ValueError("q must satisfy q >= 1 (or q = inf)")
    a = np.abs(f.masked_values)
    return float((np.sum(a**q) * f.grid.cell_area) ** (1.0 / q))


def dump_csv(f: GridFunction, path_or_buf) -> None:
    """Write masked cells as CSV rows "x,y,re,im" (header included, row-major)."""
    own = isinstance(path_or_buf, (str, bytes))
    buf = open(path_or_buf, "w") if own else path_or_buf
    try:
        buf.write("x,y,re,im\n")
        zc = f.grid.masked_centers
        vals = f.masked_values
        for c, v in zip(zc, vals):
            buf.write(f"{c.real:.17g},{c.imag:.17g},{v.real:.17g},{v.imag:.17g}\n")
    finally:
        if own:
            buf.close()


def load_csv(grid: DiskGrid, path_or_buf) -> GridFunction:
    """Read a dump_csv file back onto `grid`.

    The row coordinates must match the grid's masked cell centers exactly
    (same n and ordering); anything else raises "grid mismatch".
    """
    own = isinstance(path_or_buf, (str, bytes))
    buf = open(path_or_buf, "r") if own else path_or_buf
    try:
        text = buf.read()
    finally:
        if own:
            buf.close()
    rows = np.loadtxt(io.StringIO(text), delimiter=",", skiprows=1, ndmin=2)
    zc = grid.masked_centers
    if rows.shape[0] != zc.size:
        raise ValueError("grid mismatch")
    coords = rows[:, 0] + 1j * rows[:, 1]
    if not np.allclose(coords, zc, rtol=0.0, atol=1e-9):
        raise ValueError("grid mismatch")
    values = np.zeros((grid.n, grid.n), dtype=complex)
    values[grid.mask] = rows[:, 2] + 1j * rows[:, 3]
    return GridFunction(grid, values)
