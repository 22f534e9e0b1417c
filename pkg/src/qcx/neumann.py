"""Successive-approximation solver for the Beltrami-type integral equation.

For a dilatation field mu supported on the closed unit disk with
||mu||_inf <= k < 1 and a pole parameter p in [0, 1), the unknown
omega = dbar(psi) satisfies

    omega = mu/(1 - p z)^2 + mu H[omega].

The solution is built from the term sequence

    phi_1 = mu/(1 - p z)^2,      phi_i = mu H[phi_{i-1}],

whose partial sums converge geometrically whenever the contraction factor
M = ||H||_q ||mu||_inf is below 1; each term obeys the a-priori bound
||phi_i||_q <= C(p, q) ||H||_q^{i-1} ||mu||_inf^i with the explicit constant
C(p, q) implemented in cpq_constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import DiskGrid, GridFunction, norm
from .transforms import TransformConfig, beurling_transform, operator_norm_bound

__all__ = [
    "PoleParam",
    "DilatationField",
    "NeumannSolution",
    "NonContractiveError",
    "MaxTermsExceededError",
    "as_pole_value",
    "cpq_constant",
    "contraction_factor",
    "source_term",
    "term_norm_bound",
    "solve_beltrami",
]


class NonContractiveError(ValueError):
    """Raised when ||H||_q * ||mu||_inf >= 1: the iteration has no guarantee."""


class MaxTermsExceededError(RuntimeError):
    """Raised when max_terms is reached before the term norms drop below tol.

    Carries the partial solution in the `solution` attribute.
    """

    def __init__(self, message: str, solution: "NeumannSolution"):
        super().__init__(message)
        self.solution = solution


@dataclass(frozen=True)
class PoleParam:
    """Pole location p in [0, 1) of the principal part 1/(z - p)."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p < 1.0:
            raise ValueError("p must lie in [0, 1)")

    def __float__(self) -> float:
        return float(self.p)


def as_pole_value(p) -> float:
    """Accept a PoleParam or a plain float, validate, return the float."""
    v = float(p)
    if not 0.0 <= v < 1.0:
        raise ValueError("p must lie in [0, 1)")
    return v


class DilatationField:
    """A grid function mu with sup norm at most k < 1, supported on the disk."""

    __slots__ = ("mu", "k")

    def __init__(self, mu: GridFunction, k: float):
        k = float(k)
        if not 0.0 <= k < 1.0:
            raise ValueError("k must lie in [0, 1)")
        sup = norm(mu, np.inf)
        if sup > k * (1.0 + 1e-12) + 1e-300:
            raise ValueError(f"||mu||_inf = {sup} exceeds declared bound k = {k}")
        self.mu = mu
        self.k = k

    @property
    def grid(self) -> DiskGrid:
        return self.mu.grid

    @classmethod
    def constant(cls, grid: DiskGrid, value: complex) -> "DilatationField":
        """mu identically equal to `value` on the masked disk."""
        return cls(GridFunction.constant(grid, value), abs(complex(value)))


@dataclass
class NeumannSolution:
    """Terms, norms and partial-sum field of the successive approximation."""

    terms: list[GridFunction]
    term_norms: list[float]
    omega: GridFunction
    q: float
    M: float
    converged: bool
    residual: float
    p: float = 0.0


def cpq_constant(p, q: float = 2.0) -> float:
    """The source-term norm constant C(p, q).

    Closed form for 0 < p < 1:

        C(p, q) = ( (2 pi / p^2) [ (1-p)^(2-2q)/(2-2q)
                                   - (1-p)^(1-2q)/(1-2q)
                                   + 1/((1-2q)(2-2q)) ] )^(1/q)

    which equals (2 pi integral_0^1 r (1-pr)^(-2q) dr)^(1/q). For p below
    1e-6 the p -> 0 limit pi^(1/q) is returned. At q = 2 the closed form
    collapses to [pi (3-p) / (3 (1-p)^3)]^(1/2).
    """
    p = as_pole_value(p)
    q = float(q)
    if q < 2.0:
        raise ValueError("q must satisfy q >= 2")
    if p <= 1e-6:
        return float(np.pi ** (1.0 / q))
    u = 1.0 - p
    bracket = (
        u ** (2.0 - 2.0 * q) / (2.0 - 2.0 * q)
        - u ** (1.0 - 2.0 * q) / (1.0 - 2.0 * q)
        + 1.0 / ((1.0 - 2.0 * q) * (2.0 - 2.0 * q))
    )
    return float((2.0 * np.pi / (p * p) * bracket) ** (1.0 / q))


def contraction_factor(mu: DilatationField, q: float = 2.0, a_q: float | None = None) -> float:
    """M = ||H||_q * ||mu||_inf. Values >= 1 flag a non-contractive field."""
    return operator_norm_bound(q, a_q) * norm(mu.mu, np.inf)


def source_term(mu: DilatationField, p) -> GridFunction:
    """First term phi_1 = mu / (1 - p zeta)^2, supported where mu is."""
    p = as_pole_value(p)
    grid = mu.grid
    return GridFunction(grid, mu.mu.values / (1.0 - p * grid.centers) ** 2)


def term_norm_bound(i: int, p, q: float, k: float, h_norm: float) -> float:
    """A-priori bound C(p,q) * h_norm^(i-1) * k^i on the i-th term norm."""
    if i < 1:
        raise ValueError("term index must satisfy i >= 1")
    if not 0.0 <= k < 1.0:
        raise ValueError("k must lie in [0, 1)")
    return cpq_constant(p, q) * h_norm ** (i - 1) * k**i


def solve_beltrami(
    mu: DilatationField,
    p,
    q: float = 2.0,
    tol: float = 1e-8,
    max_terms: int = 64,
    cfg: TransformConfig = TransformConfig(),
    a_q: float | None = None,
) -> NeumannSolution:
    """Iterate phi_i = mu H[phi_{i-1}] from phi_1 = mu/(1-p z)^2 and sum.

    Terms are appended until ||phi_i||_q <= tol (a term that is exactly zero
    also terminates the series) or max_terms is reached, in which case
    MaxTermsExceededError is raised with the partial solution attached.
    The returned residual is ||omega - phi_1 - mu H[omega]||_q and the
    solution counts as converged when it does not exceed 10 * tol.

    Parameters
    ----------
    mu : DilatationField
        Complex dilatation, ||mu||_inf <= k < 1.
    p : float or PoleParam
        Pole parameter of the principal part.
    q : float
        Norm exponent, q >= 2. Only q = 2 has a built-in ||H||_q; larger
        exponents require `a_q`.
    tol, max_terms : stopping rule (see above).
    cfg : TransformConfig
        Beurling-transform settings shared by the iteration and the
        residual check.
    """
    p = as_pole_value(p)
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if max_terms < 1:
        raise ValueError("max_terms must be >= 1")
    M = contraction_factor(mu, q, a_q)
    if M >= 1.0:
        raise NonContractiveError(
            f"non-contractive dilatation: ||H||_q * ||mu||_inf = {M} >= 1"
        )

    phi = source_term(mu, p)
    terms = [phi]
    term_norms = [norm(phi, q)]
    omega = phi
    exhausted = False
    while term_norms[-1] > tol:
        if len(terms) >= max_terms:
            exhausted = True
            break
        phi = mu.mu * beurling_transform(phi, cfg)
        terms.append(phi)
        term_norms.append(norm(phi, q))
        omega = omega + phi

    res_field = omega - terms[0] - mu.mu * beurling_transform(omega, cfg)
    residual = norm(res_field, q)
    sol = NeumannSolution(
        terms=terms,
        term_norms=term_norms,
        omega=omega,
        q=q,
        M=M,
        converged=(not exhausted) and residual <= 10.0 * tol,
        residual=residual,
        p=p,
    )
    if exhausted:
        raise MaxTermsExceededError(
            f"max terms exceeded: {max_terms} terms, last norm {term_norms[-1]:.3e} > tol {tol:.3e}",
            sol,
        )
    return sol
