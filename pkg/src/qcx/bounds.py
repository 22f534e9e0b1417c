"""Distortion inequalities, sufficient-condition tests and extremal maps.

The central sharp inequality for residue-1 maps with pole at p in [0,1) is

    |f'(z) + 1/(z-p)^2| <= 1 / ((1-p^2)(1-|z|^2)),   z in the unit disk,

attained at a prescribed point z0 by the closed-form family built in
extremal_distortion_map, whose coefficients also saturate the area-theorem
constraint sum n |b_n|^2 <= 1/(1-p^2)^2 (chichra_sum). For maps with a
k-quasiconformal extension the right-hand side scales by k
(distortion_bound_qc). krzyz_test and pole_condition_test implement the two
pointwise sufficient conditions for such an extension to exist; both are
sampled checks and are reported as such.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coefficients import LaurentCoefficients
from .neumann import as_pole_value

__all__ = [
    "BoundReport",
    "ClosedFormMap",
    "distortion_check",
    "distortion_bound_qc",
    "extremal_distortion_map",
    "sigma_extremal_map",
    "monomial_test_map",
    "classical_bound",
    "krzyz_test",
    "pole_condition_test",
    "chichra_sum",
]


@dataclass(frozen=True)
class BoundReport:
    """Structured record of one inequality check."""

    name: str
    lhs: float
    rhs: float
    margin: float          # rhs - lhs; >= -tolerance is a PASS
    equality: bool         # |margin| <= tolerance
    passed: bool
    witness: complex | None = None

    def to_json_dict(self) -> dict:
        w = None
        if self.witness is not None:
            w = {"re": float(self.witness.real), "im": float(self.witness.imag)}
        return {
            "name": self.name,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "margin": float(self.margin),
            "equality": bool(self.equality),
            "witness": w,
        }


def _report(name: str, lhs: float, rhs: float, witness, tol: float) -> BoundReport:
    margin = float(rhs) - float(lhs)
    return BoundReport(
        name=name,
        lhs=float(lhs),
        rhs=float(rhs),
        margin=margin,
        equality=bool(abs(margin) <= tol),
        passed=bool(margin >= -tol),
        witness=None if witness is None else complex(witness),
    )


def distortion_check(
    fprime: complex, z: complex, p, tol: float = 1e-9, max_radius: float = 0.99
) -> BoundReport:
    """Check |f'(z) + 1/(z-p)^2| against 1/((1-p^2)(1-|z|^2)) at one point.

    Points with |z| > max_radius are rejected: the right side diverges at
    the circle and numerically differentiated inputs are unreliable there.
    `tol` is the equality/pass tolerance (1e-9 suits analytic derivatives;
    quadrature-derived inputs should pass ~1e-3).
    """
    p = as_pole_value(p)
    z = complex(z)
    if abs(z) > max_radius:
        raise ValueError(f"|z| = {abs(z)} exceeds the evaluation cap {max_radius}")
    if abs(z - p) < 1e-14:
        raise ValueError("z coincides with the pole p")
    lhs = abs(complex(fprime) + 1.0 / (z - p) ** 2)
    rhs = 1.0 / ((1.0 - p * p) * (1.0 - abs(z) ** 2))
    return _report("distortion", lhs, rhs, z, tol)


def distortion_bound_qc(z: complex, p, k: float) -> float:
    """k-quasiconformal distortion bound k / ((1-p^2)(1-|z|^2))."""
    p = as_pole_value(p)
    z = complex(z)
    if abs(z) >= 1.0:
        raise ValueError("z must lie in the open unit disk")
    if not 0.0 <= k < 1.0:
        raise ValueError("k must lie in [0, 1)")
    return k / ((1.0 - p * p) * (1.0 - abs(z) ** 2))


@dataclass(frozen=True)
class ClosedFormMap:
    """Analytic map with hand-differentiated derivative.

    kinds:
      extremal_distortion: f(z) = 1/(z-p) + b0 + a * conj(z0) z / (1 - conj(z0) z),
          with a pinned so that the distortion inequality is an equality at
          z0 and the map stays univalent; |a| = (R - 1/R)/(1-p^2), R = 1/|z0|.
      sigma_extremal: the p = 0 member of the same family.
      monomial_test: f(z) = 1/(z-p) + b0 + a z^power.
    """

    kind: str
    p: float
    b0: complex = 0j
    z0: complex | None = None
    a: complex = 0j
    power: int = 1

    @property
    def k(self):
        return None

    def f(self, z: complex) -> complex:
        z = complex(z)
        if abs(z - self.p) < 1e-14:
            raise ValueError("z coincides with the pole p")
        if self.kind == "monomial_test":
            return 1.0 / (z - self.p) + self.b0 + self.a * z**self.power
        zb = np.conj(self.z0)
        return 1.0 / (z - self.p) + self.b0 + self.a * zb * z / (1.0 - zb * z)

    def fprime(self, z: complex) -> complex:
        z = complex(z)
        if abs(z - self.p) < 1e-14:
            raise ValueError("z coincides with the pole p")
        lead = -1.0 / (z - self.p) ** 2
        if self.kind == "monomial_test":
            return lead + self.a * self.power * z ** (self.power - 1)
        zb = np.conj(self.z0)
        return lead + self.a * zb / (1.0 - zb * z) ** 2

    def psi(self, w: complex) -> complex:
        """Exterior-variable form psi(w) = f(1/w)."""
        w = complex(w)
        if w == 0.0:
            raise ValueError("psi is evaluated away from w = 0")
        return self.f(1.0 / w)

    def psi_remainder(self, w: complex) -> complex:
        """psi(w) - w/(1 - p w): the tail series, finite at w = 1/p."""
        w = complex(w)
        if w == 0.0:
            raise ValueError("psi is evaluated away from w = 0")
        z = 1.0 / w
        if self.kind == "monomial_test":
            return self.b0 + self.a * z**self.power
        zb = np.conj(self.z0)
        return self.b0 + self.a * zb * z / (1.0 - zb * z)

    def laurent_coefficients(self, n_max: int) -> LaurentCoefficients:
        """Exact b_0..b_n_max of the closed form."""
        b = np.zeros(n_max + 1, dtype=complex)
        b[0] = self.b0
        if self.kind == "monomial_test":
            if 1 <= self.power <= n_max:
                b[self.power] = self.a
        else:
            zb = np.conj(self.z0)
            for n in range(1, n_max + 1):
                b[n] = self.a * zb**n
        return LaurentCoefficients(p=self.p, b=b)


def extremal_distortion_map(z0: complex, p, b0: complex = 0j) -> ClosedFormMap:
    """The univalent map attaining the sharp distortion bound at z0.

    The tail coefficient is

        a = -[(zeta0 - 1/conj(zeta0)) / (1-p^2)] * [(1 - p conj(zeta0)) / (1 - p zeta0)],

    zeta0 = 1/z0, which satisfies |a| = (R - 1/R)/(1-p^2) with R = |zeta0|
    and reduces at p = 0 to the classical equality map for every z0.
    """
    p = as_pole_value(p)
    z0 = complex(z0)
    if z0 == 0.0:
        raise ValueError("z0 must be nonzero")
    if not abs(z0) < 1.0:
        raise ValueError("z0 must lie in the open unit disk")
    if abs(z0 - p) < 1e-14:
        raise ValueError("z0 collides with the pole p")
    zeta0 = 1.0 / z0
    a = -((zeta0 - 1.0 / np.conj(zeta0)) / (1.0 - p * p)) * (
        (1.0 - p * np.conj(zeta0)) / (1.0 - p * zeta0)
    )
    kind = "extremal_distortion" if p > 0.0 else "sigma_extremal"
    return ClosedFormMap(kind=kind, p=p, b0=complex(b0), z0=z0, a=complex(a))


def sigma_extremal_map(z0: complex, b0: complex = 0j) -> ClosedFormMap:
    """Classical equality map for the pole-at-origin class (p = 0)."""
    return extremal_distortion_map(z0, 0.0, b0)


def monomial_test_map(p, a: complex, power: int = 1, b0: complex = 0j) -> ClosedFormMap:
    """f(z) = 1/(z-p) + b0 + a z^power, for sufficient-condition sweeps."""
    if power < 1:
        raise ValueError("power must be >= 1")
    return ClosedFormMap(
        kind="monomial_test", p=as_pole_value(p), b0=complex(b0), a=complex(a), power=power
    )


def classical_bound(z: complex, kind: str, k: float | None = None) -> float:
    """Classical pole-at-origin distortion scales.

    loewner: bound on |z^2 f'(z)|       -> 1/(1-|z|^2)
    sugawa : bound on |z^2 f'(z) + 1|   -> |z|^2/(1-|z|^2)
    sigma_k: bound on |z^2 f'(z) + 1|   -> k |z|^2/(1-|z|^2)
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise ValueError("z must lie in the open unit disk")
    r2 = abs(z) ** 2
    if kind == "loewner":
        return 1.0 / (1.0 - r2)
    if kind == "sugawa":
        return r2 / (1.0 - r2)
    if kind == "sigma_k":
        if k is None:
            raise ValueError("k is required for the sigma_k bound")
        return k * r2 / (1.0 - r2)
    raise ValueError(f"unknown bound kind: {kind!r}")


def krzyz_test(map_derivative, k: float, samples, tol: float = 1e-9) -> BoundReport:
    """Sampled sufficient condition |z^2 f'(z) + 1| <= k |z|^2.

    PASS means the condition holds at every sample; the report carries the
    worst sample as witness. A sampled check proves nothing off the sample
    set and is reported as such.
    """
    samples = [complex(z) for z in samples]
    if not samples:
        raise ValueError("sample set must be nonempty")
    if any(abs(z) >= 1.0 for z in samples):
        raise ValueError("all samples must lie in the open unit disk")
    worst = None
    for z in samples:
        lhs = abs(z * z * complex(map_derivative(z)) + 1.0)
        rhs = k * abs(z) ** 2
        if worst is None or rhs - lhs < worst[0]:
            worst = (rhs - lhs, lhs, rhs, z)
    _, lhs, rhs, z = worst
    return _report("krzyz_condition", lhs, rhs, z, tol)


def pole_condition_test(
    map_derivative, k: float, p, samples, tol: float = 1e-9
) -> BoundReport:
    """Sampled sufficient condition |(z-p)^2 f'(z) + 1| <= k |z-p|^2/(1+p)^2."""
    p = as_pole_value(p)
    samples = [complex(z) for z in samples]
    if not samples:
        raise ValueError("sample set must be nonempty")
    if any(abs(z - p) < 1e-14 for z in samples):
        raise ValueError("samples must avoid the pole z = p")
    if any(abs(z) >= 1.0 for z in samples):
        raise ValueError("all samples must lie in the open unit disk")
    scale = k / (1.0 + p) ** 2
    worst = None
    for z in samples:
        d = z - p
        lhs = abs(d * d * complex(map_derivative(z)) + 1.0)
        rhs = scale * abs(d) ** 2
        if worst is None or rhs - lhs < worst[0]:
            worst = (rhs - lhs, lhs, rhs, z)
    _, lhs, rhs, z = worst
    return _report("pole_condition", lhs, rhs, z, tol)


def chichra_sum(coeffs: LaurentCoefficients, tol: float = 1e-9) -> BoundReport:
    """Area-theorem sum: sum_{n>=1} n |b_n|^2 against 1/(1-p^2)^2.

    The left side is truncated at the available coefficients.
    """
    p = coeffs.p
    n = np.arange(1, coeffs.n_max + 1)
    lhs = float(np.sum(n * np.abs(coeffs.b[1:]) ** 2)) if coeffs.n_max >= 1 else 0.0
    rhs = 1.0 / (1.0 - p * p) ** 2
    return _report("chichra_area_sum", lhs, rhs, None, tol)
