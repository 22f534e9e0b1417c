"""Configuration-driven pipeline: build mu, solve, reconstruct, verify, report.

A job is described by a single JSON document (see parse_config). Subcommands
select how far the pipeline runs and which artifacts are written:

    qcx solve      --config job.json --out outdir     solver metadata only
    qcx coeffs     ...                                 + Laurent coefficients
    qcx bounds     ...                                 + bound suite
    qcx verify-all ...                                 everything
    qcx extremal   ...                                 equality-case reports
                                                       (an extremal mu_spec
                                                       is required)

Exit codes: 0 all bounds pass, 1 any bound fails, 2 configuration error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .bounds import BoundReport, chichra_sum
from .coefficients import (
    LaurentCoefficients,
    coeff_bound,
    coeff_first_order,
    coeff_from_map,
    extremal_dilatation_for_coeff,
    series_factor,
)
from .grid import DiskGrid, build_grid, dump_csv, load_csv, norm
from .neumann import (
    DilatationField,
    MaxTermsExceededError,
    NeumannSolution,
    solve_beltrami,
)
from .reconstruction import (
    ReconstructedMap,
    numerical_fprime,
    pointwise_extremal_dilatation,
)
from .transforms import cauchy_transform

__all__ = ["JobConfig", "JobResult", "ConfigError", "parse_config", "run_job", "emit_report", "main"]

DEFAULT_GRID_N = 256
_KNOWN_FIELDS = {
    "p", "k", "mu_spec", "grid_n", "q", "tol", "max_terms",
    "outputs", "contour_R", "n_max",
}
_OUTPUT_KINDS = {"report", "coeffs", "field_dump"}
_MU_KINDS = {"constant", "coeff_extremal", "pointwise_extremal", "file"}

# Slack applied to quadrature-derived bound checks in reports.
QUAD_SLACK = 1e-2
COEFF_SLACK = 2e-3


class ConfigError(ValueError):
    """Configuration document violates the schema or an invariant."""


@dataclass
class JobConfig:
    p: float
    k: float
    mu_spec: dict
    grid_n: int = DEFAULT_GRID_N
    q: float = 2.0
    tol: float = 1e-8
    max_terms: int = 64
    outputs: list = field(default_factory=lambda: ["report", "coeffs"])
    contour_R: float = 2.0
    n_max: int = 8

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "mu_spec": self.mu_spec,
            "grid_n": self.grid_n,
            "q": self.q,
            "tol": self.tol,
            "max_terms": self.max_terms,
            "outputs": list(self.outputs),
            "contour_R": self.contour_R,
            "n_max": self.n_max,
        }


def _normalize_mu_spec(raw) -> dict:
    if isinstance(raw, str):
        raw = {"kind": raw}
    if not isinstance(raw, dict):
        raise ConfigError("mu_spec: expected a string or an object")
    kind = raw.get("kind")
    if kind not in _MU_KINDS:
        raise ConfigError(f"mu_spec.kind: must be one of {sorted(_MU_KINDS)}")
    spec = {"kind": kind}
    if kind == "coeff_extremal":
        n = raw.get("n")
        if not isinstance(n, int) or n < 1:
            raise ConfigError("mu_spec.n: integer >= 1 required")
        spec["n"] = n
    elif kind == "pointwise_extremal":
        z = raw.get("z")
        if not (isinstance(z, (list, tuple)) and len(z) == 2):
            raise ConfigError("mu_spec.z: [re, im] pair required")
        spec["z"] = [float(z[0]), float(z[1])]
        spec["theta"] = float(raw.get("theta", 0.0))
    elif kind == "file":
        path = raw.get("path")
        if not isinstance(path, str) or not path:
            raise ConfigError("mu_spec.path: nonempty string required")
        spec["path"] = path
    return spec


def parse_config(text: str, overrides: dict | None = None) -> JobConfig:
    """Parse and validate a JSON job document; fill defaults.

    `overrides` (flag values) replace document fields; the QCX_GRID_N
    environment variable replaces the built-in grid default when neither
    the document nor a flag sets grid_n.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ConfigError("top level: expected an object")
    unknown = set(doc) - _KNOWN_FIELDS
    if unknown:
        raise ConfigError(f"unknown field {sorted(unknown)[0]!r}")
    merged = dict(doc)
    for key, val in (overrides or {}).items():
        if val is not None:
            merged[key] = val

    for req in ("p", "k", "mu_spec"):
        if req not in merged:
            raise ConfigError(f"{req}: required field is missing")

    try:
        p = float(merged["p"])
        k = float(merged["k"])
    except (TypeError, ValueError) as e:
        raise ConfigError(f"p/k: {e}") from e
    if not 0.0 <= p < 1.0:
        raise ConfigError("p must lie in [0, 1)")
    if not 0.0 <= k < 1.0:
        raise ConfigError("k must lie in [0, 1)")

    grid_default = int(os.environ.get("QCX_GRID_N", DEFAULT_GRID_N))
    grid_n = int(merged.get("grid_n", grid_default))
    if grid_n < 8 or grid_n % 2 != 0:
        raise ConfigError("grid_n must be even and >= 8")

    q = float(merged.get("q", 2.0))
    if q < 2.0:
        raise ConfigError("q must satisfy q >= 2")
    tol = float(merged.get("tol", 1e-8))
    if tol <= 0.0:
        raise ConfigError("tol must be positive")
    max_terms = int(merged.get("max_terms", 64))
    if max_terms < 1:
        raise ConfigError("max_terms must be >= 1")
    contour_r = float(merged.get("contour_R", 2.0))
    if contour_r <= 1.0:
        raise ConfigError("contour_R must exceed 1")
    n_max = int(merged.get("n_max", 8))
    if n_max < 1:
        raise ConfigError("n_max must be >= 1")
    outputs = merged.get("outputs", ["report", "coeffs"])
    if not isinstance(outputs, list) or any(o not in _OUTPUT_KINDS for o in outputs):
        raise ConfigError(f"outputs: entries must be among {sorted(_OUTPUT_KINDS)}")

    return JobConfig(
        p=p, k=k, mu_spec=_normalize_mu_spec(merged["mu_spec"]),
        grid_n=grid_n, q=q, tol=tol, max_terms=max_terms,
        outputs=list(outputs), contour_R=contour_r, n_max=n_max,
    )


def build_mu(cfg: JobConfig, grid: DiskGrid) -> DilatationField:
    """Materialize the dilatation field described by cfg.mu_spec."""
    kind = cfg.mu_spec["kind"]
    if kind == "constant":
        return DilatationField.constant(grid, cfg.k)
    if kind == "coeff_extremal":
        return extremal_dilatation_for_coeff(cfg.mu_spec["n"], cfg.p, cfg.k, grid)
    if kind == "pointwise_extremal":
        z = complex(*cfg.mu_spec["z"])
        return pointwise_extremal_dilatation(z, cfg.p, cfg.k, cfg.mu_spec["theta"], grid)
    # file
    try:
        gf = load_csv(grid, cfg.mu_spec["path"])
    except ValueError as e:
        raise ConfigError(f"mu_spec.file: {e}") from e
    except OSError as e:
        raise ConfigError(f"mu_spec.file: cannot read {cfg.mu_spec['path']}: {e}") from e
    sup = norm(gf, np.inf)
    if sup > cfg.k * (1.0 + 1e-12):
        raise ConfigError(
            f"mu_spec.file: field sup norm {sup} exceeds configured k = {cfg.k}"
        )
    return DilatationField(gf, cfg.k)


@dataclass
class JobResult:
    config: JobConfig
    solution: NeumannSolution
    mu: DilatationField
    coefficients: LaurentCoefficients | None = None
    bounds: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.solution.converged

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.bounds)


def _distortion_sample_points(p: float) -> list[complex]:
    pts = []
    for r in (0.15, 0.3, 0.45, 0.6, 0.7):
        for j in range(5):
            z = r * np.exp(1j * (2.0 * np.pi * j / 5 + 0.3))
            if abs(z - p) > 0.05:
                pts.append(z)
    return pts


def _qc_distortion_report(result: JobResult) -> BoundReport:
    cfg = result.config
    rmap = ReconstructedMap(result.solution, cfg.p)
    scale = 1.0 / (1.0 - cfg.p**2)
    worst = None
    for z in _distortion_sample_points(cfg.p):
        fp = numerical_fprime(rmap.f, z)
        lhs = abs(fp + 1.0 / (z - cfg.p) ** 2)
        rhs = cfg.k * scale / (1.0 - abs(z) ** 2)
        if worst is None or rhs - lhs < worst[0]:
            worst = (rhs - lhs, lhs, rhs, z)
    margin, lhs, rhs, z = worst
    return BoundReport(
        name="qc_distortion", lhs=float(lhs), rhs=float(rhs), margin=float(margin),
        equality=bool(abs(margin) <= QUAD_SLACK),
        passed=bool(margin >= -QUAD_SLACK), witness=complex(z),
    )


def _coeff_bound_reports(result: JobResult) -> list[BoundReport]:
    cfg = result.config
    reports = []
    for n in range(1, min(4, cfg.n_max) + 1):
        lhs = abs(result.coefficients.b[n])
        rhs = coeff_bound(n, cfg.p, cfg.k)
        margin = rhs - lhs
        reports.append(BoundReport(
            name=f"coeff_bound_n{n}", lhs=float(lhs), rhs=float(rhs),
            margin=float(margin), equality=bool(abs(margin) <= COEFF_SLACK),
            passed=bool(margin >= -COEFF_SLACK), witness=None,
        ))
    return reports


def _extremal_reports(result: JobResult, grid: DiskGrid) -> list[BoundReport]:
    cfg = result.config
    spec = cfg.mu_spec
    reports = []
    if spec["kind"] == "coeff_extremal":
        n = spec["n"]
        lhs = abs(coeff_first_order(result.mu, cfg.p, n))
        rhs = 2.0 * cfg.k * series_factor(n, cfg.p)
        margin = rhs - lhs
        reports.append(BoundReport(
            name=f"coeff_equality_n{n}", lhs=float(lhs), rhs=float(rhs),
            margin=float(margin), equality=bool(abs(margin) <= COEFF_SLACK),
            passed=bool(abs(margin) <= COEFF_SLACK), witness=None,
        ))
    elif spec["kind"] == "pointwise_extremal":
        z = complex(*spec["z"])
        phi1 = result.solution.terms[0]
        lhs = abs(cauchy_transform(phi1, z))
        zc = grid.masked_centers
        idx = grid.cell_index(z)
        if idx is not None and grid.mask[idx]:
            zc = zc[np.abs(zc - grid.centers[idx]) > 0.0]
        rhs = cfg.k / np.pi * float(
            np.sum(grid.cell_area / (np.abs(1.0 - cfg.p * zc) ** 2 * np.abs(zc - z)))
        )
        margin = rhs - lhs
        tol = QUAD_SLACK * max(rhs, 1e-30)
        reports.append(BoundReport(
            name="deviation_equality", lhs=float(lhs), rhs=float(rhs),
            margin=float(margin), equality=bool(abs(margin) <= tol),
            passed=bool(abs(margin) <= tol), witness=complex(z),
        ))
    return reports


def run_job(cfg: JobConfig, stages: tuple = ("solve", "coeffs", "bounds")) -> JobResult:
    """Execute solve -> reconstruct -> coefficients -> bound suites.

    Deterministic for a fixed config. A solve that hits max_terms is kept
    as a partial solution with a warning instead of aborting the job.
    """
    grid = build_grid(cfg.grid_n)
    mu = build_mu(cfg, grid)
    warnings: list[str] = []
    try:
        sol = solve_beltrami(
            mu, cfg.p, q=cfg.q, tol=cfg.tol, max_terms=cfg.max_terms
        )
    except MaxTermsExceededError as e:
        sol = e.solution
        warnings.append(f"slow convergence: {e}")
    result = JobResult(config=cfg, solution=sol, mu=mu, warnings=warnings)

    if "coeffs" in stages or "bounds" in stages:
        rmap = ReconstructedMap(sol, cfg.p)
        coeffs = coeff_from_map(rmap, R=cfg.contour_R, n_max=cfg.n_max)
        coeffs.k = cfg.k
        result.coefficients = coeffs

    if "bounds" in stages:
        result.bounds.append(_qc_distortion_report(result))
        result.bounds.append(chichra_sum(result.coefficients, tol=COEFF_SLACK))
        result.bounds.extend(_coeff_bound_reports(result))

    if "extremal" in stages:
        result.bounds.extend(_extremal_reports(result, grid))

    return result


def emit_report(result: JobResult, format: str = "json") -> str:
    """Serialize a JobResult; JSON is canonical, CSV emits the bound rows."""
    if format == "json":
        sol = result.solution
        doc = {
            "config": result.config.to_json_dict(),
            "solution": {
                "terms": len(sol.terms),
                "term_norms": [float(v) for v in sol.term_norms],
                "contraction_factor": float(sol.M),
                "residual": float(sol.residual),
                "converged": bool(sol.converged),
                "q": float(sol.q),
            },
            "coefficients": (
                None if result.coefficients is None
                else result.coefficients.to_json_dict()
            ),
            "bounds": [r.to_json_dict() for r in result.bounds],
            "warnings": list(result.warnings),
        }
        return json.dumps(doc, indent=2) + "\n"
    if format == "csv":
        lines = ["name,lhs,rhs,margin,equality"]
        for r in result.bounds:
            eq = "true" if r.equality else "false"
            lines.append(f"{r.name},{r.lhs!r},{r.rhs!r},{r.margin!r},{eq}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unsupported format: {format!r}")


_STAGES = {
    "solve": ("solve",),
    "coeffs": ("solve", "coeffs"),
    "bounds": ("solve", "coeffs", "bounds"),
    "extremal": ("solve", "coeffs", "extremal"),
    "verify-all": ("solve", "coeffs", "bounds", "extremal"),
}


def _write_outputs(result: JobResult, out_dir: str, fmt: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "report.json"), "w") as fh:
        fh.write(emit_report(result, "json"))
    if fmt == "csv":
        with open(os.path.join(out_dir, "report.csv"), "w") as fh:
            fh.write(emit_report(result, "csv"))
    if result.coefficients is not None and "coeffs" in result.config.outputs:
        with open(os.path.join(out_dir, "coeffs.json"), "w") as fh:
            json.dump(result.coefficients.to_json_dict(), fh, indent=2)
            fh.write("\n")
    if "field_dump" in result.config.outputs:
        fdir = os.path.join(out_dir, "fields")
        os.makedirs(fdir, exist_ok=True)
        dump_csv(result.mu.mu, os.path.join(fdir, "mu.csv"))
        dump_csv(result.solution.omega, os.path.join(fdir, "omega.csv"))


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qcx",
        description="Beltrami solver and bound verifier for residue-1 maps "
        "with quasiconformal extension",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _STAGES:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="path to the JSON job document")
        sp.add_argument("--p", type=float, default=None)
        sp.add_argument("--k", type=float, default=None)
        sp.add_argument("--grid-n", type=int, default=None, dest="grid_n")
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument("--format", default="json", choices=("json", "csv"))
        sp.add_argument("--dump", action="store_true",
                        help="also write fields/*.csv dumps")
    args = parser.parse_args(argv)

    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as e:
        print(f"error: cannot read config: {e}", file=sys.stderr)
        return 2

    overrides = {"p": args.p, "k": args.k, "grid_n": args.grid_n, "tol": args.tol}
    try:
        cfg = parse_config(text, overrides)
        if args.dump and "field_dump" not in cfg.outputs:
            cfg.outputs.append("field_dump")
        if args.command == "extremal" and cfg.mu_spec["kind"] not in (
            "coeff_extremal", "pointwise_extremal",
        ):
            raise ConfigError(
                "extremal subcommand requires a coeff_extremal or "
                "pointwise_extremal mu_spec"
            )
        result = run_job(cfg, stages=_STAGES[args.command])
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2

    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(
        f"solve: {len(result.solution.terms)} terms, residual "
        f"{result.solution.residual:.3e}, converged={result.solution.converged}"
    )
    for r in result.bounds:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name}: lhs={r.lhs:.6g} rhs={r.rhs:.6g} margin={r.margin:.3g}")

    if args.out:
        _write_outputs(result, args.out, args.format)

    if not result.converged:
        return 3
    if not result.all_passed:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
