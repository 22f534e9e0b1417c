"""Solver contracts: constants, term bounds, convergence, failure modes."""

import numpy as np
import pytest

import qcx
from qcx.neumann import MaxTermsExceededError, NonContractiveError, PoleParam


def cpq_closed_form_q2(p):
    return np.sqrt(np.pi * (3.0 - p) / (3.0 * (1.0 - p) ** 3))


def test_pole_param_validation():
    assert float(PoleParam(0.3)) == 0.3
    with pytest.raises(ValueError):
        PoleParam(1.0)
    with pytest.raises(ValueError):
        PoleParam(-0.1)


def test_cpq_limit_branch():
    assert qcx.cpq_constant(0.0, 2) == pytest.approx(np.sqrt(np.pi), rel=1e-14)
    assert qcx.cpq_constant(1e-9, 3) == pytest.approx(np.pi ** (1 / 3), rel=1e-14)


def test_cpq_against_closed_form_q2():
    for p in (0.01, 0.1, 0.3, 0.4, 0.5, 0.7, 0.9, 0.999):
        got = qcx.cpq_constant(p, 2)
        want = cpq_closed_form_q2(p)
        assert got == pytest.approx(want, rel=1e-12)


def test_cpq_values_and_growth():
    assert qcx.cpq_constant(0.5, 2) == pytest.approx(4.5765, abs=1e-3)
    big = qcx.cpq_constant(0.999, 2)
    assert np.isfinite(big) and big > 1e3


def test_cpq_preconditions():
    with pytest.raises(ValueError):
        qcx.cpq_constant(0.5, 1.5)
    with pytest.raises(ValueError):
        qcx.cpq_constant(1.2, 2)


def test_contraction_factor(grid64):
    mu = qcx.DilatationField.constant(grid64, 0.3)
    assert qcx.contraction_factor(mu, 2) == pytest.approx(0.3, abs=1e-15)
    zero = qcx.DilatationField.constant(grid64, 0.0)
    assert qcx.contraction_factor(zero, 2) == 0.0
    half = qcx.DilatationField.constant(grid64, 0.5)
    assert qcx.contraction_factor(half, 3, a_q=2.5) == pytest.approx(1.25)
    with pytest.raises(ValueError, match="A_q not configured"):
        qcx.contraction_factor(half, 3)


def test_source_term_is_mu_over_denominator(grid64):
    mu = qcx.DilatationField.constant(grid64, 0.2)
    for p in (0.0, 0.5):
        phi1 = qcx.source_term(mu, p)
        want = mu.mu.values / (1.0 - p * grid64.centers) ** 2
        want = np.where(grid64.mask, want, 0.0)
        assert np.max(np.abs(phi1.values - want)) == 0.0
    # spot value on the positive real axis: denominator (1 - p c)^2
    phi1 = qcx.source_term(mu, 0.5)
    c_idx = np.argmin(np.abs(grid64.masked_centers - 0.8))
    c = grid64.masked_centers[c_idx]
    assert phi1.masked_values[c_idx] == pytest.approx(0.2 / (1 - 0.5 * c) ** 2)
    assert abs(0.2 / (1 - 0.5 * 0.8) ** 2 - 0.5556) < 1e-4


def test_term_norm_bound_examples():
    assert qcx.term_norm_bound(1, 0.0, 2, 0.3, 1.0) == pytest.approx(
        np.sqrt(np.pi) * 0.3, rel=1e-12
    )
    assert qcx.term_norm_bound(3, 0.0, 2, 0.3, 1.0) == pytest.approx(
        np.sqrt(np.pi) * 0.027, rel=1e-12
    )
    assert qcx.term_norm_bound(5, 0.3, 2, 0.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        qcx.term_norm_bound(0, 0.3, 2, 0.3, 1.0)


def test_constant_mu_truncates_to_one_effective_term(grid128):
    mu = qcx.DilatationField.constant(grid128, 0.2)
    sol = qcx.solve_beltrami(mu, 0.0, tol=1e-8)
    assert sol.term_norms[0] == pytest.approx(0.2 * np.sqrt(np.pi), abs=2e-3)
    assert sol.term_norms[1] <= 2e-2
    # omega is close to the constant field itself
    diff = sol.omega - mu.mu
    assert qcx.norm(diff, 2) <= 3e-2
    assert sol.converged


def test_zero_mu_terminates_immediately(grid64):
    mu = qcx.DilatationField.constant(grid64, 0.0)
    sol = qcx.solve_beltrami(mu, 0.3)
    assert len(sol.terms) == 1
    assert sol.residual == 0.0
    assert sol.converged
    assert np.all(sol.omega.values == 0.0)


def test_omega_is_sum_of_terms(grid64):
    mu = qcx.random_dilatation(grid64, 0.3, seed=1)
    sol = qcx.solve_beltrami(mu, 0.4)
    acc = sol.terms[0]
    for t in sol.terms[1:]:
        acc = acc + t
    assert np.max(np.abs(acc.values - sol.omega.values)) <= 1e-13


def test_term_norms_satisfy_apriori_bound(grid64):
    for seed in (0, 1):
        mu = qcx.random_dilatation(grid64, 0.3, seed)
        sol = qcx.solve_beltrami(mu, 0.4, tol=1e-8)
        c = qcx.cpq_constant(0.4, 2)
        for i, tn in enumerate(sol.term_norms, start=1):
            assert tn <= c * 0.3**i * 1.1


def test_geometric_decay(grid64):
    mu = qcx.random_dilatation(grid64, 0.3, seed=2)
    sol = qcx.solve_beltrami(mu, 0.4, tol=1e-8)
    tn = sol.term_norms
    for i in range(len(tn) - 1):
        assert tn[i + 1] <= sol.M * tn[i] * 1.1


def test_cauchy_tail_estimate(grid64):
    mu = qcx.random_dilatation(grid64, 0.3, seed=3)
    sol = qcx.solve_beltrami(mu, 0.4, tol=1e-8)
    c = qcx.cpq_constant(0.4, 2)
    M = sol.M
    total = sol.omega
    for m in range(len(sol.terms) - 1):
        partial = sol.terms[0]
        for t in sol.terms[1:m + 1]:
            partial = partial + t
        tail_norm = qcx.norm(total - partial, 2)
        bound = (c / 1.0) * M ** (m + 1) / (1.0 - M) * 1.1
        assert tail_norm <= bound


def test_fixed_point_residual(grid64):
    mu = qcx.random_dilatation(grid64, 0.25, seed=4)
    tol = 1e-8
    sol = qcx.solve_beltrami(mu, 0.2, tol=tol)
    assert sol.converged
    assert sol.residual <= 10 * tol
    # residual recomputed from the definition matches
    recomputed = qcx.norm(
        sol.omega - qcx.source_term(mu, 0.2) - mu.mu * qcx.beurling_transform(sol.omega),
        2,
    )
    assert recomputed == pytest.approx(sol.residual, rel=1e-10, abs=1e-14)


def test_non_contractive_rejected(grid64):
    mu = qcx.DilatationField.constant(grid64, 0.5)
    with pytest.raises(NonContractiveError, match="non-contractive"):
        qcx.solve_beltrami(mu, 0.0, q=3, a_q=2.5)


def test_max_terms_exceeded_carries_partial(grid64):
    mu = qcx.DilatationField.constant(grid64, 0.3)
    with pytest.raises(MaxTermsExceededError, match="max terms exceeded") as exc:
        qcx.solve_beltrami(mu, 0.2, tol=1e-13, max_terms=3)
    partial = exc.value.solution
    assert len(partial.terms) == 3
    assert not partial.converged


def test_solver_argument_validation(grid64):
    mu = qcx.DilatationField.constant(grid64, 0.2)
    with pytest.raises(ValueError, match="tol"):
        qcx.solve_beltrami(mu, 0.0, tol=0.0)
    with pytest.raises(ValueError, match="max_terms"):
        qcx.solve_beltrami(mu, 0.0, max_terms=0)


def test_dilatation_field_validation(grid64):
    with pytest.raises(ValueError, match="k must lie"):
        qcx.DilatationField(qcx.GridFunction.constant(grid64, 0.5), 1.0)
    with pytest.raises(ValueError, match="exceeds declared bound"):
        qcx.DilatationField(qcx.GridFunction.constant(grid64, 0.5), 0.3)
