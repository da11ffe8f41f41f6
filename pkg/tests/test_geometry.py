"""Nomizu operators and curvature, checked against the left-invariant frame oracle."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nullitylab import (
    MetricLieAlgebra,
    abelian,
    covariant_derivative,
    curvature_table,
    heisenberg3,
    jacobi_operator,
    nomizu_table,
    ricci,
    sectional,
    so3,
)
from nullitylab.errors import DegeneratePlane, DimensionMismatch, SingularMetric
from oracles import left_invariant_curvature, random_metric, random_semidirect, ricci_eigenvalues


def geometry(alg):
    table = nomizu_table(alg)
    return table, curvature_table(alg, table)


def test_singular_metric_rejected():
    alg = MetricLieAlgebra(2, ("a", "b"), np.zeros((2, 2, 2)), np.diag([1.0, 0.0]))
    with pytest.raises(SingularMetric):
        nomizu_table(alg)


def test_covariant_derivative_argument_checks():
    table = nomizu_table(heisenberg3())
    with pytest.raises(DimensionMismatch):
        covariant_derivative(table, [1.0, 0.0], 0)
    with pytest.raises(DimensionMismatch):
        covariant_derivative(table, [1.0, 0.0, 0.0], 3)


def test_heisenberg_nomizu_values():
    # <nabla_{e_i} X_j, e_k> = (C_ijk + C_ikj + C_jki)/2 with C_123 = 1
    table = nomizu_table(heisenberg3())
    assert np.allclose(covariant_derivative(table, [1, 0, 0], 1), [0, 0, 0.5])
    assert np.allclose(covariant_derivative(table, [0, 1, 0], 0), [0, 0, -0.5])
    assert np.allclose(covariant_derivative(table, [0, 0, 1], 0), [0, 0.5, 0])


def test_abelian_is_flat():
    table, ct = geometry(abelian(4))
    assert not np.any(table.operators) and not np.any(ct.R_ops)


def test_heisenberg_ricci_closed_form():
    data = ricci(geometry(heisenberg3())[1])
    assert np.allclose(data.eigenvalues, [-0.5, -0.5, 0.5], atol=1e-12)
    assert abs(data.scalar + 0.5) < 1e-12


def test_so3_constant_curvature():
    ct = geometry(so3())[1]
    rng = np.random.default_rng(0)
    for _ in range(5):
        x, y = rng.standard_normal((2, 3))
        assert abs(sectional(ct, x, y) - 0.125) < 1e-12
    assert np.allclose(ricci(ct).eigenvalues, 0.25)


def test_sectional_degenerate_plane():
    ct = geometry(so3())[1]
    with pytest.raises(DegeneratePlane):
        sectional(ct, [1, 0, 0], [2, 0, 0])
    with pytest.raises(DimensionMismatch):
        sectional(ct, [1, 0], [0, 1])


def test_jacobi_operator_is_symmetric():
    ct = geometry(heisenberg3(np.diag([1.0, 2.0, 3.0])))[1]
    J = jacobi_operator(ct, [1.0, 1.0, 1.0])
    assert np.allclose(ct.metric @ J, (ct.metric @ J).T)


def test_corpus_identities(algebra_corpus):
    for name, alg in algebra_corpus.items():
        table, ct = geometry(alg)
        assert table.skew_residual() < 1e-8, name
        assert table.torsion_residual(alg) < 1e-8, name
        assert max(ct.symmetry_residuals().values()) < 1e-8, name
        assert np.max(np.abs(ct.R_ops - left_invariant_curvature(alg.brackets, alg.metric))) < 1e-9, name


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 100_000), st.booleans())
def test_random_algebras_match_oracle(n, seed, identity_metric):
    rng = np.random.default_rng(seed)
    c = random_semidirect(rng, n)
    g = np.eye(n) if identity_metric else random_metric(rng, n)
    alg = MetricLieAlgebra(n, tuple(f"X{i}" for i in range(n)), c, g)
    table, ct = geometry(alg)
    R_ref = left_invariant_curvature(c, g)
    scale = max(1.0, float(np.max(np.abs(R_ref))))
    assert np.max(np.abs(ct.R_ops - R_ref)) < 1e-9 * scale
    assert table.skew_residual() < 1e-9 * scale
    assert table.torsion_residual(alg) < 1e-9 * scale
    assert max(ct.symmetry_residuals().values()) < 1e-9 * scale
    assert np.allclose(ricci(ct).eigenvalues, ricci_eigenvalues(R_ref, g), atol=1e-9 * scale)


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 5), st.integers(0, 100_000))
def test_ricci_spectrum_is_basis_independent(n, seed):
    rng = np.random.default_rng(seed)
    alg = MetricLieAlgebra(n, tuple(f"X{i}" for i in range(n)), random_semidirect(rng, n), random_metric(rng, n))
    # well-conditioned change of basis: singular values in [0.5, 2]
    Q1, _ = np.linalg.qr(rng.standard_normal((n, n)))
    Q2, _ = np.linalg.qr(rng.standard_normal((n, n)))
    P = Q1 @ np.diag(rng.uniform(0.5, 2.0, n)) @ Q2
    before = ricci(geometry(alg)[1])
    after = ricci(geometry(alg.change_basis(P))[1])
    assert np.allclose(before.eigenvalues, after.eigenvalues, atol=1e-8)
    assert abs(before.scalar - after.scalar) < 1e-8
