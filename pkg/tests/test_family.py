import numpy as np
import pytest

from nullitylab import ExampleSpec, complement_invariance_check, build_example, transport_check, validate, verify_family_certificate
from nullitylab.errors import BadDimension, BadMode, CertificateFailure, NotInNullity
from nullitylab.family import default_a, default_action, matrix_basis, skew_ones
from oracles import observability_rank


def test_default_constants():
    assert abs(default_a(3) ** 2 - 1 / 5) < 1e-15
    assert abs(default_a(4) - 1 / 3) < 1e-15
    for d in range(3, 13):
        A = default_action(d)
        assert abs(np.trace(A @ A.T) - 1) < 1e-12


def test_skew_ones():
    M = skew_ones(4)
    assert np.array_equal(M, -M.T)
    assert np.all(M[np.triu_indices(4, 1)] == 1)


def test_brackets_are_matrix_commutators():
    spec = ExampleSpec(4)
    alg = build_example(spec)
    mats = matrix_basis(spec)
    for i in range(5):
        for j in range(5):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            assert np.abs(np.einsum("k,kab->ab", alg.brackets[i, j], mats) - comm).max() == 0
    # [A, E_i] = sum_k A[k, i] E_k
    assert np.array_equal(alg.brackets[4, :4, :4].T, spec.A)
    assert np.array_equal(alg.metric, np.eye(5))


def test_built_examples_validate_exactly():
    for d in range(3, 13):
        assert validate(build_example(ExampleSpec(d))).valid


def test_mode_and_dimension_gates():
    with pytest.raises(BadDimension):
        ExampleSpec(2)
    with pytest.raises(BadMode):
        ExampleSpec(3, mode="other")
    with pytest.raises(BadMode):
        verify_family_certificate(ExampleSpec(3, A=np.eye(3), mode="custom_A"))


def test_zero_action_is_abelian():
    alg = build_example(ExampleSpec(3, A=np.zeros((3, 3)), mode="custom_A"))
    assert not np.any(alg.brackets)


def test_certificate_d3_values():
    cert = verify_family_certificate(ExampleSpec(3))
    assert cert.passed
    assert abs(cert.values["ricci"]["scalar"] + 0.4) < 1e-12
    want = sorted([0.0, -0.2, (-1 + np.sqrt(5)) / 10, (-1 - np.sqrt(5)) / 10])
    assert np.allclose(cert.values["ricci"]["eigenvalues"], want, atol=1e-12)


def test_certificate_clause_list_is_dimension_free():
    names3 = [c.name for c in verify_family_certificate(ExampleSpec(3)).clauses]
    names10 = [c.name for c in verify_family_certificate(ExampleSpec(10)).clauses]
    assert names3 == names10


def test_certificate_failure_names_clause(monkeypatch):
    from nullitylab import family

    monkeypatch.setattr(family, "expected_ricci", lambda d: (np.zeros(d + 1), 0.0))
    with pytest.raises(CertificateFailure) as info:
        verify_family_certificate(ExampleSpec(3))
    assert info.value.clause == "ricci spectrum"
    assert not verify_family_certificate(ExampleSpec(3), strict=False).passed


def test_complement_invariance_small_cases():
    v = complement_invariance_check(4)  # M is 3 x 3
    assert v.verdict == "none contained"
    k = np.array(v.kernel_vector)
    # M (1, -1, 1) = 0, and the kernel vector has non-zero first entry
    assert np.allclose(np.abs(k), 1 / np.sqrt(3)) and np.allclose(k / k[0], [1, -1, 1])
    assert complement_invariance_check(5).components == [2, 2]
    assert complement_invariance_check(3).components == [2]
    assert complement_invariance_check(3).kernel_vector is None
    with pytest.raises(BadDimension):
        complement_invariance_check(2)


@pytest.mark.parametrize("d", range(3, 13))
def test_complement_invariance_agrees_with_exact_rank(d):
    # exact criterion: no invariant subspace in e1-perp iff the observability matrix has full rank
    assert observability_rank(d - 1) == d - 1
    assert complement_invariance_check(d).verdict == "none contained"


def test_transport_linear_growth():
    rep = transport_check(ExampleSpec(5), 1, 5, (1.0, 10.0, 100.0))
    assert rep.max_rel_error < 1e-6
    assert rep.second_derivative_norm < 1e-5
    assert rep.geodesic_residual < 1e-12
    assert np.allclose(rep.witness, [1, 0, -1, -1, 0, 0])


def test_transport_constant_norm_for_transvection_field():
    rep = transport_check(ExampleSpec(5), 1, 2, (1.0, 10.0, 100.0))
    for s in rep.samples:
        assert abs(s.transported_norm - 1.0) < 1e-12 and abs(s.predicted_norm - 1.0) < 1e-12


def test_transport_t0_exact():
    for z in range(6):
        s = transport_check(ExampleSpec(5), 1, z, (0.0,)).samples[0]
        assert s.transported_norm == s.predicted_norm == 1.0


def test_transport_requires_nullity_direction():
    with pytest.raises(NotInNullity):
        transport_check(ExampleSpec(5), 0, 5)
