import numpy as np
import pytest

from nullitylab import MetricLieAlgebra, abelian, build_example, ExampleSpec, heisenberg3, so3
from nullitylab.algebra import killing_form, structure_predicates, validate
from nullitylab.errors import DimensionMismatch


def test_shape_checks():
    with pytest.raises(DimensionMismatch):
        MetricLieAlgebra(3, ("a", "b", "c"), np.zeros((3, 3, 2)), np.eye(3))
    with pytest.raises(DimensionMismatch):
        MetricLieAlgebra(3, ("a", "b"), np.zeros((3, 3, 3)), np.eye(3))


def test_bracket_and_ad():
    h = heisenberg3()
    assert np.array_equal(h.bracket([1, 0, 0], [0, 1, 0]), [0, 0, 1])
    assert np.array_equal(h.ad([1, 0, 0]) @ [0, 1, 0], [0, 0, 1])
    assert np.array_equal(h.ad_matrices()[0], h.ad([1, 0, 0]))


def test_validate_reports_each_violation():
    c = np.zeros((3, 3, 3))
    c[0, 1] = [0, 0, 1]  # missing antisymmetric partner
    bad = MetricLieAlgebra(3, ("a", "b", "c"), c, -np.eye(3))
    names = {v.invariant for v in validate(bad).violations}
    assert names == {"antisymmetry", "metric_positive_definite"}


def test_validate_jacobi():
    # [X1,X2]=X2, [X1,X3]=X1, [X2,X3]=X3 fails Jacobi
    alg = MetricLieAlgebra.from_bracket_dict(3, {(0, 1): [0, 1, 0], (0, 2): [1, 0, 0], (1, 2): [0, 0, 1]})
    assert [v.invariant for v in validate(alg).violations] == ["jacobi"]


def test_validate_accepts_known_algebras():
    for alg in (abelian(3), heisenberg3(), so3(), build_example(ExampleSpec(5))):
        assert validate(alg).valid


def test_heisenberg_structure():
    s = structure_predicates(heisenberg3())
    assert s.solvable and s.nilpotent_step == 2
    assert s.lower_central_series == [3, 1, 0]
    assert s.center_dim == 1 and s.radical_dim == 3
    assert not s.reductive and s.unimodular


def test_so3_structure():
    s = structure_predicates(so3())
    assert not s.solvable and s.reductive and s.radical_dim == 0
    assert s.nilpotent_step is None
    assert np.allclose(killing_form(so3()), -2 * np.eye(3))


def test_family_structure():
    s = structure_predicates(build_example(ExampleSpec(4)))
    assert s.solvable and not s.unimodular and not s.reductive
    assert s.nilpotent_step is None
    assert s.derived_series == [5, 4, 0]


def test_abelian_plus_so3_is_reductive():
    s = structure_predicates(abelian(1).direct_sum(so3()))
    assert s.reductive and s.center_dim == 1 and s.radical_dim == 1


def test_change_basis_preserves_validity():
    rng = np.random.default_rng(3)
    P = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    alg = build_example(ExampleSpec(3)).change_basis(P)
    assert validate(alg).valid
