import numpy as np
import pytest

from nullitylab import (
    ExampleSpec,
    Subspace,
    abelian,
    adapted_and_osculating,
    bounded_algebra,
    build_example,
    chain_report,
    curvature_table,
    distribution_chain,
    heisenberg3,
    jacobi_operator,
    nomizu_table,
    nullity_space,
    osculating_tower,
    sectional,
    so3,
)
from nullitylab.connection import ConnectionTable
from nullitylab.errors import SubalgebraClosureViolation
from oracles import left_invariant_curvature, nullity_dimension


def pipeline(alg):
    table = nomizu_table(alg)
    return alg, table, curvature_table(alg, table)


def family(d):
    return pipeline(build_example(ExampleSpec(d)))


def test_family_nullity_d5():
    _, _, ct = family(5)
    nu = nullity_space(ct)
    assert nu.dim == 3
    assert nu.equals(Subspace.coordinate(6, [1, 2, 3]))
    for v in nu.basis.T:
        assert max(np.abs(ct.operator(v, e)).max() for e in np.eye(6)) <= 1e-8


def test_nullity_matches_brute_force_oracle(algebra_corpus):
    for name, alg in algebra_corpus.items():
        _, _, ct = pipeline(alg)
        assert nullity_space(ct).dim == nullity_dimension(left_invariant_curvature(alg.brackets, alg.metric)), name


def test_trivial_nullities():
    assert nullity_space(pipeline(abelian(4))[2]).is_full
    assert nullity_space(pipeline(so3())[2]).is_zero


def test_osculating_d5():
    alg, table, ct = family(5)
    osc = adapted_and_osculating(alg, table, nullity_space(ct))
    assert osc["osc1"].equals(Subspace.coordinate(6, range(4)))
    assert osc["osc2"].equals(Subspace.coordinate(6, range(5)))


def test_osculating_abelian():
    alg, table, ct = pipeline(abelian(3))
    osc = adapted_and_osculating(alg, table, nullity_space(ct))
    assert osc["adapted"].is_zero and osc["osc1"].is_full and osc["osc2"].is_full


def test_bounded_algebra():
    for d in (3, 6, 9):
        alg, table, ct = family(d)
        b = bounded_algebra(alg, table, nullity_space(ct))
        assert b.distribution.equals(Subspace.coordinate(d + 1, range(d)))
    for alg in (abelian(3), so3()):
        alg, table, ct = pipeline(alg)
        assert bounded_algebra(alg, table, nullity_space(ct)).dim == 3


def test_bounded_algebra_closure_violation():
    # Gamma_1 and Gamma_2 preserve span(e3) but Gamma_3 does not; the solutions
    # span{e1, e2} are not closed under the Heisenberg bracket [e1, e2] = e3
    ops = np.zeros((3, 3, 3))
    ops[2][0, 2], ops[2][2, 0] = 1.0, -1.0
    table = ConnectionTable(ops, np.eye(3))
    with pytest.raises(SubalgebraClosureViolation):
        bounded_algebra(heisenberg3(), table, Subspace.coordinate(3, [2]))


def test_osculating_tower():
    alg, table, ct = family(4)
    nu = nullity_space(ct)
    perp = osculating_tower(alg, table, nu.complement())
    assert perp[-1].is_full and len(perp) - 1 <= 2
    assert len(osculating_tower(alg, table, Subspace.full(5))) == 1
    # iterating from the nullity passes the bounded distribution (dim 4) and reaches everything
    assert [s.dim for s in osculating_tower(alg, table, nu)] == [2, 3, 4, 5]


def test_chain_report_d3():
    alg, table, ct = family(3)
    verdict = chain_report(distribution_chain(alg, table, ct))
    assert [verdict.dims[k] for k in ("nullity", "osc1", "osc2", "bounded")] == [1, 2, 3, 3]
    assert verdict.conullity == 3
    assert verdict.status == "non-trivial nullity"
    assert all(verdict.inclusions.values())
    assert verdict.strict == {
        "nullity<=osc1": True,
        "osc1<=osc2": True,
        "osc2<=bounded": False,
        "bounded<=full": True,
        "0<nullity": True,
    }
    assert verdict.k3_specialization == {
        "codim_osc1_is_2": True,
        "osc2_equals_bounded": True,
        "codim_bounded_is_1": True,
    }


def test_chain_report_trivial():
    v = chain_report(distribution_chain(*pipeline(abelian(3))))
    assert v.trivial_nullity and v.status == "trivial nullity / flat"
    v = chain_report(distribution_chain(*pipeline(so3())))
    assert v.trivial_nullity and v.status == "trivial nullity"
    assert v.k3_specialization is None


def test_chain_dict_round_trip():
    from nullitylab.nullity import ChainVerdict

    v = chain_report(distribution_chain(*family(4)))
    assert ChainVerdict.from_dict(v.as_dict()) == v


@pytest.mark.parametrize("d", range(3, 13))
def test_family_chain_invariants(d):
    alg, table, ct = family(d)
    chain = distribution_chain(alg, table, ct)
    # planes in the first osculating distribution are flat
    B = chain.osc1.basis
    for i in range(B.shape[1]):
        for j in range(i + 1, B.shape[1]):
            assert abs(sectional(ct, B[:, i], B[:, j])) < 1e-8
    for v in chain.nullity.basis.T:
        J = jacobi_operator(ct, v)
        assert np.abs(J).max() < 1e-8
    assert chain.bounded.includes(chain.osc2)


def test_subspaces_follow_orthogonal_basis_change():
    rng = np.random.default_rng(7)
    Q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
    alg = build_example(ExampleSpec(4))
    before = distribution_chain(*pipeline(alg))
    after = distribution_chain(*pipeline(alg.change_basis(Q)))
    # old coordinates v become Q^T v in the new basis
    for name in ("nullity", "osc1", "osc2", "bounded"):
        moved = getattr(before, name).image(Q.T)
        angles = moved.principal_angles(getattr(after, name))
        assert angles.size == 0 or angles.max() < 1e-8, name
