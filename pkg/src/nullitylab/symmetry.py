"""Transvections at the base point and the witnesses built from them.

A Killing field X is a transvection at e when its Nomizu operator vanishes
there.  Everything is computed inside the input algebra, so the index of
symmetry reported here is relative to that algebra and can only undercount
the index of the full isometry algebra.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .algebra import TOL_ALG, MetricLieAlgebra
from .connection import ConnectionTable
from .curvature import CurvatureTensor, jacobi_operator
from .errors import NoWitness, NonlinearNullJacobiSet, TrivialNullity
from .linalg import Subspace, kernel, orth
from .nullity import DistributionChain


@dataclass
class TransvectionSet:
    cartan_basis: np.ndarray  # columns, elements of g
    symmetric_subspace: Subspace
    abelian_part_basis: np.ndarray
    flat_symmetry: Subspace
    null_jacobi_basis: np.ndarray
    index_of_symmetry: int
    co_index: int
    relative: bool = True
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "index": self.index_of_symmetry,
            "co_index": self.co_index,
            "relative_flag": self.relative,
            "cartan_dim": self.cartan_basis.shape[1],
            "abelian_part_dim": self.abelian_part_basis.shape[1],
            "null_jacobi_dim": self.null_jacobi_basis.shape[1],
        }


def _polarized_jacobi(ct: CurvatureTensor, x, y) -> np.ndarray:
    """Matrix of w -> (R_{w,x} y + R_{w,y} x) / 2; equals the Jacobi operator when x = y."""
    R = ct.R_ops
    return 0.5 * (np.einsum("ijab,j,b->ai", R, x, y) + np.einsum("ijab,j,b->ai", R, y, x))


def transvection_set(alg: MetricLieAlgebra, table: ConnectionTable, ct: CurvatureTensor,
                     tol: float = TOL_ALG) -> TransvectionSet:
    n = alg.dim
    ops = table.operators
    cartan = kernel(ops.reshape(n, -1).T, tol, check=True, what="transvections")

    # abelian part: X = P a with [X, P_j] = 0 for every column P_j of P
    m = cartan.shape[1]
    if m:
        br = np.einsum("ia,jb,ijk->kba", cartan, cartan, alg.brackets)  # [P_a, P_b] at [:, b, a]
        coeffs = kernel(br.reshape(-1, m), tol, check=True, what="abelian part")
        abelian = orth(cartan @ coeffs, tol) if coeffs.shape[1] else np.zeros((n, 0))
    else:
        abelian = np.zeros((n, 0))

    null_jacobi = _null_jacobi(ct, abelian, tol)

    # simply transitive presentation: the value at e of X is its coefficient vector
    sym = Subspace(n, orth(cartan, tol), tol)
    flat = Subspace(n, orth(abelian, tol), tol)
    return TransvectionSet(
        cartan_basis=cartan,
        symmetric_subspace=sym,
        abelian_part_basis=abelian,
        flat_symmetry=flat,
        null_jacobi_basis=null_jacobi,
        index_of_symmetry=sym.dim,
        co_index=n - sym.dim,
    )


def _null_jacobi(ct: CurvatureTensor, abelian: np.ndarray, tol: float) -> np.ndarray:
    """Elements of the abelian part whose Jacobi operator at e vanishes.

    Computed as the radical of the polarized Jacobi form on the abelian part,
    then verified on basis elements and on pairwise sums.
    """
    n, m = abelian.shape
    if m == 0:
        return abelian
    scale = max(1.0, float(np.max(np.abs(ct.R_ops))))
    polar = np.stack([
        np.stack([_polarized_jacobi(ct, abelian[:, i], abelian[:, j]) for j in range(m)])
        for i in range(m)
    ])  # polar[i, j] = B(q_i, q_j)
    coeffs = kernel(polar.reshape(m, -1).T, tol, check=True, what="null-Jacobi transvections")
    basis = orth(abelian @ coeffs, tol) if coeffs.shape[1] else np.zeros((n, 0))

    bound = 10 * tol * scale
    cols = [basis[:, i] for i in range(basis.shape[1])]
    cols += [cols[i] + cols[j] for i in range(len(cols)) for j in range(i + 1, len(cols))]
    for v in cols:
        res = float(np.max(np.abs(jacobi_operator(ct, v))))
        if res > bound:
            raise NonlinearNullJacobiSet(
                f"accepted null-Jacobi element has Jacobi operator of size {res:.3g}"
            )

    radical = Subspace(n, basis, tol)
    for i in range(m):
        q = abelian[:, i]
        if float(np.max(np.abs(jacobi_operator(ct, q)))) <= bound and not radical.contains(q):
            warnings.warn(
                "an abelian-part direction has null Jacobi operator but lies outside the "
                "computed null-Jacobi space; the null-Jacobi set may not be linear here",
                RuntimeWarning,
                stacklevel=3,
            )
            break
    return basis


@dataclass
class WitnessCertificate:
    nomizu_norm: float
    jacobi_norm: float
    ad_squared_norm: float
    ad_norm: float
    tol: float

    @property
    def clauses(self) -> dict:
        return {
            "transvection": self.nomizu_norm <= self.tol,
            "null_jacobi": self.jacobi_norm <= self.tol,
            "ad_squared_zero": self.ad_squared_norm <= self.tol,
            "ad_nonzero": self.ad_norm > 10 * self.tol,
        }

    @property
    def passed(self) -> bool:
        return all(self.clauses.values())

    def as_dict(self) -> dict:
        return {
            "nomizu_norm": self.nomizu_norm,
            "jacobi_norm": self.jacobi_norm,
            "ad_squared_norm": self.ad_squared_norm,
            "ad_norm": self.ad_norm,
            "tol": self.tol,
            "clauses": self.clauses,
            "passed": self.passed,
        }


@dataclass
class Witness:
    Y: np.ndarray
    certificate: WitnessCertificate

    def as_dict(self) -> dict:
        return {"Y": self.Y.tolist(), "certificate": self.certificate.as_dict()}


def _normalize(y: np.ndarray) -> np.ndarray:
    """Scale so that the first coefficient of largest magnitude is +1."""
    mags = np.abs(y)
    k = int(np.argmax(mags >= mags.max() * (1 - 1e-12)))
    return y / y[k] + 0.0  # + 0.0 turns -0.0 into 0.0


def witness_certificate(alg: MetricLieAlgebra, table: ConnectionTable, ct: CurvatureTensor,
                        y, tol: float = TOL_ALG) -> WitnessCertificate:
    y = np.asarray(y, dtype=float)
    ad = alg.ad(y)
    return WitnessCertificate(
        nomizu_norm=float(np.linalg.norm(table.operator(y))),
        jacobi_norm=float(np.linalg.norm(jacobi_operator(ct, y))),
        ad_squared_norm=float(np.linalg.norm(ad @ ad)),
        ad_norm=float(np.linalg.norm(ad)),
        tol=tol,
    )


def adapted_transvection_witness(alg: MetricLieAlgebra, table: ConnectionTable, ct: CurvatureTensor,
                                 chain: DistributionChain, tol: float = TOL_ALG,
                                 transvections: TransvectionSet | None = None) -> Witness:
    """A transvection Y with Y_e = Gamma_Z w for a nullity vector w, and Y_e not in the nullity."""
    nu = chain.nullity
    if nu.is_zero or nu.is_full:
        raise TrivialNullity("a witness needs a nullity that is neither zero nor everything")
    n = alg.dim
    if transvections is None:
        transvections = transvection_set(alg, table, ct, tol)
    sym = transvections.symmetric_subspace

    y = None
    # nullity vectors in the order of the coordinate axes they come from
    for m in range(n):
        w = nu.project(np.eye(n)[:, m])
        if np.linalg.norm(w) <= tol:
            continue
        for z in range(n):
            cand = table.operators[z] @ w
            if np.linalg.norm(cand) <= tol or nu.contains(cand) or not sym.contains(cand):
                continue
            y = cand
            break
        if y is not None:
            break

    if y is None:
        # fall back to the direction of ν̂ ∩ 𝔰 farthest from the nullity
        inter = chain.adapted.intersect(sym)
        if inter.is_zero:
            raise NoWitness("no direction of the adapted distribution is the value of a transvection")
        perp = inter.basis - nu.project(inter.basis)
        _, s, vt = np.linalg.svd(perp, full_matrices=False)
        if s[0] <= tol:
            raise NoWitness("every transvection value in the adapted distribution lies in the nullity")
        y = inter.basis @ vt[0]

    y = _normalize(y)
    return Witness(y, witness_certificate(alg, table, ct, y, tol))
