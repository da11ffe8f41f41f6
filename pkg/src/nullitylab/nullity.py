"""The nullity of the curvature tensor and the distributions built on top of it.

Everything is evaluated at the base point e.  For a subspace H the tower step
is H -> H + span{Gamma_Z v : Z basis field, v in H}, which is all one needs
on a homogeneous space since there are Killing fields in every direction.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import TOL_ALG, TOL_SUB, MetricLieAlgebra
from .connection import ConnectionTable
from .curvature import CurvatureTensor
from .errors import SubalgebraClosureViolation
from .linalg import Subspace, kernel, orth


def nullity_space(ct: CurvatureTensor, tol: float = TOL_ALG) -> Subspace:
    """Vectors v with R_{v, x} = 0 for all x."""
    n = ct.dim
    # column m holds every entry of R_{e_m, e_j}, j = 0..n-1
    stacked = ct.R_ops.reshape(n, -1).T
    return Subspace(n, kernel(stacked, tol, check=True, what="nullity"), tol)


def _derivative_span(table: ConnectionTable, sub: Subspace) -> np.ndarray:
    """Columns Gamma_Z w over basis fields Z and basis vectors w of ``sub``."""
    if sub.dim == 0:
        return np.zeros((table.dim, 0))
    return np.einsum("zab,bw->azw", table.operators, sub.basis).reshape(table.dim, -1)


def derivative_step(table: ConnectionTable, sub: Subspace) -> Subspace:
    """H + span{Gamma_Z v : v in H}."""
    cols = np.hstack([sub.basis, _derivative_span(table, sub)])
    return Subspace(sub.ambient_dim, orth(cols, sub.tol), sub.tol)


def adapted_and_osculating(alg: MetricLieAlgebra, table: ConnectionTable, nullity: Subspace) -> dict:
    """The adapted distribution and the first two osculating distributions of the nullity."""
    n = alg.dim
    tol = nullity.tol
    adapted = Subspace(n, orth(_derivative_span(table, nullity), tol), tol)
    osc1 = nullity + adapted
    second = Subspace(n, orth(_derivative_span(table, adapted), tol), tol)
    osc2 = osc1 + second
    return {"adapted": adapted, "osc1": osc1, "osc2": osc2}


@dataclass
class BoundedAlgebra:
    algebra_basis: np.ndarray  # columns are elements of g
    distribution: Subspace
    closure_residual: float

    @property
    def dim(self) -> int:
        return self.algebra_basis.shape[1]


def bounded_algebra(alg: MetricLieAlgebra, table: ConnectionTable, nullity: Subspace,
                    tol: float = TOL_ALG) -> BoundedAlgebra:
    """Killing fields U whose Nomizu operator maps the nullity into itself."""
    n = alg.dim
    if nullity.dim == 0:
        basis = np.eye(n)
    else:
        perp = np.eye(n) - nullity.projector()
        # column k: the part of Gamma_k applied to nullity that leaves the nullity
        cond = np.einsum("ab,kbc,cw->awk", perp, table.operators, nullity.basis).reshape(-1, n)
        basis = kernel(cond, tol)
    sub = Subspace(n, orth(basis, tol), tol)
    residual = 0.0
    if 0 < sub.dim < n:
        brackets = np.einsum("ia,jb,ijk->kab", sub.basis, sub.basis, alg.brackets).reshape(n, -1)
        norms = np.linalg.norm(brackets, axis=0)
        off = np.linalg.norm(brackets - sub.project(brackets), axis=0)
        residual = float(np.max(off / np.maximum(norms, 1.0)))
    if residual > 10 * tol:
        raise SubalgebraClosureViolation(
            f"bounded algebra is not closed under the bracket (residual {residual:.3g})"
        )
    # simply transitive presentation: the value of U at e is its coefficient vector
    return BoundedAlgebra(sub.basis, sub, residual)


def osculating_tower(alg: MetricLieAlgebra, table: ConnectionTable, seed: Subspace,
                     max_steps: int | None = None) -> list:
    """Iterate the derivative step from ``seed`` until it stabilizes.

    Returns the strictly increasing list seed, H1, H2, ...; the last entry is
    the stable subspace (or the one reached after ``max_steps``).
    """
    if max_steps is None:
        max_steps = alg.dim
    tower = [seed]
    for _ in range(max_steps):
        nxt = derivative_step(table, tower[-1])
        if nxt.dim == tower[-1].dim:
            break
        tower.append(nxt)
    return tower


@dataclass
class DistributionChain:
    nullity: Subspace
    adapted: Subspace
    osc1: Subspace
    osc2: Subspace
    bounded: Subspace
    bounded_algebra_basis: np.ndarray
    conullity: int
    bounded_closure_residual: float = 0.0

    @property
    def trivial(self) -> bool:
        return self.nullity.is_zero or self.nullity.is_full


def distribution_chain(alg: MetricLieAlgebra, table: ConnectionTable, ct: CurvatureTensor,
                       tol: float = TOL_ALG) -> DistributionChain:
    nu = nullity_space(ct, tol)
    n = alg.dim
    if nu.is_zero or nu.is_full:
        # nothing to osculate: the tower collapses onto the nullity itself
        osc = {"adapted": Subspace.zero(n, tol), "osc1": nu, "osc2": nu}
    else:
        osc = adapted_and_osculating(alg, table, nu)
    bounded = bounded_algebra(alg, table, nu, tol)
    return DistributionChain(
        nullity=nu,
        adapted=osc["adapted"],
        osc1=osc["osc1"],
        osc2=osc["osc2"],
        bounded=bounded.distribution,
        bounded_algebra_basis=bounded.algebra_basis,
        conullity=n - nu.dim,
        bounded_closure_residual=bounded.closure_residual,
    )


@dataclass
class ChainVerdict:
    dims: dict
    conullity: int
    inclusions: dict
    strict: dict
    trivial_nullity: bool
    status: str
    k3_specialization: dict | None = None
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "dims": dict(self.dims),
            "conullity": self.conullity,
            "inclusions": dict(self.inclusions),
            "strict": dict(self.strict),
            "trivial_nullity": self.trivial_nullity,
            "status": self.status,
            "k3_specialization": self.k3_specialization,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ChainVerdict":
        return cls(
            dims=dict(d["dims"]),
            conullity=d["conullity"],
            inclusions=dict(d["inclusions"]),
            strict=dict(d["strict"]),
            trivial_nullity=d["trivial_nullity"],
            status=d["status"],
            k3_specialization=d["k3_specialization"],
            notes=list(d["notes"]),
        )


def chain_report(chain: DistributionChain, flat_factor_detected: bool = False,
                 tol_sub: float = TOL_SUB) -> ChainVerdict:
    """Record every inclusion of 0 < nu < nu1 < nu2 <= U < TM with its strictness."""
    n = chain.nullity.ambient_dim
    full = Subspace.full(n)
    steps = [
        ("nullity", chain.nullity),
        ("osc1", chain.osc1),
        ("osc2", chain.osc2),
        ("bounded", chain.bounded),
        ("full", full),
    ]
    dims = {name: sub.dim for name, sub in steps}
    inclusions, strict = {}, {}
    for (a, sa), (b, sb) in zip(steps, steps[1:]):
        key = f"{a}<={b}"
        inclusions[key] = bool(sb.includes(sa, tol_sub))
        strict[key] = sb.dim > sa.dim
    strict["0<nullity"] = chain.nullity.dim > 0

    trivial = chain.trivial or flat_factor_detected
    if chain.nullity.is_full:
        status = "trivial nullity / flat"
    elif chain.nullity.is_zero:
        status = "trivial nullity"
    elif flat_factor_detected:
        status = "trivial nullity / flat factor"
    else:
        expected = all(strict[k] for k in ("0<nullity", "nullity<=osc1", "osc1<=osc2", "bounded<=full"))
        status = "non-trivial nullity" if expected and all(inclusions.values()) else "chain violated"

    k3 = None
    if chain.conullity == 3 and not trivial:
        k3 = {
            "codim_osc1_is_2": n - chain.osc1.dim == 2,
            "osc2_equals_bounded": chain.osc2.equals(chain.bounded, tol_sub),
            "codim_bounded_is_1": n - chain.bounded.dim == 1,
        }
    return ChainVerdict(dims, chain.conullity, inclusions, strict, trivial, status, k3)
