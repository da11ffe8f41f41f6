"""Holonomy algebra via Kostant's method and invariant-subspace verdicts."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import TOL_ALG
from .connection import ConnectionTable
from .curvature import CurvatureTensor, _orthonormal_frame
from .errors import ClosureOverflow, Inconclusive
from .linalg import Subspace, kernel, orth
from .nullity import nullity_space

DEFAULT_SEED = 20240601


@dataclass
class HolonomyAlgebra:
    generators: np.ndarray  # (m, n, n)
    closure_basis: np.ndarray  # (dim, n, n), Frobenius-orthonormal
    depth: int
    metric: np.ndarray

    @property
    def dim(self) -> int:
        return self.closure_basis.shape[0]

    @property
    def n(self) -> int:
        return self.metric.shape[0]

    def projection_residual(self, mat: np.ndarray) -> float:
        """Relative Frobenius distance of ``mat`` from the closure span."""
        v = np.asarray(mat, dtype=float).ravel()
        norm = np.linalg.norm(v)
        if norm == 0:
            return 0.0
        B = self.closure_basis.reshape(self.dim, -1).T
        return float(np.linalg.norm(v - B @ (B.T @ v)) / norm)

    def skew_residual(self) -> float:
        if self.dim == 0:
            return 0.0
        g = self.metric
        res = np.einsum("iba,bc->iac", self.closure_basis, g) + np.einsum("ab,ibc->iac", g, self.closure_basis)
        return float(np.max(np.abs(res)))

    def closure_residual(self) -> float:
        """Largest residual of a commutator of two basis elements against the span."""
        worst = 0.0
        for X in self.closure_basis:
            for Y in self.closure_basis:
                C = X @ Y - Y @ X
                if np.linalg.norm(C) > 0:
                    worst = max(worst, self.projection_residual(C) * np.linalg.norm(C))
        return worst

    def curvature_containment(self, ct: CurvatureTensor) -> float:
        n = ct.dim
        return max(
            (self.projection_residual(ct.R_ops[i, j]) * np.linalg.norm(ct.R_ops[i, j])
             for i in range(n) for j in range(i + 1, n)),
            default=0.0,
        )


def _span(mats: np.ndarray, n: int, tol: float) -> np.ndarray:
    if len(mats) == 0:
        return np.zeros((0, n, n))
    cols = orth(np.asarray(mats).reshape(len(mats), -1).T, tol)
    return cols.T.reshape(-1, n, n)


def kostant_span(table: ConnectionTable, tol: float = TOL_ALG) -> HolonomyAlgebra:
    """Lie algebra generated by the Nomizu operators of the basis fields."""
    n = table.dim
    limit = n * (n - 1) // 2 + 1
    gens = np.array(table.operators)
    basis = _span(gens, n, tol)
    new = basis
    depth = 0
    while len(new):
        brackets = [X @ Y - Y @ X for X in new for Y in basis]
        grown = _span(np.concatenate([basis, np.array(brackets)]), n, tol)
        if len(grown) > limit:
            raise ClosureOverflow(f"closure reached dimension {len(grown)} > {limit}")
        if len(grown) == len(basis):
            break
        # the part of the grown span orthogonal to the old one
        old = basis.reshape(len(basis), -1).T
        fresh = grown.reshape(len(grown), -1).T
        fresh = fresh - old @ (old.T @ fresh)
        new = _span(fresh.T, n, tol)
        basis = grown
        depth += 1
    return HolonomyAlgebra(gens, basis, depth, np.array(table.metric))


@dataclass
class InvariantVerdict:
    irreducible: bool
    invariant: Subspace | None
    method: str
    flat_split: bool = False
    seeds_agree: bool = True
    notes: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "irreducible" if self.irreducible else "invariant"

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "invariant": None if self.invariant is None else self.invariant.to_list(),
            "method": self.method,
            "flat_split": self.flat_split,
            "seeds_agree": self.seeds_agree,
            "notes": list(self.notes),
        }


def _closure(ops, sub: np.ndarray, tol: float) -> np.ndarray:
    """Smallest subspace containing ``sub`` and invariant under every op."""
    cur = orth(sub, tol)
    while True:
        cols = np.hstack([cur] + [op @ cur for op in ops])
        nxt = orth(cols, tol)
        if nxt.shape[1] == cur.shape[1]:
            return cur
        cur = nxt


def _eigen_components(X: np.ndarray, tol: float) -> list:
    """Real invariant subspaces of X from its eigenvectors: kernel, real lines and eigenplanes."""
    n = X.shape[0]
    vals, vecs = np.linalg.eig(X)
    scale = max(1.0, float(np.max(np.abs(vals))))
    comps = []
    done = np.zeros(n, bool)
    for k in range(n):
        if done[k]:
            continue
        same = np.abs(vals - vals[k]) <= np.sqrt(tol) * scale
        conj = np.abs(vals - np.conj(vals[k])) <= np.sqrt(tol) * scale
        done |= same | conj
        block = vecs[:, same]
        comps.append(orth(np.hstack([block.real, block.imag]), tol))
        # single vectors inside a repeated component are candidates too
        if block.shape[1] > 1:
            v = block[:, :1]
            comps.append(orth(np.hstack([v.real, v.imag]), tol))
    return [c for c in comps if c.shape[1]]


def _randomized_search(ops, rng: np.random.Generator, tol: float) -> np.ndarray | None:
    """Closure of the eigen-components of a generic combination; a proper one is invariant."""
    n = ops[0].shape[0]
    X = np.einsum("i,iab->ab", rng.standard_normal(len(ops)), np.asarray(ops))
    for comp in _eigen_components(X, tol):
        inv = _closure(ops, comp, tol)
        if inv.shape[1] < n:
            return inv
    return None


def _symmetric_commutant(ops, tol: float) -> np.ndarray:
    """Basis of symmetric matrices commuting with every (skew) op, shape (m, n, n)."""
    n = ops[0].shape[0]
    iu = np.triu_indices(n)
    basis = []
    for a, b in zip(*iu):
        S = np.zeros((n, n))
        S[a, b] = S[b, a] = 1.0
        basis.append(S)
    basis = np.array(basis)
    cond = np.stack([np.concatenate([(S @ op - op @ S).ravel() for op in ops]) for S in basis], axis=1)
    coeffs = kernel(cond, tol, check=True, what="commutant")
    return np.einsum("ka,kij->aij", coeffs, basis)


def invariant_subspaces(ops, metric=None, seed: int = DEFAULT_SEED, n_seeds: int = 20,
                        tol: float = TOL_ALG) -> InvariantVerdict:
    """Find a proper common invariant subspace of ``ops`` or certify that none exists."""
    ops = [np.asarray(op, dtype=float) for op in ops]
    if not ops:
        raise ValueError("need at least one operator")
    n = ops[0].shape[0]
    g = np.eye(n) if metric is None else np.asarray(metric, dtype=float)
    scale = max(1.0, max(float(np.max(np.abs(op))) for op in ops))

    if all(float(np.max(np.abs(op))) <= tol * scale for op in ops):
        return InvariantVerdict(False, Subspace.coordinate(n, [0], tol), "zero operators", flat_split=True)

    common = kernel(np.vstack(ops), tol, check=True, what="common kernel")
    if 0 < common.shape[1] < n:
        return InvariantVerdict(False, Subspace(n, common, tol), "common kernel", flat_split=True)

    skew = all(float(np.max(np.abs(op.T @ g + g @ op))) <= tol * scale * max(1.0, np.abs(g).max())
               for op in ops)

    # randomized certification, one independent generic combination per seed
    found = []
    for s in range(n_seeds):
        found.append(_randomized_search(ops, np.random.default_rng([seed, s]), tol))
    hits = [f for f in found if f is not None]

    if not skew:
        if hits and len(hits) != len(found):
            raise Inconclusive(f"{len(hits)} of {len(found)} certification seeds found an invariant subspace")
        if hits:
            return InvariantVerdict(False, Subspace(n, hits[0], tol), "randomized")
        return InvariantVerdict(True, None, "randomized")

    F = _orthonormal_frame(g)
    Finv = np.linalg.inv(F)
    framed = [Finv @ op @ F for op in ops]
    comm = _symmetric_commutant(framed, tol)
    if comm.shape[0] <= 1:
        if hits:
            raise Inconclusive("randomized search found an invariant subspace of an irreducible family")
        return InvariantVerdict(True, None, "symmetric commutant")

    rng = np.random.default_rng(seed)
    S = np.einsum("a,aij->ij", rng.standard_normal(comm.shape[0]), comm)
    vals, vecs = np.linalg.eigh(S)
    spread = max(1.0, float(np.max(np.abs(vals))))
    first = vecs[:, np.abs(vals - vals[0]) <= np.sqrt(tol) * spread]
    inv = Subspace.span(F @ first, n, tol)
    verdict = InvariantVerdict(False, inv, "symmetric commutant", seeds_agree=len(hits) in (0, len(found)))
    if len(hits) != len(found):
        verdict.notes.append(
            f"randomized search found an invariant subspace for {len(hits)} of {len(found)} seeds"
        )
    return verdict


def flat_factor_detector(hol: HolonomyAlgebra, ct: CurvatureTensor, tol: float = TOL_ALG,
                         nullity: Subspace | None = None) -> Subspace:
    """Common kernel of the holonomy algebra intersected with the nullity."""
    n = ct.dim
    if nullity is None:
        nullity = nullity_space(ct, tol)
    if hol.dim == 0:
        fixed = Subspace.full(n, tol)
    else:
        fixed = Subspace(n, kernel(hol.closure_basis.reshape(-1, n), tol, check=True, what="flat factor"), tol)
    return fixed.intersect(nullity)


def closure_dims_by_tol(table: ConnectionTable, tols=(1e-10, 1e-8, 1e-6)) -> dict:
    return {t: kostant_span(table, t).dim for t in tols}

