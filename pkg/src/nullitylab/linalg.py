"""Rank decisions and tolerance-aware subspaces.

All rank and kernel decisions in the package go through :func:`svd_rank`,
which thresholds singular values at ``tol * max(sigma_max, 1)``.  The floor
of one keeps matrices that are zero up to roundoff from being given rank.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, IllConditioned

ORTHO_TOL = 1e-12


def threshold(singular_values: np.ndarray, tol: float) -> float:
    top = float(singular_values[0]) if singular_values.size else 0.0
    return tol * max(top, 1.0)


def check_gap(singular_values: np.ndarray, tol: float, what: str = "rank decision") -> None:
    """Raise IllConditioned when a singular value sits within a decade of the cut."""
    thr = threshold(singular_values, tol)
    near = singular_values[(singular_values > thr / 10) & (singular_values < thr * 10)]
    if near.size:
        raise IllConditioned(
            f"{what}: singular values {near.tolist()} lie within a decade of the "
            f"threshold {thr:.3g}; the verdict depends on the tolerance",
            singular_values=singular_values.tolist(),
        )


def svd_rank(mat: np.ndarray, tol: float, check: bool = False, what: str = "rank decision") -> int:
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    if mat.size == 0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    if check:
        check_gap(s, tol, what)
    return int(np.sum(s > threshold(s, tol)))


def kernel(mat: np.ndarray, tol: float, check: bool = False, what: str = "kernel") -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical kernel of ``mat``."""
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    ncols = mat.shape[1]
    if mat.shape[0] == 0 or not np.any(mat):
        return np.eye(ncols)
    # only V is needed; a full U of a tall matrix would be wasted work
    _, s, vt = np.linalg.svd(mat, full_matrices=mat.shape[0] < ncols)
    if check:
        check_gap(s, tol, what)
    rank = int(np.sum(s > threshold(s, tol)))
    return vt[rank:].T.copy()


def orth(columns: np.ndarray, tol: float, check: bool = False, what: str = "span") -> np.ndarray:
    """Orthonormal basis of the column span of ``columns``."""
    columns = np.asarray(columns, dtype=float)
    if columns.ndim == 1:
        columns = columns[:, None]
    if columns.shape[1] == 0 or not np.any(columns):
        return np.zeros((columns.shape[0], 0))
    u, s, _ = np.linalg.svd(columns, full_matrices=False)
    if check:
        check_gap(s, tol, what)
    rank = int(np.sum(s > threshold(s, tol)))
    return u[:, :rank].copy()


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of R^n held as an orthonormal column basis.

    Orthonormality is with respect to the standard inner product of the
    coordinates; metric-dependent notions (orthogonal complements) take the
    metric explicitly.
    """

    ambient_dim: int
    basis: np.ndarray
    tol: float = 1e-8

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float).reshape(self.ambient_dim, -1)
        gram = basis.T @ basis
        if not np.allclose(gram, np.eye(basis.shape[1]), atol=ORTHO_TOL, rtol=0):
            raise ValueError("Subspace basis must have orthonormal columns")
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def span(cls, vectors, ambient_dim: int | None = None, tol: float = 1e-8) -> "Subspace":
        """Span of the given columns (2-D array) or list of 1-D vectors."""
        if isinstance(vectors, (list, tuple)):
            if not vectors:
                if ambient_dim is None:
                    raise ValueError("ambient_dim needed for an empty span")
                return cls.zero(ambient_dim, tol)
            cols = np.column_stack([np.asarray(v, dtype=float) for v in vectors])
        else:
            cols = np.asarray(vectors, dtype=float)
            if cols.ndim == 1:
                cols = cols[:, None]
        n = cols.shape[0] if ambient_dim is None else ambient_dim
        if cols.shape[0] != n:
            raise DimensionMismatch(f"vectors have length {cols.shape[0]}, expected {n}")
        return cls(n, orth(cols, tol), tol)

    @classmethod
    def zero(cls, n: int, tol: float = 1e-8) -> "Subspace":
        return cls(n, np.zeros((n, 0)), tol)

    @classmethod
    def full(cls, n: int, tol: float = 1e-8) -> "Subspace":
        return cls(n, np.eye(n), tol)

    @classmethod
    def coordinate(cls, n: int, indices, tol: float = 1e-8) -> "Subspace":
        """Span of the standard basis vectors with the given 0-based indices."""
        return cls(n, np.eye(n)[:, list(indices)], tol)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def project(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return self.basis @ (self.basis.T @ v)

    def residual(self, v) -> float:
        """Relative distance of ``v`` from the subspace (0 for v = 0)."""
        v = np.asarray(v, dtype=float)
        norm = np.linalg.norm(v)
        if norm == 0:
            return 0.0
        return float(np.linalg.norm(v - self.project(v)) / norm)

    def contains(self, v, tol: float | None = None) -> bool:
        return self.residual(v) <= (self.tol if tol is None else tol)

    def inclusion_residual(self, other: "Subspace") -> float:
        """Largest residual of a basis vector of ``other`` against ``self``."""
        if other.dim == 0:
            return 0.0
        diff = other.basis - self.project(other.basis)
        return float(np.max(np.linalg.norm(diff, axis=0)))

    def includes(self, other: "Subspace", tol: float | None = None) -> bool:
        return self.inclusion_residual(other) <= (self.tol if tol is None else tol)

    def principal_angles(self, other: "Subspace") -> np.ndarray:
        if self.dim == 0 or other.dim == 0:
            return np.zeros(0)
        return scipy.linalg.subspace_angles(self.basis, other.basis)

    def equals(self, other: "Subspace", tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        if self.ambient_dim != other.ambient_dim or self.dim != other.dim:
            return False
        angles = self.principal_angles(other)
        return bool(angles.size == 0 or angles.max() < tol)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("subspaces live in different ambient spaces")
        return Subspace(self.ambient_dim, orth(np.hstack([self.basis, other.basis]), self.tol), self.tol)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.tol)
        # x = B a = C b  <=>  [B, -C] (a, b) = 0
        null = kernel(np.hstack([self.basis, -other.basis]), self.tol)
        return Subspace.span(self.basis @ null[: self.dim], self.ambient_dim, self.tol)

    def complement(self, metric: np.ndarray | None = None) -> "Subspace":
        """Orthogonal complement; with ``metric`` given, orthogonal for that inner product."""
        n = self.ambient_dim
        if self.dim == 0:
            return Subspace.full(n, self.tol)
        g = np.eye(n) if metric is None else np.asarray(metric, dtype=float)
        return Subspace(n, kernel(self.basis.T @ g, self.tol), self.tol)

    def image(self, mat: np.ndarray) -> "Subspace":
        return Subspace.span(np.asarray(mat) @ self.basis, self.ambient_dim, self.tol)

    def to_list(self) -> list[list[float]]:
        """Basis vectors as a list of coordinate lists."""
        return self.basis.T.tolist()
