"""Curvature at the base point from Killing-field data.

Sign convention: R_{x,y} = nabla_x nabla_y - nabla_y nabla_x - nabla_[x,y], so
sectional curvature is <R_{x,y} y, x> and Ric(y, z) = trace(v -> R_{v,y} z).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import TOL_ALG, MetricLieAlgebra
from .connection import ConnectionTable
from .errors import DegeneratePlane, DimensionMismatch


@dataclass(frozen=True)
class CurvatureTensor:
    """``R_ops[i, j]`` is the curvature operator R_{e_i, e_j} as an n x n matrix."""

    R_ops: np.ndarray
    metric: np.ndarray
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def dim(self) -> int:
        return self.metric.shape[0]

    def operator(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijab->ab", x, y, self.R_ops)

    def apply(self, x, y, z) -> np.ndarray:
        return self.operator(x, y) @ np.asarray(z, dtype=float)

    def lowered(self) -> np.ndarray:
        """Rm[i, j, k, l] = <R_{e_i, e_j} e_k, e_l>."""
        if "lowered" not in self._cache:
            self._cache["lowered"] = np.einsum("ijak,al->ijkl", self.R_ops, self.metric)
        return self._cache["lowered"]

    def symmetry_residuals(self) -> dict:
        """Residuals of the four algebraic curvature identities."""
        Rm = self.lowered()
        R = self.R_ops
        # R_{x,y} z + R_{y,z} x + R_{z,x} y with x=e_i, y=e_j, z=e_k -> component a
        t = np.einsum("ijak->ijka", R)  # t[i,j,k,a] = (R_{e_i,e_j} e_k)_a
        bianchi = t + np.einsum("jkia->ijka", t) + np.einsum("kija->ijka", t)
        return {
            "antisymmetry": float(np.max(np.abs(R + R.transpose(1, 0, 2, 3)))),
            "skew": float(np.max(np.abs(Rm + Rm.transpose(0, 1, 3, 2)))),
            "pair_symmetry": float(np.max(np.abs(Rm - Rm.transpose(2, 3, 0, 1)))),
            "bianchi": float(np.max(np.abs(bianchi))),
        }


def curvature_table(alg: MetricLieAlgebra, table: ConnectionTable) -> CurvatureTensor:
    """R_{X_i, X_j} = Gamma_{[X_i, X_j]} + [Gamma_i, Gamma_j] for every basis pair."""
    n = alg.dim
    if table.dim != n:
        raise DimensionMismatch("connection table and algebra disagree on dimension")
    G = table.operators
    R = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(i + 1, n):
            op = np.einsum("k,kab->ab", alg.brackets[i, j], G) + G[i] @ G[j] - G[j] @ G[i]
            R[i, j] = op
            R[j, i] = -op
    R.setflags(write=False)
    return CurvatureTensor(R, alg.metric)


def _orthonormal_frame(metric: np.ndarray) -> np.ndarray:
    """Columns form a metric-orthonormal basis (inverse transpose Cholesky factor)."""
    L = np.linalg.cholesky(metric)
    return np.linalg.inv(L).T


@dataclass
class RicciData:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    scalar: float

    def as_dict(self) -> dict:
        return {
            "matrix": self.matrix.tolist(),
            "eigenvalues": sorted(float(x) for x in self.eigenvalues),
            "scalar": float(self.scalar),
        }


def ricci(ct: CurvatureTensor) -> RicciData:
    """Ricci form Ric(e_i, e_j) = trace(v -> R_{v, e_i} e_j), its metric spectrum and the scalar."""
    if "ricci" in ct._cache:
        return ct._cache["ricci"]
    # (R_{e_m, e_i} e_j)_m summed over m
    mat = np.einsum("mimj->ij", ct.R_ops)
    F = _orthonormal_frame(ct.metric)
    in_frame = F.T @ mat @ F
    sym = 0.5 * (in_frame + in_frame.T)
    eig = np.sort(np.linalg.eigvalsh(sym))
    data = RicciData(mat, eig, float(np.trace(sym)))
    ct._cache["ricci"] = data
    return data


def sectional(ct: CurvatureTensor, x, y, tol: float = TOL_ALG) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (ct.dim,) or y.shape != (ct.dim,):
        raise DimensionMismatch("plane vectors have the wrong length")
    g = ct.metric
    gram = (x @ g @ x) * (y @ g @ y) - (x @ g @ y) ** 2
    if gram <= tol:
        raise DegeneratePlane(f"Gram determinant {gram:.3g} does not exceed {tol:.3g}")
    return float(ct.apply(x, y, y) @ g @ x / gram)


def jacobi_operator(ct: CurvatureTensor, v) -> np.ndarray:
    """Matrix of x -> R_{x, v} v."""
    v = np.asarray(v, dtype=float)
    if v.shape != (ct.dim,):
        raise DimensionMismatch("direction has the wrong length")
    return np.einsum("ijab,j,b->ai", ct.R_ops, v, v)
