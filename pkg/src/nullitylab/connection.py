"""Nomizu operators of the basis Killing fields at the base point."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import TOL_ALG, TOL_PD, MetricLieAlgebra
from .errors import DimensionMismatch, SingularMetric


@dataclass(frozen=True)
class ConnectionTable:
    """``operators[i]`` is the matrix of v -> nabla_v X_i at e (columns = directions)."""

    operators: np.ndarray
    metric: np.ndarray

    @property
    def dim(self) -> int:
        return self.metric.shape[0]

    def operator(self, x) -> np.ndarray:
        """Nomizu operator of the Killing field with coefficient vector ``x``."""
        return np.einsum("i,iab->ab", np.asarray(x, dtype=float), self.operators)

    def skew_residual(self) -> float:
        g = self.metric
        res = np.einsum("iba,bc->iac", self.operators, g) + np.einsum("ab,ibc->iac", g, self.operators)
        return float(np.max(np.abs(res))) if res.size else 0.0

    def torsion_residual(self, alg: MetricLieAlgebra) -> float:
        # nabla_{e_j} X_i - nabla_{e_i} X_j = [X_j, X_i]
        nab = self.operators  # nab[i][:, j] = nabla_{e_j} X_i
        lhs = np.einsum("iaj->jia", nab) - np.einsum("jai->jia", nab)
        return float(np.max(np.abs(lhs - alg.brackets))) if lhs.size else 0.0


def koszul_tensor(alg: MetricLieAlgebra) -> np.ndarray:
    """T[i, j, k] = <nabla_{e_i} X_j, e_k> from the Killing-field Koszul formula."""
    C = np.einsum("ijl,lk->ijk", alg.brackets, alg.metric)  # <[X_i, X_j], X_k>
    return 0.5 * (C + np.einsum("ikj->ijk", C) + np.einsum("jki->ijk", C))


def nomizu_table(alg: MetricLieAlgebra) -> ConnectionTable:
    g = alg.metric
    if np.max(np.abs(g - g.T)) > TOL_ALG * max(1.0, float(np.max(np.abs(g)))) or (
        np.min(np.linalg.eigvalsh(0.5 * (g + g.T))) <= TOL_PD
    ):
        raise SingularMetric("metric is not symmetric positive definite")
    T = koszul_tensor(alg)
    ops = np.linalg.solve(g, np.einsum("ijk->jki", T))  # ops[j][k, i] = (g^-1 T[i, j, :])_k
    ops.setflags(write=False)
    return ConnectionTable(ops, alg.metric)


def covariant_derivative(table: ConnectionTable, v, i: int) -> np.ndarray:
    """nabla_v X_i at the base point."""
    v = np.asarray(v, dtype=float)
    if v.shape != (table.dim,):
        raise DimensionMismatch(f"vector of shape {v.shape} for dimension {table.dim}")
    if not 0 <= i < table.dim:
        raise DimensionMismatch(f"basis index {i} out of range")
    return table.operators[i] @ v
