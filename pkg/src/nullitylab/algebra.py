"""Metric Lie algebras, their validation, and Lie-theoretic structure predicates."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch
from .linalg import kernel, orth, svd_rank

TOL_ALG = 1e-8
TOL_SUB = 1e-8
TOL_PD = 1e-12


@dataclass(frozen=True)
class Tolerances:
    tol_alg: float = TOL_ALG
    tol_sub: float = TOL_SUB
    tol_pd: float = TOL_PD

    def as_dict(self) -> dict:
        return {"tol_alg": self.tol_alg, "tol_sub": self.tol_sub, "tol_pd": self.tol_pd}


@dataclass(frozen=True)
class MetricLieAlgebra:
    """Structure constants plus an inner product at the base point.

    ``brackets[i, j]`` holds the coefficients of ``[X_i, X_j]`` in the basis.
    The table is read as the bracket of the Killing fields the basis
    elements induce on the group.
    """

    dim: int
    basis_labels: tuple
    brackets: np.ndarray
    metric: np.ndarray

    def __post_init__(self):
        n = int(self.dim)
        if n < 1:
            raise DimensionMismatch("dimension must be positive")
        c = np.array(self.brackets, dtype=float)
        g = np.array(self.metric, dtype=float)
        if c.shape != (n, n, n):
            raise DimensionMismatch(f"bracket table has shape {c.shape}, expected {(n, n, n)}")
        if g.shape != (n, n):
            raise DimensionMismatch(f"metric has shape {g.shape}, expected {(n, n)}")
        labels = tuple(str(s) for s in self.basis_labels)
        if len(labels) != n:
            raise DimensionMismatch(f"{len(labels)} basis labels for dimension {n}")
        c.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "brackets", c)
        object.__setattr__(self, "metric", g)
        object.__setattr__(self, "basis_labels", labels)

    @classmethod
    def from_bracket_dict(cls, dim, brackets, metric=None, labels=None):
        """Build from ``{(i, j): coeffs}`` with 0-based ``i < j``; antisymmetry is filled in."""
        c = np.zeros((dim, dim, dim))
        for (i, j), coeffs in brackets.items():
            c[i, j] = coeffs
            c[j, i] = -np.asarray(coeffs, dtype=float)
        if metric is None:
            metric = np.eye(dim)
        if labels is None:
            labels = [f"X{i + 1}" for i in range(dim)]
        return cls(dim, tuple(labels), c, metric)

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.brackets)

    def ad(self, x) -> np.ndarray:
        """Matrix of y -> [x, y]."""
        return np.einsum("i,ijk->kj", x, self.brackets)

    def ad_matrices(self) -> np.ndarray:
        """Stack of ad(e_i), shape (n, n, n)."""
        return np.einsum("ijk->ikj", self.brackets)

    def inner(self, x, y) -> float:
        return float(np.asarray(x) @ self.metric @ np.asarray(y))

    def change_basis(self, P, labels=None) -> "MetricLieAlgebra":
        """Same algebra in the basis f_i = sum_k P[k, i] e_k."""
        P = np.asarray(P, dtype=float)
        Pinv = np.linalg.inv(P)
        c = np.einsum("ai,bj,abk,lk->ijl", P, P, self.brackets, Pinv)
        c = 0.5 * (c - c.transpose(1, 0, 2))  # exact antisymmetry despite roundoff
        g = P.T @ self.metric @ P
        if labels is None:
            labels = [f"F{i + 1}" for i in range(self.dim)]
        return MetricLieAlgebra(self.dim, tuple(labels), c, g)

    def direct_sum(self, other: "MetricLieAlgebra") -> "MetricLieAlgebra":
        n, m = self.dim, other.dim
        c = np.zeros((n + m,) * 3)
        c[:n, :n, :n] = self.brackets
        c[n:, n:, n:] = other.brackets
        g = np.zeros((n + m, n + m))
        g[:n, :n] = self.metric
        g[n:, n:] = other.metric
        return MetricLieAlgebra(n + m, self.basis_labels + other.basis_labels, c, g)


@dataclass
class Violation:
    invariant: str
    residual: float
    detail: str = ""


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [
                {"invariant": v.invariant, "residual": v.residual, "detail": v.detail}
                for v in self.violations
            ],
        }


def jacobi_residual(alg: MetricLieAlgebra) -> float:
    c = alg.brackets
    # [[X_i, X_j], X_k] has coefficients sum_l c[i,j,l] c[l,k,:]
    t = np.einsum("ijl,lkm->ijkm", c, c)
    cyc = t + np.einsum("jkim->ijkm", t) + np.einsum("kijm->ijkm", t)
    return float(np.max(np.abs(cyc))) if cyc.size else 0.0


def validate(alg: MetricLieAlgebra, tol: Tolerances = Tolerances()) -> ValidationReport:
    """Check antisymmetry, the Jacobi identity and positive-definiteness.

    Violations are returned as data; nothing is raised.
    """
    report = ValidationReport()
    c, g = alg.brackets, alg.metric

    anti = float(np.max(np.abs(c + c.transpose(1, 0, 2))))
    if anti > 0.0:
        i, j, k = np.unravel_index(np.argmax(np.abs(c + c.transpose(1, 0, 2))), c.shape)
        report.violations.append(
            Violation("antisymmetry", anti, f"c[{i + 1}][{j + 1}] + c[{j + 1}][{i + 1}] != 0 in slot {k + 1}")
        )

    scale = max(1.0, float(np.max(np.abs(c)))) ** 2
    jac = jacobi_residual(alg)
    if jac > tol.tol_alg * scale:
        report.violations.append(Violation("jacobi", jac))

    sym = float(np.max(np.abs(g - g.T)))
    if sym > tol.tol_alg * max(1.0, float(np.max(np.abs(g)))):
        report.violations.append(Violation("metric_symmetric", sym))
    eig_min = float(np.min(np.linalg.eigvalsh(0.5 * (g + g.T))))
    if eig_min <= tol.tol_pd:
        report.violations.append(
            Violation("metric_positive_definite", eig_min, "smallest eigenvalue of the metric")
        )
    return report


@dataclass
class StructureReport:
    solvable: bool
    derived_series: list
    nilpotent_step: int | None
    lower_central_series: list
    reductive: bool
    radical_dim: int
    center_dim: int
    unimodular_defects: list
    killing_form: np.ndarray

    @property
    def unimodular(self) -> bool:
        return all(abs(t) <= TOL_ALG for t in self.unimodular_defects)

    def as_dict(self) -> dict:
        return {
            "solvable": self.solvable,
            "derived_series": list(self.derived_series),
            "nilpotent_step": self.nilpotent_step,
            "lower_central_series": list(self.lower_central_series),
            "reductive": self.reductive,
            "radical_dim": self.radical_dim,
            "center_dim": self.center_dim,
            "unimodular_defects": [float(t) for t in self.unimodular_defects],
            "killing_form": np.asarray(self.killing_form).tolist(),
        }


def _bracket_span(alg, left: np.ndarray, right: np.ndarray, tol: float) -> np.ndarray:
    if left.shape[1] == 0 or right.shape[1] == 0:
        return np.zeros((alg.dim, 0))
    cols = np.einsum("ia,jb,ijk->kab", left, right, alg.brackets).reshape(alg.dim, -1)
    return orth(cols, tol, check=True, what="bracket span")


def derived_series(alg: MetricLieAlgebra, tol: float = TOL_ALG) -> list:
    """Orthonormal bases of g, [g,g], [[g,g],[g,g]], ... until stable or zero."""
    series = [np.eye(alg.dim)]
    while series[-1].shape[1] > 0:
        nxt = _bracket_span(alg, series[-1], series[-1], tol)
        if nxt.shape[1] == series[-1].shape[1]:
            break
        series.append(nxt)
    return series


def lower_central_series(alg: MetricLieAlgebra, tol: float = TOL_ALG) -> list:
    full = np.eye(alg.dim)
    series = [full]
    while series[-1].shape[1] > 0:
        nxt = _bracket_span(alg, full, series[-1], tol)
        if nxt.shape[1] == series[-1].shape[1]:
            break
        series.append(nxt)
    return series


def killing_form(alg: MetricLieAlgebra) -> np.ndarray:
    ad = alg.ad_matrices()
    return np.einsum("iab,jba->ij", ad, ad)


def center(alg: MetricLieAlgebra, tol: float = TOL_ALG) -> np.ndarray:
    # x is central iff ad(e_j) x = 0 for all j
    stacked = alg.ad_matrices().reshape(-1, alg.dim)
    return kernel(stacked, tol, check=True, what="center")


def radical(alg: MetricLieAlgebra, tol: float = TOL_ALG) -> np.ndarray:
    """Killing-orthogonal complement of [g, g] (Cartan's criterion)."""
    derived = _bracket_span(alg, np.eye(alg.dim), np.eye(alg.dim), tol)
    if derived.shape[1] == 0:
        return np.eye(alg.dim)
    return kernel(derived.T @ killing_form(alg), tol, check=True, what="radical")


def structure_predicates(alg: MetricLieAlgebra, tol: float = TOL_ALG) -> StructureReport:
    derived = derived_series(alg, tol)
    lower = lower_central_series(alg, tol)
    nilpotent_step = len(lower) - 1 if lower[-1].shape[1] == 0 else None
    rad = radical(alg, tol)
    cen = center(alg, tol)
    # reductive iff the radical equals the center; the center always sits inside the radical
    same = rad.shape[1] == cen.shape[1] and (
        cen.shape[1] == 0 or svd_rank(np.hstack([rad, cen]), tol) == rad.shape[1]
    )
    ad = alg.ad_matrices()
    return StructureReport(
        solvable=derived[-1].shape[1] == 0,
        derived_series=[b.shape[1] for b in derived],
        nilpotent_step=nilpotent_step,
        lower_central_series=[b.shape[1] for b in lower],
        reductive=bool(same),
        radical_dim=rad.shape[1],
        center_dim=cen.shape[1],
        unimodular_defects=[float(np.trace(a)) for a in ad],
        killing_form=killing_form(alg),
    )


def abelian(n: int, metric=None) -> MetricLieAlgebra:
    return MetricLieAlgebra(n, tuple(f"X{i + 1}" for i in range(n)), np.zeros((n, n, n)),
                            np.eye(n) if metric is None else metric)


def heisenberg3(metric=None) -> MetricLieAlgebra:
    """[X1, X2] = X3."""
    return MetricLieAlgebra.from_bracket_dict(3, {(0, 1): [0, 0, 1]}, metric)


def so3(metric=None) -> MetricLieAlgebra:
    """[X1,X2]=X3 and cyclic; the default metric is minus the Killing form (bi-invariant)."""
    alg = MetricLieAlgebra.from_bracket_dict(
        3, {(0, 1): [0, 0, 1], (1, 2): [1, 0, 0], (0, 2): [0, -1, 0]}, np.eye(3)
    )
    if metric is None:
        metric = -killing_form(alg)
    return MetricLieAlgebra(3, alg.basis_labels, alg.brackets, metric)
