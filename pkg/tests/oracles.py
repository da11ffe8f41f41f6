"""Reference computations that share no code with the library.

The curvature oracle treats the bracket table as the bracket of
left-invariant fields of a Lie group with a left-invariant metric and works
entirely in that frame:

    <nabla_x y, z> = 1/2 (<[x,y],z> - <[y,z],x> + <[z,x],y>)
    R(x, y) = nabla_x nabla_y - nabla_y nabla_x - nabla_[x,y]

Reading the same table as Killing fields describes the group with bracket
of opposite sign, which is isometric to this one through x -> -x, so the
curvature components agree.
"""
from __future__ import annotations

import itertools

import numpy as np
import sympy


def left_invariant_curvature(c: np.ndarray, g: np.ndarray) -> np.ndarray:
    """R[x, y][:, z] = R(e_x, e_y) e_z for left-invariant fields with bracket table c."""
    n = g.shape[0]
    ginv = np.linalg.inv(g)
    C = np.zeros((n, n, n))
    for x, y, z in itertools.product(range(n), repeat=3):
        C[x, y, z] = sum(c[x, y, m] * g[m, z] for m in range(n))
    # D[x][:, y] = nabla_{e_x} e_y
    D = np.zeros((n, n, n))
    for x, y in itertools.product(range(n), repeat=2):
        low = np.array([0.5 * (C[x, y, z] - C[y, z, x] + C[z, x, y]) for z in range(n)])
        D[x][:, y] = ginv @ low
    R = np.zeros((n, n, n, n))
    for x, y in itertools.product(range(n), repeat=2):
        Dxy = sum(c[x, y, m] * D[m] for m in range(n))
        R[x, y] = D[x] @ D[y] - D[y] @ D[x] - Dxy
    return R


def ricci_eigenvalues(R: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Eigenvalues of the Ricci form relative to g."""
    n = g.shape[0]
    # Ric(y, z) = sum_m (R(e_m, y) z)_m
    ric = np.array([[sum(R[m, i][m, j] for m in range(n)) for j in range(n)] for i in range(n)])
    ric = 0.5 * (ric + ric.T)
    L = np.linalg.cholesky(g)
    Li = np.linalg.inv(L)
    return np.sort(np.linalg.eigvalsh(Li @ ric @ Li.T))


def nullity_dimension(R: np.ndarray, tol: float = 1e-9) -> int:
    """dim {v : R(v, e_j) = 0 for all j}, by brute-force SVD of the full stacked map."""
    n = R.shape[0]
    rows = []
    for j in range(n):
        for a in range(n):
            for b in range(n):
                rows.append([R[m, j][a, b] for m in range(n)])
    s = np.linalg.svd(np.array(rows), compute_uv=False)
    return n - int(np.sum(s > tol * max(1.0, s[0])))


def skew_ones_exact(m: int) -> sympy.Matrix:
    return sympy.Matrix(m, m, lambda i, j: 1 if i < j else (-1 if i > j else 0))


def observability_rank(m: int) -> int:
    """Exact rank of [e1^T; e1^T M; ...; e1^T M^(m-1)].

    Full rank means no non-zero M-invariant subspace lies in the hyperplane e1^perp.
    """
    M = skew_ones_exact(m)
    row = sympy.Matrix([[1] + [0] * (m - 1)])
    rows = []
    for _ in range(m):
        rows.append(row)
        row = row * M
    return sympy.Matrix.vstack(*rows).rank()


def random_semidirect(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    """Bracket table of R x_D R^(n-1): [X_n, X_i] = sum_k D[k, i] X_k, others zero.

    Any matrix D gives a Lie algebra, so this is a convenient random family.
    """
    D = scale * rng.standard_normal((n - 1, n - 1))
    c = np.zeros((n, n, n))
    for i in range(n - 1):
        c[n - 1, i, : n - 1] = D[:, i]
        c[i, n - 1, : n - 1] = -D[:, i]
    return c


def random_metric(rng: np.random.Generator, n: int) -> np.ndarray:
    B = rng.standard_normal((n, n))
    return B @ B.T + n * np.eye(n)
