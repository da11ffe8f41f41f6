"""A family of solvable metric Lie algebras with conullity three.

For d >= 3 the algebra has basis E_1..E_d, A with [E_i, E_j] = 0 and
[A, E_i] = sum_k A[k, i] E_k, realized by (d+1) x (d+1) matrices; the basis is
orthonormal.  The default action matrix is

    A = [[a M, a e_1], [-a e_1^T, a]]

with M the (d-1) x (d-1) skew matrix with ones above the diagonal and a
fixed by trace(A A^T) = 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .algebra import TOL_ALG, TOL_SUB, MetricLieAlgebra, structure_predicates
from .connection import nomizu_table
from .curvature import curvature_table, ricci
from .errors import BadDimension, BadMode, CertificateFailure, EigenDegeneracy, NotInNullity
from .holonomy import DEFAULT_SEED, flat_factor_detector, invariant_subspaces, kostant_span
from .linalg import Subspace
from .nullity import chain_report, distribution_chain
from .symmetry import adapted_transvection_witness, transvection_set

MODES = ("default", "custom_A")


def skew_ones(m: int) -> np.ndarray:
    """Skew m x m matrix with +1 above the diagonal."""
    return np.triu(np.ones((m, m)), 1) - np.tril(np.ones((m, m)), -1)


def default_a(d: int) -> float:
    n = d + 1
    return 1.0 / np.sqrt(3 + (n - 2) * (n - 3))


def default_action(d: int) -> np.ndarray:
    a = default_a(d)
    A = np.zeros((d, d))
    A[: d - 1, : d - 1] = a * skew_ones(d - 1)
    A[0, d - 1] = a
    A[d - 1, 0] = -a
    A[d - 1, d - 1] = a
    return A


@dataclass
class ExampleSpec:
    d: int
    A: np.ndarray | None = None
    a: float | None = None
    mode: str = "default"

    def __post_init__(self):
        if self.mode not in MODES:
            raise BadMode(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.mode == "default":
            if self.d < 3:
                raise BadDimension(f"the family needs d >= 3, got {self.d}")
            if self.A is None:
                self.A = default_action(self.d)
            if self.a is None:
                self.a = default_a(self.d)
        else:
            if self.d < 1:
                raise BadDimension(f"d must be positive, got {self.d}")
            if self.A is None:
                raise BadMode("custom_A mode needs an action matrix")
        self.A = np.asarray(self.A, dtype=float)
        if self.A.shape != (self.d, self.d):
            raise BadDimension(f"action matrix has shape {self.A.shape}, expected {(self.d, self.d)}")

    @property
    def n(self) -> int:
        return self.d + 1

    @property
    def labels(self) -> tuple:
        return tuple(f"E{i + 1}" for i in range(self.d)) + ("A",)


def matrix_basis(spec: ExampleSpec) -> np.ndarray:
    """The matrices E_1..E_d, A of size (d+1) x (d+1), stacked."""
    d = spec.d
    mats = np.zeros((d + 1, d + 1, d + 1))
    for i in range(d):
        mats[i, i, d] = 1.0
    mats[d, :d, :d] = spec.A
    return mats


def coordinates(mats: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Coefficients of the matrix X in the basis ``mats``."""
    B = mats.reshape(len(mats), -1).T
    coeffs, *_ = np.linalg.lstsq(B, np.asarray(X).ravel(), rcond=None)
    return coeffs


def build_example(spec: ExampleSpec) -> MetricLieAlgebra:
    mats = matrix_basis(spec)
    n = spec.n
    c = np.zeros((n, n, n))
    for i in range(n):
        for j in range(i + 1, n):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            coeffs = coordinates(mats, comm)
            # the commutators lie in the span exactly; drop lstsq roundoff
            coeffs[np.abs(coeffs) < 1e-15] = 0.0
            c[i, j] = coeffs
            c[j, i] = -coeffs
    return MetricLieAlgebra(n, spec.labels, c, np.eye(n))


def expected_ricci(d: int) -> tuple:
    n = d + 1
    a2 = default_a(d) ** 2
    eig = [0.0] * (n - 3) + [-a2, a2 * (-1 + np.sqrt(5)) / 2, a2 * (-1 - np.sqrt(5)) / 2]
    return np.sort(np.array(eig)), -2 * a2


def expected_nomizu(d: int) -> dict:
    """Nomizu operators of E_d and A in the basis E_1..E_d, A."""
    n, a = d + 1, default_a(d)
    Ed = np.zeros((n, n))
    Ed[d - 1, d] = a
    Ed[d, d - 1] = -a
    GA = np.zeros((n, n))
    GA[: d - 1, : d - 1] = -a * skew_ones(d - 1)
    GA[0, d - 1] = -a
    GA[d - 1, 0] = a
    return {"E_d": Ed, "A": GA}


@dataclass
class Clause:
    name: str
    passed: bool
    residual: float | None = None
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "residual": self.residual, "detail": self.detail}


@dataclass
class FamilyCertificate:
    d: int
    a: float
    clauses: list = field(default_factory=list)
    values: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.d + 1

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    @property
    def first_failure(self) -> Clause | None:
        return next((c for c in self.clauses if not c.passed), None)

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "a": self.a,
            "passed": self.passed,
            "clauses": [c.as_dict() for c in self.clauses],
            "values": self.values,
        }


def verify_family_certificate(spec: ExampleSpec, strict: bool = True, seed: int = DEFAULT_SEED,
                    tol: float = TOL_ALG, n_seeds: int = 20) -> FamilyCertificate:
    """Recompute every claimed property of a default-family example and record residuals.

    With ``strict`` the first failed clause raises CertificateFailure.
    """
    if spec.mode != "default":
        raise BadMode("the certificate is defined for the default family only")
    d, n, a = spec.d, spec.n, spec.a
    alg = build_example(spec)
    table = nomizu_table(alg)
    ct = curvature_table(alg, table)
    cert = FamilyCertificate(d, float(a))
    add = cert.clauses.append

    ops = table.operators
    res = float(max(np.linalg.norm(ops[i]) for i in range(d - 1)))
    add(Clause("transvections E_1..E_(d-1)", res < 1e-12, res))
    want = expected_nomizu(d)
    res = float(np.max(np.abs(ops[d - 1] - want["E_d"])))
    add(Clause("nomizu E_d block matrix", res < 1e-12, res))
    res = float(np.max(np.abs(ops[d] - want["A"])))
    add(Clause("nomizu A block matrix", res < 1e-12, res))

    chain = distribution_chain(alg, table, ct, tol)
    expected_nu = Subspace.coordinate(n, range(1, d - 1))
    angles = chain.nullity.principal_angles(expected_nu)
    res = float(angles.max()) if angles.size else 0.0
    add(Clause("nullity = span{E_2..E_(d-1)}", chain.nullity.equals(expected_nu, TOL_SUB), res))
    cert.values["notes"] = [
        "nullity is the computed curvature kernel; E_d is not in it, so span{E_2..E_d} "
        "is not the nullity and would give conullity 2",
        "the orthogonal complement of the nullity is span{E_1, E_d, A}; Ricci data are "
        "reported as a basis-free spectrum",
        "the witness transvection is certified up to scale and normalized so its leading "
        "coefficient is +1",
    ]

    hol = kostant_span(table, tol)
    flat = flat_factor_detector(hol, ct, tol, chain.nullity)
    verdict = chain_report(chain, flat_factor_detected=not flat.is_zero)
    dims = (chain.nullity.dim, chain.osc1.dim, chain.osc2.dim, chain.bounded.dim)
    add(Clause("chain dimensions (n-3, n-2, n-1, n-1)", dims == (n - 3, n - 2, n - 1, n - 1),
               detail=str(dims)))
    add(Clause("conullity 3", chain.conullity == 3, detail=str(chain.conullity)))
    k3 = verdict.k3_specialization or {}
    add(Clause("strict chain", verdict.status == "non-trivial nullity" and bool(k3) and all(k3.values()),
               detail=verdict.status))
    cert.values["chain"] = verdict.as_dict()

    ric = ricci(ct)
    eig, scalar = expected_ricci(d)
    res = float(np.max(np.abs(ric.eigenvalues - eig)))
    add(Clause("ricci spectrum", res < 1e-9, res))
    res = abs(ric.scalar - scalar)
    add(Clause("scalar curvature -2a^2", res < 1e-9, res))
    cert.values["ricci"] = {"eigenvalues": ric.eigenvalues.tolist(), "scalar": ric.scalar}

    inv = invariant_subspaces(list(hol.closure_basis), alg.metric, seed=seed, n_seeds=n_seeds, tol=tol)
    add(Clause("holonomy irreducible", inv.irreducible, detail=inv.method))
    add(Clause("no flat factor", flat.is_zero, detail=str(flat.dim)))
    cert.values["holonomy"] = {"closure_dim": hol.dim, "depth": hol.depth}

    struct = structure_predicates(alg, tol)
    add(Clause("solvable", struct.solvable))
    trace_A = struct.unimodular_defects[d]
    add(Clause("non-unimodular (trace ad A != 0)", abs(trace_A) > 1e-8, abs(trace_A)))

    tv = transvection_set(alg, table, ct, tol)
    add(Clause("index of symmetry n-2", tv.index_of_symmetry == n - 2, detail=str(tv.index_of_symmetry)))
    cert.values["symmetry"] = tv.as_dict()

    wit = adapted_transvection_witness(alg, table, ct, chain, tol, transvections=tv)
    add(Clause("witness transvection certificate", wit.certificate.passed, detail=str(wit.certificate.clauses)))
    y_ref = -table.operators[d] @ np.eye(n)[:, 1] / a
    res = float(np.max(np.abs(wit.Y - y_ref)))
    add(Clause("witness Y = -(1/a) Nomizu(A) E_2", res < 1e-10, res))
    cert.values["witness"] = wit.as_dict()

    if strict and not cert.passed:
        raise CertificateFailure(cert.first_failure.name, cert)
    return cert


@dataclass
class ComplementVerdict:
    size: int
    verdict: str
    components: list
    contained: list
    kernel_vector: list | None
    gaps: list

    def as_dict(self) -> dict:
        return {
            "size": self.size,
            "verdict": self.verdict,
            "components": self.components,
            "contained": self.contained,
            "kernel_vector": self.kernel_vector,
            "gaps": self.gaps,
        }


def complement_invariance_check(d: int, tol: float = TOL_ALG) -> ComplementVerdict:
    """Look for a non-zero M-invariant subspace inside the hyperplane orthogonal to e_1.

    M is the (d-1) x (d-1) skew matrix with ones above the diagonal.  Its
    eigenvalues are distinct, so its real invariant subspaces are exactly the
    sums of its real eigen-components; all of them are enumerated.
    """
    m = d - 1
    if m < 2:
        raise BadDimension(f"need d >= 3, got {d}")
    M = skew_ones(m)
    # eigenvalues of the skew matrix are i*w with w real; i*M is Hermitian
    w, vecs = np.linalg.eigh(1j * M)
    w = -w
    order = np.argsort(w)
    w, vecs = w[order], vecs[:, order]
    gaps = np.diff(w).tolist()
    sep = np.sqrt(tol) * max(1.0, float(np.max(np.abs(w))))
    if gaps and min(gaps) < sep:
        raise EigenDegeneracy(f"eigenvalues of M closer than {sep:.3g}", gaps=gaps)

    comps = []
    kernel_vector = None
    for k in range(m):
        if abs(w[k]) < sep:
            v = vecs[:, k]
            v = np.real(v * np.exp(-1j * np.angle(v[np.argmax(np.abs(v))])))
            v = v / np.linalg.norm(v)
            comps.append(v[:, None])
            kernel_vector = v.tolist()
        elif w[k] > 0:
            v = vecs[:, k]
            plane = np.column_stack([v.real, v.imag])
            q, _ = np.linalg.qr(plane)
            comps.append(q)

    contained = []
    for r in range(1, len(comps) + 1):
        for subset in itertools.combinations(range(len(comps)), r):
            U = np.hstack([comps[i] for i in subset])
            # U lies in the hyperplane orthogonal to e_1 iff every basis vector has first entry 0
            if float(np.max(np.abs(U[0]))) <= tol:
                contained.append(list(subset))
    return ComplementVerdict(
        size=m,
        verdict="none contained" if not contained else "contained",
        components=[c.shape[1] for c in comps],
        contained=contained,
        kernel_vector=kernel_vector,
        gaps=gaps,
    )


@dataclass
class TransportSample:
    t: float
    transported_norm: float
    predicted_norm: float
    rel_error: float


@dataclass
class TransportReport:
    v: list
    z: list
    samples: list
    max_rel_error: float
    geodesic_residual: float
    witness: list | None
    second_derivative_norm: float | None

    def as_dict(self) -> dict:
        return {
            "v": self.v,
            "z": self.z,
            "samples": [s.__dict__ for s in self.samples],
            "max_rel_error": self.max_rel_error,
            "geodesic_residual": self.geodesic_residual,
            "witness": self.witness,
            "second_derivative_norm": self.second_derivative_norm,
        }


def _as_vector(x, n: int) -> np.ndarray:
    if isinstance(x, (int, np.integer)):
        return np.eye(n)[:, int(x)]
    return np.asarray(x, dtype=float)


def adjoint_orbit(mats: np.ndarray, v, z, t: float) -> np.ndarray:
    """Coefficients of exp(tV) Z exp(-tV) for the basis combinations V, Z."""
    if t == 0:
        return np.array(z, dtype=float)  # the identity, without solver roundoff
    V = np.einsum("i,iab->ab", v, mats)
    Z = np.einsum("i,iab->ab", z, mats)
    g = scipy.linalg.expm(t * V)
    return coordinates(mats, g @ Z @ np.linalg.inv(g))


def transport_check(spec: ExampleSpec, v, z, t_samples=(1.0, 10.0, 100.0), h: float = 1e-4,
                    tol: float = TOL_ALG) -> TransportReport:
    """Compare the Killing field Z along exp(tv) with its linear-growth prediction.

    ``v`` and ``z`` are 0-based basis indices or coefficient vectors.  Along
    exp(tv) the field Z, read in the translated frame, is Ad_{exp(tv)} Z; for
    a nullity direction v its norm must equal |Z_e + t nabla_v Z|.
    """
    alg = build_example(spec)
    n = alg.dim
    v = _as_vector(v, n)
    z = _as_vector(z, n)
    table = nomizu_table(alg)
    ct = curvature_table(alg, table)
    chain = distribution_chain(alg, table, ct, tol)
    if not chain.nullity.contains(v, tol):
        raise NotInNullity(f"direction {v.tolist()} is not in the nullity")

    mats = matrix_basis(spec)
    g = alg.metric
    dz = table.operator(z) @ v
    samples = []
    for t in t_samples:
        moved = adjoint_orbit(mats, v, z, t)
        pred = z + t * dz
        tn = float(np.sqrt(moved @ g @ moved))
        pn = float(np.sqrt(pred @ g @ pred))
        rel = abs(tn - pn) / pn if pn > 0 else abs(tn - pn)
        samples.append(TransportSample(float(t), tn, pn, rel))

    witness, second = None, None
    if not (chain.nullity.is_zero or chain.nullity.is_full):
        y = adapted_transvection_witness(alg, table, ct, chain, tol).Y
        witness = y.tolist()
        second = 0.0
        for t in (0.0, 0.5, 1.0):
            f = [adjoint_orbit(mats, y, z, t + s * h) for s in (-1, 0, 1)]
            dd = (f[0] - 2 * f[1] + f[2]) / h**2
            second = max(second, float(np.linalg.norm(dd)))

    return TransportReport(
        v=v.tolist(),
        z=z.tolist(),
        samples=samples,
        max_rel_error=max((s.rel_error for s in samples), default=0.0),
        geodesic_residual=float(np.linalg.norm(table.operator(v) @ v)),
        witness=witness,
        second_derivative_norm=second,
    )
