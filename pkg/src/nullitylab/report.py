"""Full analysis of one metric Lie algebra and its JSON report."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import __version__
from .algebra import MetricLieAlgebra, Tolerances, structure_predicates, validate
from .connection import nomizu_table
from .curvature import curvature_table, ricci
from .errors import IllConditioned, NoWitness
from .holonomy import DEFAULT_SEED, flat_factor_detector, invariant_subspaces, kostant_span
from .nullity import chain_report, distribution_chain, nullity_space
from .symmetry import adapted_transvection_witness, transvection_set


@dataclass
class AnalysisReport:
    input_digest: str
    validation: dict
    structure: dict | None = None
    chain: dict | None = None
    ricci: dict | None = None
    symmetry: dict | None = None
    holonomy: dict | None = None
    witnesses: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    tool_version: str = __version__
    tolerances: dict = field(default_factory=lambda: Tolerances().as_dict())
    seed: int = DEFAULT_SEED

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown report fields {sorted(unknown)}")
        return cls(**d)

    def to_json(self) -> str:
        return dumps(self.as_dict())

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))


def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits and keys in insertion order."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    return json.dumps(str(obj))


def _nullity_dim_at(ct, tol):
    try:
        return nullity_space(ct, tol).dim
    except IllConditioned:
        return None


def analyze(alg: MetricLieAlgebra, digest: str = "", tol: Tolerances = Tolerances(),
            seed: int = DEFAULT_SEED) -> AnalysisReport:
    """Run every computation on ``alg``; an invalid algebra yields only the validation part."""
    report = AnalysisReport(input_digest=digest, validation=validate(alg, tol).as_dict(),
                            tolerances=tol.as_dict(), seed=seed)
    if not report.validation["valid"]:
        return report

    ta = tol.tol_alg
    struct = structure_predicates(alg, ta)
    report.structure = struct.as_dict()
    table = nomizu_table(alg)
    ct = curvature_table(alg, table)
    ric = ricci(ct)
    report.ricci = {"eigenvalues": sorted(float(x) for x in ric.eigenvalues), "scalar": float(ric.scalar)}

    chain = distribution_chain(alg, table, ct, ta)
    hol = kostant_span(table, ta)
    flat = flat_factor_detector(hol, ct, ta, chain.nullity)
    verdict = chain_report(chain, flat_factor_detected=not flat.is_zero, tol_sub=tol.tol_sub)
    report.chain = verdict.as_dict()
    report.chain["nullity_basis"] = chain.nullity.to_list()
    report.chain["bounded_closure_residual"] = chain.bounded_closure_residual

    if hol.dim:
        inv = invariant_subspaces(list(hol.closure_basis), alg.metric, seed=seed, tol=ta)
        inv_d = inv.as_dict()
    else:
        inv_d = {"verdict": "invariant", "invariant": None, "method": "zero holonomy",
                 "flat_split": True, "seeds_agree": True, "notes": []}
    report.holonomy = {
        "closure_dim": hol.dim,
        "depth": hol.depth,
        "verdict": inv_d["verdict"],
        "invariant_subspace": inv_d,
        "flat_factor_dim": flat.dim,
        "flat_factor_basis": flat.to_list(),
        "curvature_containment_residual": hol.curvature_containment(ct),
    }

    tv = transvection_set(alg, table, ct, ta)
    report.symmetry = tv.as_dict()
    report.warnings.append(
        "index of symmetry is relative to the input algebra; the isometry algebra may contain "
        "further transvections, so the value is a lower bound"
    )

    nu = chain.nullity
    if not (nu.is_zero or nu.is_full) and flat.is_zero:
        try:
            wit = adapted_transvection_witness(alg, table, ct, chain, ta, transvections=tv)
            report.witnesses.append({"kind": "adapted_transvection", **wit.as_dict()})
        except NoWitness as exc:
            report.warnings.append(f"no adapted transvection witness: {exc}")

    dims = {t: _nullity_dim_at(ct, t) for t in (ta / 100, ta * 100)}
    if any(d != nu.dim for d in dims.values()):
        report.warnings.append(
            f"nullity dimension {nu.dim} changes when the tolerance is scaled by 1e-2 or 1e2: "
            + ", ".join(f"{t:.0e} -> {d}" for t, d in dims.items())
        )
    obstructed = struct.reductive or (struct.nilpotent_step is not None and struct.nilpotent_step <= 2)
    if obstructed and flat.is_zero and not nu.is_zero:
        report.warnings.append(
            "reductive or at most 2-step nilpotent algebra without flat factor has non-zero nullity"
        )
    return report
