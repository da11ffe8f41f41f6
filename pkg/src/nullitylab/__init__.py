"""Curvature nullity of homogeneous Riemannian spaces from metric Lie algebra data."""

__version__ = "0.1.0"

from .algebra import (
    MetricLieAlgebra,
    Tolerances,
    abelian,
    heisenberg3,
    so3,
    structure_predicates,
    validate,
)
from .connection import ConnectionTable, covariant_derivative, nomizu_table
from .curvature import CurvatureTensor, curvature_table, jacobi_operator, ricci, sectional
from .family import (
    ExampleSpec,
    complement_invariance_check,
    build_example,
    transport_check,
    verify_family_certificate,
)
from .holonomy import HolonomyAlgebra, flat_factor_detector, invariant_subspaces, kostant_span
from .linalg import Subspace
from .nullity import (
    DistributionChain,
    adapted_and_osculating,
    bounded_algebra,
    chain_report,
    distribution_chain,
    nullity_space,
    osculating_tower,
)
from .report import AnalysisReport, analyze
from .symmetry import TransvectionSet, adapted_transvection_witness, transvection_set
