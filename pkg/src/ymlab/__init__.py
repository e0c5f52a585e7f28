"""ymlab: a lattice laboratory for minimal-energy Yang-Mills connections.

Numerically minimizes the Wilson energy of U(1)/SU(2)/SU(3) link fields on
flat periodic tori and measures the structural residuals that characterize
energy minimizers (SD/ASD commutation, contraction residuals, second
variations, covariant constancy of the field strength in three dimensions),
alongside an exact rational verifier for the bracket constraint system and
exact unit-sphere moments.
"""

from .action import EnergySplit, energy_split, force, force_sup_norm, topological_charge, wilson_energy
from .diagnostics import (
    DiagnosticsReport,
    VariationReport,
    build_killing_variation,
    commutator_diagnostic,
    diagnostics_report,
    estar_residual,
    nabla_f_norm,
    second_variation,
)
from .fields import (
    GaugeTransform,
    LinkField,
    OneFormField,
    TwoFormField,
    abelian_flux_start,
    apply_gauge,
    clover,
    cold_start,
    covariant_diff,
    hot_start,
    plaquette,
    random_gauge,
)
from .flow import FlowConfig, MinimizeReport, line_probe, minimize
from .groups import SU2, SU3, U1, Group, GroupKind, commutator, group_by_name, inner
from .lattice import Lattice
from .persist import load_snapshot, save_snapshot
from .reduction import (
    Rational,
    ReductionReport,
    ReductionSystem,
    build_system,
    nullspace,
    sphere_moment,
    verify_forces_zero,
)

__version__ = "0.1.0"
