"""Constraint optimisation by Zeno-type dynamics on chains of three-level units.

The package simulates sweeps that rotate a per-unit coupling state from the
undefined level into the constraint-violating superpositions, so that decay,
projective checks, or strong-coupling unitaries freeze the register inside
the satisfying manifold while a diagonal cost picks the optimum within it.
"""

from .analysis import (
    SpectrumScan,
    gap_vs_theta,
    satisfiability_witness,
    spectrum_vs_theta,
)
from .constraints import (
    CardinalityConstraint,
    Clause,
    CnfFormula,
    bundled_instance_path,
    count_satisfying,
    domain_wall_clauses,
    load_bundled_instance,
    parse_dimacs,
    planted_generator,
    read_dimacs,
    satisfies,
    to_dimacs,
    unsatisfiable_variant,
    write_dimacs,
)
from .evolution import (
    EmptyKernelError,
    SolverFailure,
    StrengthScan,
    SweepRecord,
    ZenoSystem,
    adiabatic_sweep,
    constrained_optimum,
    constraint_strength_scan,
    dissipative_sweep,
    iterative_sat_solve,
    measurement_sweep,
    projected_sweep,
    restricted_spectrum,
    sampled_u_fraction,
    sweep_grid,
    transverse_field_sweep,
)
from .experiments import CATALOG, run_experiment
from .hilbert import SpaceSpec, basis_index, digit_string, digit_table
from .operators import (
    IsingProblem,
    bias_correction_hamiltonian,
    ising_diagonal,
    offset_diagonal,
    transverse_field_hamiltonian,
)
from .states import (
    HALF_PI,
    undefined_probability,
    undefined_product,
    xi_state,
    zeta_pair,
)

__version__ = "0.1.0"

__all__ = [
    "CATALOG",
    "CardinalityConstraint",
    "Clause",
    "CnfFormula",
    "EmptyKernelError",
    "HALF_PI",
    "IsingProblem",
    "SolverFailure",
    "SpaceSpec",
    "SpectrumScan",
    "StrengthScan",
    "SweepRecord",
    "ZenoSystem",
    "adiabatic_sweep",
    "basis_index",
    "bias_correction_hamiltonian",
    "bundled_instance_path",
    "constrained_optimum",
    "constraint_strength_scan",
    "count_satisfying",
    "digit_string",
    "digit_table",
    "dissipative_sweep",
    "domain_wall_clauses",
    "gap_vs_theta",
    "ising_diagonal",
    "iterative_sat_solve",
    "load_bundled_instance",
    "measurement_sweep",
    "offset_diagonal",
    "parse_dimacs",
    "planted_generator",
    "projected_sweep",
    "read_dimacs",
    "restricted_spectrum",
    "run_experiment",
    "sampled_u_fraction",
    "satisfiability_witness",
    "satisfies",
    "spectrum_vs_theta",
    "sweep_grid",
    "to_dimacs",
    "transverse_field_hamiltonian",
    "transverse_field_sweep",
    "undefined_probability",
    "undefined_product",
    "unsatisfiable_variant",
    "write_dimacs",
    "xi_state",
    "zeta_pair",
]
