"""Operational work quantifiers for finite-dimensional thermodynamics.

Objects are (density matrix, Hamiltonian) pairs; free transitions are those
reachable with Gibbs baths at a fixed inverse temperature; work quantifiers
are monotone differences W(p -> q) = M(q) - M(p).  The package provides the
object algebra, the Renyi free-energy monotones, exact classical
reachability oracles, axiom checkers and scripted scenario reproductions.
"""

__version__ = "0.1.0"

from .core import (
    ClassicalObject,
    EMPTY,
    EMPTY_CLASSICAL,
    HamiltonianClass,
    NonInteractingObject,
    ThermoObject,
    classical_gibbs,
    classical_tensor,
    classical_to_object,
    empty_object,
    gibbs_state,
    is_gibbs,
    non_interacting,
    object_to_classical,
    partial_trace,
    tensor,
)
from .divergences import (
    BetaContext,
    classical_renyi_divergence,
    delta_F_1_via_energy,
    delta_F_alpha,
    mutual_information,
    relative_entropy,
    renyi_divergence,
    von_neumann_entropy,
)
from .feasibility import (
    FeasibilityVerdict,
    Status,
    ThermalOperationSpec,
    ThermoCurve,
    apply_thermal_operation,
    catalytic_bruteforce,
    catalytic_necessary,
    correlated_catalytic_check,
    decide_catalytic,
    decide_free,
    gibbs_stochastic_feasible,
    thermo_curve,
    thermo_majorizes,
)
from .quantifiers import (
    AssistedSequence,
    CheckReport,
    CustomTable,
    EpsilonDet,
    FiniteList,
    MeanEnergy,
    MeanLadder,
    Monotone,
    RenyiFreeEnergy,
    RestrictionSet,
    TransitionRecord,
    Unrestricted,
    WbitSet,
    WorkQuantifier,
    check_additive_monotonicity,
    check_axiom1_cycle,
    check_free_nonpositivity,
    check_lemma2,
    check_superadditivity,
    correlated_second_law_bounds,
    second_law_check,
    swap_cycle_sequence,
    wdet_quantifier,
    work,
    work_cost,
    work_of_transition,
    work_value,
)
from .scenarios import (
    ScenarioReport,
    TwoPointProcess,
    run_cyclic_free_sequence,
    run_fig1,
    run_irreversibility,
    run_lifted_weight,
    run_two_point_measurement,
    run_wbit_violation,
    superadditivity_violation_search,
)
