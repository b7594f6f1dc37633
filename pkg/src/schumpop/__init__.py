"""Schumpeterian population games.

Attribute-based diversity of technologies, the 2x2 innovation game it
induces, revision-protocol dynamics (mean-field and finite-population),
stability classification, and comparative statics of the stable
innovator-imitator mix.
"""

from .diversity import (
    Attribute,
    Consumer,
    ConsumerPanel,
    DiversityModel,
    Technology,
    attribute_weight,
    dissimilarity,
    diversity,
    is_relevant_innovation,
    relevant_attributes,
)
from .dynamics import (
    AgentPopulation,
    RevisionProtocol,
    Trajectory,
    TrajectoryMeta,
    converged_state,
    integrate,
    integrate_batch,
    mean_field_rhs,
    simulate_finite_population,
    switch_rate,
    uniformization_bound,
)
from .errors import (
    DomainError,
    IntegrationError,
    NumericsError,
    ScenarioError,
    SchumpopError,
)
from .game import (
    EssClassification,
    EssKind,
    GameMatrix,
    PopulationState,
    average_payoff,
    classify_ess,
    interior_equilibrium,
    payoff_vector,
    satisfies_ess_conditions,
)
from .schumpeter import (
    MarketValueMap,
    SchumpeterParams,
    SchumpeterianState,
    SweepResult,
    SweepRow,
    build_game,
    ess_innovator_rate,
    gamma,
    gamma_gradient,
    in_domain,
    is_schumpeterian,
    params_from_diversity,
    schumpeterian_state,
    sweep,
)
from .scenario import (
    RunRecord,
    Scenario,
    parse_scenario,
    print_scenario,
    scenario_digest,
)
from .csvio import (
    sweep_csv,
    trajectory_csv,
    write_sweep_csv,
    write_trajectory_csv,
)

__version__ = "0.1.0"

__all__ = [
    "Attribute",
    "Consumer",
    "ConsumerPanel",
    "DiversityModel",
    "Technology",
    "attribute_weight",
    "dissimilarity",
    "diversity",
    "is_relevant_innovation",
    "relevant_attributes",
    "AgentPopulation",
    "RevisionProtocol",
    "Trajectory",
    "TrajectoryMeta",
    "converged_state",
    "integrate",
    "integrate_batch",
    "mean_field_rhs",
    "simulate_finite_population",
    "switch_rate",
    "uniformization_bound",
    "DomainError",
    "IntegrationError",
    "NumericsError",
    "ScenarioError",
    "SchumpopError",
    "EssClassification",
    "EssKind",
    "GameMatrix",
    "PopulationState",
    "average_payoff",
    "classify_ess",
    "interior_equilibrium",
    "payoff_vector",
    "satisfies_ess_conditions",
    "MarketValueMap",
    "SchumpeterParams",
    "SchumpeterianState",
    "SweepResult",
    "SweepRow",
    "build_game",
    "ess_innovator_rate",
    "gamma",
    "gamma_gradient",
    "in_domain",
    "is_schumpeterian",
    "params_from_diversity",
    "schumpeterian_state",
    "sweep",
    "RunRecord",
    "Scenario",
    "parse_scenario",
    "print_scenario",
    "scenario_digest",
    "sweep_csv",
    "trajectory_csv",
    "write_sweep_csv",
    "write_trajectory_csv",
]
