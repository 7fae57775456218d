"""Network SIRI: epidemic models with adaptive reinfection susceptibility.

Agents recover from a first infection with altered susceptibility, so
the network carries two rate matrices: B for first infections and Bhat
for reinfections. The package classifies the immunity structure,
computes reproduction numbers and behavioral regimes, solves equilibria,
integrates the mean-field dynamics, and cross-checks against exact
stochastic simulation.
"""

from .model import (DiGraph, RateParams, NetworkModel, ImmunityCase,
                    make_model, validate_model, require_valid,
                    classify_case, stubborn_agents, bound_matrices,
                    dregular_check)
from .spectral import (SpectralTriple, LambdaValue, ConvergenceError,
                       leading_eig, spectral_radius,
                       effective_infection_matrix, lambda_surface,
                       grad_lambda)
from .reproduction import (ReproductionSet, Regime, basic_numbers,
                           extreme_numbers, classify_regime)
from .equilibria import (EndemicEquilibrium, IFEClassification, IFELabel,
                         M0Sample, solve_ee, ee_stability,
                         classify_ife_point, sample_m0)
from .dynamics import (Trajectory, SimOutcome, OutcomeKind,
                       ResurgenceReport, CrossingEvent, DRegularCritical,
                       rhs, integrate, simulate, weighted_average,
                       perron_weights, detect_resurgence, crossing_monitor,
                       dregular_pcrit)
from .stochastic import (AgentState, EventTrace, MCEstimate,
                         gillespie_run, monte_carlo_mean)
from .scenario import (Scenario, ScenarioError, StochasticSettings,
                       SetRecovery, SetReinfection, SetInfection, Rewire,
                       Vaccinate, load_scenario, save_scenario,
                       scenario_from_dict, scenario_to_dict, apply_control)

__version__ = "0.1.0"
