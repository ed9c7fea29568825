"""Charge/discharge equilibria for customer-owned energy storage.

Customers with batteries play a one-shot game each period: charge (buy at
the tiered market price) or discharge (sell stored surplus back at their
asking price).  The package checks when a proper mixed equilibrium exists,
solves it under objective probabilities or Prelec-weighted beliefs, and
sweeps scenario parameters into deterministic CSV tables.
"""

from .analysis import (CSV_HEADER, SweepEmptyError, SweepParameter, SweepRow,
                       SweepSpec, emit_csv, expected_load, revenue, sweep)
from .equilibrium import (BISECTION_EDGE, BISECTION_MAX_ITERATIONS,
                          BISECTION_TOLERANCE, VERIFY_TOLERANCE,
                          DegenerateGameError, DeviationScan, ExistenceError,
                          ExistenceReport, NoProperEquilibriumError,
                          PlayerCountError, PlayerExistenceBounds,
                          check_existence, enumerate_pure_nash, solve_eut,
                          solve_pt, verify_equilibrium)
from .model import (ACTIONS, Action, ActionProfile, Customer,
                    EquilibriumResult, GridConfig, LinearFractionLoss,
                    LossModel, MixedProfile, PriceTier, PricingScheme,
                    Scenario, Theory, ValidationError, ZeroLoss,
                    validate_scenario)
from .power import PowerBalance, generation, nominal_generation
from .pricing import charging_payment, discharging_payment, lmp_price
from .utility import (MAX_TABLE_PLAYERS, PayoffTable, eut_expected_utility,
                      payoff_table, prelec_weight, pt_expected_utility,
                      pure_utility)

__version__ = "0.1.0"

__all__ = [
    "ACTIONS",
    "Action",
    "ActionProfile",
    "BISECTION_EDGE",
    "BISECTION_MAX_ITERATIONS",
    "BISECTION_TOLERANCE",
    "CSV_HEADER",
    "Customer",
    "DegenerateGameError",
    "DeviationScan",
    "EquilibriumResult",
    "ExistenceError",
    "ExistenceReport",
    "GridConfig",
    "LinearFractionLoss",
    "LossModel",
    "MAX_TABLE_PLAYERS",
    "MixedProfile",
    "NoProperEquilibriumError",
    "PayoffTable",
    "PlayerCountError",
    "PlayerExistenceBounds",
    "PowerBalance",
    "PriceTier",
    "PricingScheme",
    "Scenario",
    "SweepEmptyError",
    "SweepParameter",
    "SweepRow",
    "SweepSpec",
    "Theory",
    "VERIFY_TOLERANCE",
    "ValidationError",
    "ZeroLoss",
    "charging_payment",
    "check_existence",
    "discharging_payment",
    "emit_csv",
    "enumerate_pure_nash",
    "eut_expected_utility",
    "expected_load",
    "generation",
    "lmp_price",
    "nominal_generation",
    "payoff_table",
    "prelec_weight",
    "pt_expected_utility",
    "pure_utility",
    "revenue",
    "solve_eut",
    "solve_pt",
    "sweep",
    "validate_scenario",
    "verify_equilibrium",
]
