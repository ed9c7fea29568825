"""Domain types for the storage charge/discharge game.

A scenario is a set of customers, each owning a battery they can charge
(buy energy) or discharge (sell stored surplus back), plus the grid-side
configuration: inflexible background load, tiered pricing, the company's
regulation weight, and optional line-loss accounting.  All types are
immutable; construct a validated scenario through ``validate_scenario``.
"""

from dataclasses import dataclass, field
from enum import Enum


class ValidationError(ValueError):
    """A scenario field violates one of its documented invariants."""


class Action(Enum):
    """A customer's pure action in one period."""

    CHARGE = "charge"
    DISCHARGE = "discharge"


# Canonical action ordering used when enumerating profiles.
ACTIONS = (Action.CHARGE, Action.DISCHARGE)

# One pure action per customer, by position.
ActionProfile = tuple[Action, ...]


class Theory(Enum):
    """Behavioral model used to evaluate uncertain outcomes."""

    EUT = "eut"
    PT = "pt"


@dataclass(frozen=True)
class Customer:
    """An active customer: fixed demand when charging, stored surplus to sell
    when discharging, and the unit price it asks for discharged energy."""

    demand_kwh: float
    surplus_kwh: float
    sell_price: float


@dataclass(frozen=True)
class PriceTier:
    """One step of the tiered price schedule, active from ``threshold_kwh``
    up to the next tier's threshold."""

    threshold_kwh: float
    unit_price: float


@dataclass(frozen=True)
class PricingScheme:
    """Non-decreasing step schedule of unit prices over total generation."""

    tiers: tuple[PriceTier, ...]


@dataclass(frozen=True)
class ZeroLoss:
    """Lossless delivery: no profile incurs line losses."""

    def total_loss(self, served_demand_kwh: float) -> float:
        return 0.0

    def customer_share(self, demand_kwh: float) -> float:
        return 0.0


@dataclass(frozen=True)
class LinearFractionLoss:
    """Line losses proportional to the demand actually served by the company.

    ``fraction`` multiplies the served charging demand (background plus all
    charging customers); each charging customer is billed for the share
    induced by its own demand.  Discharged surplus is delivered lossless.
    """

    fraction: float

    def total_loss(self, served_demand_kwh: float) -> float:
        return self.fraction * served_demand_kwh

    def customer_share(self, demand_kwh: float) -> float:
        return self.fraction * demand_kwh


LossModel = ZeroLoss | LinearFractionLoss


@dataclass(frozen=True)
class GridConfig:
    """Grid-side parameters shared by every customer.

    ``beta`` weighs the quadratic penalty on deviating from the nominal
    (all-charge) generation level.  ``prelec_alpha`` is the probability
    weighting exponent used by the prospect-theory solver; 1.0 reduces the
    weighting to the identity.  ``price_cap``, when set, bounds every
    customer's sell price from above.
    """

    background_load_kwh: float
    beta: float
    pricing: PricingScheme
    prelec_alpha: float = 1.0
    price_cap: float | None = None
    loss_model: LossModel = field(default=ZeroLoss())


@dataclass(frozen=True)
class Scenario:
    """A validated game instance."""

    customers: tuple[Customer, ...]
    grid: GridConfig


@dataclass(frozen=True)
class MixedProfile:
    """One charge probability per customer; 1 - p is the discharge weight."""

    charge_probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        for p in self.charge_probabilities:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"charge probability {p!r} outside [0, 1]")

    @property
    def is_proper(self) -> bool:
        """True when every customer genuinely randomizes."""
        return all(0.0 < p < 1.0 for p in self.charge_probabilities)

    def probability_of(self, player: int, action: Action) -> float:
        p = self.charge_probabilities[player]
        return p if action is Action.CHARGE else 1.0 - p


@dataclass(frozen=True)
class EquilibriumResult:
    """A solved mixed equilibrium plus its diagnostic context.

    ``indifference_residuals`` holds, per customer, the expected-utility gap
    between its two pure actions against the opponents' solved mix; at an
    interior equilibrium these are ~0.  ``existence_satisfied`` mirrors the
    per-customer existence check that gated the solve.
    """

    mixed: MixedProfile
    theory: Theory
    indifference_residuals: tuple[float, ...]
    existence_satisfied: tuple[bool, ...]
    is_proper: bool


def _check(condition: bool, f: str, message: str) -> None:
    if not condition:
        raise ValidationError(f"{f}: {message}")


def validate_scenario(customers, grid: GridConfig) -> Scenario:
    """Check every invariant and return the frozen scenario.

    Raises ValidationError naming the offending field.  Grid-level checks run
    first, then customers in positional order, so the first failure reported
    is deterministic.
    """
    _check(grid.background_load_kwh >= 0.0, "grid.background_load_kwh",
           "must be >= 0")
    _check(grid.beta > 0.0, "grid.beta", "must be > 0")
    _check(0.0 < grid.prelec_alpha <= 1.0, "grid.prelec_alpha",
           "must lie in (0, 1]")
    if grid.price_cap is not None:
        _check(grid.price_cap > 0.0, "grid.price_cap", "must be > 0")

    tiers = grid.pricing.tiers
    _check(len(tiers) >= 1, "grid.pricing.tiers", "at least one tier required")
    for i, tier in enumerate(tiers):
        _check(tier.unit_price >= 0.0, f"grid.pricing.tiers[{i}].unit_price",
               "must be >= 0")
        if i > 0:
            _check(tier.threshold_kwh > tiers[i - 1].threshold_kwh,
                   f"grid.pricing.tiers[{i}].threshold_kwh",
                   "thresholds must be strictly increasing")
            _check(tier.unit_price >= tiers[i - 1].unit_price,
                   f"grid.pricing.tiers[{i}].unit_price",
                   "prices must be non-decreasing")

    if isinstance(grid.loss_model, LinearFractionLoss):
        _check(0.0 <= grid.loss_model.fraction < 0.1, "grid.loss_model.fraction",
               "must lie in [0, 0.1)")

    for k, customer in enumerate(customers):
        where = f"customers[{k}]"
        _check(customer.demand_kwh > 0.0, f"{where}.demand_kwh", "must be > 0")
        _check(customer.surplus_kwh > 0.0, f"{where}.surplus_kwh", "must be > 0")
        _check(customer.surplus_kwh < customer.demand_kwh,
               f"{where}.surplus_kwh", "surplus must be < demand")
        _check(customer.sell_price >= 0.0, f"{where}.sell_price", "must be >= 0")
        if grid.price_cap is not None:
            _check(customer.sell_price < grid.price_cap,
                   f"{where}.sell_price", "must be < grid.price_cap")

    return Scenario(customers=tuple(customers), grid=grid)
