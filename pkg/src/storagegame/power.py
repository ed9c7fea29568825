"""Generation bookkeeping for pure action profiles.

The company's nominal dispatch assumes every customer charges.  For an
arbitrary profile, charging customers add their demand to the served load,
discharging customers cover part of it with stored surplus, and the
company's regulation penalty is driven by the deviation from nominal.
"""

from dataclasses import dataclass

from .model import Action, ActionProfile, Customer, GridConfig


@dataclass(frozen=True)
class PowerBalance:
    """Company generation for one profile against the nominal level."""

    generation_kwh: float
    nominal_kwh: float
    deviation_kwh: float
    losses_kwh: float


def nominal_generation(customers, grid: GridConfig) -> float:
    """Generation the company plans for: background plus every customer's
    demand, plus the line losses of serving all of it."""
    served = grid.background_load_kwh
    for customer in customers:
        served += customer.demand_kwh
    return served + grid.loss_model.total_loss(served)


def generation(profile: ActionProfile, customers, grid: GridConfig) -> PowerBalance:
    """Resolve one pure profile into a power balance.

    Served demand is background load plus the demand of charging customers;
    losses apply to served demand only.  Discharging customers inject their
    surplus, displacing generation without incurring losses.
    """
    if len(profile) != len(customers):
        raise ValueError(
            f"profile has {len(profile)} actions for {len(customers)} customers")
    served = grid.background_load_kwh
    injected = 0.0
    for action, customer in zip(profile, customers):
        if action is Action.CHARGE:
            served += customer.demand_kwh
        else:
            injected += customer.surplus_kwh
    losses = grid.loss_model.total_loss(served)
    produced = served - injected + losses
    nominal = nominal_generation(customers, grid)
    return PowerBalance(
        generation_kwh=produced,
        nominal_kwh=nominal,
        deviation_kwh=produced - nominal,
        losses_kwh=losses,
    )
