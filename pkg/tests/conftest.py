"""Shared fixtures: the bundled reference scenario and a generator of
random two-customer scenarios that satisfy the existence bounds."""

import random

import pytest

from storagegame.equilibrium import check_existence
from storagegame.model import (Customer, GridConfig, PriceTier, PricingScheme,
                               ZeroLoss, validate_scenario)

REFERENCE_TIERS = PricingScheme(tiers=(
    PriceTier(threshold_kwh=0.0, unit_price=0.05),
    PriceTier(threshold_kwh=200.0, unit_price=0.10),
    PriceTier(threshold_kwh=250.0, unit_price=0.15),
    PriceTier(threshold_kwh=300.0, unit_price=0.20),
))


def make_grid(**overrides) -> GridConfig:
    settings = dict(
        background_load_kwh=200.0,
        beta=0.0018,
        pricing=REFERENCE_TIERS,
        prelec_alpha=0.25,
        price_cap=0.25,
        loss_model=ZeroLoss(),
    )
    settings.update(overrides)
    return GridConfig(**settings)


def make_customers(first_price: float = 0.06, second_price: float = 0.06):
    return (
        Customer(demand_kwh=20.0, surplus_kwh=10.0, sell_price=first_price),
        Customer(demand_kwh=15.0, surplus_kwh=5.0, sell_price=second_price),
    )


@pytest.fixture
def reference_customers():
    return make_customers()


@pytest.fixture
def reference_grid():
    return make_grid()


def random_feasible_scenario(rng: random.Random, prelec_alpha: float = 1.0):
    """Random scenario whose existence bounds hold for both customers.

    Instead of drawing sell prices directly, each draw picks a target
    equilibrium charge probability in [0.2, 0.8] and back-solves the price
    that produces it.  Interior probabilities keep the weighted root away
    from 0 and 1, where the weight's slope diverges and fixed-width
    bisection could not hold the indifference residual near zero.  Draws
    whose targets would require a negative price are rejected.
    """
    for _ in range(10000):
        demands = [rng.uniform(8.0, 40.0) for _ in range(2)]
        surpluses = [d * rng.uniform(0.2, 0.9) for d in demands]
        probe = tuple(Customer(d, s, 0.0)
                      for d, s in zip(demands, surpluses))
        grid = GridConfig(
            background_load_kwh=rng.uniform(100.0, 400.0),
            beta=rng.uniform(0.0008, 0.004),
            pricing=REFERENCE_TIERS,
            prelec_alpha=prelec_alpha,
            price_cap=None,
            loss_model=ZeroLoss(),
        )
        # The bounds do not involve sell prices, so probe with zeros first.
        report = check_existence(probe, grid)
        prices = []
        for bound, customer in zip(report.players, probe):
            # The opponent's charge probability is (upper - value) / width.
            target = rng.uniform(0.2, 0.8)
            width = bound.upper_bound - bound.lower_bound
            value = bound.upper_bound - target * width
            if value < 0.0:
                break
            prices.append(value / customer.surplus_kwh)
        else:
            customers = tuple(
                Customer(c.demand_kwh, c.surplus_kwh, price)
                for c, price in zip(probe, prices))
            scenario = validate_scenario(customers, grid)
            return scenario.customers, scenario.grid
    raise RuntimeError("could not sample a feasible scenario")


@pytest.fixture
def scenario_factory():
    return random_feasible_scenario
