"""Generation, nominal level, and deviation accounting."""

import itertools
import random

import pytest

from conftest import make_customers, make_grid
from storagegame.model import ACTIONS, Action, Customer, LinearFractionLoss
from storagegame.power import generation, nominal_generation

C = Action.CHARGE
D = Action.DISCHARGE


def test_nominal_reference_value():
    assert nominal_generation(make_customers(), make_grid()) == 235.0


def test_nominal_with_no_customers():
    grid = make_grid(background_load_kwh=0.0)
    assert nominal_generation((), grid) == 0.0


def test_nominal_with_linear_losses():
    grid = make_grid(loss_model=LinearFractionLoss(0.02))
    assert nominal_generation(make_customers(), grid) == pytest.approx(
        239.7, rel=1e-12)


@pytest.mark.parametrize("profile,expected_generation,expected_deviation", [
    ((C, C), 235.0, 0.0),
    ((C, D), 215.0, -20.0),
    ((D, C), 205.0, -30.0),
    ((D, D), 185.0, -50.0),
])
def test_reference_profiles(profile, expected_generation, expected_deviation):
    balance = generation(profile, make_customers(), make_grid())
    assert balance.generation_kwh == expected_generation
    assert balance.deviation_kwh == expected_deviation
    assert balance.nominal_kwh == 235.0
    assert balance.losses_kwh == 0.0


def test_all_charge_profile_matches_nominal_exactly():
    # Not just approximately: the all-charge sum is accumulated in the same
    # order as the nominal, so the deviation is exactly 0.0.
    customers = (Customer(20.3, 10.1, 0.06), Customer(15.7, 5.9, 0.06))
    grid = make_grid(background_load_kwh=199.77, price_cap=None)
    balance = generation((C, C), customers, grid)
    assert balance.generation_kwh == nominal_generation(customers, grid)
    assert balance.deviation_kwh == 0.0


def test_deviation_is_generation_minus_nominal():
    balance = generation((D, C), make_customers(), make_grid())
    assert balance.deviation_kwh == balance.generation_kwh - balance.nominal_kwh


def test_zero_loss_deviation_identity_exhaustive():
    # deviation == -(sum of demand+surplus over dischargers), exactly,
    # for integer-valued energies.
    rng = random.Random(7)
    customers = tuple(
        Customer(float(rng.randrange(5, 50)), float(rng.randrange(1, 5)), 0.01)
        for _ in range(4))
    grid = make_grid(price_cap=None)
    for profile in itertools.product(ACTIONS, repeat=4):
        balance = generation(profile, customers, grid)
        expected = -sum(c.demand_kwh + c.surplus_kwh
                        for a, c in zip(profile, customers) if a is D)
        assert balance.deviation_kwh == expected


def test_flipping_discharge_to_charge_adds_swing():
    customers = make_customers()
    grid = make_grid()
    low = generation((D, C), customers, grid).generation_kwh
    high = generation((C, C), customers, grid).generation_kwh
    assert high - low == customers[0].demand_kwh + customers[0].surplus_kwh


def test_linear_losses_follow_served_demand():
    grid = make_grid(loss_model=LinearFractionLoss(0.02))
    balance = generation((C, D), make_customers(), grid)
    # served = 200 + 20; losses = 0.02 * 220; sold surplus is lossless
    assert balance.losses_kwh == pytest.approx(4.4, rel=1e-12)
    assert balance.generation_kwh == pytest.approx(220.0 - 5.0 + 4.4,
                                                   rel=1e-12)
    assert balance.nominal_kwh == pytest.approx(239.7, rel=1e-12)


def test_profile_length_mismatch_raises():
    with pytest.raises(ValueError, match="profile"):
        generation((C,), make_customers(), make_grid())
