"""Tiered unit pricing and per-customer payment terms."""

from bisect import bisect_right

from .model import Action, ActionProfile, GridConfig, PricingScheme
from .power import generation


def lmp_price(generation_kwh: float, scheme: PricingScheme) -> float:
    """Unit price at a generation level.

    Tiers are half-open [threshold, next threshold), except that the first
    boundary belongs to the cheapest tier: generation exactly at the second
    tier's threshold is still billed at the first tier's price.  Levels below
    the first threshold clamp to the first tier.
    """
    thresholds = [tier.threshold_kwh for tier in scheme.tiers]
    index = bisect_right(thresholds, generation_kwh) - 1
    if index < 0:
        index = 0
    elif index == 1 and generation_kwh == thresholds[1]:
        index = 0
    return scheme.tiers[index].unit_price


def charging_payment(player: int, profile: ActionProfile, customers,
                     grid: GridConfig) -> float:
    """Unit price the customer pays for energy bought under this profile;
    zero when it is not charging."""
    if profile[player] is not Action.CHARGE:
        return 0.0
    balance = generation(profile, customers, grid)
    return lmp_price(balance.generation_kwh, grid.pricing)


def discharging_payment(player: int, profile: ActionProfile, customers) -> float:
    """Unit price the customer receives for energy sold under this profile;
    zero when it is not discharging."""
    if profile[player] is not Action.DISCHARGE:
        return 0.0
    return customers[player].sell_price
