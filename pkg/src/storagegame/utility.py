"""Customer utilities: pure profiles, the full payoff table, and expected
utilities under objective and Prelec-weighted beliefs.

A customer's pure utility is its energy bill (bought demand plus its line
loss share, at the tier price), minus selling revenue when discharging, and
a shared quadratic penalty on the grid's deviation from nominal generation.
"""

import math
from dataclasses import dataclass
from itertools import product

from .model import ACTIONS, Action, ActionProfile, GridConfig, MixedProfile
from .power import generation
from .pricing import charging_payment, discharging_payment

# Full profile enumeration is exponential in the customer count.
MAX_TABLE_PLAYERS = 20


@dataclass(frozen=True)
class PayoffTable:
    """Utilities of every customer at every pure profile.

    ``entries`` maps each action profile to the utility tuple, in the
    deterministic order produced by enumerating actions charge-first per
    customer.  Treat as immutable.
    """

    num_players: int
    entries: dict[ActionProfile, tuple[float, ...]]

    def utility(self, player: int, profile: ActionProfile) -> float:
        return self.entries[profile][player]

    def profiles(self):
        return iter(self.entries)


def pure_utility(player: int, profile: ActionProfile, customers,
                 grid: GridConfig) -> float:
    """Utility of one customer at a pure action profile."""
    customer = customers[player]
    balance = generation(profile, customers, grid)
    buy_price = charging_payment(player, profile, customers, grid)
    sell_price = discharging_payment(player, profile, customers)
    loss_share = 0.0
    if profile[player] is Action.CHARGE:
        loss_share = grid.loss_model.customer_share(customer.demand_kwh)
    return (-buy_price * (customer.demand_kwh + loss_share)
            + sell_price * customer.surplus_kwh
            - grid.beta * balance.deviation_kwh * balance.deviation_kwh)


def payoff_table(customers, grid: GridConfig) -> PayoffTable:
    """Enumerate all 2^K profiles and tabulate every customer's utility."""
    count = len(customers)
    if count > MAX_TABLE_PLAYERS:
        raise ValueError(
            f"payoff table enumeration supports at most {MAX_TABLE_PLAYERS} "
            f"customers, got {count}")
    entries = {}
    for profile in product(ACTIONS, repeat=count):
        entries[profile] = tuple(
            pure_utility(k, profile, customers, grid) for k in range(count))
    return PayoffTable(num_players=count, entries=entries)


def prelec_weight(probability: float, alpha: float) -> float:
    """Prelec probability weighting w(p) = exp(-(-ln p)^alpha).

    Defined on [0, 1] with w(0) = 0 and w(1) = 1 taken by continuity.
    Fixed points are 0, 1/e, and 1; alpha = 1 is the identity.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")
    if not 0.0 <= probability <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {probability!r}")
    if probability == 0.0:
        return 0.0
    if probability == 1.0:
        return 1.0
    if alpha == 1.0:
        return probability
    return math.exp(-((-math.log(probability)) ** alpha))


def eut_expected_utility(player: int, mixed: MixedProfile,
                         table: PayoffTable) -> float:
    """Expected utility with every customer's mix taken at face value."""
    total = 0.0
    for profile, utilities in table.entries.items():
        weight = 1.0
        for other, action in enumerate(profile):
            weight *= mixed.probability_of(other, action)
        total += weight * utilities[player]
    return total


def pt_expected_utility(player: int, mixed: MixedProfile, table: PayoffTable,
                        alpha: float) -> float:
    """Expected utility with opponents' probabilities Prelec-weighted.

    The customer's own mixing probability enters unweighted; only beliefs
    about the other customers' randomization are distorted.
    """
    total = 0.0
    for profile, utilities in table.entries.items():
        weight = mixed.probability_of(player, profile[player])
        for other, action in enumerate(profile):
            if other != player:
                weight *= prelec_weight(mixed.probability_of(other, action), alpha)
        total += weight * utilities[player]
    return total
