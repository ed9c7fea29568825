"""Mixed-equilibrium existence, solving, and verification for the
2-customer charge/discharge game.

The game is anti-coordination shaped: each customer prefers to discharge
into a charging opponent and to avoid matching the opponent's action.
When each customer's selling revenue falls strictly inside its existence
interval, both indifference conditions admit interior solutions and the
game has a proper mixed equilibrium.  Under objective probabilities the
indifference is linear and solved in closed form; with Prelec-weighted
beliefs it becomes a monotone root-finding problem solved by bisection.
"""

import math
from dataclasses import dataclass

from .model import (Action, ActionProfile, EquilibriumResult, GridConfig,
                    MixedProfile, Theory)
from .power import generation
from .pricing import lmp_price
from .utility import (PayoffTable, eut_expected_utility, payoff_table,
                      pt_expected_utility)

# Bisection contract: fixed edge, interval tolerance, and iteration cap so
# repeated solves are bit-identical.
BISECTION_EDGE = 1e-15
BISECTION_TOLERANCE = 1e-12
BISECTION_MAX_ITERATIONS = 200

# A deviation gain below this confirms the equilibrium numerically.
VERIFY_TOLERANCE = 1e-8


class PlayerCountError(ValueError):
    """An operation defined for exactly two customers got another count."""


class DegenerateGameError(ArithmeticError):
    """An indifference condition degenerates; the mix is undetermined."""


class NoProperEquilibriumError(ArithmeticError):
    """The weighted indifference has no solution strictly inside (0, 1)."""


class ExistenceError(RuntimeError):
    """A solve was requested although the existence bounds fail."""

    def __init__(self, report: "ExistenceReport"):
        self.report = report
        details = "; ".join(
            f"customer {k + 1}: {b.lower_bound:.6g} < {b.value:.6g} "
            f"< {b.upper_bound:.6g} [{'ok' if b.satisfied else 'violated'}]"
            for k, b in enumerate(report.players))
        super().__init__(
            f"proper mixed equilibrium not guaranteed; {details}")


@dataclass(frozen=True)
class PlayerExistenceBounds:
    """One customer's existence interval and the value tested against it."""

    lower_bound: float
    value: float
    upper_bound: float
    satisfied: bool


@dataclass(frozen=True)
class ExistenceReport:
    players: tuple[PlayerExistenceBounds, ...]

    @property
    def all_satisfied(self) -> bool:
        return all(b.satisfied for b in self.players)


def _profile_with(player: int, own: Action, other: Action) -> ActionProfile:
    actions = [other, other]
    actions[player] = own
    return (actions[0], actions[1])


def check_existence(customers, grid: GridConfig) -> ExistenceReport:
    """Per-customer strict bounds on selling revenue that guarantee a
    proper mixed equilibrium.

    For each customer the tested value is sell_price * surplus.  The lower
    bound is what charging costs it when the opponent also charges (bill at
    that profile's price minus the penalty relief of its own generation
    swing); the upper bound relaxes the price to the profile where the
    opponent discharges and adds the cross term of both customers' swings.
    """
    if len(customers) != 2:
        raise PlayerCountError(
            f"existence bounds are defined for exactly 2 customers, "
            f"got {len(customers)}")
    swings = tuple(c.demand_kwh + c.surplus_kwh for c in customers)
    bounds = []
    for player, customer in enumerate(customers):
        both_charge = (Action.CHARGE, Action.CHARGE)
        self_charges = _profile_with(player, Action.CHARGE, Action.DISCHARGE)
        price_both = lmp_price(
            generation(both_charge, customers, grid).generation_kwh,
            grid.pricing)
        price_self = lmp_price(
            generation(self_charges, customers, grid).generation_kwh,
            grid.pricing)
        swing = swings[player]
        lower = -price_both * customer.demand_kwh + grid.beta * swing * swing
        upper = (-price_self * customer.demand_kwh + grid.beta * swing * swing
                 + 2.0 * grid.beta * swings[0] * swings[1])
        value = customer.sell_price * customer.surplus_kwh
        bounds.append(PlayerExistenceBounds(
            lower_bound=lower, value=value, upper_bound=upper,
            satisfied=lower < value < upper))
    return ExistenceReport(players=tuple(bounds))


def _indifference_terms(table: PayoffTable, player: int) -> tuple[float, float]:
    """Utility gaps of ``player`` that pin down the opponent's mix.

    numerator   = u(discharge | opp discharges) - u(charge | opp discharges)
    denominator = u(charge | opp charges) - u(discharge | opp charges)

    The opponent's equilibrium charge probability satisfies
    weight(p) * denominator = weight(1 - p) * numerator.
    """
    opponent = 1 - player

    def u(own: Action, other: Action) -> float:
        actions = [own, own]
        actions[opponent] = other
        return table.utility(player, (actions[0], actions[1]))

    numerator = (u(Action.DISCHARGE, Action.DISCHARGE)
                 - u(Action.CHARGE, Action.DISCHARGE))
    denominator = (u(Action.CHARGE, Action.CHARGE)
                   - u(Action.DISCHARGE, Action.CHARGE))
    return numerator, denominator


def _with_probability(mixed: MixedProfile, player: int, p: float) -> MixedProfile:
    probabilities = list(mixed.charge_probabilities)
    probabilities[player] = p
    return MixedProfile(tuple(probabilities))


def _action_gap(player: int, mixed: MixedProfile, table: PayoffTable,
                theory: Theory, alpha: float) -> float:
    """Expected-utility edge of charging over discharging against the
    opponents' mix; zero at an interior equilibrium."""
    charge = _with_probability(mixed, player, 1.0)
    discharge = _with_probability(mixed, player, 0.0)
    if theory is Theory.EUT:
        return (eut_expected_utility(player, charge, table)
                - eut_expected_utility(player, discharge, table))
    return (pt_expected_utility(player, charge, table, alpha)
            - pt_expected_utility(player, discharge, table, alpha))


def _solved_result(probabilities, table: PayoffTable, theory: Theory,
                   alpha: float, report: ExistenceReport) -> EquilibriumResult:
    mixed = MixedProfile(tuple(probabilities))
    residuals = tuple(
        _action_gap(player, mixed, table, theory, alpha)
        for player in range(table.num_players))
    return EquilibriumResult(
        mixed=mixed,
        theory=theory,
        indifference_residuals=residuals,
        existence_satisfied=tuple(b.satisfied for b in report.players),
        is_proper=mixed.is_proper,
    )


def solve_eut(customers, grid: GridConfig) -> EquilibriumResult:
    """Closed-form proper mixed equilibrium under objective probabilities.

    Each customer's indifference is linear in the opponent's charge
    probability, so p_opponent = numerator / (numerator + denominator).
    Raises ExistenceError when the existence bounds fail and
    DegenerateGameError when an indifference carries no information.
    """
    report = check_existence(customers, grid)
    if not report.all_satisfied:
        raise ExistenceError(report)
    table = payoff_table(customers, grid)
    probabilities = [0.0, 0.0]
    for player in (0, 1):
        numerator, denominator = _indifference_terms(table, player)
        total = numerator + denominator
        if total == 0.0:
            raise DegenerateGameError(
                f"customer {player + 1} has identical action gaps against "
                "both opponent actions; the opponent mix is undetermined")
        probabilities[1 - player] = numerator / total
    return _solved_result(probabilities, table, Theory.EUT,
                          grid.prelec_alpha, report)


def solve_pt(customers, grid: GridConfig) -> EquilibriumResult:
    """Proper mixed equilibrium with Prelec-weighted opponent beliefs.

    Each indifference condition becomes weight(p) / weight(1 - p) =
    numerator / denominator, solved by deterministic bisection in log
    space.  With prelec_alpha = 1 this reproduces the closed-form solution
    up to the bisection tolerance.
    """
    report = check_existence(customers, grid)
    if not report.all_satisfied:
        raise ExistenceError(report)
    table = payoff_table(customers, grid)
    alpha = grid.prelec_alpha
    probabilities = [0.0, 0.0]
    for player in (0, 1):
        numerator, denominator = _indifference_terms(table, player)
        if denominator == 0.0:
            raise DegenerateGameError(
                f"customer {player + 1} is indifferent whenever the opponent "
                "charges; the weighted ratio is undefined")
        ratio = numerator / denominator
        if ratio <= 0.0:
            raise NoProperEquilibriumError(
                f"indifference ratio for customer {player + 1} is "
                f"{ratio:.6g}; no solution strictly inside (0, 1)")
        probabilities[1 - player] = _solve_weight_ratio(ratio, alpha)
    return _solved_result(probabilities, table, Theory.PT,
                          grid.prelec_alpha, report)


def _solve_weight_ratio(ratio: float, alpha: float) -> float:
    """Probability p solving weight(p) / weight(1 - p) = ratio.

    Works on the log of the Prelec weights, where the objective
    (-ln(1 - p))^alpha - (-ln p)^alpha is strictly increasing in p.  Fixed
    midpoint bisection over [edge, 1 - edge] with a hard iteration cap
    keeps results bit-identical across runs.  Ratios beyond what the open
    domain can represent clamp to the nearest edge; the caller surfaces
    that through the properness flag.
    """
    target = math.log(ratio)

    def objective(p: float) -> float:
        return ((-math.log1p(-p)) ** alpha
                - (-math.log(p)) ** alpha
                - target)

    low = BISECTION_EDGE
    high = 1.0 - BISECTION_EDGE
    if objective(low) >= 0.0:
        return low
    if objective(high) <= 0.0:
        return high
    for _ in range(BISECTION_MAX_ITERATIONS):
        if high - low <= BISECTION_TOLERANCE:
            break
        middle = 0.5 * (low + high)
        value = objective(middle)
        if value == 0.0:
            return middle
        if value < 0.0:
            low = middle
        else:
            high = middle
    return 0.5 * (low + high)


@dataclass(frozen=True)
class DeviationScan:
    """Outcome of a unilateral-deviation sweep around a solved equilibrium."""

    max_gain: float
    player: int
    probability: float
    confirmed: bool


def verify_equilibrium(result: EquilibriumResult, customers, grid: GridConfig,
                       grid_resolution: int = 101) -> DeviationScan:
    """Scan unilateral mixed deviations on a uniform probability grid.

    For each customer, evaluates its expected utility (under the result's
    theory) at ``grid_resolution`` alternative charge probabilities with
    the opponent held at the solved mix, and reports the largest gain over
    the solved utility.  ``confirmed`` means no deviation beat the solution
    by VERIFY_TOLERANCE or more.
    """
    if len(customers) != 2:
        raise PlayerCountError(
            f"verification is defined for exactly 2 customers, "
            f"got {len(customers)}")
    if grid_resolution < 2:
        raise ValueError("grid_resolution must be >= 2")
    table = payoff_table(customers, grid)
    alpha = grid.prelec_alpha

    def expected(player: int, mixed: MixedProfile) -> float:
        if result.theory is Theory.EUT:
            return eut_expected_utility(player, mixed, table)
        return pt_expected_utility(player, mixed, table, alpha)

    best_gain = -math.inf
    best_player = 0
    best_probability = result.mixed.charge_probabilities[0]
    for player in (0, 1):
        baseline = expected(player, result.mixed)
        for step in range(grid_resolution):
            candidate = step / (grid_resolution - 1)
            trial = _with_probability(result.mixed, player, candidate)
            gain = expected(player, trial) - baseline
            if gain > best_gain:
                best_gain = gain
                best_player = player
                best_probability = candidate
    return DeviationScan(
        max_gain=best_gain,
        player=best_player,
        probability=best_probability,
        confirmed=best_gain < VERIFY_TOLERANCE,
    )


def _flipped(profile: ActionProfile, player: int) -> ActionProfile:
    actions = list(profile)
    actions[player] = (Action.DISCHARGE if actions[player] is Action.CHARGE
                       else Action.CHARGE)
    return tuple(actions)


def enumerate_pure_nash(customers, grid: GridConfig) -> list[ActionProfile]:
    """All pure profiles no customer improves on by flipping its action.

    Exhaustive scan of the full payoff table with weak-inequality flip
    checks, so ties count as stable.  Profiles come back in table
    enumeration order (charge-first per customer).
    """
    table = payoff_table(customers, grid)
    stable = []
    for profile in table.entries:
        if all(table.utility(player, profile)
               >= table.utility(player, _flipped(profile, player))
               for player in range(table.num_players)):
            stable.append(profile)
    return stable
