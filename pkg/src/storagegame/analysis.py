"""Company-side aggregates and one-dimensional parameter sweeps.

A sweep re-solves the game along a uniform grid of one scenario parameter
and tabulates, per behavioral theory, the equilibrium mix, the company's
expected selling revenue, and the customers' expected net load.  Rows are
ordered parameter-ascending with the objective-probability theory first,
and the CSV emitter is deterministic: identical inputs give byte-identical
files.
"""

import csv
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

from .equilibrium import check_existence, solve_eut, solve_pt
from .model import (Action, GridConfig, MixedProfile, PriceTier, Theory,
                    validate_scenario)
from .power import generation
from .pricing import lmp_price


class SweepParameter(Enum):
    """Scenario knob varied along a sweep."""

    SELL_PRICE = "sell_price"
    LMP_BASE_PRICE = "lmp_base_price"
    BETA = "beta"


class SweepEmptyError(RuntimeError):
    """No sweep point satisfied the existence bounds."""


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional sweep description.

    ``couple_sell_prices`` only matters for SELL_PRICE: coupled sweeps move
    every customer's price together, uncoupled sweeps move only the first
    customer's.  LMP_BASE_PRICE shifts the whole tier ladder so its cheapest
    price equals the swept value, preserving the steps between tiers.
    """

    parameter: SweepParameter
    start: float
    stop: float
    steps: int
    theories: tuple[Theory, ...] = (Theory.EUT, Theory.PT)
    couple_sell_prices: bool = True


@dataclass(frozen=True)
class SweepRow:
    """One (parameter value, theory) result; value fields are None when the
    existence bounds failed at that point."""

    parameter_value: float
    theory: Theory
    p1: float | None
    p2: float | None
    revenue: float | None
    expected_load_kwh: float | None
    exists: tuple[bool, ...]


def revenue(mixed: MixedProfile, customers, grid: GridConfig) -> float:
    """Company's expected selling revenue under a mixed profile.

    Sums, over the profiles where at least one customer buys, the profile
    probability times the tier price times the energy billed (demand plus
    loss shares).  When both discharge the company sells nothing.
    """
    if len(customers) != 2:
        raise ValueError(
            f"revenue aggregation is defined for exactly 2 customers, "
            f"got {len(customers)}")
    p1, p2 = mixed.charge_probabilities
    first, second = customers
    loss = grid.loss_model

    def price_at(profile) -> float:
        return lmp_price(generation(profile, customers, grid).generation_kwh,
                         grid.pricing)

    billed_first = first.demand_kwh + loss.customer_share(first.demand_kwh)
    billed_second = second.demand_kwh + loss.customer_share(second.demand_kwh)
    both = price_at((Action.CHARGE, Action.CHARGE))
    only_first = price_at((Action.CHARGE, Action.DISCHARGE))
    only_second = price_at((Action.DISCHARGE, Action.CHARGE))
    return (p1 * p2 * both * (billed_first + billed_second)
            + p1 * (1.0 - p2) * only_first * billed_first
            + (1.0 - p1) * p2 * only_second * billed_second)


def expected_load(mixed: MixedProfile, customers) -> float:
    """Expected net energy the customers draw from the company: demand
    weighted by the charge probability minus surplus weighted by the
    discharge probability.  Background load and losses are excluded."""
    total = 0.0
    for p, customer in zip(mixed.charge_probabilities, customers):
        total += p * customer.demand_kwh - (1.0 - p) * customer.surplus_kwh
    return total


def _swept_scenario(spec: SweepSpec, value: float, customers,
                    grid: GridConfig):
    if spec.parameter is SweepParameter.SELL_PRICE:
        if spec.couple_sell_prices:
            new_customers = tuple(replace(c, sell_price=value)
                                  for c in customers)
        else:
            new_customers = ((replace(customers[0], sell_price=value),)
                             + tuple(customers[1:]))
        return new_customers, grid
    if spec.parameter is SweepParameter.LMP_BASE_PRICE:
        shift = value - min(t.unit_price for t in grid.pricing.tiers)
        tiers = tuple(PriceTier(t.threshold_kwh, t.unit_price + shift)
                      for t in grid.pricing.tiers)
        return tuple(customers), replace(
            grid, pricing=replace(grid.pricing, tiers=tiers))
    return tuple(customers), replace(grid, beta=value)


def sweep(spec: SweepSpec, customers, grid: GridConfig) -> list[SweepRow]:
    """Solve the game along the sweep grid.

    Every point is re-validated and existence-checked; infeasible points
    produce rows with None values instead of aborting the sweep.  Raises
    SweepEmptyError when no point at all is feasible, and ValueError for a
    malformed grid.
    """
    if spec.steps < 2:
        raise ValueError("sweep steps must be >= 2")
    if not spec.start < spec.stop:
        raise ValueError("sweep start must be < stop")
    span = spec.stop - spec.start
    # EUT rows precede PT rows at each point regardless of request order.
    theories = tuple(t for t in (Theory.EUT, Theory.PT) if t in spec.theories)
    if not theories:
        raise ValueError("sweep needs at least one theory")

    rows: list[SweepRow] = []
    feasible_points = 0
    for step in range(spec.steps):
        # endpoints are exact; interior points are evenly spaced
        if step == spec.steps - 1:
            value = spec.stop
        else:
            value = spec.start + span * step / (spec.steps - 1)
        swept_customers, swept_grid = _swept_scenario(
            spec, value, customers, grid)
        validate_scenario(swept_customers, swept_grid)
        report = check_existence(swept_customers, swept_grid)
        flags = tuple(b.satisfied for b in report.players)
        if not report.all_satisfied:
            for theory in theories:
                rows.append(SweepRow(value, theory, None, None, None, None,
                                     flags))
            continue
        feasible_points += 1
        for theory in theories:
            solver = solve_eut if theory is Theory.EUT else solve_pt
            result = solver(swept_customers, swept_grid)
            first, second = result.mixed.charge_probabilities
            rows.append(SweepRow(
                parameter_value=value,
                theory=theory,
                p1=first,
                p2=second,
                revenue=revenue(result.mixed, swept_customers, swept_grid),
                expected_load_kwh=expected_load(result.mixed, swept_customers),
                exists=flags,
            ))
    if feasible_points == 0:
        raise SweepEmptyError(
            "existence bounds failed at every sweep point")
    return rows


CSV_HEADER = ("parameter", "theory", "p1", "p2", "revenue", "load",
              "exists1", "exists2")


def _formatted(value: float | None) -> str:
    return "" if value is None else format(value, ".12g")


def emit_csv(rows, destination) -> None:
    """Write sweep rows as CSV to a path or text stream.

    Rows are sorted parameter-ascending with EUT before PT, floats carry 12
    significant digits, and the line terminator is fixed, so repeated calls
    on the same rows produce byte-identical output.
    """
    ordered = sorted(rows, key=lambda r: (r.parameter_value,
                                          r.theory is Theory.PT))
    if not ordered:
        raise ValueError("no sweep rows to write")

    def write_to(stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in ordered:
            writer.writerow((
                _formatted(row.parameter_value),
                row.theory.value,
                _formatted(row.p1),
                _formatted(row.p2),
                _formatted(row.revenue),
                _formatted(row.expected_load_kwh),
                "true" if row.exists[0] else "false",
                "true" if row.exists[1] else "false",
            ))

    if isinstance(destination, (str, Path)):
        with open(destination, "w", newline="", encoding="utf-8") as handle:
            write_to(handle)
    else:
        write_to(destination)
