"""Command-line front end: existence checks, equilibrium solves, sweeps.

Scenario files are TOML:

    [grid]
    background_load_kwh = 200.0
    beta = 0.0018
    prelec_alpha = 0.25        # optional, default 1.0
    price_cap = 0.25           # optional
    loss_model = "zero"        # optional: "zero" | "linear_fraction"
    loss_fraction = 0.02       # required iff loss_model = "linear_fraction"

    [[tiers]]                  # at least one, thresholds increasing
    threshold_kwh = 0.0
    unit_price = 0.05

    [[customers]]              # at least one
    demand_kwh = 20.0
    surplus_kwh = 10.0
    sell_price = 0.06

Exit codes: 0 success, 2 unreadable/malformed scenario or unwritable
output, 3 invalid scenario or sweep grid, 4 existence bounds violated,
5 numeric failure (degenerate indifference, no interior solution, or an
entirely infeasible sweep).
"""

import argparse
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from importlib import resources

from .analysis import (SweepEmptyError, SweepParameter, SweepSpec, emit_csv,
                       expected_load, revenue, sweep)
from .equilibrium import (DegenerateGameError, ExistenceError,
                          NoProperEquilibriumError, check_existence,
                          solve_eut, solve_pt, verify_equilibrium)
from .model import (Customer, GridConfig, LinearFractionLoss, PriceTier,
                    PricingScheme, Scenario, Theory, ValidationError,
                    ZeroLoss, validate_scenario)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_EXISTENCE = 4
EXIT_NUMERIC = 5

_GRID_KEYS = {"background_load_kwh", "beta", "prelec_alpha", "price_cap",
              "loss_model", "loss_fraction"}
_TIER_KEYS = {"threshold_kwh", "unit_price"}
_CUSTOMER_KEYS = {"demand_kwh", "surplus_kwh", "sell_price"}


class ScenarioFormatError(ValueError):
    """The scenario file is structurally wrong: missing table, missing key,
    wrong type, or an unknown key (likely a typo)."""


def _table(document, key: str):
    value = document.get(key)
    if not isinstance(value, dict):
        raise ScenarioFormatError(f"missing [{key}] table")
    return value

def _table_array(document, key: str):
    value = document.get(key)
    if not isinstance(value, list) or not value \
            or not all(isinstance(item, dict) for item in value):
        raise ScenarioFormatError(f"at least one [[{key}]] entry required")
    return value


def _reject_unknown(table, allowed: set, where: str) -> None:
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ScenarioFormatError(f"unknown key '{unknown[0]}' in {where}")


def _number(table, key: str, where: str) -> float:
    if key not in table:
        raise ScenarioFormatError(f"missing key '{key}' in {where}")
    value = table[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioFormatError(
            f"'{key}' in {where} must be a number, got {value!r}")
    return float(value)


def load_scenario(path=None, prelec_alpha: float | None = None) -> Scenario:
    """Parse and validate a scenario file.

    ``path`` None loads the bundled two-customer default.  ``prelec_alpha``,
    when given, overrides the file's weighting exponent before validation.
    """
    if path is None:
        raw = (resources.files("storagegame")
               .joinpath("data/default_scenario.toml").read_bytes())
    else:
        raw = Path(path).read_bytes()
    try:
        document = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as error:
        raise ScenarioFormatError(
            f"cannot parse scenario file: {error}") from error

    _reject_unknown(document, {"grid", "tiers", "customers"}, "scenario")
    grid_table = _table(document, "grid")
    _reject_unknown(grid_table, _GRID_KEYS, "[grid]")

    loss_kind = grid_table.get("loss_model", "zero")
    if loss_kind == "zero":
        if "loss_fraction" in grid_table:
            raise ScenarioFormatError(
                "'loss_fraction' given but loss_model is 'zero'")
        loss_model = ZeroLoss()
    elif loss_kind == "linear_fraction":
        loss_model = LinearFractionLoss(
            fraction=_number(grid_table, "loss_fraction", "[grid]"))
    else:
        raise ScenarioFormatError(
            f"loss_model must be 'zero' or 'linear_fraction', "
            f"got {loss_kind!r}")

    tiers = []
    for i, entry in enumerate(_table_array(document, "tiers")):
        where = f"[[tiers]] entry {i + 1}"
        _reject_unknown(entry, _TIER_KEYS, where)
        tiers.append(PriceTier(
            threshold_kwh=_number(entry, "threshold_kwh", where),
            unit_price=_number(entry, "unit_price", where)))

    customers = []
    for i, entry in enumerate(_table_array(document, "customers")):
        where = f"[[customers]] entry {i + 1}"
        _reject_unknown(entry, _CUSTOMER_KEYS, where)
        customers.append(Customer(
            demand_kwh=_number(entry, "demand_kwh", where),
            surplus_kwh=_number(entry, "surplus_kwh", where),
            sell_price=_number(entry, "sell_price", where)))

    alpha = (_number(grid_table, "prelec_alpha", "[grid]")
             if "prelec_alpha" in grid_table else 1.0)
    if prelec_alpha is not None:
        alpha = prelec_alpha
    cap = (_number(grid_table, "price_cap", "[grid]")
           if "price_cap" in grid_table else None)
    grid = GridConfig(
        background_load_kwh=_number(grid_table, "background_load_kwh",
                                    "[grid]"),
        beta=_number(grid_table, "beta", "[grid]"),
        pricing=PricingScheme(tiers=tuple(tiers)),
        prelec_alpha=alpha,
        price_cap=cap,
        loss_model=loss_model,
    )
    return validate_scenario(tuple(customers), grid)


def _g(value: float) -> str:
    return format(value, ".12g")


def _theories(flag: str) -> tuple[Theory, ...]:
    if flag == "eut":
        return (Theory.EUT,)
    if flag == "pt":
        return (Theory.PT,)
    return (Theory.EUT, Theory.PT)


def cmd_check(args) -> int:
    scenario = load_scenario(args.scenario, args.alpha)
    report = check_existence(scenario.customers, scenario.grid)
    for k, bound in enumerate(report.players, start=1):
        verdict = "satisfied" if bound.satisfied else "violated"
        print(f"customer {k}: lower={_g(bound.lower_bound)} "
              f"value={_g(bound.value)} upper={_g(bound.upper_bound)} "
              f"-> {verdict}")
    if report.all_satisfied:
        print("existence: proper mixed equilibrium guaranteed")
        return EXIT_OK
    print("existence: bounds violated; no proper mixed equilibrium "
          "guaranteed")
    return EXIT_EXISTENCE


def cmd_solve(args) -> int:
    scenario = load_scenario(args.scenario, args.alpha)
    csv_lines = ["theory,p1,p2,residual1,residual2,revenue,load"]
    for theory in _theories(args.theory):
        solver = solve_eut if theory is Theory.EUT else solve_pt
        result = solver(scenario.customers, scenario.grid)
        money = revenue(result.mixed, scenario.customers, scenario.grid)
        load = expected_load(result.mixed, scenario.customers)
        p = result.mixed.charge_probabilities
        residuals = result.indifference_residuals
        if args.csv:
            csv_lines.append(",".join((
                theory.value, _g(p[0]), _g(p[1]), _g(residuals[0]),
                _g(residuals[1]), _g(money), _g(load))))
            continue
        scan = verify_equilibrium(result, scenario.customers, scenario.grid)
        print(f"theory: {theory.value}")
        print(f"  charge probability customer 1: {_g(p[0])}")
        print(f"  charge probability customer 2: {_g(p[1])}")
        print(f"  indifference residual customer 1: {_g(residuals[0])}")
        print(f"  indifference residual customer 2: {_g(residuals[1])}")
        print(f"  proper: {'yes' if result.is_proper else 'no'}")
        print(f"  deviation scan max gain: {_g(scan.max_gain)} "
              f"({'confirmed' if scan.confirmed else 'REFUTED'})")
        print(f"  company revenue: {_g(money)}")
        print(f"  expected customer load (kWh): {_g(load)}")
    if args.csv:
        print("\n".join(csv_lines))
    return EXIT_OK


_PARAM_FLAGS = {
    "b": SweepParameter.SELL_PRICE,
    "base-price": SweepParameter.LMP_BASE_PRICE,
    "beta": SweepParameter.BETA,
}


def cmd_sweep(args) -> int:
    scenario = load_scenario(args.scenario, args.alpha)
    spec = SweepSpec(
        parameter=_PARAM_FLAGS[args.param],
        start=args.start,
        stop=args.stop,
        steps=args.steps,
        theories=_theories(args.theory),
    )
    rows = sweep(spec, scenario.customers, scenario.grid)
    emit_csv(rows, args.out)
    points = sorted({row.parameter_value for row in rows})
    feasible = sorted({row.parameter_value for row in rows
                       if row.p1 is not None})
    print(f"wrote {args.out}: {len(points)} parameter values, "
          f"{len(feasible)} feasible")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="storagegame",
        description="Charge/discharge equilibria for customer-owned "
                    "energy storage.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_common(subparser) -> None:
        subparser.add_argument(
            "scenario", nargs="?", default=None,
            help="scenario TOML file (bundled default when omitted)")
        subparser.add_argument(
            "--alpha", type=float, default=None,
            help="override the probability weighting exponent")

    check = subparsers.add_parser(
        "check", help="evaluate the existence bounds")
    add_common(check)
    check.set_defaults(handler=cmd_check)

    solve = subparsers.add_parser(
        "solve", help="solve for the proper mixed equilibrium")
    add_common(solve)
    solve.add_argument("--theory", choices=("eut", "pt", "both"),
                       default="both")
    solve.add_argument("--csv", action="store_true",
                       help="machine-readable output")
    solve.set_defaults(handler=cmd_solve)

    swp = subparsers.add_parser(
        "sweep", help="sweep one parameter and write CSV")
    add_common(swp)
    swp.add_argument("--param", choices=sorted(_PARAM_FLAGS), required=True,
                     help="b (sell price), base-price (tier ladder shift), "
                          "or beta (regulation weight)")
    swp.add_argument("--start", type=float, required=True)
    swp.add_argument("--stop", type=float, required=True)
    swp.add_argument("--steps", type=int, required=True)
    swp.add_argument("--theory", choices=("eut", "pt", "both"),
                     default="both")
    swp.add_argument("--out", required=True, help="CSV destination path")
    swp.set_defaults(handler=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ScenarioFormatError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as error:
        print(f"error: cannot read or write file: {error}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as error:
        print(f"error: invalid scenario: {error}", file=sys.stderr)
        return EXIT_INVALID
    except ExistenceError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_EXISTENCE
    except (DegenerateGameError, NoProperEquilibriumError,
            SweepEmptyError) as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
