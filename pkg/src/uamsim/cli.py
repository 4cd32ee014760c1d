"""Batch command-line front end.

Subcommands: ``distances | demand | size-fleet | simulate | compare | sweep``.
Every command loads one scenario JSON (``--config``), applies flag
overrides, and exits 0 on success, 2 on configuration or I/O problems, and
3 when a sweep finds no feasible fleet within its bounds.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .config import ScenarioConfig, build_world, load_scenario, override_scenario
from .demand import RNG_NAME, expected_arrivals
from .errors import ValidationError
from .metrics import (
    compute_metrics,
    effective_cost_car,
    effective_cost_uam,
    refine_fleet,
    time_savings,
    write_heatmap_csv,
    write_report_json,
    write_sweep_csv,
    write_waits_csv,
)
from .sizing import size_fleet
from .simulate import (
    REPOSITION,
    REVENUE,
    SimConfig,
    run_simulation,
    write_riders_csv,
    write_trips_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uamsim",
        description="Air-taxi network simulator: demand, fleet sizing, dispatch, and costs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("--config", required=True, help="scenario JSON document")
        p.add_argument("--out", default=None, help="output directory (default: ./out)")
        p.add_argument("--seed", type=int, default=None, help="base RNG seed")
        p.add_argument("--minutes", type=int, default=None, help="simulation horizon in minutes")
        p.add_argument("--fleet", type=int, default=None, help="fleet size override")
        p.add_argument("--alpha", type=float, default=None, help="sizing safety factor")
        p.add_argument("--seeds", type=int, default=None, help="replicate count for averaging")
        return p

    common(sub.add_parser("distances", help="print distance/air-time/feasibility matrices"))
    common(sub.add_parser("demand", help="print arrival-rate matrix and expected arrivals"))
    common(sub.add_parser("size-fleet", help="print the analytical sizing report as JSON"))
    common(sub.add_parser("simulate", help="run one simulation and write report/log files"))
    compare = common(sub.add_parser("compare", help="door-to-door cost/time table vs driving"))
    compare.add_argument("--wait", type=float, default=None, help="assumed rider wait in minutes")
    sweep = common(sub.add_parser("sweep", help="sweep fleet sizes and pick the smallest passing one"))
    sweep.add_argument("--n-min", type=int, default=None, help="smallest fleet size (default 1)")
    sweep.add_argument("--n-max", type=int, default=None, help="largest fleet size (default 40)")
    return parser


def _load(args) -> ScenarioConfig:
    cfg = load_scenario(args.config)
    return override_scenario(
        cfg,
        seed=args.seed,
        t_sim_min=args.minutes,
        fleet=args.fleet,
        alpha=args.alpha,
        seeds=args.seeds,
    )


def _out_dir(args) -> Path:
    out = Path(args.out) if args.out else Path("out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _sim_config(cfg: ScenarioConfig, net, rates, fleet: int) -> SimConfig:
    return SimConfig(
        net=net,
        spec=cfg.vehicle,
        rates=rates,
        fleet=fleet,
        t_sim=cfg.t_sim_min,
        seed=cfg.seed,
        reposition_enabled=cfg.reposition_enabled,
        charge_after_reposition=cfg.charge_after_reposition,
        initial_placement=cfg.initial_placement,
    )


def _matrix_lines(matrix, codes, fmt) -> list[str]:
    cells = [[fmt(x) for x in row] for row in matrix]
    width = max(
        max(len(c) for c in codes) + 1,
        max(len(s) for row in cells for s in row) + 2,
    )
    head = " " * width + "".join(f"{c:>{width}}" for c in codes)
    lines = [head]
    for code, row in zip(codes, cells):
        lines.append(f"{code:<{width}}" + "".join(f"{s:>{width}}" for s in row))
    return lines


def cmd_distances(args) -> int:
    cfg = _load(args)
    _, net, _, _ = build_world(cfg)
    print("Great-circle distances (mi):")
    print("\n".join(_matrix_lines(net.dist, net.codes, lambda x: f"{x:.3f}")))
    print("\nFlight times (min):")
    print("\n".join(_matrix_lines(net.air_time, net.codes, lambda x: f"{x:.3f}")))
    print("\nFeasible (leg within range):")
    print("\n".join(_matrix_lines(net.feasible, net.codes, lambda x: "yes" if x else "no")))
    return EXIT_OK


def cmd_demand(args) -> int:
    cfg = _load(args)
    _, net, od, rates = build_world(cfg)
    print(f"Monthly passengers: {od.total_monthly}")
    print("Arrival rates (pax/min):")
    print("\n".join(_matrix_lines(rates.per_min, net.codes, lambda x: f"{x:.6f}")))
    print(f"\nTotal arrival rate: {rates.total_rate:.6f} pax/min")
    print(f"Expected arrivals over {cfg.t_sim_min} min: {expected_arrivals(rates, cfg.t_sim_min):.3f}")
    return EXIT_OK


def cmd_size_fleet(args) -> int:
    cfg = _load(args)
    _, net, _, rates = build_world(cfg)
    report = size_fleet(net, cfg.vehicle, rates, alpha=cfg.alpha, pooling_q=cfg.pooling_q)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load(args)
    _, net, od, rates = build_world(cfg)
    out = _out_dir(args)
    sizing = size_fleet(net, cfg.vehicle, rates, alpha=cfg.alpha, pooling_q=cfg.pooling_q)

    fleet = cfg.fleet
    refined = None
    if fleet is None:
        # no fleet pinned: start from the analytical estimate, refine upward
        n_min = max(1, sizing.fleet)
        refined = refine_fleet(
            _sim_config(cfg, net, rates, n_min), cfg.seeds, n_min, max(n_min * 4, n_min + 8)
        )
        if not refined.feasible:
            print("no fleet size within the refinement bound meets the wait target", file=sys.stderr)
            return EXIT_INFEASIBLE
        fleet = refined.fleet
        cfg = replace(cfg, fleet=fleet)

    result = run_simulation(_sim_config(cfg, net, rates, fleet))
    report = compute_metrics(result)

    write_trips_csv(result, out / "trips.csv")
    write_riders_csv(result, out / "riders.csv")
    write_waits_csv(result.waits(), out / "waits.csv")
    write_heatmap_csv(od.counts, net.codes, out / "heatmap_demand.csv")
    write_heatmap_csv(report.throughput, net.codes, out / "heatmap_served.csv")
    write_report_json(
        {
            "config": replace(cfg, fleet=fleet).to_dict(),
            "rng": RNG_NAME,
            "sizing": sizing.to_dict(),
            "refined_fleet": None if refined is None else refined.fleet,
            "metrics": report.to_dict(),
            "simulation": {
                "generated": result.generated,
                "served": result.served,
                "onboard_at_end": result.onboard_at_end,
                "unserved": result.unserved,
                "revenue_trips": sum(1 for t in result.trips if t.kind == REVENUE),
                "reposition_trips": sum(1 for t in result.trips if t.kind == REPOSITION),
            },
        },
        out / "report.json",
    )
    print(
        f"fleet {fleet}, {result.generated} riders generated, {result.served} served, "
        f"{result.unserved} still waiting; mean wait {report.mean_wait:.2f} min "
        f"(p95 {report.p95_wait:.0f}), u_air {report.u_air:.3f}, u_cycle {report.u_cycle:.3f}"
    )
    print(f"outputs written to {out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _load(args)
    if args.wait is not None:
        cfg = replace(cfg, compare_wait_min=args.wait)
    if cfg.cost is None:
        raise ValidationError("compare needs a 'cost' section in the scenario config")
    _, net, _, _ = build_world(cfg)
    riders = max(1, round(cfg.pooling_q))
    wait = cfg.compare_wait_min
    print(
        f"{'pair':<12}{'gc mi':>8}{'air door min':>14}{'air $/rider':>13}"
        f"{'car min':>9}{'car $':>9}{'time saved':>12}"
    )
    for i in range(net.n):
        for j in range(i + 1, net.n):
            d = float(net.dist[i, j])
            mission = cfg.vehicle.buffer_min + 60.0 * d / cfg.vehicle.cruise_speed_mph
            uam_door = wait + mission
            uam_cost = effective_cost_uam(d, riders, wait, cfg.cost, cfg.vehicle)
            car_min, car_cost = effective_cost_car(d, cfg.cost)
            saved = time_savings(car_min, uam_door)
            pair = f"{net.codes[i]}-{net.codes[j]}"
            print(
                f"{pair:<12}{d:>8.2f}{uam_door:>14.2f}{uam_cost:>13.2f}"
                f"{car_min:>9.2f}{car_cost:>9.2f}{saved:>12.3f}"
            )
    print(f"(assumed wait {wait} min, {riders} riders/flight, car speed {cfg.cost.car_speed_mph} mph)")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load(args)
    _, net, _, rates = build_world(cfg)
    out = _out_dir(args)
    n_min = args.n_min if args.n_min is not None else 1
    n_max = args.n_max if args.n_max is not None else 40
    base = _sim_config(cfg, net, rates, max(1, n_min))
    refined = refine_fleet(base, cfg.seeds, n_min, n_max)
    write_sweep_csv(refined.rows, out / "sweep.csv")
    print(f"{'fleet':>6}{'mean wait':>11}{'p95':>7}{'served':>9}{'u_air':>8}{'u_cycle':>9}{'wait ok':>9}")
    for row in refined.rows:
        print(
            f"{row.fleet:>6}{row.mean_wait:>11.2f}{row.p95_wait:>7.1f}{row.served:>9.1f}"
            f"{row.u_air:>8.3f}{row.u_cycle:>9.3f}{'yes' if row.wait_ok else 'no':>9}"
        )
    print(f"sweep table written to {out / 'sweep.csv'}")
    if not refined.feasible:
        print(f"infeasible within bound: no fleet in [{n_min}, {n_max}] meets the wait target", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(f"smallest fleet meeting the wait target: {refined.fleet}")
    return EXIT_OK


_COMMANDS = {
    "distances": cmd_distances,
    "demand": cmd_demand,
    "size-fleet": cmd_size_fleet,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
