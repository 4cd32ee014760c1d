"""Service-quality metrics, the car comparator, and fleet refinement.

Everything here is a pure computation over immutable simulation results.
Utilization splits airborne minutes by purpose: ``u_air`` counts revenue
legs only, while cycle utilization adds repositioning, taxi buffer, and
charging.  Whether repositioning minutes count as "airborne" is a
reporting convention, so reports carry both variants side by side.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import MetricsError, ValidationError
from .network import VehicleSpec
from .simulate import REVENUE, SimConfig, SimResult, TripRecord, run_simulation

WAIT_TARGET_MIN = 10.0
U_AIR_BAND = (0.60, 0.70)
LOAD_TARGET = 0.70


@dataclass(frozen=True)
class CostParams:
    """Unit costs for the door-to-door comparison against driving."""

    car_speed_mph: float
    op_cost_per_hr: float = 605.0
    value_of_time_per_hr: float = 40.0
    car_cost_per_mi: float = 0.58
    circuity: float = 1.3

    def __post_init__(self):
        for name in ("car_speed_mph", "op_cost_per_hr", "value_of_time_per_hr", "car_cost_per_mi"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be positive")
        if self.circuity < 1.0:
            raise ValidationError(f"circuity must be at least 1.0, got {self.circuity}")


@dataclass(frozen=True)
class MetricsReport:
    """Headline service metrics for one run plus target pass/fail flags."""

    mean_wait: float
    p95_wait: float
    served: int
    unserved: int
    onboard_at_end: int
    u_air: float
    u_air_incl_reposition: float
    u_cycle: float
    throughput: np.ndarray
    load_factor: float
    wait_ok: bool
    u_air_ok: bool
    u_air_band: str  # "under_utilized" | "in_band" | "overstressed"
    load_ok: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["throughput"] = self.throughput.tolist()
        return d


def wait_stats(waits: Sequence[float]) -> tuple[float, float]:
    """Mean and nearest-rank 95th percentile of served-rider waits."""
    if not waits:
        raise MetricsError("no served riders: wait statistics are undefined")
    ordered = sorted(waits)
    mean = sum(ordered) / len(ordered)
    rank = math.ceil(0.95 * len(ordered))  # 1-based nearest rank
    return mean, ordered[rank - 1]


def check_wait_target(mean_wait: float) -> bool:
    """Mean wait at or under the ten-minute service target."""
    return mean_wait <= WAIT_TARGET_MIN


def air_utilization(result: SimResult, include_reposition: bool = False) -> float:
    """Airborne fleet-minutes over total fleet-minutes (revenue legs only
    by default)."""
    total = result.config.fleet * result.config.t_sim
    air = sum(v.revenue_air_min for v in result.vehicles)
    if include_reposition:
        air += sum(v.reposition_air_min for v in result.vehicles)
    return air / total


def cycle_utilization(result: SimResult) -> float:
    """Busy fleet-minutes (flying, repositioning, buffer, charging) over total."""
    total = result.config.fleet * result.config.t_sim
    busy = sum(
        v.revenue_air_min + v.reposition_air_min + v.buffer_min + v.charge_min
        for v in result.vehicles
    )
    return busy / total


def utilization_band(u_air: float) -> str:
    low, high = U_AIR_BAND
    if u_air < low:
        return "under_utilized"
    if u_air > high:
        return "overstressed"
    return "in_band"


def check_utilization_band(u_air: float) -> bool:
    low, high = U_AIR_BAND
    return low <= u_air <= high


def throughput_matrix(result: SimResult) -> np.ndarray:
    """Dropped-off rider counts per ordered pair."""
    n = result.config.net.n
    served = np.zeros((n, n), dtype=np.int64)
    for r in result.riders:
        if r.dropoff_min is not None:
            served[r.origin, r.dest] += 1
    return served


def load_factor(trips: Sequence[TripRecord], capacity: int) -> float:
    """Mean seat occupancy over revenue trips.

    Computed as one exact integer ratio (total riders over total seats
    flown) so the value can be recomputed bit-for-bit from the trip log.
    """
    revenue = [t for t in trips if t.kind == REVENUE]
    if not revenue:
        raise MetricsError("no revenue trips: load factor is undefined")
    return sum(len(t.rider_ids) for t in revenue) / (capacity * len(revenue))


def compute_metrics(result: SimResult) -> MetricsReport:
    """Assemble the full report; degenerate zero-demand runs score all zeros."""
    waits = result.waits()
    if waits:
        mean_wait, p95 = wait_stats(waits)
    else:
        mean_wait, p95 = 0.0, 0.0
    u_air = air_utilization(result)
    try:
        lf = load_factor(result.trips, result.config.spec.capacity)
    except MetricsError:
        lf = 0.0
    return MetricsReport(
        mean_wait=mean_wait,
        p95_wait=p95,
        served=result.served,
        unserved=result.unserved,
        onboard_at_end=result.onboard_at_end,
        u_air=u_air,
        u_air_incl_reposition=air_utilization(result, include_reposition=True),
        u_cycle=cycle_utilization(result),
        throughput=throughput_matrix(result),
        load_factor=lf,
        wait_ok=check_wait_target(mean_wait),
        u_air_ok=check_utilization_band(u_air),
        u_air_band=utilization_band(u_air),
        load_ok=lf >= LOAD_TARGET,
    )


# -- door-to-door cost and time comparison ---------------------------------

def effective_cost_uam(
    trip_distance_mi: float,
    riders_aboard: int,
    wait_min: float,
    params: CostParams,
    spec: VehicleSpec,
) -> float:
    """Per-rider effective cost of a pooled air trip: an equal share of the
    mission's operating cost plus the rider's time valued at the hourly
    rate.  The mission clock runs from taxi buffer through touchdown."""
    if riders_aboard < 1:
        raise ValidationError(f"riders_aboard must be at least 1, got {riders_aboard}")
    mission_min = spec.buffer_min + 60.0 * trip_distance_mi / spec.cruise_speed_mph
    operating_share = params.op_cost_per_hr * (mission_min / 60.0) / riders_aboard
    time_value = params.value_of_time_per_hr * (wait_min + mission_min) / 60.0
    return operating_share + time_value


def effective_cost_car(gc_distance_mi: float, params: CostParams) -> tuple[float, float]:
    """(minutes, USD) to drive the same pair: great-circle miles scaled by
    the circuity factor, mileage cost plus time value."""
    road_mi = params.circuity * gc_distance_mi
    minutes = 60.0 * road_mi / params.car_speed_mph
    cost = params.car_cost_per_mi * road_mi + params.value_of_time_per_hr * minutes / 60.0
    return minutes, cost


def time_savings(t_car_min: float, t_uam_door_min: float) -> float:
    """Fractional door-to-door time saved over driving; negative when slower."""
    if t_car_min <= 0:
        raise ValidationError(f"car time must be positive, got {t_car_min}")
    return (t_car_min - t_uam_door_min) / t_car_min


# -- simulation-driven fleet refinement -------------------------------------

@dataclass(frozen=True)
class SweepRow:
    """Seed-averaged metrics for one fleet size."""

    fleet: int
    mean_wait: float
    p95_wait: float
    served: float
    unserved: float
    u_air: float
    u_cycle: float
    load_factor: float
    wait_ok: bool

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RefinementResult:
    """Outcome of a fleet sweep: chosen size (None if infeasible) + table."""

    fleet: int | None
    rows: tuple[SweepRow, ...]

    @property
    def feasible(self) -> bool:
        return self.fleet is not None


def refine_fleet(cfg: SimConfig, seeds: int, n_min: int, n_max: int) -> RefinementResult:
    """Sweep fleet sizes, averaging metrics over a common seed list per size.

    Seeds are ``cfg.seed + k`` for k in [0, seeds); reusing the same arrival
    streams across sizes keeps adjacent rows comparable.  Returns the
    smallest size whose seed-averaged mean wait meets the target, with the
    full sweep table either way.
    """
    if n_min < 1:
        raise ValidationError(f"n_min must be at least 1, got {n_min}")
    if n_max < n_min:
        raise ValidationError(f"n_max {n_max} below n_min {n_min}")
    if seeds < 1:
        raise ValidationError(f"seeds must be at least 1, got {seeds}")
    rows = []
    for fleet in range(n_min, n_max + 1):
        reports = [
            compute_metrics(run_simulation(replace(cfg, fleet=fleet, seed=cfg.seed + k)))
            for k in range(seeds)
        ]
        mean_wait = sum(r.mean_wait for r in reports) / seeds
        rows.append(
            SweepRow(
                fleet=fleet,
                mean_wait=mean_wait,
                p95_wait=sum(r.p95_wait for r in reports) / seeds,
                served=sum(r.served for r in reports) / seeds,
                unserved=sum(r.unserved for r in reports) / seeds,
                u_air=sum(r.u_air for r in reports) / seeds,
                u_cycle=sum(r.u_cycle for r in reports) / seeds,
                load_factor=sum(r.load_factor for r in reports) / seeds,
                wait_ok=check_wait_target(mean_wait),
            )
        )
    chosen = next((row.fleet for row in rows if row.wait_ok), None)
    return RefinementResult(fleet=chosen, rows=tuple(rows))


# -- plot-ready output files -------------------------------------------------

def write_waits_csv(waits: Sequence[float], path: str | Path) -> None:
    """One wait value per served rider (histogram source data)."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["wait_min"])
        for w in waits:
            writer.writerow([w])


def write_heatmap_csv(matrix: np.ndarray, codes: Sequence[str], path: str | Path) -> None:
    """Square matrix with node-code row and column headers."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([""] + list(codes))
        for code, row in zip(codes, matrix.tolist()):
            writer.writerow([code] + row)


def write_report_json(report: dict, path: str | Path) -> None:
    """Deterministic JSON dump: sorted keys, full float precision."""
    Path(path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_sweep_csv(rows: Sequence[SweepRow], path: str | Path) -> None:
    """Sweep table, one row per fleet size."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["fleet", "mean_wait", "p95_wait", "served", "unserved",
             "u_air", "u_cycle", "load_factor", "wait_ok"]
        )
        for row in rows:
            writer.writerow(
                [row.fleet, row.mean_wait, row.p95_wait, row.served, row.unserved,
                 row.u_air, row.u_cycle, row.load_factor, row.wait_ok]
            )
