"""Minute-stepped rider/vehicle dispatch simulation.

Each run is a pure function of its configuration: the only stochastic input
is the Poisson arrival stream, every tie-break is by lowest id, and flight
durations are integer minute countdowns (taxi buffer followed by the
ceiling of the airborne time).  Per minute the engine

1. fires due state transitions (arrivals, charge completions),
2. injects this minute's rider arrivals,
3. dispatches: waiting riders board a co-located idle vehicle (pooling up
   to capacity on the identical OD pair) or summon the nearest idle one,
   which flies over empty and must finish its turnaround before boarding,
4. repositions remaining idle vehicles at rider-free nodes toward the
   highest-origin-rate node that still has riders waiting.

Vehicles charge for the full turnaround after every leg (the post-
reposition charge can be disabled), and every leg flown is checked against
the vehicle's range.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .demand import DemandRates, RiderRequest, generate_arrivals
from .errors import ConfigError
from .network import RouteNetwork, VehicleSpec

REVENUE = "revenue"
REPOSITION = "reposition"


class VehicleState(Enum):
    IDLE = "idle"
    FLYING = "flying"
    CHARGING = "charging"
    REPOSITIONING = "repositioning"


@dataclass(frozen=True)
class TripRecord:
    """One flight leg as written to the audit log at launch time.

    ``arrive_min`` is the scheduled arrival; legs still airborne when the
    horizon closes keep their schedule and are clamped by consumers.
    """

    vehicle_id: int
    kind: str  # REVENUE or REPOSITION
    origin: int
    dest: int
    depart_min: int
    arrive_min: int
    rider_ids: tuple[int, ...]


@dataclass(frozen=True)
class RiderOutcome:
    """A rider's lifecycle: blank board/dropoff minutes mean it never happened."""

    rider_id: int
    origin: int
    dest: int
    arrival_min: int
    board_min: int | None
    dropoff_min: int | None


@dataclass(frozen=True)
class VehicleStats:
    """End-of-run accumulator snapshot; the five buckets sum to the horizon."""

    vehicle_id: int
    revenue_air_min: int
    reposition_air_min: int
    buffer_min: int
    charge_min: int
    idle_min: int
    end_state: str
    end_location: int | None


@dataclass(frozen=True)
class SimConfig:
    net: RouteNetwork
    spec: VehicleSpec
    rates: DemandRates
    fleet: int
    t_sim: int = 1200
    seed: int = 0
    reposition_enabled: bool = True
    charge_after_reposition: bool = True
    initial_placement: str = "round_robin"  # or "node:<id>"


@dataclass(frozen=True)
class SimResult:
    config: SimConfig
    trips: tuple[TripRecord, ...]
    riders: tuple[RiderOutcome, ...]
    vehicles: tuple[VehicleStats, ...]
    generated: int
    served: int
    onboard_at_end: int
    unserved: int

    def waits(self) -> list[int]:
        """Wait minutes of every rider who boarded, in rider-id order."""
        return [r.board_min - r.arrival_min for r in self.riders if r.board_min is not None]

    def to_dict(self) -> dict:
        """Canonical dict form, used for byte-identical comparison and JSON."""
        return {
            "generated": self.generated,
            "served": self.served,
            "onboard_at_end": self.onboard_at_end,
            "unserved": self.unserved,
            "trips": [
                [t.vehicle_id, t.kind, t.origin, t.dest, t.depart_min, t.arrive_min, list(t.rider_ids)]
                for t in self.trips
            ],
            "riders": [
                [r.rider_id, r.origin, r.dest, r.arrival_min, r.board_min, r.dropoff_min]
                for r in self.riders
            ],
            "vehicles": [
                [v.vehicle_id, v.revenue_air_min, v.reposition_air_min, v.buffer_min,
                 v.charge_min, v.idle_min, v.end_state, v.end_location]
                for v in self.vehicles
            ],
        }


class _Vehicle:
    """Mutable in-sim agent; collapsed into a VehicleStats snapshot at the end.

    Attributes:
        location: node id when on the ground, unchanged while airborne.
        dest: target node while FLYING or REPOSITIONING.
        ready_min: minute the current activity completes.
        depart_min / buffer_len / air_len: current leg bookkeeping.
        inbound_target: node a summoned/repositioning vehicle is committed
            to until it next goes idle; keeps a waiting rider from summoning
            help twice.
    """

    __slots__ = (
        "id", "location", "state", "onboard", "dest", "ready_min", "depart_min",
        "buffer_len", "air_len", "charge_start", "idle_since", "inbound_target",
        "revenue_air_min", "reposition_air_min", "buffer_min", "charge_min", "idle_min",
    )

    def __init__(self, vid: int, location: int):
        self.id = vid
        self.location = location
        self.state = VehicleState.IDLE
        self.onboard: tuple[int, ...] = ()
        self.dest = -1
        self.ready_min = 0
        self.depart_min = 0
        self.buffer_len = 0
        self.air_len = 0
        self.charge_start = 0
        self.idle_since = 0
        self.inbound_target: int | None = None
        self.revenue_air_min = 0
        self.reposition_air_min = 0
        self.buffer_min = 0
        self.charge_min = 0
        self.idle_min = 0


class Simulation:
    """One simulation run; construct, call :meth:`run`, read the result.

    The stepping methods are public so unit scenarios can drive a single
    minute by hand (``inject``, ``fire_transitions``, ``dispatch_step``,
    ``reposition_idle``) and inspect intermediate state.
    """

    def __init__(self, cfg: SimConfig):
        if cfg.fleet < 1:
            raise ConfigError(f"fleet must be at least 1, got {cfg.fleet}")
        if cfg.t_sim <= 0:
            raise ConfigError(f"t_sim must be positive, got {cfg.t_sim}")
        n = cfg.net.n
        if cfg.rates.per_min.shape != (n, n):
            raise ConfigError("demand rate matrix does not match the network size")
        bad = [
            (i, j)
            for i in range(n)
            for j in range(n)
            if i != j and cfg.rates.per_min[i, j] > 0 and not cfg.net.feasible[i, j]
        ]
        if bad:
            raise ConfigError(f"demand on infeasible routes (exceeds range): {bad}")

        self.cfg = cfg
        self.n = n
        self.capacity = cfg.spec.capacity
        self.turnaround = cfg.spec.turnaround_min
        self.buffer = cfg.spec.buffer_min
        # integer airborne minutes per ordered pair
        self.air_min = [
            [0 if i == j else math.ceil(cfg.net.air_time[i, j]) for j in range(n)]
            for i in range(n)
        ]
        self.feasible = [[bool(cfg.net.feasible[i, j]) for j in range(n)] for i in range(n)]
        # node visit order for nearest-idle search: by distance, id breaks ties
        self.near_order = [
            sorted(range(n), key=lambda x, o=o: (cfg.net.dist[o, x], x)) for o in range(n)
        ]
        self.origin_rate = [float(r) for r in cfg.rates.origin_rate]

        self.all_riders = generate_arrivals(cfg.rates, cfg.t_sim, cfg.seed)
        self.arrivals_by_minute: list[list[RiderRequest]] = [[] for _ in range(cfg.t_sim)]
        for rider in self.all_riders:
            self.arrivals_by_minute[rider.arrival_min].append(rider)

        self.vehicles = [
            _Vehicle(vid, self._initial_node(vid)) for vid in range(cfg.fleet)
        ]
        self.idle_at: list[set[int]] = [set() for _ in range(n)]
        for v in self.vehicles:
            self.idle_at[v.location].add(v.id)
        self.idle_count = cfg.fleet

        self.waiting: dict[int, RiderRequest] = {}  # insertion order == rider id order
        self.summoned: dict[int, int] = {}          # rider id -> vehicle id flying to help
        self.due: dict[int, list[int]] = {}         # minute -> vehicle ids to transition
        self.trips: list[TripRecord] = []
        self.board_min: dict[int, int] = {}
        self.dropoff_min: dict[int, int] = {}
        self.generated_so_far = 0
        self.minute = 0

    def _initial_node(self, vid: int) -> int:
        rule = self.cfg.initial_placement
        if rule == "round_robin":
            return vid % self.n
        if rule.startswith("node:"):
            node = int(rule.split(":", 1)[1])
            if not 0 <= node < self.n:
                raise ConfigError(f"initial placement node {node} out of range")
            return node
        raise ConfigError(f"unknown initial placement rule {rule!r}")

    # -- per-minute phases ------------------------------------------------

    def fire_transitions(self, minute: int) -> None:
        for vid in sorted(self.due.pop(minute, ())):
            v = self.vehicles[vid]
            if v.state is VehicleState.FLYING:
                for rid in v.onboard:
                    self.dropoff_min[rid] = minute
                v.revenue_air_min += v.air_len
                v.buffer_min += v.buffer_len
                v.onboard = ()
                v.location = v.dest
                self._start_charge(v, minute)
            elif v.state is VehicleState.REPOSITIONING:
                v.reposition_air_min += v.air_len
                v.buffer_min += v.buffer_len
                v.location = v.dest
                if self.cfg.charge_after_reposition:
                    self._start_charge(v, minute)
                else:
                    self._go_idle(v, minute)
            elif v.state is VehicleState.CHARGING:
                v.charge_min += self.turnaround
                self._go_idle(v, minute)

    def inject(self, minute: int) -> None:
        for rider in self.arrivals_by_minute[minute]:
            self.waiting[rider.rider_id] = rider
            self.generated_so_far += 1

    def dispatch_step(self, minute: int) -> None:
        if not self.waiting:
            return
        for rider in list(self.waiting.values()):
            if rider.rider_id not in self.waiting:
                continue  # pooled onto an earlier boarding this pass
            origin = rider.origin
            if self.idle_at[origin]:
                self._board(rider, minute)
                continue
            helper = self.summoned.get(rider.rider_id)
            if helper is not None and self.vehicles[helper].inbound_target == origin:
                continue  # help already on its way
            if self.idle_count == 0:
                break  # nobody can board or be summoned this minute
            vid = self._nearest_idle(origin)
            if vid is not None:
                self._launch_reposition(self.vehicles[vid], origin, minute)
                self.summoned[rider.rider_id] = vid

    def reposition_idle(self, minute: int) -> None:
        if not self.cfg.reposition_enabled or self.idle_count == 0 or not self.waiting:
            return
        waiting_nodes = {r.origin for r in self.waiting.values()}
        target = min(waiting_nodes, key=lambda x: (-self.origin_rate[x], x))
        for node in range(self.n):
            if node in waiting_nodes or not self.idle_at[node]:
                continue
            if not self.feasible[node][target]:
                continue
            for vid in sorted(self.idle_at[node]):
                self._launch_reposition(self.vehicles[vid], target, minute)

    # -- helpers -----------------------------------------------------------

    def _go_idle(self, v: _Vehicle, minute: int) -> None:
        v.state = VehicleState.IDLE
        v.idle_since = minute
        v.inbound_target = None
        self.idle_at[v.location].add(v.id)
        self.idle_count += 1

    def _start_charge(self, v: _Vehicle, minute: int) -> None:
        v.state = VehicleState.CHARGING
        v.charge_start = minute
        v.ready_min = minute + self.turnaround
        self.due.setdefault(v.ready_min, []).append(v.id)

    def _leave_idle(self, v: _Vehicle, minute: int) -> None:
        v.idle_min += minute - v.idle_since
        self.idle_at[v.location].discard(v.id)
        self.idle_count -= 1

    def _nearest_idle(self, origin: int) -> int | None:
        """Lowest-id idle vehicle at the closest node with a feasible leg in."""
        for node in self.near_order[origin]:
            if not self.idle_at[node]:
                continue
            if node != origin and not self.feasible[node][origin]:
                continue
            return min(self.idle_at[node])
        return None

    def _board(self, rider: RiderRequest, minute: int) -> None:
        v = self.vehicles[min(self.idle_at[rider.origin])]
        group = [
            w for w in self.waiting.values()
            if w.origin == rider.origin and w.dest == rider.dest
        ][: self.capacity]
        self._leave_idle(v, minute)
        air = self.air_min[rider.origin][rider.dest]
        v.state = VehicleState.FLYING
        v.dest = rider.dest
        v.depart_min = minute
        v.buffer_len = self.buffer
        v.air_len = air
        v.ready_min = minute + self.buffer + air
        v.onboard = tuple(w.rider_id for w in group)
        self.due.setdefault(v.ready_min, []).append(v.id)
        self.trips.append(
            TripRecord(v.id, REVENUE, rider.origin, rider.dest, minute, v.ready_min, v.onboard)
        )
        for w in group:
            self.board_min[w.rider_id] = minute
            del self.waiting[w.rider_id]
            self.summoned.pop(w.rider_id, None)

    def _launch_reposition(self, v: _Vehicle, target: int, minute: int) -> None:
        self._leave_idle(v, minute)
        air = self.air_min[v.location][target]
        v.state = VehicleState.REPOSITIONING
        v.dest = target
        v.depart_min = minute
        v.buffer_len = self.buffer
        v.air_len = air
        v.ready_min = minute + self.buffer + air
        v.inbound_target = target
        self.due.setdefault(v.ready_min, []).append(v.id)
        self.trips.append(
            TripRecord(v.id, REPOSITION, v.location, target, minute, v.ready_min, ())
        )

    # -- loop ---------------------------------------------------------------

    def step(self) -> None:
        """Advance exactly one minute."""
        m = self.minute
        self.fire_transitions(m)
        self.inject(m)
        self.dispatch_step(m)
        self.reposition_idle(m)
        self.minute = m + 1

    def counts(self) -> tuple[int, int, int, int]:
        """(generated, dropped_off, onboard, waiting); conserved every minute."""
        onboard = sum(len(v.onboard) for v in self.vehicles)
        return self.generated_so_far, len(self.dropoff_min), onboard, len(self.waiting)

    def run(self) -> SimResult:
        while self.minute < self.cfg.t_sim:
            self.step()
        return self._finalize()

    def _finalize(self) -> SimResult:
        t_end = self.cfg.t_sim
        stats = []
        for v in self.vehicles:
            if v.state is VehicleState.IDLE:
                v.idle_min += t_end - v.idle_since
            elif v.state is VehicleState.CHARGING:
                v.charge_min += t_end - v.charge_start
            else:  # airborne at the horizon: buffer elapses first, then air
                elapsed = t_end - v.depart_min
                buffer_part = min(elapsed, v.buffer_len)
                air_part = elapsed - buffer_part
                v.buffer_min += buffer_part
                if v.state is VehicleState.FLYING:
                    v.revenue_air_min += air_part
                else:
                    v.reposition_air_min += air_part
            stats.append(
                VehicleStats(
                    vehicle_id=v.id,
                    revenue_air_min=v.revenue_air_min,
                    reposition_air_min=v.reposition_air_min,
                    buffer_min=v.buffer_min,
                    charge_min=v.charge_min,
                    idle_min=v.idle_min,
                    end_state=v.state.value,
                    end_location=None if v.state in (VehicleState.FLYING, VehicleState.REPOSITIONING) else v.location,
                )
            )
        outcomes = tuple(
            RiderOutcome(
                rider_id=r.rider_id,
                origin=r.origin,
                dest=r.dest,
                arrival_min=r.arrival_min,
                board_min=self.board_min.get(r.rider_id),
                dropoff_min=self.dropoff_min.get(r.rider_id),
            )
            for r in self.all_riders
        )
        onboard_at_end = sum(len(v.onboard) for v in self.vehicles)
        return SimResult(
            config=self.cfg,
            trips=tuple(self.trips),
            riders=outcomes,
            vehicles=tuple(stats),
            generated=len(self.all_riders),
            served=len(self.dropoff_min),
            onboard_at_end=onboard_at_end,
            unserved=len(self.waiting),
        )


def run_simulation(cfg: SimConfig) -> SimResult:
    """Execute one full run; identical configs give byte-identical results."""
    return Simulation(cfg).run()


def write_trips_csv(result: SimResult, path: str | Path) -> None:
    """Trip audit log; rider ids are ';'-joined in the last column."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["vehicle_id", "kind", "origin", "dest", "depart_min", "arrive_min", "riders"])
        for t in result.trips:
            writer.writerow(
                [t.vehicle_id, t.kind, t.origin, t.dest, t.depart_min, t.arrive_min,
                 ";".join(str(r) for r in t.rider_ids)]
            )


def write_riders_csv(result: SimResult, path: str | Path) -> None:
    """Rider ledger; board/dropoff cells are blank when they never happened."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rider_id", "origin", "dest", "arrival_min", "board_min", "dropoff_min"])
        for r in result.riders:
            writer.writerow(
                [r.rider_id, r.origin, r.dest, r.arrival_min,
                 "" if r.board_min is None else r.board_min,
                 "" if r.dropoff_min is None else r.dropoff_min]
            )
