"""Vertiport node set and the great-circle route network between nodes.

Distances are statute miles on a sphere of mean radius 3,958.8 mi, flight
times are minutes at the vehicle's cruise speed, and a route is feasible
whenever its length fits inside the vehicle's maximum range.  All matrices
are built once and never mutated; every function here is pure.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, IngestionError, ValidationError

EARTH_RADIUS_MI = 3958.8


@dataclass(frozen=True)
class GeoNode:
    """A vertiport: integer index, short code, and decimal-degree position."""

    id: int
    code: str
    lat: float
    lon: float

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValidationError(f"latitude {self.lat} outside [-90, 90] for {self.code!r}")
        if not -180.0 <= self.lon <= 180.0:
            raise ValidationError(f"longitude {self.lon} outside [-180, 180] for {self.code!r}")


@dataclass(frozen=True)
class VehicleSpec:
    """Performance and cost constants of the aircraft operating the network.

    ``altitude_band_ft`` is a recorded constant only; nothing in the model
    depends on it.  ``optimal_leg_mi`` is likewise stored but drives no
    behavior.
    """

    cruise_speed_mph: float = 150.0
    max_range_mi: float = 60.0
    optimal_leg_mi: float = 20.0
    turnaround_min: int = 10
    buffer_min: int = 5
    capacity: int = 4
    op_cost_per_hr: float = 605.0
    altitude_band_ft: tuple[float, float] = (500.0, 3000.0)

    def __post_init__(self):
        positives = {
            "cruise_speed_mph": self.cruise_speed_mph,
            "max_range_mi": self.max_range_mi,
            "optimal_leg_mi": self.optimal_leg_mi,
            "turnaround_min": self.turnaround_min,
            "buffer_min": self.buffer_min,
            "capacity": self.capacity,
            "op_cost_per_hr": self.op_cost_per_hr,
        }
        for name, value in positives.items():
            if value <= 0:
                raise ValidationError(f"{name} must be strictly positive, got {value}")
        if not isinstance(self.capacity, int):
            raise ValidationError(f"capacity must be an integer, got {self.capacity!r}")
        if self.optimal_leg_mi > self.max_range_mi:
            raise ValidationError("optimal_leg_mi cannot exceed max_range_mi")


@dataclass(frozen=True)
class RouteNetwork:
    """All pairwise distances, flight times, and range-feasibility flags.

    ``dist`` is exactly symmetric (each unordered pair is computed once and
    mirrored), the diagonal is zero, and the diagonal of ``feasible`` is
    False because self-trips do not exist.
    """

    nodes: tuple[GeoNode, ...]
    dist: np.ndarray       # miles, n x n
    air_time: np.ndarray   # minutes at cruise speed, n x n
    feasible: np.ndarray   # bool, n x n

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def codes(self) -> list[str]:
        return [node.code for node in self.nodes]

    def index_of(self, code: str) -> int:
        for node in self.nodes:
            if node.code == code:
                return node.id
        raise KeyError(code)


def haversine_distance(a: GeoNode, b: GeoNode) -> float:
    """Great-circle distance between two nodes in statute miles.

    Uses the haversine form, which is numerically stable for the short
    legs flown here.  Symmetric by construction and zero for ``a == b``.
    """
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlam = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_MI * math.asin(math.sqrt(h))


def build_network(nodes: list[GeoNode], spec: VehicleSpec) -> RouteNetwork:
    """Assemble the route network for a node set.

    Args:
        nodes: vertiports with ids 0..n-1 (contiguous) and unique codes.
        spec: the vehicle whose cruise speed and range shape the matrices.

    Returns:
        A RouteNetwork with miles, minutes, and feasibility per ordered pair.

    Raises:
        ConfigError: empty node list, duplicate codes, or non-contiguous ids.
    """
    if not nodes:
        raise ConfigError("network needs at least one node")
    codes = [node.code for node in nodes]
    if len(set(codes)) != len(codes):
        raise ConfigError(f"duplicate node codes: {sorted(codes)}")
    if sorted(node.id for node in nodes) != list(range(len(nodes))):
        raise ConfigError("node ids must be contiguous 0..n-1")

    ordered = tuple(sorted(nodes, key=lambda node: node.id))
    n = len(ordered)
    dist = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            d = haversine_distance(ordered[i], ordered[j])
            # mirror the same float so symmetry is exact, not approximate
            dist[i, j] = d
            dist[j, i] = d

    air_time = 60.0 * dist / spec.cruise_speed_mph
    feasible = dist <= spec.max_range_mi
    np.fill_diagonal(feasible, False)
    return RouteNetwork(nodes=ordered, dist=dist, air_time=air_time, feasible=feasible)


def load_nodes_csv(path: str | Path) -> list[GeoNode]:
    """Read a ``nodes.csv`` file (header ``id,code,lat,lon``) into GeoNodes."""
    path = Path(path)
    if not path.exists():
        raise IngestionError(f"nodes file not found: {path}")
    nodes: list[GeoNode] = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        expected = ["id", "code", "lat", "lon"]
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != expected:
            raise IngestionError(f"{path}: expected header {','.join(expected)!r}, got {reader.fieldnames}")
        for lineno, row in enumerate(reader, start=2):
            try:
                nodes.append(
                    GeoNode(
                        id=int(row["id"]),
                        code=(row["code"] or "").strip(),
                        lat=float(row["lat"]),
                        lon=float(row["lon"]),
                    )
                )
            except (TypeError, ValueError) as exc:
                raise IngestionError(f"{path}:{lineno}: bad node row {row}: {exc}") from exc
    if not nodes:
        raise IngestionError(f"{path}: no node rows")
    if sorted(node.id for node in nodes) != list(range(len(nodes))):
        raise IngestionError(f"{path}: node ids must be contiguous 0..n-1 and unique")
    codes = [node.code for node in nodes]
    if len(set(codes)) != len(codes):
        raise IngestionError(f"{path}: duplicate node codes")
    return sorted(nodes, key=lambda node: node.id)
