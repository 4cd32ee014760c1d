from __future__ import annotations

from pathlib import Path

import pytest

from uamsim import (
    GeoNode,
    SimConfig,
    VehicleSpec,
    build_network,
    build_world,
    compute_rates,
    load_scenario,
)

REPO_ROOT = Path(__file__).resolve().parents[1]
BASELINE_DIR = REPO_ROOT / "scenarios" / "baseline"


@pytest.fixture(scope="session")
def bay_nodes() -> list[GeoNode]:
    return [
        GeoNode(0, "SFO", 37.6190, -122.3750),
        GeoNode(1, "OAK", 37.7213, -122.2210),
        GeoNode(2, "SJC", 37.3623, -121.9290),
        GeoNode(3, "PAO", 37.4611, -122.1150),
    ]


@pytest.fixture(scope="session")
def spec() -> VehicleSpec:
    return VehicleSpec()


@pytest.fixture(scope="session")
def net(bay_nodes, spec):
    return build_network(bay_nodes, spec)


@pytest.fixture(scope="session")
def baseline_scenario():
    return load_scenario(BASELINE_DIR / "config.json")


@pytest.fixture(scope="session")
def baseline_world(baseline_scenario):
    return build_world(baseline_scenario)


@pytest.fixture(scope="session")
def baseline_rates(baseline_world):
    return baseline_world[3]


@pytest.fixture
def sim_config(net, spec, baseline_rates):
    """Baseline-shaped SimConfig factory with overridable fields."""

    def make(**kwargs) -> SimConfig:
        base = dict(
            net=net,
            spec=spec,
            rates=baseline_rates,
            fleet=32,
            t_sim=1200,
            seed=0,
        )
        base.update(kwargs)
        return SimConfig(**base)

    return make


def single_pair_rates(net, pax_per_min: float, origin: int = 0, dest: int = 2):
    """Rates with demand on exactly one ordered pair."""
    import numpy as np

    from uamsim import DemandRates

    lam = np.zeros((net.n, net.n))
    lam[origin, dest] = pax_per_min
    return DemandRates(per_min=lam)
