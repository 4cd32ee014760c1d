"""Seed-reproducible simulator of an on-demand air-taxi network.

Builds a great-circle route network over vertiport nodes, turns monthly
origin-destination passenger counts into per-minute Poisson arrivals,
sizes a fleet analytically, simulates minute-by-minute dispatch with
pooling, charging, and repositioning, and scores the result against
wait-time, utilization, load-factor, and cost targets.
"""

from .config import ScenarioConfig, build_world, load_scenario, override_scenario
from .demand import (
    RNG_NAME,
    DemandRates,
    ODMatrix,
    RiderRequest,
    compute_rates,
    expected_arrivals,
    generate_arrivals,
    load_od_csv,
)
from .errors import (
    ConfigError,
    IngestionError,
    MetricsError,
    SizingError,
    ValidationError,
)
from .metrics import (
    CostParams,
    MetricsReport,
    RefinementResult,
    SweepRow,
    air_utilization,
    check_utilization_band,
    check_wait_target,
    compute_metrics,
    cycle_utilization,
    effective_cost_car,
    effective_cost_uam,
    load_factor,
    refine_fleet,
    throughput_matrix,
    time_savings,
    utilization_band,
    wait_stats,
)
from .network import (
    EARTH_RADIUS_MI,
    GeoNode,
    RouteNetwork,
    VehicleSpec,
    build_network,
    haversine_distance,
    load_nodes_csv,
)
from .simulate import (
    REPOSITION,
    REVENUE,
    RiderOutcome,
    SimConfig,
    SimResult,
    Simulation,
    TripRecord,
    VehicleState,
    VehicleStats,
    run_simulation,
    write_riders_csv,
    write_trips_csv,
)
from .sizing import (
    SizingReport,
    avg_cycle_time,
    base_fleet,
    cycle_time,
    cycles_per_hour,
    flight_time,
    hourly_capacity,
    hourly_demand,
    robust_fleet,
    size_fleet,
)

__version__ = "0.1.0"
