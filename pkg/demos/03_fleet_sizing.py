"""
Analytical fleet sizing
=======================

Average mission cycle -> cycles per hour -> seats moved per aircraft-hour
-> aircraft needed, with a safety factor for clustering and imbalance.
"""

from pathlib import Path

from uamsim import build_world, load_scenario, size_fleet

scenario = Path(__file__).resolve().parents[1] / "scenarios" / "baseline" / "config.json"
cfg = load_scenario(scenario)
_, net, _, rates = build_world(cfg)

report = size_fleet(net, cfg.vehicle, rates, alpha=2.0, pooling_q=3.0)
print(f"average cycle time:   {report.avg_cycle_min:6.2f} min")
print(f"cycles per hour:      {report.cycles_per_hour:6.2f}")
print(f"pax per aircraft-hr:  {report.pax_per_aircraft_hour:6.2f} (pooling 3/flight)")
print(f"system demand:        {report.demand_per_hour:6.2f} pax/hr")
print(f"base fleet:           {report.base_fleet:6.2f} aircraft")
print(f"fleet at alpha 2.0:   {report.fleet}")

# the safety factor dominates the answer; the dispatch simulation is what
# ultimately validates a choice (see demo 06)
print("\nfleet vs safety factor:")
for alpha in (2.0, 3.0, 4.0, 5.0):
    print(f"  alpha {alpha:3.1f} -> {size_fleet(net, cfg.vehicle, rates, alpha=alpha).fleet} aircraft")
