"""
Ranking provider combinations by cost against quality
=====================================================

Given a catalog of compute, storage and network offers plus measured
quality numbers for each datacenter, the engine enumerates every viable
compute+storage+network selection, bills a month of estimated usage
through each, and orders them by weighted cost divided by weighted
benefit (lower is better).  This script walks one small catalog through
that pipeline and then shows how the ordering reacts to constraints.
"""

from cloudrank.catalog import parse_catalog
from cloudrank.pricing import UsageEstimate
from cloudrank.qos import QosAverage
from cloudrank.ranking import RankRequest, RankStats, ordered_solutions, rank_by_cost_only

# Two providers across two datacenters.  Southcloud is cheap; Nordix
# charges more but its datacenters measure far better.
catalog = parse_catalog({
    "display_currency": "AUD",
    "exchange_rates": {"USD": 1.52},
    "providers": [
        {"id": "southcloud", "display_name": "Southcloud"},
        {"id": "nordix", "display_name": "Nordix"},
    ],
    "locations": [
        {"id": "syd", "display_name": "Sydney", "latitude": -33.8688, "longitude": 151.2093},
        {"id": "sin", "display_name": "Singapore", "latitude": 1.3521, "longitude": 103.8198},
    ],
    "compute": [
        {"provider": "southcloud", "location": "syd", "service_name": "eco-4",
         "memory_gb": 4.0, "cpu_cores": 2, "cpu_speed_ghz": 2.2, "disk_gb": 80.0,
         "price_per_hour": 0.032},
        {"provider": "southcloud", "location": "sin", "service_name": "eco-8",
         "memory_gb": 8.0, "cpu_cores": 4, "cpu_speed_ghz": 2.4, "disk_gb": 160.0,
         "price_per_hour": 0.061},
        {"provider": "nordix", "location": "syd", "service_name": "turbo-8",
         "memory_gb": 8.0, "cpu_cores": 4, "cpu_speed_ghz": 3.4, "disk_gb": 200.0,
         "price_per_hour": 0.12, "currency": "USD"},
    ],
    "storage": [
        {"provider": "southcloud", "location": "syd", "service_name": "vault",
         "max_capacity_gb": None,
         "tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.045}]},
        {"provider": "nordix", "location": "syd", "service_name": "flash",
         "max_capacity_gb": 2000,
         "tiers": [{"quota_min_gb": 0, "quota_max_gb": 100, "unit_price_per_gb": 0.09},
                   {"quota_min_gb": 100, "quota_max_gb": 2000, "unit_price_per_gb": 0.07}]},
    ],
    "network": [
        {"provider": "southcloud", "location": "syd",
         "inbound_tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.0}],
         "outbound_tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.11}]},
        {"provider": "southcloud", "location": "sin",
         "inbound_tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.0}],
         "outbound_tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.13}]},
        {"provider": "nordix", "location": "syd",
         "inbound_tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.0}],
         "outbound_tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.14}]},
    ],
})

# Measured averages as a Melbourne client sees each datacenter.  Nordix
# Sydney is the standout; Southcloud Singapore is the long haul.
def measured(provider, location, kind, latency, down, up):
    return QosAverage(
        provider=provider, datacenter_location=location, service_kind=kind,
        client_location="mel", mean_latency_ms=latency,
        mean_download_mbps=down, mean_upload_mbps=up, sample_count=24,
    )

averages = [
    measured("southcloud", "syd", "compute", 18.0, 95.0, 40.0),
    measured("southcloud", "syd", "storage", 19.0, 90.0, 38.0),
    measured("southcloud", "sin", "compute", 92.0, 30.0, 12.0),
    measured("nordix", "syd", "compute", 14.0, 480.0, 210.0),
    measured("nordix", "syd", "storage", 15.0, 460.0, 200.0),
]

# A month of expected usage: one instance around the clock, 200 GB
# stored, 80 GB served out, the default trickle in.
request = RankRequest(
    usage=UsageEstimate(storage_gb="200", data_out_gb="80"),
    client_location="mel",
)

stats = RankStats()
results = ordered_solutions(request, catalog, averages, stats)
print(f"enumerated {stats.enumerated} combinations, {stats.missing_qos} lacked measurements,"
      f" {stats.returned} ranked\n")

def show(results, limit=5):
    for r in results[:limit]:
        compute = f"{r.compute.provider}/{r.compute.service_name}" if r.compute else "-"
        storage = f"{r.storage.provider}/{r.storage.service_name}" if r.storage else "-"
        network = f"{r.network.provider}@{r.network.location}"
        print(f"  #{r.rank_position} {compute:22s} {storage:18s} net={network:15s}"
              f" total={r.cost.total:>10} ratio={r.ratio:.4f}")

print("best cost-per-benefit first:")
show(results)

# Ordering by price alone tells a different story: the cheap combination
# wins even though its measurements are mediocre.  Comparing the two
# orderings side by side is exactly the trade-off conversation.
print("\ncheapest first:")
show(rank_by_cost_only(request, catalog, averages))

# Constraints narrow the field without re-scoring anything by hand.
floor_8 = RankRequest(
    usage=request.usage, client_location="mel", min_memory_gb=8.0,
)
print("\nwith an 8 GB memory floor:")
show(ordered_solutions(floor_8, catalog, averages))

single = RankRequest(
    usage=request.usage, client_location="mel", single_provider=True,
)
print("\neverything from one provider in one datacenter:")
show(ordered_solutions(single, catalog, averages))

budget = RankRequest(
    usage=request.usage, client_location="mel", price_max="50",
)
print("\nunder a 50 AUD/month budget:")
show(ordered_solutions(budget, catalog, averages))
