"""Deterministic synthetic fixtures for tests and demos.

Real provider price sheets are not shipped with the package, so tests and
demo scripts build randomized or hand-shaped catalogs here.  All generators
take an explicit ``random.Random`` so fixture content is reproducible from
a seed.  Documents are plain JSON-ready dicts with prices kept to six
fractional digits.
"""

from __future__ import annotations

import random
from typing import Any

from .pricing import UsageEstimate
from .qos import QosAverage
from .ranking import RankRequest

_MEMORY_CHOICES = (1, 2, 4, 8, 16, 32, 64)
_ALT_CURRENCIES = {"USD": 1.52, "EUR": 1.65}


def _price(rng: random.Random, low: float, high: float) -> float:
    return round(rng.uniform(low, high), 6)


def _tier_schedule(rng: random.Random, unbounded_odds: float = 0.6) -> list[dict[str, Any]]:
    bands = rng.randint(1, 4)
    bounds: list[int] = []
    cursor = 0
    for _ in range(bands - 1):
        cursor += rng.randint(10, 400)
        bounds.append(cursor)
    price = _price(rng, 0.02, 0.30)
    tiers = []
    lower = 0
    for bound in bounds:
        tiers.append({"quota_min_gb": lower, "quota_max_gb": bound, "unit_price_per_gb": price})
        lower = bound
        price = round(max(price * rng.uniform(0.5, 0.95), 0.000001), 6)
    if rng.random() < unbounded_odds:
        tiers.append({"quota_min_gb": lower, "quota_max_gb": None, "unit_price_per_gb": price})
    else:
        tiers.append(
            {"quota_min_gb": lower, "quota_max_gb": lower + rng.randint(100, 2000), "unit_price_per_gb": price}
        )
    return tiers


def synthetic_catalog(
    rng: random.Random,
    n_providers: int = 3,
    n_locations: int = 4,
    n_compute: int = 12,
    n_storage: int = 6,
    n_network: int = 5,
) -> dict[str, Any]:
    """A random but valid catalog document."""
    providers = [{"id": f"prov{i}", "display_name": f"Provider {i}"} for i in range(1, n_providers + 1)]
    locations = [
        {
            "id": f"loc{i}",
            "display_name": f"Location {i}",
            "latitude": round(rng.uniform(-60.0, 60.0), 4),
            "longitude": round(rng.uniform(-179.0, 179.0), 4),
        }
        for i in range(1, n_locations + 1)
    ]
    pairs = [(p["id"], l["id"]) for p in providers for l in locations]

    def _currency(record: dict[str, Any]) -> dict[str, Any]:
        if rng.random() < 0.2:
            record["currency"] = rng.choice(sorted(_ALT_CURRENCIES))
        return record

    compute = []
    for i in range(n_compute):
        provider, location = pairs[i % len(pairs)] if rng.random() < 0.5 else rng.choice(pairs)
        compute.append(
            _currency(
                {
                    "provider": provider,
                    "location": location,
                    "service_name": f"vm-{i}",
                    "memory_gb": float(rng.choice(_MEMORY_CHOICES)),
                    "cpu_cores": rng.randint(1, 64),
                    "cpu_speed_ghz": round(rng.uniform(1.0, 4.0), 2),
                    "disk_gb": float(rng.randint(10, 2000)),
                    "price_per_hour": _price(rng, 0.004, 4.0),
                }
            )
        )

    storage = []
    for i in range(n_storage):
        provider, location = rng.choice(pairs)
        record = {
            "provider": provider,
            "location": location,
            "service_name": f"store-{i}",
            "max_capacity_gb": rng.choice([None, None, rng.randint(100, 5000)]),
            "tiers": _tier_schedule(rng),
        }
        storage.append(_currency(record))

    network_pairs = rng.sample(pairs, min(n_network, len(pairs)))
    network = [
        _currency(
            {
                "provider": provider,
                "location": location,
                "inbound_tiers": _tier_schedule(rng, unbounded_odds=0.8),
                "outbound_tiers": _tier_schedule(rng, unbounded_odds=0.8),
            }
        )
        for provider, location in network_pairs
    ]

    return {
        "display_currency": "AUD",
        "exchange_rates": dict(_ALT_CURRENCIES),
        "providers": providers,
        "locations": locations,
        "compute": compute,
        "storage": storage,
        "network": network,
    }


def synthetic_averages(
    rng: random.Random,
    document: dict[str, Any],
    client_location: str,
    coverage: float = 0.9,
) -> list[QosAverage]:
    """Measured averages for most (provider, datacenter, kind) groups.

    ``coverage`` is the probability that a group has data at all; groups
    without data exercise the exclusion path in ranking.
    """
    groups: list[tuple[str, str, str]] = []
    seen = set()
    for kind, offers in (("compute", document["compute"]), ("storage", document["storage"])):
        for offer in offers:
            group = (offer["provider"], offer["location"], kind)
            if group not in seen:
                seen.add(group)
                groups.append(group)
    averages = []
    for provider, location, kind in groups:
        if rng.random() > coverage:
            continue
        averages.append(
            QosAverage(
                provider=provider,
                datacenter_location=location,
                service_kind=kind,
                client_location=client_location,
                mean_latency_ms=rng.uniform(1.0, 400.0),
                mean_download_mbps=rng.uniform(1.0, 1000.0),
                mean_upload_mbps=rng.uniform(0.5, 500.0),
                sample_count=rng.randint(1, 50),
            )
        )
    return averages


def _random_weights(rng: random.Random, criteria: tuple[str, ...]):
    from .ahp import WeightVector

    draws = [rng.gammavariate(1.0, 1.0) + 1e-9 for _ in criteria]
    total = sum(draws)
    return WeightVector(criteria=criteria, weights=tuple(d / total for d in draws))


def synthetic_request(
    rng: random.Random,
    document: dict[str, Any],
    client_location: str,
) -> RankRequest:
    """A random valid request against the given document."""
    from .ranking import BENEFIT_CRITERIA, COST_CRITERIA

    provider_ids = [p["id"] for p in document["providers"]]
    location_ids = [l["id"] for l in document["locations"]]
    providers = ()
    if rng.random() < 0.3:
        providers = tuple(rng.sample(provider_ids, rng.randint(1, len(provider_ids))))
    locations = ()
    if rng.random() < 0.3:
        locations = tuple(rng.sample(location_ids, rng.randint(1, len(location_ids))))

    min_memory = float(rng.choice((0, 0, 2, 4, 8, 16)))
    max_memory = None
    if rng.random() < 0.2:
        max_memory = min_memory + float(rng.choice((8, 16, 48)))

    storage_gb = "0" if rng.random() < 0.15 else f"{rng.uniform(1, 500):.6f}"
    data_out = "0" if rng.random() < 0.1 else f"{rng.uniform(1, 300):.6f}"
    data_in = "1" if rng.random() < 0.5 else f"{rng.uniform(0, 50):.6f}"
    instances = 0 if rng.random() < 0.1 else rng.randint(1, 5)
    hours = "720" if rng.random() < 0.7 else f"{rng.uniform(1, 720):.4f}"

    price_max = "-1"
    roll = rng.random()
    if roll < 0.25:
        price_max = f"{rng.uniform(5, 2000):.2f}"
    elif roll < 0.28:
        price_max = "0"

    benefit_criteria = ("download", "upload") if rng.random() < 0.5 else BENEFIT_CRITERIA

    return RankRequest(
        usage=UsageEstimate(
            storage_gb=storage_gb,
            data_out_gb=data_out,
            data_in_gb=data_in,
            compute_instances=instances,
            compute_hours=hours,
        ),
        client_location=client_location,
        cost_weights=_random_weights(rng, COST_CRITERIA),
        benefit_weights=_random_weights(rng, benefit_criteria),
        providers=providers,
        locations=locations,
        min_memory_gb=min_memory,
        max_memory_gb=max_memory,
        price_max=price_max,
        single_provider=rng.random() < 0.25,
    )


def reference_request(client_location: str, **overrides) -> RankRequest:
    """The package's reference example request.

    20 GB of storage, 50 GB outbound and 1 GB inbound transfer, one
    instance for a 720-hour month, and a 4 GB memory floor, with the
    default weight vectors.
    """
    fields: dict[str, Any] = {
        "usage": UsageEstimate(storage_gb="20", data_out_gb="50"),
        "client_location": client_location,
        "min_memory_gb": 4.0,
    }
    fields.update(overrides)
    return RankRequest(**fields)


# Memory mix chosen so min-RAM floors of 0/4/8/16 GB carve the offer set
# into progressively smaller slices: 3808, 2095, 1524 and 552 combinations.
_SCALING_MIX = ((2.0, 1713), (4.0, 571), (8.0, 972), (16.0, 552))


def scaling_catalog() -> tuple[dict[str, Any], list[QosAverage], str]:
    """A single-location catalog with 3808 rankable combinations.

    Returns (document, averages, client_location).  One storage offer and
    one network offer, so combination count equals the compute offer count;
    prices vary deterministically.
    """
    rng = random.Random(20240718)
    compute = []
    index = 0
    for memory_gb, count in _SCALING_MIX:
        for _ in range(count):
            compute.append(
                {
                    "provider": "alpha",
                    "location": "syd",
                    "service_name": f"vm-{index:04d}",
                    "memory_gb": memory_gb,
                    "cpu_cores": rng.choice((1, 2, 4, 8, 16)),
                    "cpu_speed_ghz": round(rng.uniform(1.5, 3.5), 2),
                    "disk_gb": float(rng.randint(20, 1500)),
                    "price_per_hour": _price(rng, 0.004, 3.0),
                }
            )
            index += 1
    document = {
        "display_currency": "AUD",
        "exchange_rates": {},
        "providers": [{"id": "alpha", "display_name": "Alpha Cloud"}],
        "locations": [
            {"id": "syd", "display_name": "Sydney", "latitude": -33.8688, "longitude": 151.2093},
            {"id": "mel", "display_name": "Melbourne", "latitude": -37.8136, "longitude": 144.9631},
        ],
        "compute": compute,
        "storage": [
            {
                "provider": "alpha",
                "location": "syd",
                "service_name": "blob-standard",
                "max_capacity_gb": None,
                "tiers": [
                    {"quota_min_gb": 0, "quota_max_gb": 50, "unit_price_per_gb": 0.10},
                    {"quota_min_gb": 50, "quota_max_gb": 500, "unit_price_per_gb": 0.08},
                    {"quota_min_gb": 500, "quota_max_gb": None, "unit_price_per_gb": 0.05},
                ],
            }
        ],
        "network": [
            {
                "provider": "alpha",
                "location": "syd",
                "inbound_tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.0}],
                "outbound_tiers": [
                    {"quota_min_gb": 0, "quota_max_gb": 1024, "unit_price_per_gb": 0.12},
                    {"quota_min_gb": 1024, "quota_max_gb": None, "unit_price_per_gb": 0.09},
                ],
            }
        ],
    }
    client = "mel"
    averages = [
        QosAverage(
            provider="alpha",
            datacenter_location="syd",
            service_kind=kind,
            client_location=client,
            mean_latency_ms=18.5,
            mean_download_mbps=420.0,
            mean_upload_mbps=180.0,
            sample_count=24,
        )
        for kind in ("compute", "storage")
    ]
    return document, averages, client


def divergence_fixture() -> tuple[dict[str, Any], list[QosAverage], str]:
    """Two providers where the cheapest offer has 25x worse download speed.

    Under the default weights the budget provider wins a cost-only sort but
    loses the ratio sort, so the two orderings visibly disagree.
    """
    locations = [
        {"id": "syd", "display_name": "Sydney", "latitude": -33.8688, "longitude": 151.2093},
        {"id": "mel", "display_name": "Melbourne", "latitude": -37.8136, "longitude": 144.9631},
    ]
    document = {
        "display_currency": "AUD",
        "exchange_rates": {},
        "providers": [
            {"id": "budget", "display_name": "Budget Cloud"},
            {"id": "premium", "display_name": "Premium Cloud"},
        ],
        "locations": locations,
        "compute": [
            {
                "provider": "budget",
                "location": "syd",
                "service_name": "vm-basic",
                "memory_gb": 8.0,
                "cpu_cores": 2,
                "cpu_speed_ghz": 2.0,
                "disk_gb": 100.0,
                "price_per_hour": 0.05,
            },
            {
                "provider": "premium",
                "location": "syd",
                "service_name": "vm-fast",
                "memory_gb": 8.0,
                "cpu_cores": 4,
                "cpu_speed_ghz": 3.2,
                "disk_gb": 100.0,
                "price_per_hour": 0.30,
            },
        ],
        "storage": [
            {
                "provider": provider,
                "location": "syd",
                "service_name": "blob",
                "max_capacity_gb": None,
                "tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": price}],
            }
            for provider, price in (("budget", 0.04), ("premium", 0.05))
        ],
        "network": [
            {
                "provider": provider,
                "location": "syd",
                "inbound_tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.0}],
                "outbound_tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": price}],
            }
            for provider, price in (("budget", 0.10), ("premium", 0.12))
        ],
    }
    client = "mel"
    qos = {
        # provider -> (latency, download, upload); download differs 25x.
        "budget": (22.0, 20.0, 12.0),
        "premium": (21.0, 500.0, 210.0),
    }
    averages = [
        QosAverage(
            provider=provider,
            datacenter_location="syd",
            service_kind=kind,
            client_location=client,
            mean_latency_ms=latency,
            mean_download_mbps=download,
            mean_upload_mbps=upload,
            sample_count=12,
        )
        for provider, (latency, download, upload) in sorted(qos.items())
        for kind in ("compute", "storage")
    ]
    return document, averages, client
