"""Capture real service responses as frozen test fixtures.

Boots the ranking service in-process over a small deterministic catalog and
QoS sample set, replays the exact requests the console issues, and writes
each exchange to tests/fixtures/<name>.json as::

    {"request": {"method", "path", "query", "body"}, "status": ..., "response": ...}

Rerun after changing the service or the console's request shapes:

    python3 scripts/freeze_fixtures.py
"""

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from cloudrank.api import create_app
from cloudrank.datastore import DataStore

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

CATALOG = {
    "display_currency": "AUD",
    "exchange_rates": {"USD": 1.52},
    "providers": [
        {"id": "acme", "display_name": "Acme"},
        {"id": "zenith", "display_name": "Zenith"},
    ],
    "locations": [
        {"id": "syd", "display_name": "Sydney", "latitude": -33.8688, "longitude": 151.2093},
        {"id": "sin", "display_name": "Singapore", "latitude": 1.3521, "longitude": 103.8198},
    ],
    "compute": [
        {"provider": "acme", "location": "syd", "service_name": "small",
         "memory_gb": 4.0, "cpu_cores": 2, "cpu_speed_ghz": 2.5, "disk_gb": 100.0,
         "price_per_hour": 0.055},
        {"provider": "acme", "location": "syd", "service_name": "large",
         "memory_gb": 16.0, "cpu_cores": 8, "cpu_speed_ghz": 3.1, "disk_gb": 400.0,
         "price_per_hour": 0.21},
        {"provider": "zenith", "location": "sin", "service_name": "standard",
         "memory_gb": 8.0, "cpu_cores": 4, "cpu_speed_ghz": 2.9, "disk_gb": 200.0,
         "price_per_hour": 0.09, "currency": "USD"},
    ],
    "storage": [
        {"provider": "acme", "location": "syd", "service_name": "vault", "max_capacity_gb": None,
         "tiers": [{"quota_min_gb": 0, "quota_max_gb": 100, "unit_price_per_gb": 0.06},
                   {"quota_min_gb": 100, "quota_max_gb": None, "unit_price_per_gb": 0.045}]},
        {"provider": "zenith", "location": "sin", "service_name": "pail", "max_capacity_gb": 1000,
         "tiers": [{"quota_min_gb": 0, "quota_max_gb": 1000, "unit_price_per_gb": 0.05}]},
    ],
    "network": [
        {"provider": "acme", "location": "syd",
         "inbound_tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.0}],
         "outbound_tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.11}]},
        {"provider": "zenith", "location": "sin",
         "inbound_tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.0}],
         "outbound_tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.13}]},
    ],
}


def samples_csv() -> str:
    rows = ["provider,datacenter_location,service_kind,client_location,timestamp_utc,"
            "latency_ms,download_mbps,upload_mbps"]
    base = 1755400000.0
    for provider, loc, kind, lat, down, up in [
        ("acme", "syd", "compute", 15.0, 300.0, 120.0),
        ("acme", "syd", "storage", 16.0, 280.0, 110.0),
        ("zenith", "sin", "compute", 90.0, 80.0, 30.0),
        ("zenith", "sin", "storage", 95.0, 75.0, 28.0),
    ]:
        for i in range(3):
            rows.append(f"{provider},{loc},{kind},mel,{base + 3600 * i},"
                        f"{lat + i},{down - i},{up + i}")
    return "\n".join(rows) + "\n"


# Judgments exactly as the wizard emits them for the four benefit criteria
# (upload, download, ram, disk): integers only, pair swapped when the right
# criterion wins.
EXAMPLE_JUDGMENTS = [
    {"criterion_a": "download", "criterion_b": "upload", "value": 3},
    {"criterion_a": "ram", "criterion_b": "upload", "value": 5},
    {"criterion_a": "disk", "criterion_b": "upload", "value": 5},
    {"criterion_a": "download", "criterion_b": "ram", "value": 3},
    {"criterion_a": "download", "criterion_b": "disk", "value": 5},
    {"criterion_a": "ram", "criterion_b": "disk", "value": 3},
]

EQUAL_JUDGMENTS = [
    {"criterion_a": "upload", "criterion_b": "download", "value": 1},
    {"criterion_a": "upload", "criterion_b": "ram", "value": 1},
    {"criterion_a": "upload", "criterion_b": "disk", "value": 1},
    {"criterion_a": "download", "criterion_b": "ram", "value": 1},
    {"criterion_a": "download", "criterion_b": "disk", "value": 1},
    {"criterion_a": "ram", "criterion_b": "disk", "value": 1},
]

# The example set with one judgment changed (ram vs disk: moderate -> strong).
CHANGED_JUDGMENTS = [
    dict(j) if j["criterion_a"] != "ram" or j["criterion_b"] != "disk"
    else {"criterion_a": "ram", "criterion_b": "disk", "value": 5}
    for j in EXAMPLE_JUDGMENTS
]

CRITERIA = ["upload", "download", "ram", "disk"]

BASE_DRAFT = {
    "client_location": "mel",
    "usage": {"storage_gb": "150", "data_out_gb": "60", "data_in_gb": "1"},
    "min_memory_gb": 0,
}

# Second draft for the movement diff: raising the memory floor drops every
# combination built on the 4 GB machine.
SECOND_DRAFT = {
    "client_location": "mel",
    "usage": {"storage_gb": "150", "data_out_gb": "60", "data_in_gb": "1"},
    "min_memory_gb": 8,
}

EMPTY_DRAFT = {
    "client_location": "mel",
    "usage": {"storage_gb": "150", "data_out_gb": "60", "data_in_gb": "1"},
    "min_memory_gb": 64,
}

BAD_DRAFT = {
    "client_location": "mel",
    "usage": {"storage_gb": "-5", "data_out_gb": "60", "data_in_gb": "1"},
    "min_memory_gb": 0,
}

# Fails schema validation instead of domain validation: the error carries a
# dotted field path rather than the "usage" group.
UNPARSEABLE_DRAFT = {
    "client_location": "mel",
    "usage": {"storage_gb": "plenty", "data_out_gb": "60", "data_in_gb": "1"},
    "min_memory_gb": 0,
}


def freeze(client: TestClient, name: str, method: str, path: str,
           body: dict, query: dict[str, str] | None = None) -> None:
    response = client.request(method, path, params=query, json=body)
    record = {
        "request": {"method": method, "path": path, "query": query or {}, "body": body},
        "status": response.status_code,
        "response": response.json(),
    }
    out = FIXTURE_DIR / f"{name}.json"
    out.write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")
    print(f"{name}: {response.status_code} -> {out.relative_to(FIXTURE_DIR.parent.parent)}")


def main() -> int:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        store = DataStore(data_dir=Path(tmp))
        app = create_app(store, admin_token="fixture-secret")
        client = TestClient(app)
        auth = {"Authorization": "Bearer fixture-secret"}

        imported = client.post("/api/catalog/import", json=CATALOG, headers=auth)
        imported.raise_for_status()
        qos = client.post("/api/qos/import", content=samples_csv(),
                          headers={**auth, "Content-Type": "text/csv"})
        qos.raise_for_status()

        freeze(client, "weights_example", "POST", "/api/weights",
               {"judgments": EXAMPLE_JUDGMENTS, "criteria": CRITERIA})
        freeze(client, "weights_equal", "POST", "/api/weights",
               {"judgments": EQUAL_JUDGMENTS, "criteria": CRITERIA})
        freeze(client, "weights_changed", "POST", "/api/weights",
               {"judgments": CHANGED_JUDGMENTS, "criteria": CRITERIA})

        # the console forwards wizard output as benefit weights verbatim
        weights = client.post(
            "/api/weights", json={"judgments": EXAMPLE_JUDGMENTS, "criteria": CRITERIA}
        ).json()
        weighted_draft = dict(BASE_DRAFT)
        weighted_draft["benefit_weights"] = dict(zip(weights["criteria"], weights["weights"]))
        freeze(client, "rank_weighted", "POST", "/api/rank", weighted_draft,
               {"by": "ratio", "limit": "5"})

        freeze(client, "rank_ratio_5", "POST", "/api/rank", BASE_DRAFT,
               {"by": "ratio", "limit": "5"})
        freeze(client, "rank_cost_5", "POST", "/api/rank", BASE_DRAFT,
               {"by": "cost", "limit": "5"})
        freeze(client, "rank_ratio_20", "POST", "/api/rank", BASE_DRAFT,
               {"by": "ratio", "limit": "20"})
        freeze(client, "rank_second", "POST", "/api/rank", SECOND_DRAFT,
               {"by": "ratio", "limit": "5"})
        freeze(client, "rank_empty", "POST", "/api/rank", EMPTY_DRAFT,
               {"by": "ratio", "limit": "5"})
        freeze(client, "rank_error", "POST", "/api/rank", BAD_DRAFT,
               {"by": "ratio", "limit": "5"})
        freeze(client, "rank_error_shape", "POST", "/api/rank", UNPARSEABLE_DRAFT,
               {"by": "ratio", "limit": "5"})
    return 0


if __name__ == "__main__":
    sys.exit(main())
