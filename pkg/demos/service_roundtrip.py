"""
Driving the whole service over HTTP
===================================

Everything the engine does is reachable through a small JSON/CSV API:
import a catalog, feed it measurements, then ask for rankings.  This
script boots the service in-process on a random port and talks to it
exactly the way a remote client (or the web dashboard) would.

The command line equivalents are noted inline; `cloudrank serve` runs
the same application standing alone.
"""

import json
import tempfile
import threading
import time
import urllib.request

import uvicorn

from cloudrank.api import create_app
from cloudrank.datastore import DataStore

CATALOG = {
    "display_currency": "AUD",
    "exchange_rates": {},
    "providers": [{"id": "acme", "display_name": "Acme"}],
    "locations": [{"id": "syd", "display_name": "Sydney",
                   "latitude": -33.8688, "longitude": 151.2093}],
    "compute": [
        {"provider": "acme", "location": "syd", "service_name": "vm-s",
         "memory_gb": 4.0, "cpu_cores": 2, "cpu_speed_ghz": 2.5,
         "disk_gb": 100.0, "price_per_hour": 0.05},
        {"provider": "acme", "location": "syd", "service_name": "vm-m",
         "memory_gb": 16.0, "cpu_cores": 8, "cpu_speed_ghz": 3.0,
         "disk_gb": 400.0, "price_per_hour": 0.19},
    ],
    "storage": [
        {"provider": "acme", "location": "syd", "service_name": "blob",
         "max_capacity_gb": None,
         "tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.05}]},
    ],
    "network": [
        {"provider": "acme", "location": "syd",
         "inbound_tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.0}],
         "outbound_tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.12}]},
    ],
}

SAMPLES_CSV = "\n".join([
    "provider,datacenter_location,service_kind,client_location,timestamp_utc,latency_ms,download_mbps,upload_mbps",
    "acme,syd,compute,mel,1755400000.0,15.2,350.0,140.0",
    "acme,syd,compute,mel,1755403600.0,14.8,365.0,150.0",
    "acme,syd,storage,mel,1755400000.0,16.0,340.0,130.0",
    "",
])


def call(method, url, body=None, content_type="application/json", token=None):
    data = body if body is None or isinstance(body, bytes) else json.dumps(body).encode()
    request = urllib.request.Request(url, data=data, method=method)
    if data is not None:
        request.add_header("Content-Type", content_type)
    if token:
        request.add_header("Authorization", f"Bearer {token}")
    with urllib.request.urlopen(request) as response:
        return json.loads(response.read())


with tempfile.TemporaryDirectory() as state_dir:
    # The store persists imports under state_dir, so a restart would come
    # back with the same catalog and samples.
    store = DataStore(data_dir=state_dir)
    app = create_app(store, admin_token="demo-secret")
    server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    while not server.started:
        time.sleep(0.02)
    port = server.servers[0].sockets[0].getsockname()[1]
    base = f"http://127.0.0.1:{port}"
    print(f"service listening on {base}")

    # Import the catalog (CLI: cloudrank ingest-catalog catalog.json).
    # Mutating routes need the admin token; reads stay open.
    counts = call("POST", f"{base}/api/catalog/import", CATALOG, token="demo-secret")
    print("catalog import counts:", counts)

    # Feed it measurements (CLI: cloudrank qos import samples.csv).
    report = call("POST", f"{base}/api/qos/import", SAMPLES_CSV.encode(),
                  content_type="text/csv", token="demo-secret")
    print("sample import report:", report)

    # Derive weights from pairwise judgments instead of typing numbers.
    weights = call("POST", f"{base}/api/weights", {
        "judgments": [{"criterion_a": "download", "criterion_b": "upload", "value": 3}],
    })
    print("derived benefit weights:", weights["weights"])

    # Ask for a ranking (CLI: cloudrank rank request.json).  The derived
    # weights go back in as a criterion-to-weight mapping; passing the raw
    # judgments via benefit_judgments would work just as well.
    payload = call("POST", f"{base}/api/rank?limit=3", {
        "usage": {"storage_gb": "100", "data_out_gb": "40"},
        "client_location": "mel",
        "benefit_weights": dict(zip(weights["criteria"], weights["weights"])),
    })
    print(f"\ncatalog v{payload['catalog_version']},"
          f" {payload['total_results']} combinations, top {len(payload['results'])}:")
    for row in payload["results"]:
        name = row["compute"]["service_name"]
        print(f"  #{row['rank']} {name:5s} total {row['cost']['total']}"
              f" {payload['display_currency']}, ratio {row['score']['ratio']:.4f}")

    server.should_exit = True
    thread.join(timeout=5)
print("service stopped")
