"""
Probe agents and the collector that drains them
===============================================

A probe agent sits near some group of clients, measures the reachable
datacenters over plain HTTP (request round-trips for latency, timed
transfers for throughput), and keeps its samples locally.  The central
collector pulls each agent's export endpoint on its own schedule, so
agents stay simple and the collector owns the aggregate view.

Here both ends run in one process: a stand-in "datacenter" HTTP server,
an agent probing it, and a collector pulling the agent.
"""

import threading

from cloudrank.loopback import LoopbackQosServer
from cloudrank.probe import ProbeAgent, start_export_server
from cloudrank.qos import SampleStore, fetch_agent_samples

# --- a stand-in datacenter --------------------------------------------
# Real deployments point probes at an object URL on the provider.  The
# loopback server answers the same request shapes with a configurable
# delay and transfer rate, so the numbers below have known ground truth.
target = LoopbackQosServer(object_bytes=500_000, delay_ms=15.0, rate_mbps=200.0).start()
print(f"stand-in datacenter at {target.base_url} (15 ms delay, 200 Mbps)")

# --- the agent ---------------------------------------------------------
# Endpoints usually come from a JSON file (cloudrank probe endpoints.json);
# each names the group its measurements will belong to.
endpoints = [
    target.endpoint(provider="acme", datacenter_location="syd", service_kind="compute"),
    target.endpoint(provider="acme", datacenter_location="syd", service_kind="storage"),
]

agent_store = SampleStore()
agent = ProbeAgent(endpoints, client_location="mel", store=agent_store, repetitions=3)
for round_number in range(3):
    report = agent.run_once()
    print(f"probe round {round_number + 1}: {len(report.samples)} samples,"
          f" {len(report.failures)} failures")

for sample in agent_store.samples()[:2]:
    print(f"  {sample.provider}/{sample.datacenter_location}/{sample.service_kind}:"
          f" {sample.latency_ms:.2f} ms, down {sample.download_mbps:.0f} Mbps,"
          f" up {sample.upload_mbps:.0f} Mbps")

# The agent publishes its samples as CSV over HTTP, guarded by a bearer
# token so a stray scanner cannot read or scrape the export.
export = start_export_server(agent_store, token="agent-secret")
export_url = f"http://127.0.0.1:{export.server_address[1]}"
threading.Thread(target=export.serve_forever, daemon=True).start()
print(f"\nagent export at {export_url}/export")

# --- the collector -----------------------------------------------------
collector = SampleStore()
samples, errors = fetch_agent_samples(export_url, token="agent-secret")
assert not errors
print("collector pulled", collector.merge(samples), "(inserted, duplicates)")

# Pulls are incremental: passing the newest seen timestamp re-fetches
# only what the agent measured since, and re-merges are harmless anyway.
newest = max(s.timestamp for s in collector.samples())
agent.run_once()
fresh, _ = fetch_agent_samples(export_url, since=newest, token="agent-secret")
print("incremental pull:", collector.merge(fresh))

print("\ncollector averages:")
for avg in collector.averages():
    print(f"  {avg.provider}/{avg.datacenter_location}/{avg.service_kind}"
          f" from {avg.client_location}: {avg.mean_latency_ms:.2f} ms"
          f" over {avg.sample_count} samples")

export.shutdown()
target.close()
