"""
From raw measurements to per-datacenter averages
================================================

Probe agents scattered near clients measure each datacenter over and
over; the collector's job is to fold those raw samples into one stable
average per (provider, datacenter, service, client) group.  This script
builds a batch of samples by hand, round-trips them through the CSV
interchange format, and finishes by estimating a datacenter nobody has
measured yet from the distance trend of the ones that have.
"""

import random

from cloudrank.qos import (
    QosSample,
    SampleStore,
    estimate_average,
    great_circle_km,
    parse_samples_csv,
    samples_to_csv,
)

rng = random.Random(7)

# Three datacenters measured from a Melbourne client over a few rounds.
# Farther datacenters answer slower and push fewer megabits through.
SITES = {
    ("acme", "syd"): (14.0, 420.0, 180.0),
    ("acme", "sin"): (95.0, 120.0, 55.0),
    ("acme", "fra"): (290.0, 35.0, 16.0),
}

samples = []
for (provider, location), (latency, down, up) in SITES.items():
    for round_number in range(6):
        samples.append(QosSample(
            provider=provider,
            datacenter_location=location,
            service_kind="compute",
            client_location="mel",
            timestamp=1_755_400_000.0 + 3600.0 * round_number,
            latency_ms=latency * rng.uniform(0.9, 1.1),
            download_mbps=down * rng.uniform(0.85, 1.15),
            upload_mbps=up * rng.uniform(0.85, 1.15),
        ))

# Samples travel between agent and collector as plain CSV, one line per
# measurement.  The format round-trips exactly.
csv_text = samples_to_csv(samples)
print("first three CSV lines:")
for line in csv_text.splitlines()[:3]:
    print(" ", line)
reparsed, errors = parse_samples_csv(csv_text)
assert not errors and reparsed == samples

# The store deduplicates on (group, timestamp), so replaying the same
# batch, out of order or twice, never skews an average.
store = SampleStore()
print("\nfirst merge:", store.merge(samples), "(inserted, duplicates)")
print("replayed:   ", store.merge(list(reversed(samples))))

print("\nper-group averages seen from mel:")
for avg in store.averages():
    print(f"  {avg.provider}/{avg.datacenter_location}: latency {avg.mean_latency_ms:7.2f} ms,"
          f" down {avg.mean_download_mbps:6.1f} Mbps, up {avg.mean_upload_mbps:6.1f} Mbps"
          f" ({avg.sample_count} samples)")

# Nobody has probed the Tokyo datacenter from Melbourne.  Each measured
# group pairs its average with the client-to-datacenter distance, and a
# least-squares line through those points extrapolates to Tokyo's
# distance.  The estimate is clearly flagged and carries no samples.
COORDS = {
    "mel": (-37.8136, 144.9631),
    "syd": (-33.8688, 151.2093),
    "sin": (1.3521, 103.8198),
    "fra": (50.1109, 8.6821),
    "tyo": (35.6762, 139.6503),
}

def distance(a, b):
    return great_circle_km(*COORDS[a], *COORDS[b])

known = [(distance("mel", avg.datacenter_location), avg) for avg in store.averages()]
tokyo_km = distance("mel", "tyo")
estimate = estimate_average("acme", "tyo", "compute", "mel", tokyo_km, known)
print(f"\nestimated acme/tyo at {tokyo_km:.0f} km:")
print(f"  latency {estimate.mean_latency_ms:.1f} ms, down {estimate.mean_download_mbps:.1f} Mbps,"
      f" up {estimate.mean_upload_mbps:.1f} Mbps, estimated={estimate.estimated}")
