"""Network quality measurements: storage, interchange and aggregation.

Samples are point-in-time measurements of latency and transfer speed from a
client vantage point against one provider service at one datacenter.  They
travel between agents and the collector as CSV with a fixed column set, are
deduplicated on identity plus timestamp, and are summarized as plain
all-time arithmetic means per (provider, datacenter, service kind, client)
group.  When a group has no measurements at all, a linear model of metric
versus great-circle distance fitted to the measured groups can stand in;
such stand-ins are always flagged as estimated.
"""

from __future__ import annotations

import csv
import io
import math
import threading
import urllib.request
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

#: Service kinds a QoS sample may describe.
SERVICE_KINDS = ("compute", "storage")

#: CSV column order used by agent exports and collector imports.
CSV_COLUMNS = (
    "provider",
    "datacenter_location",
    "service_kind",
    "client_location",
    "timestamp_utc",
    "latency_ms",
    "download_mbps",
    "upload_mbps",
)

#: Mean Earth radius in km for great-circle distances.
EARTH_RADIUS_KM = 6371.0

#: Identity of a measured group: provider, datacenter, service kind, client.
GroupKey = tuple[str, str, str, str]


@dataclass(frozen=True)
class QosSample:
    """One measurement run from a client vantage point.

    ``timestamp`` is UTC epoch seconds.
    """

    provider: str
    datacenter_location: str
    service_kind: str
    client_location: str
    timestamp: float
    latency_ms: float
    download_mbps: float
    upload_mbps: float

    def __post_init__(self) -> None:
        for name in ("provider", "datacenter_location", "service_kind", "client_location"):
            value = getattr(self, name)
            if not isinstance(value, str) or not value:
                raise ValueError(f"{name} must be a non-empty string")
        if self.service_kind not in SERVICE_KINDS:
            raise ValueError(
                f"service_kind must be one of {SERVICE_KINDS}, got {self.service_kind!r}"
            )
        object.__setattr__(self, "timestamp", float(self.timestamp))
        if not math.isfinite(self.timestamp) or self.timestamp < 0:
            raise ValueError(f"timestamp must be nonnegative UTC seconds, got {self.timestamp!r}")
        for name in ("latency_ms", "download_mbps", "upload_mbps"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"{name} must be a number, got {value!r}")
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    @property
    def key(self) -> GroupKey:
        return (self.provider, self.datacenter_location, self.service_kind, self.client_location)


@dataclass(frozen=True)
class QosAverage:
    """All-time mean QoS of one group, or a distance-model estimate of it.

    Measured averages carry the contributing ``sample_count`` (at least 1);
    estimates carry a count of 0 and the ``estimated`` flag, so the two are
    never confused downstream.
    """

    provider: str
    datacenter_location: str
    service_kind: str
    client_location: str
    mean_latency_ms: float
    mean_download_mbps: float
    mean_upload_mbps: float
    sample_count: int
    estimated: bool = False

    def __post_init__(self) -> None:
        for name in ("mean_latency_ms", "mean_download_mbps", "mean_upload_mbps"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        if self.estimated:
            if self.sample_count != 0:
                raise ValueError("an estimated average has no contributing samples")
        elif self.sample_count < 1:
            raise ValueError("a measured average needs at least one sample")

    @property
    def key(self) -> GroupKey:
        return (self.provider, self.datacenter_location, self.service_kind, self.client_location)


@dataclass(frozen=True)
class RowError:
    """A rejected CSV row: 1-based line number and the reason."""

    line: int
    message: str


@dataclass(frozen=True)
class ImportReport:
    inserted: int
    duplicates: int
    errors: tuple[RowError, ...]


# ===================================================================
# CSV interchange
# ===================================================================


def samples_to_csv(samples: Iterable[QosSample]) -> str:
    """Serialize samples to CSV (header row, LF line endings, UTF-8 safe).

    Numbers are written in shortest round-trip form, so parsing the output
    reproduces the exact float values.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for sample in samples:
        writer.writerow(
            (
                sample.provider,
                sample.datacenter_location,
                sample.service_kind,
                sample.client_location,
                repr(sample.timestamp),
                repr(sample.latency_ms),
                repr(sample.download_mbps),
                repr(sample.upload_mbps),
            )
        )
    return out.getvalue()


def _parse_float_field(text: str, name: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"{name}: not a number: {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"{name}: must be finite, got {text!r}")
    return value


def parse_samples_csv(text: str) -> tuple[list[QosSample], list[RowError]]:
    """Parse CSV sample rows, tolerating bad rows.

    Returns the good samples plus one :class:`RowError` per rejected row
    (line numbers are 1-based, the header is line 1).  A wrong header
    rejects the whole document since no row is trustworthy at that point.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        return [], [RowError(line=1, message="empty document, expected a header row")]
    if tuple(h.strip() for h in header) != CSV_COLUMNS:
        return [], [
            RowError(line=1, message=f"bad header, expected columns {', '.join(CSV_COLUMNS)}")
        ]

    samples: list[QosSample] = []
    errors: list[RowError] = []
    for line, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(CSV_COLUMNS):
            errors.append(
                RowError(line=line, message=f"expected {len(CSV_COLUMNS)} columns, got {len(row)}")
            )
            continue
        try:
            samples.append(
                QosSample(
                    provider=row[0].strip(),
                    datacenter_location=row[1].strip(),
                    service_kind=row[2].strip(),
                    client_location=row[3].strip(),
                    timestamp=_parse_float_field(row[4], "timestamp_utc"),
                    latency_ms=_parse_float_field(row[5], "latency_ms"),
                    download_mbps=_parse_float_field(row[6], "download_mbps"),
                    upload_mbps=_parse_float_field(row[7], "upload_mbps"),
                )
            )
        except ValueError as exc:
            errors.append(RowError(line=line, message=str(exc)))
    return samples, errors


# ===================================================================
# Aggregation
# ===================================================================


def compute_averages(samples: Iterable[QosSample]) -> list[QosAverage]:
    """All-time arithmetic means per group.

    Within a group the samples are summed in timestamp order, so the result
    does not depend on the order measurements arrived or were merged in.
    Exact duplicates (same group and timestamp) contribute once.
    """
    groups: dict[GroupKey, dict[float, QosSample]] = {}
    for sample in samples:
        groups.setdefault(sample.key, {}).setdefault(sample.timestamp, sample)
    averages: list[QosAverage] = []
    for key in sorted(groups):
        ordered = [groups[key][ts] for ts in sorted(groups[key])]
        n = len(ordered)
        averages.append(
            QosAverage(
                provider=key[0],
                datacenter_location=key[1],
                service_kind=key[2],
                client_location=key[3],
                mean_latency_ms=sum(s.latency_ms for s in ordered) / n,
                mean_download_mbps=sum(s.download_mbps for s in ordered) / n,
                mean_upload_mbps=sum(s.upload_mbps for s in ordered) / n,
                sample_count=n,
            )
        )
    return averages


def averages_by_key(averages: Iterable[QosAverage]) -> dict[GroupKey, QosAverage]:
    return {avg.key: avg for avg in averages}


class SampleStore:
    """Thread-safe collection of deduplicated samples.

    Two samples are the same measurement when they agree on group identity
    and timestamp; re-merging keeps the first seen copy.  This makes pulls
    from agents idempotent.
    """

    def __init__(self, samples: Iterable[QosSample] = ()):
        self._lock = threading.Lock()
        self._samples: dict[tuple[GroupKey, float], QosSample] = {}
        if samples:
            self.merge(samples)

    def merge(self, samples: Iterable[QosSample]) -> tuple[int, int]:
        """Add samples; returns (inserted, duplicates)."""
        inserted = duplicates = 0
        with self._lock:
            for sample in samples:
                ident = (sample.key, sample.timestamp)
                if ident in self._samples:
                    duplicates += 1
                else:
                    self._samples[ident] = sample
                    inserted += 1
        return inserted, duplicates

    def merge_csv(self, text: str) -> ImportReport:
        samples, errors = parse_samples_csv(text)
        inserted, duplicates = self.merge(samples)
        return ImportReport(inserted=inserted, duplicates=duplicates, errors=tuple(errors))

    def __len__(self) -> int:
        return len(self._samples)

    def samples(self, since: float | None = None) -> list[QosSample]:
        """Samples sorted by (timestamp, group), optionally at or after ``since``."""
        with self._lock:
            out = list(self._samples.values())
        if since is not None:
            out = [s for s in out if s.timestamp >= since]
        out.sort(key=lambda s: (s.timestamp, s.key))
        return out

    def to_csv(self, since: float | None = None) -> str:
        return samples_to_csv(self.samples(since))

    def averages(self) -> list[QosAverage]:
        return compute_averages(self.samples())


# ===================================================================
# Distance-model fallback
# ===================================================================


def great_circle_km(lat_a: float, lon_a: float, lat_b: float, lon_b: float) -> float:
    """Great-circle distance between two coordinates (haversine)."""
    phi_a, phi_b = math.radians(lat_a), math.radians(lat_b)
    d_phi = phi_b - phi_a
    d_lambda = math.radians(lon_b - lon_a)
    h = math.sin(d_phi / 2.0) ** 2 + math.cos(phi_a) * math.cos(phi_b) * math.sin(d_lambda / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def fit_distance_line(observations: Sequence[tuple[float, float]]) -> tuple[float, float] | None:
    """Least-squares line through (distance_km, value) points.

    Returns (slope, intercept), or ``None`` when fewer than two distinct
    distances are available and no line is determined.
    """
    if len({d for d, _ in observations}) < 2:
        return None
    xs = np.array([d for d, _ in observations], dtype=float)
    ys = np.array([v for _, v in observations], dtype=float)
    slope, intercept = np.polyfit(xs, ys, 1)
    return float(slope), float(intercept)


def estimate_latency_fallback(
    distance_km: float,
    observations: Sequence[tuple[float, float]],
) -> float | None:
    """Latency estimate at ``distance_km`` from measured (distance, latency) pairs.

    The prediction is never allowed below the smallest observed latency: a
    farther datacenter cannot plausibly beat every measured one.  Returns
    ``None`` when the observations cannot determine a line.
    """
    line = fit_distance_line(observations)
    if line is None:
        return None
    slope, intercept = line
    predicted = slope * distance_km + intercept
    return max(predicted, min(lat for _, lat in observations))


def _estimate_speed(distance_km: float, observations: Sequence[tuple[float, float]]) -> float | None:
    # Throughput tends to fall with distance; a straight-line extrapolation
    # can cross zero, so predictions are kept inside the observed range.
    line = fit_distance_line(observations)
    if line is None:
        return None
    slope, intercept = line
    predicted = slope * distance_km + intercept
    values = [v for _, v in observations]
    return min(max(predicted, min(values)), max(values))


def estimate_average(
    provider: str,
    datacenter_location: str,
    service_kind: str,
    client_location: str,
    distance_km: float,
    measured: Sequence[tuple[float, QosAverage]],
) -> QosAverage | None:
    """Stand-in :class:`QosAverage` for a group with no measurements.

    ``measured`` pairs each measured group's average with its client-to-
    datacenter distance.  All three metrics come from distance-line fits;
    the result is flagged ``estimated`` and carries a sample count of 0.
    Returns ``None`` when any metric cannot be estimated.
    """
    latency = estimate_latency_fallback(distance_km, [(d, a.mean_latency_ms) for d, a in measured])
    download = _estimate_speed(distance_km, [(d, a.mean_download_mbps) for d, a in measured])
    upload = _estimate_speed(distance_km, [(d, a.mean_upload_mbps) for d, a in measured])
    if latency is None or download is None or upload is None:
        return None
    return QosAverage(
        provider=provider,
        datacenter_location=datacenter_location,
        service_kind=service_kind,
        client_location=client_location,
        mean_latency_ms=latency,
        mean_download_mbps=download,
        mean_upload_mbps=upload,
        sample_count=0,
        estimated=True,
    )


# ===================================================================
# Collector pull
# ===================================================================


def fetch_agent_samples(
    base_url: str,
    since: float | None = None,
    token: str | None = None,
    timeout_s: float = 30.0,
) -> tuple[list[QosSample], list[RowError]]:
    """Pull a probe agent's sample export over HTTP.

    Hits ``{base_url}/export`` (optionally with ``since`` as unix seconds)
    and parses the CSV body.
    """
    url = base_url.rstrip("/") + "/export"
    if since is not None:
        url += f"?since={repr(float(since))}"
    request = urllib.request.Request(url)
    if token:
        request.add_header("Authorization", f"Bearer {token}")
    with urllib.request.urlopen(request, timeout=timeout_s) as response:
        body = response.read().decode("utf-8")
    return parse_samples_csv(body)
