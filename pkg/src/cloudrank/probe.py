"""Active QoS probing.

A probe agent runs near the client and measures each configured service
endpoint: round-trip latency as the median of several small requests on a
warm connection, download speed by timing the body transfer of a test
object (header wait excluded), and upload speed by timing a POST of random
bytes until the server acknowledges.  Agents keep their samples locally and
expose them over HTTP as CSV for the collector to pull.
"""

from __future__ import annotations

import http.server
import json
import math
import os
import socket
import statistics
import threading
import time
import urllib.parse
from dataclasses import dataclass
from http.client import HTTPConnection, HTTPSConnection
from pathlib import Path
from typing import Sequence

from .qos import QosSample, SampleStore, SERVICE_KINDS

DEFAULT_TIMEOUT_S = 30.0
DEFAULT_REPETITIONS = 5
DEFAULT_UPLOAD_BYTES = 4 * 1024 * 1024
_CHUNK = 64 * 1024


class ProbeError(RuntimeError):
    """A measurement against one endpoint failed."""


@dataclass(frozen=True)
class ProbeEndpoint:
    """One probe target: where to measure and how to label the samples."""

    provider: str
    datacenter_location: str
    service_kind: str
    probe_url: str
    upload_url: str
    upload_bytes: int = DEFAULT_UPLOAD_BYTES

    def __post_init__(self) -> None:
        if self.service_kind not in SERVICE_KINDS:
            raise ValueError(f"service_kind must be one of {SERVICE_KINDS}, got {self.service_kind!r}")
        if self.upload_bytes <= 0:
            raise ValueError("upload_bytes must be positive")


def load_endpoints(path: str | Path) -> list[ProbeEndpoint]:
    """Read probe endpoints from a JSON array of objects."""
    with open(path, "r", encoding="utf-8") as handle:
        raw = json.load(handle)
    if not isinstance(raw, list):
        raise ValueError("endpoints file must hold a JSON array")
    endpoints = []
    for i, record in enumerate(raw):
        if not isinstance(record, dict):
            raise ValueError(f"endpoints[{i}]: expected an object")
        try:
            endpoints.append(
                ProbeEndpoint(
                    provider=record["provider"],
                    datacenter_location=record["datacenter_location"],
                    service_kind=record["service_kind"],
                    probe_url=record["probe_url"],
                    upload_url=record["upload_url"],
                    upload_bytes=int(record.get("upload_bytes", DEFAULT_UPLOAD_BYTES)),
                )
            )
        except KeyError as exc:
            raise ValueError(f"endpoints[{i}]: missing field {exc.args[0]!r}") from None
    return endpoints


def _open_connection(url: str, timeout_s: float) -> tuple[HTTPConnection, str]:
    parts = urllib.parse.urlsplit(url)
    if parts.scheme == "http":
        conn: HTTPConnection = HTTPConnection(parts.hostname, parts.port, timeout=timeout_s)
    elif parts.scheme == "https":
        conn = HTTPSConnection(parts.hostname, parts.port, timeout=timeout_s)
    else:
        raise ProbeError(f"unsupported URL scheme in {url!r}")
    target = parts.path or "/"
    if parts.query:
        target += "?" + parts.query
    return conn, target


def _measure_latency_ms(url: str, repetitions: int, timeout_s: float) -> float:
    """Median round-trip of small requests on an established connection."""
    conn, target = _open_connection(url, timeout_s)
    try:
        conn.connect()
        rtts = []
        for _ in range(repetitions):
            started = time.perf_counter()
            conn.request("HEAD", target)
            response = conn.getresponse()
            response.read()
            rtts.append(time.perf_counter() - started)
            if response.status >= 400:
                raise ProbeError(f"HEAD {url} returned {response.status}")
    finally:
        conn.close()
    return statistics.median(rtts) * 1000.0


def _measure_download_mbps(url: str, timeout_s: float) -> float:
    """Time the body transfer of the test object; the header wait is excluded."""
    conn, target = _open_connection(url, timeout_s)
    try:
        conn.connect()
        conn.request("GET", target)
        response = conn.getresponse()
        if response.status >= 400:
            raise ProbeError(f"GET {url} returned {response.status}")
        started = time.perf_counter()
        received = 0
        while True:
            chunk = response.read(_CHUNK)
            if not chunk:
                break
            received += len(chunk)
        duration = time.perf_counter() - started
    finally:
        conn.close()
    if received == 0 or duration <= 0:
        raise ProbeError(f"GET {url} returned no measurable body")
    return received * 8 / duration / 1e6


def _measure_upload_mbps(url: str, payload_bytes: int, timeout_s: float) -> float:
    """Time a POST of random bytes from first byte sent to acknowledgment."""
    payload = os.urandom(payload_bytes)
    conn, target = _open_connection(url, timeout_s)
    try:
        conn.connect()
        started = time.perf_counter()
        conn.request("POST", target, body=payload, headers={"Content-Type": "application/octet-stream"})
        response = conn.getresponse()
        response.read()
        duration = time.perf_counter() - started
        if response.status >= 400:
            raise ProbeError(f"POST {url} returned {response.status}")
    finally:
        conn.close()
    if duration <= 0:
        raise ProbeError(f"POST {url} completed too fast to time")
    return payload_bytes * 8 / duration / 1e6


def probe_once(
    endpoint: ProbeEndpoint,
    client_location: str,
    repetitions: int = DEFAULT_REPETITIONS,
    timeout_s: float = DEFAULT_TIMEOUT_S,
) -> QosSample:
    """Measure one endpoint and return the resulting sample."""
    try:
        latency_ms = _measure_latency_ms(endpoint.probe_url, repetitions, timeout_s)
        download = _measure_download_mbps(endpoint.probe_url, timeout_s)
        upload = _measure_upload_mbps(endpoint.upload_url, endpoint.upload_bytes, timeout_s)
    except ProbeError:
        raise
    except (OSError, socket.timeout, ConnectionError) as exc:
        raise ProbeError(f"probing {endpoint.provider}/{endpoint.datacenter_location} failed: {exc}") from exc
    return QosSample(
        provider=endpoint.provider,
        datacenter_location=endpoint.datacenter_location,
        service_kind=endpoint.service_kind,
        client_location=client_location,
        timestamp=time.time(),
        latency_ms=latency_ms,
        download_mbps=download,
        upload_mbps=upload,
    )


@dataclass(frozen=True)
class ProbeRunReport:
    samples: tuple[QosSample, ...]
    failures: tuple[tuple[str, str], ...]  # (endpoint label, reason)


class ProbeAgent:
    """Measures a set of endpoints on a schedule and keeps the samples."""

    def __init__(
        self,
        endpoints: Sequence[ProbeEndpoint],
        client_location: str,
        store: SampleStore | None = None,
        repetitions: int = DEFAULT_REPETITIONS,
        timeout_s: float = DEFAULT_TIMEOUT_S,
    ):
        self.endpoints = list(endpoints)
        self.client_location = client_location
        self.store = store if store is not None else SampleStore()
        self.repetitions = repetitions
        self.timeout_s = timeout_s

    def run_once(self) -> ProbeRunReport:
        """Probe every endpoint once; failures are reported, not raised."""
        samples: list[QosSample] = []
        failures: list[tuple[str, str]] = []
        for endpoint in self.endpoints:
            label = f"{endpoint.provider}/{endpoint.datacenter_location}/{endpoint.service_kind}"
            try:
                samples.append(
                    probe_once(endpoint, self.client_location, self.repetitions, self.timeout_s)
                )
            except ProbeError as exc:
                failures.append((label, str(exc)))
        self.store.merge(samples)
        return ProbeRunReport(samples=tuple(samples), failures=tuple(failures))

    def run_forever(
        self,
        interval_s: float,
        stop: threading.Event | None = None,
        on_report=None,
    ) -> None:
        """Probe on a fixed interval until ``stop`` is set."""
        stop = stop or threading.Event()
        while not stop.is_set():
            report = self.run_once()
            if on_report is not None:
                on_report(report)
            stop.wait(interval_s)


# ===================================================================
# Agent export endpoint
# ===================================================================


class _ExportHandler(http.server.BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    store: SampleStore
    token: str | None

    def log_message(self, *args) -> None:  # keep test output clean
        pass

    def do_GET(self) -> None:
        parts = urllib.parse.urlsplit(self.path)
        if parts.path != "/export":
            self._respond(404, b"not found", "text/plain")
            return
        if self.token:
            supplied = self.headers.get("Authorization", "")
            if supplied != f"Bearer {self.token}":
                self._respond(401, b"missing or bad bearer token", "text/plain")
                return
        since = None
        query = urllib.parse.parse_qs(parts.query)
        if "since" in query:
            try:
                since = float(query["since"][0])
            except ValueError:
                since = math.nan
            if not math.isfinite(since):
                self._respond(400, b"bad 'since' timestamp, expected unix seconds", "text/plain")
                return
        body = self.store.to_csv(since).encode("utf-8")
        self._respond(200, body, "text/csv; charset=utf-8")

    def _respond(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def start_export_server(
    store: SampleStore,
    host: str = "127.0.0.1",
    port: int = 0,
    token: str | None = None,
) -> http.server.ThreadingHTTPServer:
    """Serve the agent's samples at ``GET /export`` on a background thread.

    Returns the running server; its bound port is ``server.server_address[1]``.
    Call ``shutdown()`` then ``server_close()`` to stop it.
    """
    handler = type("ExportHandler", (_ExportHandler,), {"store": store, "token": token})
    server = http.server.ThreadingHTTPServer((host, port), handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server
