"""Probe agent measurements against a local throttled service."""

from __future__ import annotations

import json
import socket
import threading
import time
import urllib.error

import pytest

from cloudrank.probe import (
    ProbeAgent,
    ProbeEndpoint,
    load_endpoints,
    probe_once,
    start_export_server,
)
from cloudrank.loopback import LoopbackQosServer
from cloudrank.qos import QosSample, SampleStore, fetch_agent_samples, parse_samples_csv

RATE_MBPS = 40.0


@pytest.fixture(scope="module")
def service():
    svc = LoopbackQosServer(object_bytes=1_000_000, delay_ms=100.0, rate_mbps=RATE_MBPS).start()
    yield svc
    svc.close()


def closed_port_url() -> str:
    # Bind then release a port; nothing listens on it afterwards.
    with socket.socket() as probe_socket:
        probe_socket.bind(("127.0.0.1", 0))
        port = probe_socket.getsockname()[1]
    return f"http://127.0.0.1:{port}"


class TestLoadEndpoints:
    def test_round_trip(self, tmp_path):
        records = [
            {
                "provider": "acme",
                "datacenter_location": "syd",
                "service_kind": "compute",
                "probe_url": "http://example.invalid/object",
                "upload_url": "http://example.invalid/upload",
                "upload_bytes": 1024,
            }
        ]
        path = tmp_path / "endpoints.json"
        path.write_text(json.dumps(records), encoding="utf-8")
        endpoints = load_endpoints(path)
        assert endpoints == [
            ProbeEndpoint(
                provider="acme",
                datacenter_location="syd",
                service_kind="compute",
                probe_url="http://example.invalid/object",
                upload_url="http://example.invalid/upload",
                upload_bytes=1024,
            )
        ]

    def test_missing_field_named(self, tmp_path):
        path = tmp_path / "endpoints.json"
        path.write_text(json.dumps([{"provider": "acme"}]), encoding="utf-8")
        with pytest.raises(ValueError, match="datacenter_location"):
            load_endpoints(path)

    def test_non_array_rejected(self, tmp_path):
        path = tmp_path / "endpoints.json"
        path.write_text(json.dumps({"provider": "acme"}), encoding="utf-8")
        with pytest.raises(ValueError, match="array"):
            load_endpoints(path)

    def test_bad_service_kind_rejected(self, tmp_path):
        path = tmp_path / "endpoints.json"
        path.write_text(
            json.dumps(
                [
                    {
                        "provider": "a",
                        "datacenter_location": "b",
                        "service_kind": "database",
                        "probe_url": "http://x/",
                        "upload_url": "http://x/",
                    }
                ]
            ),
            encoding="utf-8",
        )
        with pytest.raises(ValueError, match="service_kind"):
            load_endpoints(path)


class TestProbeOnce:
    def test_sample_carries_endpoint_identity(self, service):
        endpoint = service.endpoint(provider="zenith", datacenter_location="sin", service_kind="storage")
        before = time.time()
        sample = probe_once(endpoint, "mel", repetitions=1)
        assert sample.provider == "zenith"
        assert sample.datacenter_location == "sin"
        assert sample.service_kind == "storage"
        assert sample.client_location == "mel"
        assert before <= sample.timestamp <= time.time()

    def test_injected_delay_shows_up_as_median_latency(self, service):
        # the service holds every request for 100ms before responding
        sample = probe_once(service.endpoint(), "mel", repetitions=3)
        assert 100.0 <= sample.latency_ms <= 150.0

    def test_throughput_within_twenty_percent_of_configured_rate(self, service):
        sample = probe_once(service.endpoint(), "mel", repetitions=1)
        assert abs(sample.download_mbps - RATE_MBPS) <= 0.2 * RATE_MBPS
        assert abs(sample.upload_mbps - RATE_MBPS) <= 0.2 * RATE_MBPS

    def test_unreachable_endpoint_raises_probe_error(self):
        from cloudrank.probe import ProbeError

        url = closed_port_url()
        endpoint = ProbeEndpoint(
            provider="acme",
            datacenter_location="syd",
            service_kind="compute",
            probe_url=url + "/object",
            upload_url=url + "/upload",
        )
        with pytest.raises(ProbeError):
            probe_once(endpoint, "mel", repetitions=1, timeout_s=2.0)


class TestProbeAgent:
    def test_run_once_stores_samples(self, service):
        agent = ProbeAgent([service.endpoint()], "mel", repetitions=1)
        report = agent.run_once()
        assert len(report.samples) == 1 and not report.failures
        assert len(agent.store) == 1

    def test_failures_reported_not_raised(self, service):
        url = closed_port_url()
        bad = ProbeEndpoint(
            provider="ghost",
            datacenter_location="void",
            service_kind="compute",
            probe_url=url + "/object",
            upload_url=url + "/upload",
        )
        agent = ProbeAgent([bad, service.endpoint()], "mel", repetitions=1, timeout_s=2.0)
        report = agent.run_once()
        assert len(report.samples) == 1
        assert len(report.failures) == 1
        label, reason = report.failures[0]
        assert label == "ghost/void/compute"
        assert reason

    def test_run_forever_stops_on_event(self, service):
        agent = ProbeAgent([service.endpoint()], "mel", repetitions=1)
        stop = threading.Event()
        reports = []

        def collect(report):
            reports.append(report)
            stop.set()

        agent.run_forever(0.01, stop=stop, on_report=collect)
        assert len(reports) == 1


class TestExportServer:
    def make_store(self) -> SampleStore:
        store = SampleStore()
        store.merge(
            [
                QosSample(
                    provider="acme",
                    datacenter_location="syd",
                    service_kind="compute",
                    client_location="mel",
                    timestamp=float(ts),
                    latency_ms=10.5,
                    download_mbps=100.25,
                    upload_mbps=50.125,
                )
                for ts in (100, 200, 300)
            ]
        )
        return store

    def test_pull_round_trips_samples(self):
        store = self.make_store()
        server = start_export_server(store)
        try:
            port = server.server_address[1]
            samples, errors = fetch_agent_samples(f"http://127.0.0.1:{port}")
            assert not errors
            assert sorted(samples, key=lambda s: s.timestamp) == store.samples()
        finally:
            server.shutdown()
            server.server_close()

    def test_since_filters_old_samples(self):
        store = self.make_store()
        server = start_export_server(store)
        try:
            port = server.server_address[1]
            samples, errors = fetch_agent_samples(f"http://127.0.0.1:{port}", since=150.0)
            assert not errors
            assert sorted(s.timestamp for s in samples) == [200.0, 300.0]
        finally:
            server.shutdown()
            server.server_close()

    def test_token_required_when_configured(self):
        store = self.make_store()
        server = start_export_server(store, token="sekrit")
        try:
            port = server.server_address[1]
            with pytest.raises(urllib.error.HTTPError) as exc_info:
                fetch_agent_samples(f"http://127.0.0.1:{port}")
            assert exc_info.value.code == 401
            samples, errors = fetch_agent_samples(f"http://127.0.0.1:{port}", token="sekrit")
            assert not errors and len(samples) == 3
        finally:
            server.shutdown()
            server.server_close()

    def test_unknown_path_is_404(self):
        store = self.make_store()
        server = start_export_server(store)
        try:
            port = server.server_address[1]
            with pytest.raises(urllib.error.HTTPError) as exc_info:
                fetch_agent_samples(f"http://127.0.0.1:{port}/nope/..")
            # any non-/export path is rejected
            assert exc_info.value.code in (400, 404)
        finally:
            server.shutdown()
            server.server_close()

    def test_bad_since_is_400(self):
        import urllib.request

        store = self.make_store()
        server = start_export_server(store)
        try:
            port = server.server_address[1]
            with pytest.raises(urllib.error.HTTPError) as exc_info:
                urllib.request.urlopen(f"http://127.0.0.1:{port}/export?since=tomorrow")
            assert exc_info.value.code == 400
        finally:
            server.shutdown()
            server.server_close()

    def test_export_is_parseable_csv(self):
        store = self.make_store()
        server = start_export_server(store)
        try:
            port = server.server_address[1]
            import urllib.request

            with urllib.request.urlopen(f"http://127.0.0.1:{port}/export") as response:
                assert response.headers["Content-Type"].startswith("text/csv")
                body = response.read().decode("utf-8")
            samples, errors = parse_samples_csv(body)
            assert not errors and len(samples) == 3
        finally:
            server.shutdown()
            server.server_close()
