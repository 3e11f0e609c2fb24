"""Loopback QoS endpoint with controllable network characteristics.

A small local HTTP server that behaves like a probe target: it serves a
test object at ``/object`` (HEAD and GET) and accepts uploads at
``/upload``.  Response delay and transfer rate are configurable, so probe
measurements against it have known expected values.  Pacing follows an
absolute schedule: byte ``k`` of a transfer is released at
``k * 8 / (rate_mbps * 1e6)`` seconds after the transfer starts, which
keeps the effective rate accurate regardless of chunk timing jitter.
"""

from __future__ import annotations

import http.server
import os
import threading
import time

from .probe import ProbeEndpoint

_CHUNK = 16 * 1024


def _paced_copy(write, data: bytes, rate_mbps: float | None) -> None:
    if rate_mbps is None:
        write(data)
        return
    started = time.perf_counter()
    sent = 0
    for offset in range(0, len(data), _CHUNK):
        chunk = data[offset : offset + _CHUNK]
        sent += len(chunk)
        target = started + sent * 8 / (rate_mbps * 1e6)
        delay = target - time.perf_counter()
        if delay > 0:
            time.sleep(delay)
        write(chunk)


class LoopbackQosServer:
    """Local probe target with configurable delay and rate.

    ``delay_ms`` is added before every response on ``/object`` (both HEAD
    and GET), simulating round-trip latency.  ``rate_mbps`` paces the test
    object body and the consumption of uploads.  With ``delay_upload`` the
    delay also precedes upload handling; by default uploads are only paced.
    """

    def __init__(
        self,
        object_bytes: int = 4 * 1024 * 1024,
        delay_ms: float = 0.0,
        rate_mbps: float | None = None,
        delay_upload: bool = False,
        host: str = "127.0.0.1",
        port: int = 0,
    ):
        self.object_bytes = object_bytes
        self.delay_ms = delay_ms
        self.rate_mbps = rate_mbps
        self.delay_upload = delay_upload
        self._host = host
        self._port = port
        self._body = os.urandom(object_bytes)
        self._server: http.server.ThreadingHTTPServer | None = None

    # -- lifecycle ----------------------------------------------------

    def start(self) -> "LoopbackQosServer":
        outer = self

        class Handler(http.server.BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def log_message(self, *args) -> None:
                pass

            def _delay(self) -> None:
                if outer.delay_ms > 0:
                    time.sleep(outer.delay_ms / 1000.0)

            def do_HEAD(self) -> None:
                if self.path != "/object":
                    self._not_found()
                    return
                self._delay()
                self.send_response(200)
                self.send_header("Content-Length", str(len(outer._body)))
                self.end_headers()

            def do_GET(self) -> None:
                if self.path != "/object":
                    self._not_found()
                    return
                self._delay()
                self.send_response(200)
                self.send_header("Content-Type", "application/octet-stream")
                self.send_header("Content-Length", str(len(outer._body)))
                self.end_headers()
                _paced_copy(self.wfile.write, outer._body, outer.rate_mbps)

            def do_POST(self) -> None:
                if self.path != "/upload":
                    self._not_found()
                    return
                if outer.delay_upload:
                    self._delay()
                length = int(self.headers.get("Content-Length", "0"))
                started = time.perf_counter()
                received = 0
                while received < length:
                    chunk = self.rfile.read(min(_CHUNK, length - received))
                    if not chunk:
                        break
                    received += len(chunk)
                    if outer.rate_mbps is not None:
                        target = started + received * 8 / (outer.rate_mbps * 1e6)
                        delay = target - time.perf_counter()
                        if delay > 0:
                            time.sleep(delay)
                body = b"ok"
                self.send_response(200)
                self.send_header("Content-Type", "text/plain")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def _not_found(self) -> None:
                body = b"not found"
                self.send_response(404)
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

        self._server = http.server.ThreadingHTTPServer((self._host, self._port), Handler)
        thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        thread.start()
        return self

    def close(self) -> None:
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()
            self._server = None

    def __enter__(self) -> "LoopbackQosServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.close()

    # -- addressing ---------------------------------------------------

    @property
    def base_url(self) -> str:
        if self._server is None:
            raise RuntimeError("server is not running")
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    def endpoint(
        self,
        provider: str = "loopback",
        datacenter_location: str = "local",
        service_kind: str = "compute",
        upload_bytes: int | None = None,
    ) -> ProbeEndpoint:
        """A probe endpoint pointing at this server."""
        return ProbeEndpoint(
            provider=provider,
            datacenter_location=datacenter_location,
            service_kind=service_kind,
            probe_url=f"{self.base_url}/object",
            upload_url=f"{self.base_url}/upload",
            upload_bytes=self.object_bytes if upload_bytes is None else upload_bytes,
        )
