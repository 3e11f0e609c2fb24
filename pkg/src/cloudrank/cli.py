"""Operator command line: run the service, run a probe agent, import data, rank.

Errors leave on stderr as a single line, ``error: <category>: <message>``,
with distinct exit codes: 2 for configuration problems, 3 for validation
problems, 4 for IO problems.  Success is exit 0.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
import time
from datetime import datetime, timezone
from decimal import Decimal
from pathlib import Path

import click
from pydantic import ValidationError

from .api import RankIn, averages_payload, build_rank_request, create_app, rank_payload, request_echo
from .catalog import CatalogError
from .config import ConfigError, ServiceConfig, load_config, parse_duration
from .datastore import DataStore, _write_atomic
from .probe import ProbeAgent, ProbeError, load_endpoints, start_export_server
from .qos import SampleStore, parse_samples_csv
from .ranking import RequestError

EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_IO = 4

RANK_CSV_COLUMNS = (
    "rank",
    "providers",
    "compute",
    "storage",
    "network",
    "total_cost",
    "latency_ms",
    "download_mbps",
    "upload_mbps",
    "ratio",
)


def _fail(code: int, category: str, message: str) -> None:
    click.echo(f"error: {category}: {message}", err=True)
    sys.exit(code)


def _load_service_config(config_path: str | None) -> ServiceConfig:
    try:
        return load_config(Path(config_path) if config_path else None, environ=os.environ)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, "config", str(exc))
        raise AssertionError("unreachable")


def _open_store(config_path: str | None, data_dir: str | None) -> DataStore:
    cfg = _load_service_config(config_path)
    directory = Path(data_dir) if data_dir else cfg.data_dir
    try:
        return DataStore(data_dir=directory, display_currency=cfg.display_currency)
    except (CatalogError, ValueError) as exc:
        _fail(EXIT_VALIDATION, "validation", f"stored data is invalid: {exc}")
        raise AssertionError("unreachable")
    except OSError as exc:
        _fail(EXIT_IO, "io", str(exc))
        raise AssertionError("unreachable")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        _fail(EXIT_IO, "io", str(exc))
        raise AssertionError("unreachable")


@click.group()
@click.version_option(package_name="cloudrank", prog_name="cloudrank")
def main() -> None:
    """QoS-aware ranking of cloud infrastructure offers."""


# ===================================================================
# serve
# ===================================================================


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None, help="TOML config file.")
@click.option("--host", default=None, help="Override the configured bind address.")
@click.option("--port", type=int, default=None, help="Override the configured port.")
def serve(config_path: str | None, host: str | None, port: int | None) -> None:
    """Run the HTTP service."""
    cfg = _load_service_config(config_path)
    try:
        store = DataStore(data_dir=cfg.data_dir, display_currency=cfg.display_currency)
    except OSError as exc:
        _fail(EXIT_IO, "io", str(exc))
        return
    app = create_app(store, admin_token=cfg.admin_token, static_dir=cfg.static_dir)

    import uvicorn

    uvicorn.run(app, host=host or cfg.host, port=port if port is not None else cfg.port)


# ===================================================================
# probe
# ===================================================================


@main.command()
@click.option("--endpoints", "endpoints_path", required=True, type=click.Path(), help="JSON endpoint list.")
@click.option("--client-location", required=True, help="Vantage point identifier stamped on samples.")
@click.option("--interval", default="2h", show_default=True, help="Delay between probe rounds.")
@click.option("--out", "out_path", required=True, type=click.Path(), help="CSV file receiving all samples.")
@click.option("--once", is_flag=True, help="Run a single round and exit.")
@click.option("--listen", default=None, metavar="HOST:PORT", help="Serve collected samples over HTTP.")
@click.option("--token", default=None, help="Bearer token required by the export endpoint.")
def probe(
    endpoints_path: str,
    client_location: str,
    interval: str,
    out_path: str,
    once: bool,
    listen: str | None,
    token: str | None,
) -> None:
    """Measure latency and throughput against configured endpoints."""
    try:
        interval_s = parse_duration(interval)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, "config", str(exc))
        return
    try:
        endpoints = load_endpoints(endpoints_path)
    except OSError as exc:
        _fail(EXIT_IO, "io", str(exc))
        return
    except (ProbeError, ValueError) as exc:
        _fail(EXIT_VALIDATION, "validation", str(exc))
        return

    store = SampleStore()
    out = Path(out_path)
    if out.exists():  # keep accumulating into an existing sample file
        samples, errors = parse_samples_csv(out.read_text(encoding="utf-8"))
        if errors:
            _fail(EXIT_VALIDATION, "validation", f"{out}: line {errors[0].line}: {errors[0].message}")
            return
        store.merge(samples)

    server = None
    if listen is not None:
        host, _, port_text = listen.rpartition(":")
        if not host or not port_text.isdigit():
            _fail(EXIT_CONFIG, "config", f"bad --listen value {listen!r}, expected HOST:PORT")
            return
        server = start_export_server(store, host=host, port=int(port_text), token=token)
        click.echo(f"export endpoint on http://{server.server_address[0]}:{server.server_address[1]}/export", err=True)

    agent = ProbeAgent(endpoints=endpoints, client_location=client_location, store=store)
    try:
        while True:
            report = agent.run_once()
            _write_atomic(out, store.to_csv())
            stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
            click.echo(
                f"{stamp} collected {len(report.samples)} samples, {len(report.failures)} failures",
                err=True,
            )
            for label, message in report.failures:
                click.echo(f"warning: probe {label}: {message}", err=True)
            if once:
                if not report.samples and report.failures:
                    _fail(EXIT_IO, "io", "every probe endpoint failed")
                break
            time.sleep(interval_s)
    except KeyboardInterrupt:
        pass
    finally:
        if server is not None:
            server.shutdown()


# ===================================================================
# data imports
# ===================================================================


@main.command("ingest-catalog")
@click.argument("catalog_file", type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None, help="TOML config file.")
@click.option("--data-dir", default=None, type=click.Path(), help="Override the data directory.")
def ingest_catalog(catalog_file: str, config_path: str | None, data_dir: str | None) -> None:
    """Validate and store a provider catalog document."""
    text = _read_text(catalog_file)
    store = _open_store(config_path, data_dir)
    try:
        catalog = store.import_catalog(text)
    except CatalogError as exc:
        _fail(EXIT_VALIDATION, "validation", str(exc))
        return
    click.echo(
        f"catalog version {catalog.version}: "
        f"{len(catalog.providers)} providers, {len(catalog.locations)} locations, "
        f"{len(catalog.compute_offers)} compute, {len(catalog.storage_offers)} storage, "
        f"{len(catalog.network_offers)} network offers"
    )


@main.group()
def qos() -> None:
    """QoS sample import and aggregation."""


@qos.command("import")
@click.argument("csv_file", type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None, help="TOML config file.")
@click.option("--data-dir", default=None, type=click.Path(), help="Override the data directory.")
def qos_import(csv_file: str, config_path: str | None, data_dir: str | None) -> None:
    """Merge probe samples from a CSV file."""
    text = _read_text(csv_file)
    store = _open_store(config_path, data_dir)
    report = store.import_samples_csv(text)
    if any(e.line == 1 for e in report.errors):
        _fail(EXIT_VALIDATION, "validation", f"line 1: {report.errors[0].message}")
        return
    for err in report.errors:
        click.echo(f"warning: line {err.line}: {err.message}", err=True)
    click.echo(f"inserted {report.inserted}, duplicates {report.duplicates}, rejected {len(report.errors)}")


@qos.command("averages")
@click.option("--config", "config_path", type=click.Path(), default=None, help="TOML config file.")
@click.option("--data-dir", default=None, type=click.Path(), help="Override the data directory.")
@click.option("--client-location", default=None, help="Only this vantage point.")
@click.option(
    "--format", "output_format", type=click.Choice(["table", "json"]), default="table", show_default=True
)
def qos_averages(
    config_path: str | None, data_dir: str | None, client_location: str | None, output_format: str
) -> None:
    """Print aggregated mean QoS per (provider, datacenter, kind, client)."""
    store = _open_store(config_path, data_dir)
    averages = store.averages()
    if client_location is not None:
        averages = [a for a in averages if a.client_location == client_location]
    if output_format == "json":
        click.echo(json.dumps(averages_payload(averages), indent=2))
        return
    header = ["provider", "datacenter", "kind", "client", "latency_ms", "download_mbps", "upload_mbps", "samples"]
    rows = [
        [
            a.provider,
            a.datacenter_location,
            a.service_kind,
            a.client_location,
            f"{a.mean_latency_ms:.3f}",
            f"{a.mean_download_mbps:.3f}",
            f"{a.mean_upload_mbps:.3f}",
            str(a.sample_count),
        ]
        for a in averages
    ]
    click.echo(_render_table(header, rows))


# ===================================================================
# rank
# ===================================================================


def _offer_cell(offer: dict | None, with_name: bool = True) -> str:
    if offer is None:
        return "-"
    if with_name:
        return f"{offer['provider']}/{offer['location']}/{offer['service_name']}"
    return f"{offer['provider']}/{offer['location']}"


def _result_cells(item: dict) -> list[str]:
    qos_part = item["qos"]
    return [
        str(item["rank"]),
        "+".join(item["providers"]),
        _offer_cell(item["compute"]),
        _offer_cell(item["storage"]),
        _offer_cell(item["network"], with_name=False),
        item["cost"]["total"],
        repr(qos_part["latency_ms"]),
        repr(qos_part["download_mbps"]),
        repr(qos_part["upload_mbps"]),
        repr(item["score"]["ratio"]),
    ]


def _render_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip(),
        "  ".join("-" * widths[i] for i in range(len(header))),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines)


def _empty_payload(request, by: str, limit: int, display_currency: str) -> dict:
    return {
        "catalog_version": None,
        "display_currency": display_currency,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "order_by": by,
        "total_results": 0,
        "limit": limit,
        "offset": 0,
        "request_echo": request_echo(request),
        "results": [],
    }


@main.command()
@click.option("--request", "request_path", required=True, type=click.Path(), help="Ranking request JSON.")
@click.option("--top", type=click.IntRange(min=1), default=100, show_default=True, help="Rows to output.")
@click.option("--by", type=click.Choice(["ratio", "cost"]), default="ratio", show_default=True)
@click.option(
    "--format", "output_format", type=click.Choice(["table", "json", "csv"]), default="table", show_default=True
)
@click.option("--config", "config_path", type=click.Path(), default=None, help="TOML config file.")
@click.option("--data-dir", default=None, type=click.Path(), help="Override the data directory.")
def rank(
    request_path: str,
    top: int,
    by: str,
    output_format: str,
    config_path: str | None,
    data_dir: str | None,
) -> None:
    """Rank offer combinations for a request against the stored snapshot."""
    text = _read_text(request_path)
    try:
        raw = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        _fail(EXIT_VALIDATION, "validation", f"request file is not valid JSON: {exc}")
        return
    try:
        body = RankIn.model_validate(raw)
        request = build_rank_request(body)
    except ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(part) for part in first["loc"])
        _fail(EXIT_VALIDATION, "validation", f"{field}: {first['msg']}")
        return
    except RequestError as exc:
        _fail(EXIT_VALIDATION, "validation", str(exc))
        return

    store = _open_store(config_path, data_dir)
    catalog = store.catalog
    if catalog is None:
        click.echo("warning: no catalog loaded, nothing to rank", err=True)
        payload = _empty_payload(request, by, top, store.display_currency)
    else:
        try:
            payload = rank_payload(catalog, store.averages(), request, by=by, limit=top, offset=0)
        except RequestError as exc:
            _fail(EXIT_VALIDATION, "validation", str(exc))
            return

    if output_format == "json":
        click.echo(json.dumps(payload, indent=2))
    elif output_format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(RANK_CSV_COLUMNS)
        for item in payload["results"]:
            writer.writerow(_result_cells(item))
        click.echo(buffer.getvalue(), nl=False)
    else:
        rows = [_result_cells(item) for item in payload["results"]]
        click.echo(_render_table(list(RANK_CSV_COLUMNS), rows))
