"""File-backed runtime state shared by the HTTP service and the CLI.

A data directory holds the accepted catalog document (verbatim, so decimal
prices survive restarts exactly), its version metadata, and the merged QoS
samples as CSV.  Files are rewritten atomically (write-then-rename), so a
crash mid-write leaves the previous state intact.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterable

from .catalog import DEFAULT_DISPLAY_CURRENCY, Catalog, CatalogStore, parse_catalog
from .qos import ImportReport, QosAverage, QosSample, SampleStore, fetch_agent_samples

_CATALOG_FILE = "catalog.json"
_META_FILE = "catalog.meta.json"
_SAMPLES_FILE = "samples.csv"


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


class DataStore:
    """Catalog snapshot plus QoS samples, optionally persisted to disk.

    With ``data_dir=None`` everything lives in memory only (handy for
    tests).  With a directory, existing state is loaded at construction and
    every mutation is persisted before it returns.
    """

    def __init__(self, data_dir: str | Path | None = None, display_currency: str | None = None):
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self.catalog_store = CatalogStore(display_currency)
        self.samples = SampleStore()
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._load()

    # -- startup --------------------------------------------------------

    def _load(self) -> None:
        assert self.data_dir is not None
        catalog_path = self.data_dir / _CATALOG_FILE
        if catalog_path.exists():
            version = 1
            meta_path = self.data_dir / _META_FILE
            if meta_path.exists():
                version = int(json.loads(meta_path.read_text(encoding="utf-8"))["version"])
            catalog = parse_catalog(
                catalog_path.read_text(encoding="utf-8"),
                display_currency=self.catalog_store._display_currency,
                version=version,
            )
            self.catalog_store.restore(catalog)
        samples_path = self.data_dir / _SAMPLES_FILE
        if samples_path.exists():
            self.samples.merge_csv(samples_path.read_text(encoding="utf-8"))

    # -- catalog --------------------------------------------------------

    @property
    def catalog(self) -> Catalog | None:
        return self.catalog_store.current

    @property
    def display_currency(self) -> str:
        catalog = self.catalog_store.current
        if catalog is not None:
            return catalog.display_currency
        return self.catalog_store._display_currency or DEFAULT_DISPLAY_CURRENCY

    def import_catalog(self, document_text: str | bytes) -> Catalog:
        """Validate and publish a catalog document; persists the raw text."""
        catalog = self.catalog_store.import_document(document_text)
        if self.data_dir is not None:
            if isinstance(document_text, bytes):
                document_text = document_text.decode("utf-8")
            _write_atomic(self.data_dir / _CATALOG_FILE, document_text)
            _write_atomic(self.data_dir / _META_FILE, json.dumps({"version": catalog.version}))
        return catalog

    # -- QoS samples ----------------------------------------------------

    def _persist_samples(self) -> None:
        if self.data_dir is not None:
            _write_atomic(self.data_dir / _SAMPLES_FILE, self.samples.to_csv())

    def import_samples_csv(self, text: str) -> ImportReport:
        report = self.samples.merge_csv(text)
        if report.inserted:
            self._persist_samples()
        return report

    def merge_samples(self, samples: Iterable[QosSample]) -> tuple[int, int]:
        inserted, duplicates = self.samples.merge(samples)
        if inserted:
            self._persist_samples()
        return inserted, duplicates

    def pull_agent(
        self,
        base_url: str,
        since: float | None = None,
        token: str | None = None,
        timeout_s: float = 30.0,
    ) -> ImportReport:
        """Pull one agent's export and merge it."""
        samples, errors = fetch_agent_samples(base_url, since=since, token=token, timeout_s=timeout_s)
        inserted, duplicates = self.merge_samples(samples)
        return ImportReport(inserted=inserted, duplicates=duplicates, errors=tuple(errors))

    def averages(self) -> list[QosAverage]:
        return self.samples.averages()
