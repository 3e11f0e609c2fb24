"""Shared fixtures: a small hand-written catalog, QoS samples, judgments."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from cloudrank.catalog import Catalog, parse_catalog
from cloudrank.qos import QosAverage, SampleStore

FIXTURES = Path(__file__).parent / "fixtures"

#: The worked pairwise-comparison example used across the AHP tests:
#: four QoS criteria, judgments on the five-step verbal scale.
EXAMPLE_CRITERIA = ("upload", "download", "ram", "disk")
EXAMPLE_JUDGMENTS = [
    ("upload", "download", 1.0 / 3.0),
    ("upload", "ram", 1.0 / 5.0),
    ("upload", "disk", 1.0 / 5.0),
    ("download", "ram", 3.0),
    ("download", "disk", 5.0),
    ("ram", "disk", 3.0),
]


@pytest.fixture(scope="session")
def small_doc_text() -> str:
    return (FIXTURES / "catalog_small.json").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def small_doc(small_doc_text) -> dict:
    return json.loads(small_doc_text)


@pytest.fixture(scope="session")
def small_catalog(small_doc_text) -> Catalog:
    return parse_catalog(small_doc_text)


@pytest.fixture(scope="session")
def small_samples_csv() -> str:
    return (FIXTURES / "qos_small.csv").read_text(encoding="utf-8")


@pytest.fixture()
def small_averages(small_samples_csv) -> list[QosAverage]:
    store = SampleStore()
    report = store.merge_csv(small_samples_csv)
    assert not report.errors
    return store.averages()
