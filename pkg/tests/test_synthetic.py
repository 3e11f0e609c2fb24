"""Sanity checks for the deterministic fixture generators."""

from __future__ import annotations

import random

import pytest

from cloudrank.catalog import parse_catalog
from cloudrank.ranking import RankRequest
from cloudrank.synthetic import (
    divergence_fixture,
    reference_request,
    scaling_catalog,
    synthetic_averages,
    synthetic_catalog,
    synthetic_request,
)


class TestSyntheticCatalog:
    @pytest.mark.parametrize("seed", range(5))
    def test_documents_always_parse(self, seed):
        rng = random.Random(seed)
        document = synthetic_catalog(
            rng,
            n_providers=rng.randint(1, 5),
            n_locations=rng.randint(1, 6),
            n_compute=rng.randint(1, 30),
            n_storage=rng.randint(1, 15),
            n_network=rng.randint(1, 10),
        )
        catalog = parse_catalog(document)
        assert catalog.compute_offers

    def test_same_seed_same_document(self):
        assert synthetic_catalog(random.Random(7)) == synthetic_catalog(random.Random(7))

    def test_requests_are_valid(self):
        rng = random.Random(42)
        document = synthetic_catalog(rng)
        for _ in range(20):
            request = synthetic_request(rng, document, "home")
            assert isinstance(request, RankRequest)
            assert not request.normalize and not request.use_qos_estimates

    def test_averages_only_cover_offer_groups(self):
        rng = random.Random(13)
        document = synthetic_catalog(rng)
        offer_groups = {
            (o["provider"], o["location"], kind)
            for kind, offers in (("compute", document["compute"]), ("storage", document["storage"]))
            for o in offers
        }
        for average in synthetic_averages(rng, document, "home"):
            assert (average.provider, average.datacenter_location, average.service_kind) in offer_groups
            assert average.client_location == "home"
            assert not average.estimated


class TestScalingCatalog:
    def test_shape(self):
        document, averages, client = scaling_catalog()
        catalog = parse_catalog(document)
        assert len(catalog.compute_offers) == 3808
        assert len(catalog.storage_offers) == 1
        assert len(catalog.network_offers) == 1
        assert client == "mel"
        assert {a.service_kind for a in averages} == {"compute", "storage"}

    def test_memory_floor_slice_sizes(self):
        document, _, _ = scaling_catalog()
        memories = [offer["memory_gb"] for offer in document["compute"]]
        for floor, expected in ((0.0, 3808), (4.0, 2095), (8.0, 1524), (16.0, 552)):
            assert sum(1 for m in memories if m >= floor) == expected


class TestDivergenceFixture:
    def test_shape(self):
        document, averages, client = divergence_fixture()
        catalog = parse_catalog(document)
        assert {p.id for p in catalog.providers} == {"budget", "premium"}
        assert client == "mel"
        by_provider = {
            a.provider: a.mean_download_mbps for a in averages if a.service_kind == "compute"
        }
        assert by_provider["premium"] / by_provider["budget"] == 25.0


class TestReferenceRequest:
    def test_defaults(self):
        request = reference_request("mel")
        assert request.client_location == "mel"
        assert str(request.usage.storage_gb) == "20"
        assert str(request.usage.data_out_gb) == "50"
        assert request.min_memory_gb == 4.0

    def test_overrides(self):
        request = reference_request("mel", single_provider=True)
        assert request.single_provider
