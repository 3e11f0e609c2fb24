"""Catalog document parsing, validation and the versioned store."""

from __future__ import annotations

import json
from decimal import Decimal

import pytest

from cloudrank.catalog import (
    CatalogError,
    CatalogStore,
    filter_compute,
    filter_network,
    filter_storage,
    parse_catalog,
    storage_capacity,
    supports_usage,
    tier_limit,
)


def doc_copy(small_doc) -> dict:
    return json.loads(json.dumps(small_doc))


class TestParseCatalog:
    def test_small_document_parses(self, small_catalog):
        assert small_catalog.version == 1
        assert small_catalog.display_currency == "AUD"
        assert len(small_catalog.providers) == 2
        assert len(small_catalog.locations) == 3
        assert len(small_catalog.compute_offers) == 4
        assert len(small_catalog.storage_offers) == 3
        assert len(small_catalog.network_offers) == 3

    def test_prices_are_exact_six_place_decimals(self, small_catalog):
        offer = small_catalog.compute_offers[0]
        assert offer.price_per_hour == Decimal("0.100000")
        tier = small_catalog.storage_offers[0].tiers[1]
        assert tier.unit_price_per_gb == Decimal("0.080000")

    def test_foreign_currency_normalized_at_import(self, small_catalog):
        # zenith/syd/standard is quoted 0.12 USD at rate 1.5
        offer = next(o for o in small_catalog.compute_offers if o.location == "syd" and o.provider == "zenith")
        assert offer.price_per_hour == Decimal("0.180000")

    def test_text_parse_keeps_decimal_fractions_exact(self):
        # 0.1 must become Decimal('0.1'), not the binary float approximation
        document = {
            "providers": [{"id": "p", "display_name": "P"}],
            "locations": [{"id": "l", "display_name": "L", "latitude": 0.0, "longitude": 0.0}],
            "compute": [
                {
                    "provider": "p", "location": "l", "service_name": "s",
                    "memory_gb": 1, "cpu_cores": 1, "cpu_speed_ghz": 1.0,
                    "disk_gb": 10, "price_per_hour": 0.1,
                }
            ],
            "storage": [],
            "network": [],
        }
        catalog = parse_catalog(json.dumps(document))
        assert catalog.compute_offers[0].price_per_hour == Decimal("0.100000")

    def test_unknown_top_level_field_rejected(self, small_doc):
        document = doc_copy(small_doc)
        document["surprise"] = 1
        with pytest.raises(CatalogError, match="surprise"):
            parse_catalog(document)

    def test_unknown_offer_field_rejected(self, small_doc):
        document = doc_copy(small_doc)
        document["compute"][0]["colour"] = "blue"
        with pytest.raises(CatalogError, match="colour"):
            parse_catalog(document)

    def test_error_names_offending_record(self, small_doc):
        document = doc_copy(small_doc)
        document["compute"][1]["memory_gb"] = -4
        with pytest.raises(CatalogError, match="acme/syd/large"):
            parse_catalog(document)

    def test_unknown_provider_reference_rejected(self, small_doc):
        document = doc_copy(small_doc)
        document["compute"][0]["provider"] = "ghost"
        with pytest.raises(CatalogError, match="ghost"):
            parse_catalog(document)

    def test_unknown_location_reference_rejected(self, small_doc):
        document = doc_copy(small_doc)
        document["storage"][0]["location"] = "atlantis"
        with pytest.raises(CatalogError, match="atlantis"):
            parse_catalog(document)

    def test_duplicate_provider_id_rejected(self, small_doc):
        document = doc_copy(small_doc)
        document["providers"].append({"id": "acme", "display_name": "Copy"})
        with pytest.raises(CatalogError, match="duplicate"):
            parse_catalog(document)

    def test_duplicate_offer_identity_rejected(self, small_doc):
        document = doc_copy(small_doc)
        document["compute"].append(dict(document["compute"][0]))
        with pytest.raises(CatalogError, match="duplicate"):
            parse_catalog(document)

    def test_duplicate_network_per_site_rejected(self, small_doc):
        document = doc_copy(small_doc)
        document["network"].append(dict(document["network"][0]))
        with pytest.raises(CatalogError, match="duplicate"):
            parse_catalog(document)

    def test_latitude_range_checked(self, small_doc):
        document = doc_copy(small_doc)
        document["locations"][0]["latitude"] = 91.0
        with pytest.raises(CatalogError, match="latitude"):
            parse_catalog(document)

    def test_missing_exchange_rate_rejected(self, small_doc):
        document = doc_copy(small_doc)
        document["compute"][0]["currency"] = "GBP"
        with pytest.raises(CatalogError, match="GBP"):
            parse_catalog(document)

    def test_display_currency_rate_must_be_one(self, small_doc):
        document = doc_copy(small_doc)
        document["exchange_rates"]["AUD"] = 2
        with pytest.raises(CatalogError, match="must be 1"):
            parse_catalog(document)

    def test_invalid_json_rejected(self):
        with pytest.raises(CatalogError, match="JSON"):
            parse_catalog("{not json")

    def test_negative_price_rejected(self, small_doc):
        document = doc_copy(small_doc)
        document["storage"][0]["tiers"][0]["unit_price_per_gb"] = -0.1
        with pytest.raises(CatalogError, match="negative"):
            parse_catalog(document)

    def test_boolean_not_accepted_as_number(self, small_doc):
        document = doc_copy(small_doc)
        document["compute"][0]["memory_gb"] = True
        with pytest.raises(CatalogError):
            parse_catalog(document)


class TestTierScheduleValidation:
    def base_doc(self, tiers) -> dict:
        return {
            "providers": [{"id": "p", "display_name": "P"}],
            "locations": [{"id": "l", "display_name": "L", "latitude": 0.0, "longitude": 0.0}],
            "compute": [],
            "storage": [
                {
                    "provider": "p", "location": "l", "service_name": "s",
                    "max_capacity_gb": None, "tiers": tiers,
                }
            ],
            "network": [],
        }

    def test_first_tier_must_start_at_zero(self):
        tiers = [{"quota_min_gb": 10, "quota_max_gb": None, "unit_price_per_gb": 0.1}]
        with pytest.raises(CatalogError, match="start at 0"):
            parse_catalog(self.base_doc(tiers))

    def test_gap_between_tiers_rejected(self):
        tiers = [
            {"quota_min_gb": 0, "quota_max_gb": 50, "unit_price_per_gb": 0.1},
            {"quota_min_gb": 60, "quota_max_gb": None, "unit_price_per_gb": 0.05},
        ]
        with pytest.raises(CatalogError, match="must equal the previous"):
            parse_catalog(self.base_doc(tiers))

    def test_unbounded_tier_only_in_last_position(self):
        tiers = [
            {"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.1},
            {"quota_min_gb": 50, "quota_max_gb": None, "unit_price_per_gb": 0.05},
        ]
        with pytest.raises(CatalogError, match="unbounded"):
            parse_catalog(self.base_doc(tiers))

    def test_empty_band_rejected(self):
        tiers = [
            {"quota_min_gb": 0, "quota_max_gb": 0, "unit_price_per_gb": 0.1},
        ]
        with pytest.raises(CatalogError, match="exceed"):
            parse_catalog(self.base_doc(tiers))

    def test_empty_schedule_rejected(self):
        with pytest.raises(CatalogError, match="at least one tier"):
            parse_catalog(self.base_doc([]))

    def test_helpers_report_schedule_limits(self, small_catalog):
        bounded = small_catalog.storage_offers[1]  # zenith/syd/vault
        unbounded = small_catalog.storage_offers[0]  # acme/syd/objects
        assert tier_limit(bounded.tiers) == Decimal(1000)
        assert tier_limit(unbounded.tiers) is None
        assert supports_usage(bounded.tiers, Decimal(1000))
        assert not supports_usage(bounded.tiers, Decimal(1001))
        assert storage_capacity(bounded) == Decimal(1000)
        assert storage_capacity(unbounded) is None


class TestFilters:
    def test_filter_compute_by_memory_bounds(self, small_catalog):
        names = {o.service_name for o in filter_compute(small_catalog, min_memory_gb=8.0)}
        assert names == {"large", "standard"}
        names = {o.service_name for o in filter_compute(small_catalog, min_memory_gb=8.0, max_memory_gb=8.0)}
        assert names == {"standard"}

    def test_filter_by_provider_and_location(self, small_catalog):
        offers = filter_compute(small_catalog, providers=("zenith",), locations=("sin",))
        assert [(o.provider, o.location) for o in offers] == [("zenith", "sin")]

    def test_empty_filter_means_no_restriction(self, small_catalog):
        assert len(filter_compute(small_catalog)) == 4

    def test_filters_commute(self, small_catalog):
        direct = filter_compute(small_catalog, providers=("acme",), min_memory_gb=8.0)
        by_provider = [o for o in filter_compute(small_catalog, min_memory_gb=8.0) if o.provider == "acme"]
        assert direct == by_provider

    def test_filter_storage_by_capacity(self, small_catalog):
        offers = filter_storage(small_catalog, usage_gb=Decimal(1500))
        names = {(o.provider, o.location) for o in offers}
        # zenith/syd vault tops out at 1000 GB
        assert names == {("acme", "syd"), ("zenith", "sin")}

    def test_filter_network_by_transfer_volume(self, small_catalog):
        offers = filter_network(small_catalog, data_out_gb=Decimal(5000))
        assert len(offers) == 3  # all outbound schedules are unbounded

    def test_usage_exceeding_offer_capacity_excludes_offer(self, small_catalog):
        offers = filter_storage(small_catalog, usage_gb=Decimal(200))
        assert {(o.provider, o.location) for o in offers} == {
            ("acme", "syd"),
            ("zenith", "syd"),
            ("zenith", "sin"),
        }
        document = {
            "providers": [{"id": "p", "display_name": "P"}],
            "locations": [{"id": "l", "display_name": "L", "latitude": 0.0, "longitude": 0.0}],
            "compute": [],
            "storage": [
                {
                    "provider": "p", "location": "l", "service_name": "tiny",
                    "max_capacity_gb": 100,
                    "tiers": [{"quota_min_gb": 0, "quota_max_gb": None, "unit_price_per_gb": 0.1}],
                }
            ],
            "network": [],
        }
        catalog = parse_catalog(json.dumps(document))
        assert filter_storage(catalog, usage_gb=Decimal(200)) == []


class TestCatalogStore:
    def test_versions_increment_on_reimport(self, small_doc_text):
        store = CatalogStore()
        assert store.current is None
        first = store.import_document(small_doc_text)
        assert first.version == 1
        second = store.import_document(small_doc_text)
        assert second.version == 2
        assert store.current is second

    def test_rejected_import_leaves_store_untouched(self, small_doc_text):
        store = CatalogStore()
        store.import_document(small_doc_text)
        with pytest.raises(CatalogError):
            store.import_document("{broken")
        assert store.current is not None
        assert store.version == 1

    def test_display_currency_override(self, small_doc_text):
        store = CatalogStore(display_currency="USD")
        with pytest.raises(CatalogError, match="must be 1"):
            # the document pins USD at 1.5, which cannot be the display rate
            store.import_document(small_doc_text)
