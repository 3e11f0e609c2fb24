"""Request validation, scoring and the full combination ranking pipeline."""

from __future__ import annotations

import random
from decimal import Decimal

import pytest

from cloudrank.ahp import WeightVector
from cloudrank.catalog import parse_catalog
from cloudrank.pricing import CostBreakdown, UsageEstimate
from cloudrank.qos import QosAverage
from cloudrank.ranking import (
    BENEFIT_CRITERIA,
    COST_CRITERIA,
    EffectiveQos,
    RankRequest,
    RankStats,
    RequestError,
    ScoreUndefined,
    default_benefit_weights,
    default_cost_weights,
    effective_qos,
    ordered_solutions,
    rank_by_cost_only,
    score,
    score_breakdown,
)
from cloudrank.synthetic import synthetic_averages, synthetic_catalog, synthetic_request

from oracle import rank_oracle


def usage_20_50() -> UsageEstimate:
    return UsageEstimate(storage_gb="20", data_out_gb="50")


def basic_request(**overrides) -> RankRequest:
    fields = {"usage": usage_20_50(), "client_location": "mel", "min_memory_gb": 4.0}
    fields.update(overrides)
    return RankRequest(**fields)


def key_of(result) -> tuple[str, ...]:
    compute, storage, network = result.compute, result.storage, result.network
    return (
        compute.provider if compute else "",
        compute.location if compute else "",
        compute.service_name if compute else "",
        storage.provider if storage else "",
        storage.location if storage else "",
        storage.service_name if storage else "",
        network.provider,
        network.location,
    )


def qos_triple(latency=30.0, download=100.0, upload=50.0, source="compute", estimated=False):
    return EffectiveQos(
        latency_ms=latency,
        download_mbps=download,
        upload_mbps=upload,
        source=source,
        estimated=estimated,
    )


def avg(kind, latency, download, upload, estimated=False):
    return QosAverage(
        provider="p",
        datacenter_location="d",
        service_kind=kind,
        client_location="c",
        mean_latency_ms=latency,
        mean_download_mbps=download,
        mean_upload_mbps=upload,
        sample_count=0 if estimated else 4,
        estimated=estimated,
    )


class TestRankRequest:
    def test_defaults(self):
        request = basic_request()
        assert request.price_max == Decimal(-1)
        assert request.providers == () and request.locations == ()
        assert not request.single_provider
        assert not request.use_qos_estimates
        assert not request.normalize
        assert request.cost_weights.as_dict() == default_cost_weights().as_dict()
        assert request.benefit_weights.as_dict() == default_benefit_weights().as_dict()

    def test_usage_type_enforced(self):
        with pytest.raises(RequestError) as exc_info:
            RankRequest(usage={"storage_gb": 20}, client_location="mel")
        assert exc_info.value.field == "usage"

    def test_client_location_required(self):
        with pytest.raises(RequestError) as exc_info:
            RankRequest(usage=usage_20_50(), client_location="")
        assert exc_info.value.field == "client_location"

    def test_cost_weights_criteria_set_enforced(self):
        wrong = WeightVector(criteria=("compute_cost", "latency"), weights=(0.5, 0.5))
        with pytest.raises(RequestError) as exc_info:
            basic_request(cost_weights=wrong)
        assert exc_info.value.field == "cost_weights"

    @pytest.mark.parametrize("criteria", [
        ("download",),
        ("download", "upload", "ram"),
        ("download", "upload", "ram", "disk", "latency"),
    ])
    def test_benefit_weights_must_match_an_accepted_set(self, criteria):
        weights = tuple(1.0 / len(criteria) for _ in criteria)
        with pytest.raises(RequestError) as exc_info:
            basic_request(benefit_weights=WeightVector(criteria=criteria, weights=weights))
        assert exc_info.value.field == "benefit_weights"

    def test_full_benefit_set_accepted(self):
        weights = WeightVector(criteria=BENEFIT_CRITERIA, weights=(0.4, 0.3, 0.2, 0.1))
        assert basic_request(benefit_weights=weights).benefit_weights is weights

    def test_memory_bounds_validated(self):
        with pytest.raises(RequestError):
            basic_request(min_memory_gb=-1.0)
        with pytest.raises(RequestError):
            basic_request(min_memory_gb=True)
        with pytest.raises(RequestError) as exc_info:
            basic_request(min_memory_gb=8.0, max_memory_gb=4.0)
        assert exc_info.value.field == "max_memory_gb"

    def test_price_max_accepts_strings_and_ints(self):
        assert basic_request(price_max="12.50").price_max == Decimal("12.50")
        assert basic_request(price_max=0).price_max == 0
        assert basic_request(price_max=-1).price_max == -1

    @pytest.mark.parametrize("bad", [0.5, -2, "NaN", "Infinity", "abc", None])
    def test_price_max_rejects_floats_and_junk(self, bad):
        with pytest.raises(RequestError) as exc_info:
            basic_request(price_max=bad)
        assert exc_info.value.field == "price_max"

    @pytest.mark.parametrize("flag", ["single_provider", "use_qos_estimates", "normalize"])
    def test_flags_must_be_proper_booleans(self, flag):
        with pytest.raises(RequestError):
            basic_request(**{flag: 1})


class TestEffectiveQos:
    def test_both_kinds_average_arithmetically(self):
        blended = effective_qos(avg("compute", 10.0, 200.0, 80.0), avg("storage", 30.0, 100.0, 40.0))
        assert blended.latency_ms == 20.0
        assert blended.download_mbps == 150.0
        assert blended.upload_mbps == 60.0
        assert blended.source == "compute+storage"
        assert not blended.estimated

    def test_single_kind_passes_through(self):
        single = effective_qos(avg("compute", 10.0, 200.0, 80.0), None)
        assert (single.latency_ms, single.download_mbps, single.upload_mbps) == (10.0, 200.0, 80.0)
        assert single.source == "compute"
        storage_only = effective_qos(None, avg("storage", 30.0, 100.0, 40.0))
        assert storage_only.source == "storage"

    def test_neither_kind_raises(self):
        with pytest.raises(LookupError):
            effective_qos(None, None)

    def test_estimate_flag_propagates_from_either_side(self):
        blended = effective_qos(
            avg("compute", 10.0, 200.0, 80.0, estimated=True),
            avg("storage", 30.0, 100.0, 40.0),
        )
        assert blended.estimated


class TestScore:
    def test_default_weights_reference_value(self):
        cost = CostBreakdown.build(Decimal("10"), Decimal("0"), Decimal("0"))
        ratio = score(cost, qos_triple(), default_cost_weights(), default_benefit_weights())
        # (0.35*10 + 0.05*30) / (0.7*100 + 0.3*50) = 5 / 85
        assert ratio == pytest.approx(5.0 / 85.0, rel=1e-12)

    def test_uniform_weights_exact_arithmetic(self):
        cost = CostBreakdown.build(Decimal("4"), Decimal("2"), Decimal("6"))
        cost_weights = WeightVector(criteria=COST_CRITERIA, weights=(0.25, 0.25, 0.25, 0.25))
        benefit_weights = WeightVector(criteria=("download", "upload"), weights=(0.5, 0.5))
        # numerator 0.25*(4+2+6+20) = 8, denominator 0.5*(12+4) = 8; all exact in binary
        ratio = score(cost, qos_triple(latency=20.0, download=12.0, upload=4.0), cost_weights, benefit_weights)
        assert ratio == 1.0

    def test_breakdown_terms_resum(self):
        cost = CostBreakdown.build(Decimal("3.5"), Decimal("1.25"), Decimal("0.75"))
        breakdown = score_breakdown(
            cost,
            qos_triple(latency=42.0, download=180.0, upload=60.0),
            default_cost_weights(),
            default_benefit_weights(),
        )
        assert breakdown.numerator == pytest.approx(sum(t.weighted for t in breakdown.cost_terms), abs=0)
        assert breakdown.denominator == pytest.approx(sum(t.weighted for t in breakdown.benefit_terms), abs=0)
        for term in breakdown.cost_terms + breakdown.benefit_terms:
            assert term.weighted == term.weight * term.value
        assert breakdown.ratio == breakdown.numerator / breakdown.denominator

    def test_speed_only_benefit_ignores_capacity_arguments(self):
        cost = CostBreakdown.build(Decimal("1"), Decimal("0"), Decimal("0"))
        breakdown = score_breakdown(
            cost, qos_triple(), default_cost_weights(), default_benefit_weights(),
            memory_gb=512.0, disk_gb=9999.0,
        )
        assert {t.criterion for t in breakdown.benefit_terms} == {"download", "upload"}

    def test_extended_benefit_set_includes_capacity(self):
        cost = CostBreakdown.build(Decimal("1"), Decimal("0"), Decimal("0"))
        weights = WeightVector(criteria=BENEFIT_CRITERIA, weights=(0.4, 0.3, 0.2, 0.1))
        breakdown = score_breakdown(
            cost, qos_triple(download=100.0, upload=50.0), default_cost_weights(), weights,
            memory_gb=16.0, disk_gb=200.0,
        )
        assert breakdown.denominator == pytest.approx(0.4 * 100 + 0.3 * 50 + 0.2 * 16 + 0.1 * 200, rel=1e-12)

    def test_zero_benefit_side_raises(self):
        cost = CostBreakdown.build(Decimal("1"), Decimal("0"), Decimal("0"))
        dead = qos_triple(download=0.0, upload=0.0)
        with pytest.raises(ScoreUndefined):
            score(cost, dead, default_cost_weights(), default_benefit_weights())

    def test_weight_criteria_order_is_irrelevant(self):
        cost = CostBreakdown.build(Decimal("7"), Decimal("2"), Decimal("1"))
        forward = WeightVector(criteria=COST_CRITERIA, weights=(0.1, 0.2, 0.3, 0.4))
        backward = WeightVector(
            criteria=tuple(reversed(COST_CRITERIA)), weights=(0.4, 0.3, 0.2, 0.1)
        )
        q = qos_triple()
        assert score(cost, q, forward, default_benefit_weights()) == score(
            cost, q, backward, default_benefit_weights()
        )


class TestOrderedSolutions:
    def test_full_enumeration_on_small_catalog(self, small_catalog, small_averages):
        results = ordered_solutions(basic_request(), small_catalog, small_averages)
        # 4 compute x 3 storage x 3 network, every group measured
        assert len(results) == 36
        assert [r.rank_position for r in results] == list(range(1, 37))
        ratios = [r.ratio for r in results]
        assert ratios == sorted(ratios)

    def test_matches_brute_force_oracle(self, small_doc, small_catalog, small_averages):
        request = basic_request()
        results = ordered_solutions(request, small_catalog, small_averages)
        assert [key_of(r) for r in results] == rank_oracle(small_doc, small_averages, request)

    def test_cost_order_matches_oracle(self, small_doc, small_catalog, small_averages):
        request = basic_request()
        results = rank_by_cost_only(request, small_catalog, small_averages)
        assert [key_of(r) for r in results] == rank_oracle(small_doc, small_averages, request, by="cost")
        totals = [r.cost.total for r in results]
        assert totals == sorted(totals)

    def test_memory_floor_excludes_small_offers(self, small_catalog, small_averages):
        results = ordered_solutions(basic_request(min_memory_gb=8.0), small_catalog, small_averages)
        names = {r.compute.service_name for r in results}
        assert names == {"large", "standard"}
        assert all(r.compute.memory_gb >= 8.0 for r in results)

    def test_provider_filter_restricts_all_parts(self, small_catalog, small_averages):
        results = ordered_solutions(basic_request(providers=("acme",)), small_catalog, small_averages)
        assert results
        for r in results:
            assert r.providers == ("acme",)

    def test_budget_cut_is_strictly_greater_than(self, small_catalog, small_averages):
        by_cost = rank_by_cost_only(basic_request(), small_catalog, small_averages)
        cheapest = by_cost[0].cost.total
        at_limit = ordered_solutions(basic_request(price_max=cheapest), small_catalog, small_averages)
        assert at_limit and all(r.cost.total == cheapest for r in at_limit)
        below_limit = ordered_solutions(
            basic_request(price_max=cheapest - Decimal("0.000001")), small_catalog, small_averages
        )
        assert below_limit == []

    def test_zero_price_max_admits_free_combinations_only(self, small_catalog, small_averages):
        results = ordered_solutions(basic_request(price_max=0), small_catalog, small_averages)
        assert results == []

    def test_single_provider_confines_combinations(self, small_catalog, small_averages):
        results = ordered_solutions(basic_request(single_provider=True), small_catalog, small_averages)
        assert len(results) == 4
        for r in results:
            assert len(r.providers) == 1
            parts = [(r.network.provider, r.network.location)]
            if r.compute:
                parts.append((r.compute.provider, r.compute.location))
            if r.storage:
                parts.append((r.storage.provider, r.storage.location))
            assert len(set(parts)) == 1

    def test_storage_only_request_skips_compute(self, small_catalog, small_averages):
        request = basic_request(
            usage=UsageEstimate(storage_gb="20", data_out_gb="50", compute_instances=0)
        )
        results = ordered_solutions(request, small_catalog, small_averages)
        assert results
        assert all(r.compute is None for r in results)
        assert all(r.qos.source == "storage" for r in results)
        assert all(r.cost.compute_cost == 0 for r in results)

    def test_compute_only_request_skips_storage(self, small_catalog, small_averages):
        request = basic_request(usage=UsageEstimate(storage_gb="0", data_out_gb="50"))
        results = ordered_solutions(request, small_catalog, small_averages)
        assert results
        assert all(r.storage is None for r in results)
        assert all(r.qos.source == "compute" for r in results)

    def test_network_only_request_has_no_qos_and_no_results(self, small_catalog, small_averages):
        request = basic_request(
            usage=UsageEstimate(storage_gb="0", data_out_gb="50", compute_instances=0)
        )
        stats = RankStats()
        results = ordered_solutions(request, small_catalog, small_averages, stats=stats)
        assert results == []
        assert stats.enumerated == stats.missing_qos > 0

    def test_unknown_provider_rejected(self, small_catalog, small_averages):
        with pytest.raises(RequestError) as exc_info:
            ordered_solutions(basic_request(providers=("nimbus",)), small_catalog, small_averages)
        assert exc_info.value.field == "providers"
        assert "nimbus" in str(exc_info.value)

    def test_unknown_location_rejected(self, small_catalog, small_averages):
        with pytest.raises(RequestError) as exc_info:
            ordered_solutions(basic_request(locations=("atlantis",)), small_catalog, small_averages)
        assert exc_info.value.field == "locations"

    def test_missing_qos_group_drops_offers(self, small_catalog, small_averages):
        trimmed = [
            a
            for a in small_averages
            if not (a.provider == "zenith" and a.datacenter_location == "sin" and a.service_kind == "compute")
        ]
        results = ordered_solutions(basic_request(), small_catalog, trimmed)
        assert all(
            not (r.compute.provider == "zenith" and r.compute.location == "sin") for r in results
        )
        assert len(results) == 27  # 3 compute x 3 storage x 3 network

    def test_estimates_fill_missing_groups_and_are_flagged(self, small_catalog, small_averages):
        trimmed = [
            a
            for a in small_averages
            if not (a.provider == "zenith" and a.datacenter_location == "sin" and a.service_kind == "compute")
        ]
        results = ordered_solutions(
            basic_request(use_qos_estimates=True), small_catalog, trimmed
        )
        estimated = [
            r
            for r in results
            if r.compute.provider == "zenith" and r.compute.location == "sin"
        ]
        assert estimated
        assert all(r.qos.estimated for r in estimated)
        measured = [r for r in results if r not in estimated]
        assert all(not r.qos.estimated for r in measured)

    def test_results_are_reproducible(self, small_catalog, small_averages):
        request = basic_request()
        first = ordered_solutions(request, small_catalog, small_averages)
        second = ordered_solutions(request, small_catalog, small_averages)
        assert [key_of(r) for r in first] == [key_of(r) for r in second]
        assert [r.ratio for r in first] == [r.ratio for r in second]

    def test_stats_counters_are_consistent(self, small_catalog, small_averages):
        stats = RankStats()
        results = ordered_solutions(basic_request(), small_catalog, small_averages, stats=stats)
        assert stats.returned == len(results)
        assert stats.enumerated == 36
        assert stats.over_budget == 0
        assert stats.compute_offers == 4
        assert stats.storage_offers == 3
        assert stats.network_offers == 3


class TestNormalization:
    def test_normalized_values_lie_in_unit_interval(self, small_catalog, small_averages):
        results = ordered_solutions(basic_request(normalize=True), small_catalog, small_averages)
        assert results
        for r in results:
            for term in r.breakdown.cost_terms + r.breakdown.benefit_terms:
                assert 0.0 <= term.value <= 1.0

    def test_normalized_order_matches_recomputation_from_raw_run(self, small_catalog, small_averages):
        raw = ordered_solutions(basic_request(), small_catalog, small_averages)
        raw_values = {}
        for r in raw:
            raw_values[key_of(r)] = (
                {t.criterion: t.value for t in r.breakdown.cost_terms},
                {t.criterion: t.value for t in r.breakdown.benefit_terms},
                r.cost.total,
            )
        bounds = {}
        for side in (0, 1):
            for criterion in (COST_CRITERIA if side == 0 else ("download", "upload")):
                values = [v[side][criterion] for v in raw_values.values()]
                bounds[(side, criterion)] = (min(values), max(values))

        def norm(side, criterion, value):
            low, high = bounds[(side, criterion)]
            return 0.0 if high <= low else (value - low) / (high - low)

        expected = []
        weights = (default_cost_weights(), default_benefit_weights())
        for key, (cost_values, benefit_values, total) in raw_values.items():
            numerator = sum(
                weights[0].get(c) * norm(0, c, cost_values[c]) for c in COST_CRITERIA
            )
            denominator = sum(
                weights[1].get(c) * norm(1, c, benefit_values[c]) for c in ("download", "upload")
            )
            if denominator == 0.0:
                continue
            expected.append((numerator / denominator, total, key))
        expected.sort()

        normalized = ordered_solutions(basic_request(normalize=True), small_catalog, small_averages)
        assert [key_of(r) for r in normalized] == [key for _, _, key in expected]
        for r, (ratio, _, _) in zip(normalized, expected):
            assert r.ratio == pytest.approx(ratio, rel=1e-12)

    def test_single_candidate_normalizes_to_zero_benefit(self, small_catalog, small_averages):
        # min-max over one candidate collapses every criterion to zero
        request = basic_request(
            providers=("acme",), min_memory_gb=16.0, normalize=True
        )
        stats = RankStats()
        results = ordered_solutions(request, small_catalog, small_averages, stats=stats)
        assert results == []
        assert stats.zero_benefit == 1


class TestSyntheticOracleEquivalence:
    @pytest.mark.parametrize("seed", range(8))
    def test_random_catalog_and_request(self, seed):
        rng = random.Random(3_000_000 + seed)
        document = synthetic_catalog(rng)
        catalog = parse_catalog(document)
        averages = synthetic_averages(rng, document, "home")
        request = synthetic_request(rng, document, "home")
        by = rng.choice(("ratio", "cost"))
        ranker = ordered_solutions if by == "ratio" else rank_by_cost_only
        results = ranker(request, catalog, averages)
        assert [key_of(r) for r in results] == rank_oracle(document, averages, request, by=by)
