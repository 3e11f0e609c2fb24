"""Combination enumeration and weighted cost-benefit ranking.

The pipeline: filter offers against the request's static constraints, join
each offer with its average QoS for the client vantage point, enumerate
compute x storage x network combinations, price each combination, score it
as (weighted cost side) / (weighted benefit side), and sort ascending by
that ratio.  Lower ratios are better: the numerator aggregates what the
user gives up (money, waiting time), the denominator what they get back
(throughput, capacity).

Resource kinds with zero requested usage are left out of combinations; a
network plan is always included because every deployment moves data.
Combinations lacking QoS data are excluded unless the request enables
distance-based estimation, in which case stand-in values are used and
flagged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Iterable, Mapping, Sequence

from .ahp import WeightVector
from .catalog import (
    Catalog,
    ComputeOffer,
    NetworkOffer,
    StorageOffer,
    filter_compute,
    filter_network,
    filter_storage,
)
from .money import money_sum
from .pricing import CostBreakdown, UsageEstimate, UsageExceedsTiers, period_cost, tiered_cost, total_cost
from .qos import QosAverage, averages_by_key, estimate_average, great_circle_km

#: Cost-side criteria, in canonical summation order.
COST_CRITERIA = ("compute_cost", "storage_cost", "network_cost", "latency")

#: Benefit-side criteria, in canonical summation order.
BENEFIT_CRITERIA = ("download", "upload", "ram", "disk")

#: Accepted benefit criteria sets: speed only, or speed plus capacity.
_BENEFIT_SETS = (frozenset(("download", "upload")), frozenset(BENEFIT_CRITERIA))


class RequestError(ValueError):
    """An invalid ranking request; ``field`` names the offending input."""

    def __init__(self, field_name: str, message: str):
        super().__init__(message)
        self.field = field_name


class ScoreUndefined(ValueError):
    """The benefit side of a score is zero, the ratio does not exist."""


def default_cost_weights() -> WeightVector:
    """Default cost-side weights: 35% compute, 25% storage, 35% network, 5% latency."""
    return WeightVector(criteria=COST_CRITERIA, weights=(0.35, 0.25, 0.35, 0.05))


def default_benefit_weights() -> WeightVector:
    """Default benefit-side weights: 70% download, 30% upload."""
    return WeightVector(criteria=("download", "upload"), weights=(0.7, 0.3))


def _coerce_decimal(value, field_name: str) -> Decimal:
    if isinstance(value, float):
        raise RequestError(field_name, f"{field_name}: pass Decimal, int or str, not float")
    try:
        dec = Decimal(value)
    except (InvalidOperation, TypeError):
        raise RequestError(field_name, f"{field_name}: not a number: {value!r}") from None
    if not dec.is_finite():
        raise RequestError(field_name, f"{field_name}: must be finite")
    return dec


@dataclass(frozen=True)
class RankRequest:
    """Everything a ranking run depends on besides the catalog and QoS data.

    ``price_max`` caps the total combination cost; -1 means unbounded and 0
    admits only free combinations.  Empty ``providers``/``locations`` mean
    no restriction.  ``single_provider`` confines each combination to one
    (provider, location).  ``use_qos_estimates`` lets combinations without
    measurements participate with flagged distance-model estimates.
    ``normalize`` switches scoring to min-max normalized criterion values
    (computed over the candidate set) instead of raw magnitudes.
    """

    usage: UsageEstimate
    client_location: str
    cost_weights: WeightVector = field(default_factory=default_cost_weights)
    benefit_weights: WeightVector = field(default_factory=default_benefit_weights)
    providers: tuple[str, ...] = ()
    locations: tuple[str, ...] = ()
    min_memory_gb: float = 0.0
    max_memory_gb: float | None = None
    price_max: Decimal = Decimal(-1)
    single_provider: bool = False
    use_qos_estimates: bool = False
    normalize: bool = False

    def __post_init__(self) -> None:
        if not isinstance(self.usage, UsageEstimate):
            raise RequestError("usage", "usage must be a UsageEstimate")
        if not isinstance(self.client_location, str) or not self.client_location:
            raise RequestError("client_location", "client_location must be a non-empty string")
        object.__setattr__(self, "providers", tuple(str(p) for p in self.providers))
        object.__setattr__(self, "locations", tuple(str(l) for l in self.locations))

        if not isinstance(self.cost_weights, WeightVector):
            raise RequestError("cost_weights", "cost_weights must be a WeightVector")
        if set(self.cost_weights.criteria) != set(COST_CRITERIA):
            raise RequestError(
                "cost_weights",
                f"cost_weights must cover exactly {{{', '.join(COST_CRITERIA)}}}",
            )
        if not isinstance(self.benefit_weights, WeightVector):
            raise RequestError("benefit_weights", "benefit_weights must be a WeightVector")
        if frozenset(self.benefit_weights.criteria) not in _BENEFIT_SETS:
            raise RequestError(
                "benefit_weights",
                "benefit_weights must cover {download, upload} or {download, upload, ram, disk}",
            )

        if isinstance(self.min_memory_gb, bool) or not isinstance(self.min_memory_gb, (int, float)):
            raise RequestError("min_memory_gb", "min_memory_gb must be a number")
        if self.min_memory_gb < 0:
            raise RequestError("min_memory_gb", "min_memory_gb must not be negative")
        if self.max_memory_gb is not None:
            if isinstance(self.max_memory_gb, bool) or not isinstance(self.max_memory_gb, (int, float)):
                raise RequestError("max_memory_gb", "max_memory_gb must be a number")
            if self.max_memory_gb < self.min_memory_gb:
                raise RequestError("max_memory_gb", "max_memory_gb must be at least min_memory_gb")

        price_max = _coerce_decimal(self.price_max, "price_max")
        if price_max != -1 and price_max < 0:
            raise RequestError("price_max", "price_max must be -1 (unbounded) or at least 0")
        object.__setattr__(self, "price_max", price_max)

        for flag in ("single_provider", "use_qos_estimates", "normalize"):
            if not isinstance(getattr(self, flag), bool):
                raise RequestError(flag, f"{flag} must be a boolean")


@dataclass(frozen=True)
class EffectiveQos:
    """QoS attributed to a combination.

    When the combination includes both a compute and a storage service, each
    metric is the arithmetic mean of the two kinds' averages; with a single
    kind the values pass through unchanged.  ``source`` records which kinds
    contributed, ``estimated`` whether any contribution was a stand-in.
    """

    latency_ms: float
    download_mbps: float
    upload_mbps: float
    source: str
    estimated: bool


def effective_qos(
    compute_avg: QosAverage | None,
    storage_avg: QosAverage | None,
) -> EffectiveQos:
    """Blend per-kind averages into one combination-level QoS triple."""
    if compute_avg is not None and storage_avg is not None:
        return EffectiveQos(
            latency_ms=(compute_avg.mean_latency_ms + storage_avg.mean_latency_ms) / 2.0,
            download_mbps=(compute_avg.mean_download_mbps + storage_avg.mean_download_mbps) / 2.0,
            upload_mbps=(compute_avg.mean_upload_mbps + storage_avg.mean_upload_mbps) / 2.0,
            source="compute+storage",
            estimated=compute_avg.estimated or storage_avg.estimated,
        )
    single = compute_avg if compute_avg is not None else storage_avg
    if single is None:
        raise LookupError("no QoS average for either service kind")
    return EffectiveQos(
        latency_ms=single.mean_latency_ms,
        download_mbps=single.mean_download_mbps,
        upload_mbps=single.mean_upload_mbps,
        source=single.service_kind,
        estimated=single.estimated,
    )


@dataclass(frozen=True)
class ScoreTerm:
    """One weighted criterion contribution: weighted = weight x value."""

    criterion: str
    value: float
    weight: float
    weighted: float


@dataclass(frozen=True)
class ScoreBreakdown:
    """Itemized score: terms re-sum to numerator and denominator exactly."""

    ratio: float
    numerator: float
    denominator: float
    cost_terms: tuple[ScoreTerm, ...]
    benefit_terms: tuple[ScoreTerm, ...]


_Transforms = Mapping[str, tuple[float, float]] | None


def _normalized(value: float, bounds: tuple[float, float]) -> float:
    low, high = bounds
    if high <= low:
        return 0.0
    return (value - low) / (high - low)


def _weighted_terms(
    values: Mapping[str, float],
    weights: WeightVector,
    order: Sequence[str],
    transforms: _Transforms = None,
) -> tuple[tuple[ScoreTerm, ...], float]:
    terms = []
    total = 0.0
    for criterion in order:
        if criterion not in weights:
            continue
        value = values[criterion]
        if transforms is not None:
            value = _normalized(value, transforms[criterion])
        weight = weights.get(criterion)
        weighted = weight * value
        total += weighted
        terms.append(ScoreTerm(criterion=criterion, value=value, weight=weight, weighted=weighted))
    return tuple(terms), total


def _cost_values(cost: CostBreakdown, latency_ms: float) -> dict[str, float]:
    return {
        "compute_cost": float(cost.compute_cost),
        "storage_cost": float(cost.storage_cost),
        "network_cost": float(cost.network_cost),
        "latency": latency_ms,
    }


def _benefit_values(qos: EffectiveQos, memory_gb: float, disk_gb: float) -> dict[str, float]:
    return {
        "download": qos.download_mbps,
        "upload": qos.upload_mbps,
        "ram": memory_gb,
        "disk": disk_gb,
    }


def score_breakdown(
    cost: CostBreakdown,
    qos: EffectiveQos,
    cost_weights: WeightVector,
    benefit_weights: WeightVector,
    memory_gb: float = 0.0,
    disk_gb: float = 0.0,
) -> ScoreBreakdown:
    """Score one combination and itemize every weighted term.

    Cost criteria cover the three monetary parts plus latency; benefit
    criteria cover download/upload speed and, when the weight vector
    includes them, the compute offer's memory and disk capacity.  Raises
    :class:`ScoreUndefined` when the benefit side sums to zero.
    """
    cost_terms, numerator = _weighted_terms(_cost_values(cost, qos.latency_ms), cost_weights, COST_CRITERIA)
    benefit_terms, denominator = _weighted_terms(
        _benefit_values(qos, memory_gb, disk_gb), benefit_weights, BENEFIT_CRITERIA
    )
    if denominator == 0.0:
        raise ScoreUndefined("benefit side is zero, the cost-benefit ratio is undefined")
    return ScoreBreakdown(
        ratio=numerator / denominator,
        numerator=numerator,
        denominator=denominator,
        cost_terms=cost_terms,
        benefit_terms=benefit_terms,
    )


def score(
    cost: CostBreakdown,
    qos: EffectiveQos,
    cost_weights: WeightVector,
    benefit_weights: WeightVector,
    memory_gb: float = 0.0,
    disk_gb: float = 0.0,
) -> float:
    """The cost-benefit ratio alone; lower is better."""
    return score_breakdown(cost, qos, cost_weights, benefit_weights, memory_gb, disk_gb).ratio


@dataclass(frozen=True)
class ScoredCombination:
    """One ranked compute+storage+network selection."""

    rank_position: int
    compute: ComputeOffer | None
    storage: StorageOffer | None
    network: NetworkOffer
    cost: CostBreakdown
    qos: EffectiveQos
    breakdown: ScoreBreakdown

    @property
    def ratio(self) -> float:
        return self.breakdown.ratio

    @property
    def providers(self) -> tuple[str, ...]:
        involved = {self.network.provider}
        if self.compute is not None:
            involved.add(self.compute.provider)
        if self.storage is not None:
            involved.add(self.storage.provider)
        return tuple(sorted(involved))

    def as_dict(self) -> dict:
        """JSON-ready representation; money rendered as exact strings."""

        def _term(term: ScoreTerm) -> dict:
            return {
                "criterion": term.criterion,
                "value": term.value,
                "weight": term.weight,
                "weighted": term.weighted,
            }

        compute = None
        if self.compute is not None:
            compute = {
                "provider": self.compute.provider,
                "location": self.compute.location,
                "service_name": self.compute.service_name,
                "memory_gb": self.compute.memory_gb,
                "cpu_cores": self.compute.cpu_cores,
                "cpu_speed_ghz": self.compute.cpu_speed_ghz,
                "disk_gb": self.compute.disk_gb,
                "price_per_hour": str(self.compute.price_per_hour),
            }
        storage = None
        if self.storage is not None:
            storage = {
                "provider": self.storage.provider,
                "location": self.storage.location,
                "service_name": self.storage.service_name,
            }
        return {
            "rank": self.rank_position,
            "providers": list(self.providers),
            "compute": compute,
            "storage": storage,
            "network": {"provider": self.network.provider, "location": self.network.location},
            "cost": {
                "compute_cost": str(self.cost.compute_cost),
                "storage_cost": str(self.cost.storage_cost),
                "network_cost": str(self.cost.network_cost),
                "total": str(self.cost.total),
            },
            "qos": {
                "latency_ms": self.qos.latency_ms,
                "download_mbps": self.qos.download_mbps,
                "upload_mbps": self.qos.upload_mbps,
                "source": self.qos.source,
                "estimated": self.qos.estimated,
            },
            "score": {
                "ratio": self.breakdown.ratio,
                "numerator": self.breakdown.numerator,
                "denominator": self.breakdown.denominator,
                "cost_terms": [_term(t) for t in self.breakdown.cost_terms],
                "benefit_terms": [_term(t) for t in self.breakdown.benefit_terms],
            },
        }


@dataclass
class RankStats:
    """Counters describing one ranking run, for diagnostics."""

    compute_offers: int = 0
    storage_offers: int = 0
    network_offers: int = 0
    enumerated: int = 0
    over_budget: int = 0
    missing_qos: int = 0
    zero_benefit: int = 0
    infeasible_pricing: int = 0
    returned: int = 0


def _combo_key(
    compute: ComputeOffer | None,
    storage: StorageOffer | None,
    network: NetworkOffer,
) -> tuple[str, ...]:
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


class _QosResolver:
    """Joins offers with averages; optionally fills gaps with estimates."""

    def __init__(self, request: RankRequest, catalog: Catalog, averages: Iterable[QosAverage]):
        all_averages = list(averages)
        self._measured = averages_by_key(a for a in all_averages if not a.estimated)
        self._provided_estimates = averages_by_key(a for a in all_averages if a.estimated)
        self._client = request.client_location
        self._estimate = request.use_qos_estimates
        self._catalog = catalog
        self._cache: dict[tuple[str, str, str], QosAverage | None] = {}
        self._observations: list[tuple[float, QosAverage]] | None = None

    def _measured_with_distances(self) -> list[tuple[float, QosAverage]]:
        # Distance model inputs: every measured average whose datacenter and
        # client vantage point both have coordinates in the catalog.
        if self._observations is None:
            observations = []
            for average in self._measured.values():
                datacenter = self._catalog.location(average.datacenter_location)
                client = self._catalog.location(average.client_location)
                if datacenter is None or client is None:
                    continue
                distance = great_circle_km(
                    client.latitude, client.longitude, datacenter.latitude, datacenter.longitude
                )
                observations.append((distance, average))
            self._observations = observations
        return self._observations

    def resolve(self, provider: str, location: str, service_kind: str) -> QosAverage | None:
        key = (provider, location, service_kind)
        if key in self._cache:
            return self._cache[key]
        result = self._measured.get((provider, location, service_kind, self._client))
        if result is None and self._estimate:
            result = self._provided_estimates.get((provider, location, service_kind, self._client))
        if result is None and self._estimate:
            client = self._catalog.location(self._client)
            datacenter = self._catalog.location(location)
            if client is not None and datacenter is not None:
                distance = great_circle_km(
                    client.latitude, client.longitude, datacenter.latitude, datacenter.longitude
                )
                result = estimate_average(
                    provider, location, service_kind, self._client,
                    distance, self._measured_with_distances(),
                )
        self._cache[key] = result
        return result


def _validate_against_catalog(request: RankRequest, catalog: Catalog) -> None:
    known_providers = set(catalog.provider_ids)
    unknown = sorted(set(request.providers) - known_providers)
    if unknown:
        raise RequestError("providers", f"unknown provider(s): {', '.join(unknown)}")
    known_locations = set(catalog.location_ids)
    unknown = sorted(set(request.locations) - known_locations)
    if unknown:
        raise RequestError("locations", f"unknown location(s): {', '.join(unknown)}")


def _rank(
    request: RankRequest,
    catalog: Catalog,
    averages: Iterable[QosAverage],
    by: str,
    stats: RankStats | None,
) -> list[ScoredCombination]:
    _validate_against_catalog(request, catalog)
    usage = request.usage
    resolver = _QosResolver(request, catalog, averages)
    stats = stats if stats is not None else RankStats()

    compute_options: list[ComputeOffer | None]
    storage_options: list[StorageOffer | None]
    if usage.wants_compute:
        compute_options = []
        for offer in filter_compute(
            catalog, request.providers, request.locations, request.min_memory_gb, request.max_memory_gb
        ):
            if resolver.resolve(offer.provider, offer.location, "compute") is None:
                stats.missing_qos += 1
                continue
            compute_options.append(offer)
    else:
        compute_options = [None]
    if usage.wants_storage:
        storage_options = []
        for offer in filter_storage(catalog, request.providers, request.locations, usage.storage_gb):
            if resolver.resolve(offer.provider, offer.location, "storage") is None:
                stats.missing_qos += 1
                continue
            storage_options.append(offer)
    else:
        storage_options = [None]
    network_options = filter_network(
        catalog, request.providers, request.locations, usage.data_in_gb, usage.data_out_gb
    )

    stats.compute_offers = sum(1 for c in compute_options if c is not None)
    stats.storage_offers = sum(1 for s in storage_options if s is not None)
    stats.network_offers = len(network_options)

    # Per-offer price parts, computed once each.
    compute_costs: dict[tuple, Decimal] = {}
    for offer in compute_options:
        if offer is not None:
            compute_costs[offer.key] = period_cost(
                usage.compute_instances, offer.price_per_hour, usage.compute_hours
            )
    storage_costs: dict[tuple, Decimal] = {}
    for offer in storage_options:
        if offer is not None:
            storage_costs[offer.key] = tiered_cost(offer.tiers, usage.storage_gb)
    network_costs: dict[tuple, Decimal] = {}
    for offer in network_options:
        network_costs[offer.key] = money_sum(
            (
                tiered_cost(offer.inbound_tiers, usage.data_in_gb),
                tiered_cost(offer.outbound_tiers, usage.data_out_gb),
            )
        )

    budget = request.price_max

    candidates = []  # (compute, storage, network, cost, qos, cost_values, benefit_values)
    for compute in compute_options:
        qos_compute = (
            resolver.resolve(compute.provider, compute.location, "compute") if compute else None
        )
        for storage in storage_options:
            if (
                request.single_provider
                and compute is not None
                and storage is not None
                and (compute.provider, compute.location) != (storage.provider, storage.location)
            ):
                continue
            qos_storage = (
                resolver.resolve(storage.provider, storage.location, "storage") if storage else None
            )
            anchor = compute or storage
            for network in network_options:
                if (
                    request.single_provider
                    and anchor is not None
                    and (anchor.provider, anchor.location) != (network.provider, network.location)
                ):
                    continue
                stats.enumerated += 1
                if qos_compute is None and qos_storage is None:
                    stats.missing_qos += 1
                    continue
                cost = CostBreakdown.build(
                    compute_costs[compute.key] if compute else Decimal(0),
                    storage_costs[storage.key] if storage else Decimal(0),
                    network_costs[network.key],
                )
                if budget != -1 and cost.total > budget:
                    stats.over_budget += 1
                    continue
                qos = effective_qos(qos_compute, qos_storage)
                candidates.append(
                    (
                        compute,
                        storage,
                        network,
                        cost,
                        qos,
                        _cost_values(cost, qos.latency_ms),
                        _benefit_values(
                            qos,
                            compute.memory_gb if compute else 0.0,
                            compute.disk_gb if compute else 0.0,
                        ),
                    )
                )

    cost_transforms = benefit_transforms = None
    if request.normalize and candidates:
        cost_transforms = {
            criterion: (
                min(c[5][criterion] for c in candidates),
                max(c[5][criterion] for c in candidates),
            )
            for criterion in COST_CRITERIA
        }
        benefit_transforms = {
            criterion: (
                min(c[6][criterion] for c in candidates),
                max(c[6][criterion] for c in candidates),
            )
            for criterion in BENEFIT_CRITERIA
        }

    scored = []
    for compute, storage, network, cost, qos, cost_values, benefit_values in candidates:
        cost_terms, numerator = _weighted_terms(
            cost_values, request.cost_weights, COST_CRITERIA, cost_transforms
        )
        benefit_terms, denominator = _weighted_terms(
            benefit_values, request.benefit_weights, BENEFIT_CRITERIA, benefit_transforms
        )
        if denominator == 0.0:
            stats.zero_benefit += 1
            continue
        breakdown = ScoreBreakdown(
            ratio=numerator / denominator,
            numerator=numerator,
            denominator=denominator,
            cost_terms=cost_terms,
            benefit_terms=benefit_terms,
        )
        scored.append((breakdown, compute, storage, network, cost, qos))

    if by == "ratio":
        scored.sort(key=lambda e: (e[0].ratio, e[4].total, _combo_key(e[1], e[2], e[3])))
    else:
        scored.sort(key=lambda e: (e[4].total, e[0].ratio, _combo_key(e[1], e[2], e[3])))

    results = [
        ScoredCombination(
            rank_position=position,
            compute=compute,
            storage=storage,
            network=network,
            cost=cost,
            qos=qos,
            breakdown=breakdown,
        )
        for position, (breakdown, compute, storage, network, cost, qos) in enumerate(scored, start=1)
    ]
    stats.returned = len(results)
    return results


def ordered_solutions(
    request: RankRequest,
    catalog: Catalog,
    averages: Iterable[QosAverage],
    stats: RankStats | None = None,
) -> list[ScoredCombination]:
    """Rank all feasible combinations, best (lowest) ratio first.

    Ties are broken by lower total cost, then lexicographic offer keys, so
    the output is fully deterministic for a given request and snapshot.
    """
    return _rank(request, catalog, averages, "ratio", stats)


def rank_by_cost_only(
    request: RankRequest,
    catalog: Catalog,
    averages: Iterable[QosAverage],
    stats: RankStats | None = None,
) -> list[ScoredCombination]:
    """Same pipeline, ordered by total cost alone (QoS ignored for ordering)."""
    return _rank(request, catalog, averages, "cost", stats)
