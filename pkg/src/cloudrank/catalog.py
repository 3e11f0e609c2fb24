"""Offer catalog: providers, datacenter locations, and purchasable units.

A catalog is imported from a JSON document with the top-level keys
``providers``, ``locations``, ``compute``, ``storage``, ``network`` and
``exchange_rates``.  Import validates the whole document before anything is
published: schema violations, broken tier schedules, unknown references and
duplicate identities all reject the document with a message naming the
offending record.  Prices may be quoted in any currency that has an
exchange rate; they are normalized to the display currency (AUD unless
configured otherwise) while importing, so everything downstream works in a
single currency.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Any, Iterable, Mapping, Sequence

from .money import convert_currency, to_money

DEFAULT_DISPLAY_CURRENCY = "AUD"


class CatalogError(ValueError):
    """A catalog document violated the schema or an integrity rule."""


# ===================================================================
# Records
# ===================================================================


@dataclass(frozen=True)
class Provider:
    id: str
    display_name: str


@dataclass(frozen=True)
class Location:
    """A datacenter location with coordinates for distance estimates."""

    id: str
    display_name: str
    latitude: float
    longitude: float


@dataclass(frozen=True)
class PriceTier:
    """One band of a usage-based price schedule.

    ``quota_max_gb`` of ``None`` marks the band as unbounded; only the last
    band of a schedule may be unbounded.  Usage falling inside the band is
    billed at ``unit_price_per_gb``.
    """

    quota_min_gb: Decimal
    quota_max_gb: Decimal | None
    unit_price_per_gb: Decimal


@dataclass(frozen=True)
class ComputeOffer:
    provider: str
    location: str
    service_name: str
    memory_gb: float
    cpu_cores: int
    cpu_speed_ghz: float
    disk_gb: float
    price_per_hour: Decimal

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.provider, self.location, self.service_name)


@dataclass(frozen=True)
class StorageOffer:
    provider: str
    location: str
    service_name: str
    tiers: tuple[PriceTier, ...]
    max_capacity_gb: Decimal | None

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.provider, self.location, self.service_name)


@dataclass(frozen=True)
class NetworkOffer:
    """Data-transfer pricing for one provider at one location."""

    provider: str
    location: str
    inbound_tiers: tuple[PriceTier, ...]
    outbound_tiers: tuple[PriceTier, ...]

    @property
    def key(self) -> tuple[str, str]:
        return (self.provider, self.location)


@dataclass(frozen=True, eq=False)
class Catalog:
    """An immutable, validated snapshot of every importable record."""

    version: int
    display_currency: str
    providers: tuple[Provider, ...]
    locations: tuple[Location, ...]
    compute_offers: tuple[ComputeOffer, ...]
    storage_offers: tuple[StorageOffer, ...]
    network_offers: tuple[NetworkOffer, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_providers_by_id", {p.id: p for p in self.providers})
        object.__setattr__(self, "_locations_by_id", {l.id: l for l in self.locations})

    def provider(self, provider_id: str) -> Provider | None:
        return self._providers_by_id.get(provider_id)  # type: ignore[attr-defined]

    def location(self, location_id: str) -> Location | None:
        return self._locations_by_id.get(location_id)  # type: ignore[attr-defined]

    @property
    def provider_ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.providers)

    @property
    def location_ids(self) -> tuple[str, ...]:
        return tuple(l.id for l in self.locations)


# ===================================================================
# Price schedules
# ===================================================================


def tier_limit(tiers: Sequence[PriceTier]) -> Decimal | None:
    """Largest usage the schedule can bill, ``None`` when unbounded."""
    return tiers[-1].quota_max_gb


def supports_usage(tiers: Sequence[PriceTier], usage_gb: Decimal) -> bool:
    """Whether the schedule covers ``usage_gb`` without running off the end."""
    limit = tier_limit(tiers)
    return limit is None or usage_gb <= limit


def storage_capacity(offer: StorageOffer) -> Decimal | None:
    """Effective storage limit: the tighter of declared capacity and tier end."""
    bounds = [b for b in (offer.max_capacity_gb, tier_limit(offer.tiers)) if b is not None]
    return min(bounds) if bounds else None


# ===================================================================
# Document parsing
# ===================================================================

_TOP_KEYS = {"display_currency", "exchange_rates", "providers", "locations", "compute", "storage", "network"}


def _require_mapping(value: Any, label: str) -> Mapping[str, Any]:
    if not isinstance(value, Mapping):
        raise CatalogError(f"{label}: expected an object, got {type(value).__name__}")
    return value


def _require_list(value: Any, label: str) -> list:
    if not isinstance(value, list):
        raise CatalogError(f"{label}: expected an array, got {type(value).__name__}")
    return value


def _field(record: Mapping[str, Any], name: str, label: str) -> Any:
    if name not in record:
        raise CatalogError(f"{label}: missing field {name!r}")
    return record[name]


def _check_fields(record: Mapping[str, Any], allowed: set[str], label: str) -> None:
    unknown = sorted(set(record) - allowed)
    if unknown:
        raise CatalogError(f"{label}: unknown field(s) {', '.join(repr(u) for u in unknown)}")


def _string(value: Any, label: str) -> str:
    if not isinstance(value, str) or not value.strip():
        raise CatalogError(f"{label}: expected a non-empty string, got {value!r}")
    return value


def _number(value: Any, label: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float, Decimal)):
        raise CatalogError(f"{label}: expected a number, got {value!r}")
    out = float(value)
    if out != out or out in (float("inf"), float("-inf")):
        raise CatalogError(f"{label}: expected a finite number, got {value!r}")
    return out


def _decimal(value: Any, label: str) -> Decimal:
    """Exact decimal from a JSON number.

    Text parsed through :func:`parse_catalog` arrives with fractional numbers
    already as ``Decimal``.  Floats only appear when a caller hands in an
    in-memory document; they are read through ``repr`` so the shortest
    decimal form of the float is used.
    """
    if isinstance(value, bool):
        raise CatalogError(f"{label}: expected a number, got {value!r}")
    if isinstance(value, Decimal):
        dec = value
    elif isinstance(value, int):
        dec = Decimal(value)
    elif isinstance(value, float):
        dec = Decimal(repr(value))
    else:
        raise CatalogError(f"{label}: expected a number, got {value!r}")
    if not dec.is_finite():
        raise CatalogError(f"{label}: expected a finite number, got {value!r}")
    return dec


def _int(value: Any, label: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise CatalogError(f"{label}: expected an integer, got {value!r}")
    return value


class _Rates:
    """Exchange-rate lookup into the display currency."""

    def __init__(self, display_currency: str, rates: Mapping[str, Decimal]):
        self.display_currency = display_currency
        self.rates = rates

    def normalize(self, amount: Decimal, currency: str, label: str) -> Decimal:
        if currency == self.display_currency:
            return to_money(amount)
        rate = self.rates.get(currency)
        if rate is None:
            raise CatalogError(
                f"{label}: no exchange rate for currency {currency!r} "
                f"into {self.display_currency!r}"
            )
        return convert_currency(amount, rate)


def _parse_tiers(value: Any, rates: _Rates, currency: str, label: str) -> tuple[PriceTier, ...]:
    entries = _require_list(value, label)
    if not entries:
        raise CatalogError(f"{label}: a price schedule needs at least one tier")
    tiers: list[PriceTier] = []
    for i, raw in enumerate(entries):
        tier_label = f"{label} tier[{i}]"
        record = _require_mapping(raw, tier_label)
        _check_fields(record, {"quota_min_gb", "quota_max_gb", "unit_price_per_gb", "currency"}, tier_label)
        quota_min = _decimal(_field(record, "quota_min_gb", tier_label), f"{tier_label}.quota_min_gb")
        raw_max = _field(record, "quota_max_gb", tier_label)
        quota_max = None if raw_max is None else _decimal(raw_max, f"{tier_label}.quota_max_gb")
        price = _decimal(_field(record, "unit_price_per_gb", tier_label), f"{tier_label}.unit_price_per_gb")
        tier_currency = record.get("currency", currency)
        if price < 0:
            raise CatalogError(f"{tier_label}: unit price must not be negative")
        tiers.append(
            PriceTier(
                quota_min_gb=quota_min,
                quota_max_gb=quota_max,
                unit_price_per_gb=rates.normalize(price, _string(tier_currency, f"{tier_label}.currency"), tier_label),
            )
        )

    # Schedule integrity: starts at zero, contiguous, strictly increasing,
    # unbounded only in last position.
    if tiers[0].quota_min_gb != 0:
        raise CatalogError(f"{label}: first tier must start at 0 GB")
    for i, tier in enumerate(tiers):
        if tier.quota_max_gb is None:
            if i != len(tiers) - 1:
                raise CatalogError(f"{label} tier[{i}]: only the last tier may be unbounded")
            continue
        if tier.quota_max_gb <= tier.quota_min_gb:
            raise CatalogError(f"{label} tier[{i}]: quota_max_gb must exceed quota_min_gb")
        if i + 1 < len(tiers) and tiers[i + 1].quota_min_gb != tier.quota_max_gb:
            raise CatalogError(
                f"{label} tier[{i + 1}]: quota_min_gb must equal the previous tier's quota_max_gb"
            )
    return tuple(tiers)


def parse_catalog(
    source: str | bytes | Mapping[str, Any],
    *,
    display_currency: str | None = None,
    version: int = 1,
) -> Catalog:
    """Parse and validate a catalog document.

    ``source`` is JSON text (preferred: fractional prices are read exactly)
    or an already-decoded mapping.  Raises :class:`CatalogError` on the
    first violation found; the catalog is only constructed when the whole
    document is sound.
    """
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        try:
            document = json.loads(source, parse_float=Decimal)
        except json.JSONDecodeError as exc:
            raise CatalogError(f"catalog document is not valid JSON: {exc}") from exc
    else:
        document = source
    document = _require_mapping(document, "catalog document")
    _check_fields(dict(document), _TOP_KEYS, "catalog document")

    if display_currency is None:
        display_currency = _string(
            document.get("display_currency", DEFAULT_DISPLAY_CURRENCY), "display_currency"
        )

    raw_rates = _require_mapping(document.get("exchange_rates", {}), "exchange_rates")
    rates: dict[str, Decimal] = {}
    for code, raw_rate in raw_rates.items():
        rate = _decimal(raw_rate, f"exchange_rates[{code!r}]")
        if rate <= 0:
            raise CatalogError(f"exchange_rates[{code!r}]: rate must be positive")
        rates[_string(code, "exchange_rates key")] = rate
    if rates.get(display_currency, Decimal(1)) != 1:
        raise CatalogError(
            f"exchange_rates[{display_currency!r}]: display currency rate must be 1"
        )
    lookup = _Rates(display_currency, rates)

    providers: list[Provider] = []
    for i, raw in enumerate(_require_list(_field(document, "providers", "catalog document"), "providers")):
        label = f"providers[{i}]"
        record = _require_mapping(raw, label)
        _check_fields(record, {"id", "display_name"}, label)
        providers.append(
            Provider(
                id=_string(_field(record, "id", label), f"{label}.id"),
                display_name=_string(_field(record, "display_name", label), f"{label}.display_name"),
            )
        )
    _reject_duplicates((p.id for p in providers), "provider")

    locations: list[Location] = []
    for i, raw in enumerate(_require_list(_field(document, "locations", "catalog document"), "locations")):
        label = f"locations[{i}]"
        record = _require_mapping(raw, label)
        _check_fields(record, {"id", "display_name", "latitude", "longitude"}, label)
        latitude = _number(_field(record, "latitude", label), f"{label}.latitude")
        longitude = _number(_field(record, "longitude", label), f"{label}.longitude")
        if not -90.0 <= latitude <= 90.0:
            raise CatalogError(f"{label}.latitude: {latitude} outside [-90, 90]")
        if not -180.0 <= longitude <= 180.0:
            raise CatalogError(f"{label}.longitude: {longitude} outside [-180, 180]")
        locations.append(
            Location(
                id=_string(_field(record, "id", label), f"{label}.id"),
                display_name=_string(_field(record, "display_name", label), f"{label}.display_name"),
                latitude=latitude,
                longitude=longitude,
            )
        )
    _reject_duplicates((l.id for l in locations), "location")

    provider_ids = {p.id for p in providers}
    location_ids = {l.id for l in locations}

    def _check_refs(provider: str, location: str, label: str) -> None:
        if provider not in provider_ids:
            raise CatalogError(f"{label}: unknown provider {provider!r}")
        if location not in location_ids:
            raise CatalogError(f"{label}: unknown location {location!r}")

    compute: list[ComputeOffer] = []
    for i, raw in enumerate(_require_list(document.get("compute", []), "compute")):
        label = f"compute[{i}]"
        record = _require_mapping(raw, label)
        _check_fields(
            record,
            {"provider", "location", "service_name", "memory_gb", "cpu_cores",
             "cpu_speed_ghz", "disk_gb", "price_per_hour", "currency"},
            label,
        )
        offer = ComputeOffer(
            provider=_string(_field(record, "provider", label), f"{label}.provider"),
            location=_string(_field(record, "location", label), f"{label}.location"),
            service_name=_string(_field(record, "service_name", label), f"{label}.service_name"),
            memory_gb=_number(_field(record, "memory_gb", label), f"{label}.memory_gb"),
            cpu_cores=_int(_field(record, "cpu_cores", label), f"{label}.cpu_cores"),
            cpu_speed_ghz=_number(_field(record, "cpu_speed_ghz", label), f"{label}.cpu_speed_ghz"),
            disk_gb=_number(_field(record, "disk_gb", label), f"{label}.disk_gb"),
            price_per_hour=lookup.normalize(
                _decimal(_field(record, "price_per_hour", label), f"{label}.price_per_hour"),
                _string(record.get("currency", display_currency), f"{label}.currency"),
                label,
            ),
        )
        detailed = f"compute offer '{offer.provider}/{offer.location}/{offer.service_name}'"
        _check_refs(offer.provider, offer.location, detailed)
        if offer.memory_gb <= 0:
            raise CatalogError(f"{detailed}: memory_gb must be positive")
        if offer.cpu_cores < 1:
            raise CatalogError(f"{detailed}: cpu_cores must be at least 1")
        if offer.cpu_speed_ghz <= 0:
            raise CatalogError(f"{detailed}: cpu_speed_ghz must be positive")
        if offer.disk_gb < 0:
            raise CatalogError(f"{detailed}: disk_gb must not be negative")
        if offer.price_per_hour < 0:
            raise CatalogError(f"{detailed}: price_per_hour must not be negative")
        compute.append(offer)
    _reject_duplicates((f"{o.provider}/{o.location}/{o.service_name}" for o in compute), "compute offer")

    storage: list[StorageOffer] = []
    for i, raw in enumerate(_require_list(document.get("storage", []), "storage")):
        label = f"storage[{i}]"
        record = _require_mapping(raw, label)
        _check_fields(
            record,
            {"provider", "location", "service_name", "max_capacity_gb", "tiers", "currency"},
            label,
        )
        provider = _string(_field(record, "provider", label), f"{label}.provider")
        location = _string(_field(record, "location", label), f"{label}.location")
        service_name = _string(_field(record, "service_name", label), f"{label}.service_name")
        detailed = f"storage offer '{provider}/{location}/{service_name}'"
        _check_refs(provider, location, detailed)
        raw_capacity = record.get("max_capacity_gb")
        capacity = None if raw_capacity is None else _decimal(raw_capacity, f"{detailed}.max_capacity_gb")
        if capacity is not None and capacity <= 0:
            raise CatalogError(f"{detailed}: max_capacity_gb must be positive when present")
        currency = _string(record.get("currency", display_currency), f"{detailed}.currency")
        storage.append(
            StorageOffer(
                provider=provider,
                location=location,
                service_name=service_name,
                tiers=_parse_tiers(_field(record, "tiers", detailed), lookup, currency, detailed),
                max_capacity_gb=capacity,
            )
        )
    _reject_duplicates((f"{o.provider}/{o.location}/{o.service_name}" for o in storage), "storage offer")

    network: list[NetworkOffer] = []
    for i, raw in enumerate(_require_list(document.get("network", []), "network")):
        label = f"network[{i}]"
        record = _require_mapping(raw, label)
        _check_fields(record, {"provider", "location", "inbound_tiers", "outbound_tiers", "currency"}, label)
        provider = _string(_field(record, "provider", label), f"{label}.provider")
        location = _string(_field(record, "location", label), f"{label}.location")
        detailed = f"network offer '{provider}/{location}'"
        _check_refs(provider, location, detailed)
        currency = _string(record.get("currency", display_currency), f"{detailed}.currency")
        network.append(
            NetworkOffer(
                provider=provider,
                location=location,
                inbound_tiers=_parse_tiers(_field(record, "inbound_tiers", detailed), lookup, currency, f"{detailed} inbound"),
                outbound_tiers=_parse_tiers(_field(record, "outbound_tiers", detailed), lookup, currency, f"{detailed} outbound"),
            )
        )
    _reject_duplicates((f"{o.provider}/{o.location}" for o in network), "network offer")

    return Catalog(
        version=version,
        display_currency=display_currency,
        providers=tuple(providers),
        locations=tuple(locations),
        compute_offers=tuple(compute),
        storage_offers=tuple(storage),
        network_offers=tuple(network),
    )


def _reject_duplicates(keys: Iterable[str], kind: str) -> None:
    seen: set[str] = set()
    for key in keys:
        if key in seen:
            raise CatalogError(f"duplicate {kind} {key!r}")
        seen.add(key)


# ===================================================================
# Filters
# ===================================================================


def filter_compute(
    catalog: Catalog,
    providers: Sequence[str] = (),
    locations: Sequence[str] = (),
    min_memory_gb: float = 0.0,
    max_memory_gb: float | None = None,
) -> list[ComputeOffer]:
    """Compute offers matching provider/location sets and memory bounds.

    Empty provider or location sequences impose no restriction.  Memory
    bounds are inclusive on both ends.
    """
    wanted_providers = set(providers)
    wanted_locations = set(locations)
    out = []
    for offer in catalog.compute_offers:
        if wanted_providers and offer.provider not in wanted_providers:
            continue
        if wanted_locations and offer.location not in wanted_locations:
            continue
        if offer.memory_gb < min_memory_gb:
            continue
        if max_memory_gb is not None and offer.memory_gb > max_memory_gb:
            continue
        out.append(offer)
    return out


def filter_storage(
    catalog: Catalog,
    providers: Sequence[str] = (),
    locations: Sequence[str] = (),
    usage_gb: Decimal = Decimal(0),
) -> list[StorageOffer]:
    """Storage offers that match the sets and can hold ``usage_gb``."""
    wanted_providers = set(providers)
    wanted_locations = set(locations)
    out = []
    for offer in catalog.storage_offers:
        if wanted_providers and offer.provider not in wanted_providers:
            continue
        if wanted_locations and offer.location not in wanted_locations:
            continue
        capacity = storage_capacity(offer)
        if capacity is not None and usage_gb > capacity:
            continue
        out.append(offer)
    return out


def filter_network(
    catalog: Catalog,
    providers: Sequence[str] = (),
    locations: Sequence[str] = (),
    data_in_gb: Decimal = Decimal(0),
    data_out_gb: Decimal = Decimal(0),
) -> list[NetworkOffer]:
    """Network offers whose schedules cover the requested transfer volumes."""
    wanted_providers = set(providers)
    wanted_locations = set(locations)
    out = []
    for offer in catalog.network_offers:
        if wanted_providers and offer.provider not in wanted_providers:
            continue
        if wanted_locations and offer.location not in wanted_locations:
            continue
        if not supports_usage(offer.inbound_tiers, data_in_gb):
            continue
        if not supports_usage(offer.outbound_tiers, data_out_gb):
            continue
        out.append(offer)
    return out


# ===================================================================
# Versioned store
# ===================================================================


class CatalogStore:
    """Holds the current catalog snapshot and hands out monotonic versions.

    Imports are atomic: a document is fully parsed and validated before the
    snapshot pointer moves, so readers either see the previous catalog or
    the complete new one.  A rejected import leaves the store untouched.
    """

    def __init__(self, display_currency: str | None = None):
        self._display_currency = display_currency
        self._lock = threading.Lock()
        self._current: Catalog | None = None
        self._version = 0

    @property
    def current(self) -> Catalog | None:
        return self._current

    @property
    def version(self) -> int:
        return self._version

    def import_document(self, source: str | bytes | Mapping[str, Any]) -> Catalog:
        with self._lock:
            catalog = parse_catalog(
                source,
                display_currency=self._display_currency,
                version=self._version + 1,
            )
            self._current = catalog
            self._version = catalog.version
            return catalog

    def restore(self, catalog: Catalog) -> None:
        """Install a previously parsed snapshot (startup from disk)."""
        with self._lock:
            self._current = catalog
            self._version = max(self._version, catalog.version)
