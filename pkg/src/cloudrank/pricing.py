"""Cost arithmetic for offer combinations.

Compute capacity bills per instance-hour, storage and network bill through
banded usage schedules (:class:`~cloudrank.catalog.PriceTier`).  A band
bills its unit price only for the usage that falls inside the band, so a
cheaper deep band never re-prices the earlier gigabytes.  Every arithmetic
result is quantized to six fractional digits with banker's rounding; sums
of already-quantized amounts are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Sequence

from .catalog import ComputeOffer, NetworkOffer, PriceTier, StorageOffer
from .money import money_mul, money_sum, to_money

#: Default billing period: hours in a 30-day month.
HOURS_PER_MONTH = Decimal(720)


def _usage_decimal(value, field: str) -> Decimal:
    if isinstance(value, float):
        raise ValueError(f"{field}: pass usage as Decimal, int or str, not float")
    try:
        dec = Decimal(value)
    except (InvalidOperation, TypeError) as exc:
        raise ValueError(f"{field}: not a number: {value!r}") from exc
    if not dec.is_finite() or dec < 0:
        raise ValueError(f"{field}: must be a finite non-negative amount, got {value!r}")
    return dec


@dataclass(frozen=True)
class UsageEstimate:
    """Monthly resource consumption a recommendation is priced against.

    ``storage_gb`` and ``data_out_gb`` must be stated explicitly.  Inbound
    transfer defaults to 1 GB and compute to a single instance running the
    whole month.
    """

    storage_gb: Decimal
    data_out_gb: Decimal
    data_in_gb: Decimal = Decimal(1)
    compute_instances: int = 1
    compute_hours: Decimal = HOURS_PER_MONTH
    period_label: str = "30 days"

    def __post_init__(self) -> None:
        object.__setattr__(self, "storage_gb", _usage_decimal(self.storage_gb, "storage_gb"))
        object.__setattr__(self, "data_out_gb", _usage_decimal(self.data_out_gb, "data_out_gb"))
        object.__setattr__(self, "data_in_gb", _usage_decimal(self.data_in_gb, "data_in_gb"))
        object.__setattr__(self, "compute_hours", _usage_decimal(self.compute_hours, "compute_hours"))
        if isinstance(self.compute_instances, bool) or not isinstance(self.compute_instances, int):
            raise ValueError(f"compute_instances: expected an integer, got {self.compute_instances!r}")
        if self.compute_instances < 0:
            raise ValueError("compute_instances: must not be negative")
        if not isinstance(self.period_label, str) or not self.period_label:
            raise ValueError("period_label: expected a non-empty string")

    @property
    def wants_compute(self) -> bool:
        return self.compute_instances > 0 and self.compute_hours > 0

    @property
    def wants_storage(self) -> bool:
        return self.storage_gb > 0


class UsageExceedsTiers(ValueError):
    """Usage ran past the end of a bounded price schedule.

    Distinct from a malformed-input error: the offer simply cannot bill
    this much usage and must be treated as infeasible for the request.
    """

    def __init__(self, usage_gb: Decimal, limit_gb: Decimal):
        super().__init__(f"usage of {usage_gb} GB exceeds the schedule limit of {limit_gb} GB")
        self.usage_gb = usage_gb
        self.limit_gb = limit_gb


def unit_cost(amount: Decimal, unit_price: Decimal) -> Decimal:
    """amount x unit price, quantized once."""
    return money_mul(amount, unit_price)


def period_cost(instances: int, price_per_hour: Decimal, hours: Decimal) -> Decimal:
    """Cost of running ``instances`` machines for ``hours``: one product, one quantize."""
    if instances < 0:
        raise ValueError("instances must not be negative")
    if hours < 0:
        raise ValueError("hours must not be negative")
    return money_mul(Decimal(instances), price_per_hour, hours)


def tiered_cost(tiers: Sequence[PriceTier], usage_gb: Decimal) -> Decimal:
    """Bill ``usage_gb`` through a banded schedule.

    Each band contributes ``unit_price x usage inside the band`` (quantized
    per band); the band subtotals are then summed exactly.  Usage past the
    end of a bounded schedule raises :class:`UsageExceedsTiers`.
    """
    if usage_gb < 0:
        raise ValueError("usage must not be negative")
    last = tiers[-1]
    if last.quota_max_gb is not None and usage_gb > last.quota_max_gb:
        raise UsageExceedsTiers(usage_gb, last.quota_max_gb)
    parts: list[Decimal] = []
    for tier in tiers:
        upper = usage_gb if tier.quota_max_gb is None else min(usage_gb, tier.quota_max_gb)
        span = upper - tier.quota_min_gb
        if span <= 0:
            continue
        parts.append(unit_cost(span, tier.unit_price_per_gb))
    return money_sum(parts)


@dataclass(frozen=True)
class CostBreakdown:
    """Itemized monthly cost of one combination, in the display currency.

    ``total`` is exactly the sum of the three parts; construction fails if
    it is not.
    """

    compute_cost: Decimal
    storage_cost: Decimal
    network_cost: Decimal
    total: Decimal

    def __post_init__(self) -> None:
        expected = money_sum((self.compute_cost, self.storage_cost, self.network_cost))
        if self.total != expected:
            raise ValueError(f"total {self.total} is not the sum of parts {expected}")

    @classmethod
    def build(cls, compute_cost: Decimal, storage_cost: Decimal, network_cost: Decimal) -> "CostBreakdown":
        return cls(
            compute_cost=to_money(compute_cost),
            storage_cost=to_money(storage_cost),
            network_cost=to_money(network_cost),
            total=money_sum((compute_cost, storage_cost, network_cost)),
        )


def total_cost(
    compute: ComputeOffer | None,
    storage: StorageOffer | None,
    network: NetworkOffer,
    usage: UsageEstimate,
) -> CostBreakdown:
    """Price a combination against a usage estimate.

    ``compute`` or ``storage`` may be ``None`` when the request consumes
    none of that kind; the part then costs 0.  A network offer is always
    required because every deployment moves at least some data.
    """
    if compute is not None and usage.wants_compute:
        compute_cost = period_cost(usage.compute_instances, compute.price_per_hour, usage.compute_hours)
    else:
        compute_cost = to_money(0)
    if storage is not None and usage.wants_storage:
        storage_cost = tiered_cost(storage.tiers, usage.storage_gb)
    else:
        storage_cost = to_money(0)
    network_cost = money_sum(
        (
            tiered_cost(network.inbound_tiers, usage.data_in_gb),
            tiered_cost(network.outbound_tiers, usage.data_out_gb),
        )
    )
    return CostBreakdown.build(compute_cost, storage_cost, network_cost)
