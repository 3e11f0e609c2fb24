"""
Billing usage through tiered price schedules
============================================

Storage and data transfer are rarely priced flat: the first gigabytes
cost one rate, the next band a cheaper one, and so on.  This script
bills a few usage levels through such a schedule, shows what happens
past the end of a bounded schedule, and assembles a full monthly bill
for one compute + storage + network selection.
"""

from decimal import Decimal

from cloudrank.catalog import PriceTier
from cloudrank.money import convert_currency, to_money
from cloudrank.pricing import (
    CostBreakdown,
    UsageExceedsTiers,
    period_cost,
    tiered_cost,
)

# A three-band schedule: the first 50 GB at 10 cents, the next 450 GB at
# 8 cents, anything beyond at 6 cents with no upper bound.
schedule = (
    PriceTier(quota_min_gb=Decimal(0), quota_max_gb=Decimal(50), unit_price_per_gb=Decimal("0.10")),
    PriceTier(quota_min_gb=Decimal(50), quota_max_gb=Decimal(500), unit_price_per_gb=Decimal("0.08")),
    PriceTier(quota_min_gb=Decimal(500), quota_max_gb=None, unit_price_per_gb=Decimal("0.06")),
)

# Billing is marginal: each band charges only the usage that falls inside
# it.  720 GB = 50 at 0.10 + 450 at 0.08 + 220 at 0.06.
for usage in ("0", "25", "50", "720"):
    cost = tiered_cost(schedule, Decimal(usage))
    print(f"{usage:>4s} GB -> {cost} per month")

# A schedule whose last band has an upper bound simply cannot bill more
# than that bound.  Exceeding it is an error, not a silent extrapolation.
capped = (
    PriceTier(quota_min_gb=Decimal(0), quota_max_gb=Decimal(100), unit_price_per_gb=Decimal("0.05")),
)
try:
    tiered_cost(capped, Decimal(101))
except UsageExceedsTiers as exc:
    print(f"\ncapped schedule refused: {exc}")

# Offers quoted in a foreign currency are converted with one rounding at
# the end, so a catalog can mix providers that bill in different money.
usd_price = Decimal("0.048")
aud_rate = Decimal("1.52")
print(f"\nUSD {usd_price}/GB is AUD {convert_currency(usd_price, aud_rate)}/GB at rate {aud_rate}")

# A whole month for one selection: an instance price by the hour, storage
# and network through their schedules.  The breakdown refuses to exist if
# the parts do not sum to the total, so a bill can be trusted at a glance.
compute = period_cost(2, Decimal("0.085"), Decimal(720))
storage = tiered_cost(schedule, Decimal(200))
network = to_money("4.10")
bill = CostBreakdown(
    compute_cost=compute,
    storage_cost=storage,
    network_cost=network,
    total=compute + storage + network,
)
print(f"\nmonthly bill: compute {bill.compute_cost} + storage {bill.storage_cost}"
      f" + network {bill.network_cost} = {bill.total}")
