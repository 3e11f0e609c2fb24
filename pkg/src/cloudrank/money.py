"""Monetary arithmetic helpers.

All prices and costs in this package are ``decimal.Decimal`` values kept at
six fractional digits.  Every arithmetic result is re-quantized through
:func:`to_money` so that intermediate representations never accumulate more
precision than the canonical money grid, and rounding is banker's rounding
(round half to even) throughout.
"""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal, InvalidOperation, localcontext

#: Canonical money quantum: six fractional digits.
MONEY_EXP = Decimal("0.000001")

#: Working precision for products and sums before the final quantize.  High
#: enough that quantities seen in practice (usage in GB, hourly prices, FX
#: rates) multiply without the context itself rounding.
_WORK_PRECISION = 60


class MoneyError(ValueError):
    """Raised when a value cannot be interpreted as a monetary amount."""


def to_money(value: Decimal | int | str) -> Decimal:
    """Quantize ``value`` to six fractional digits, rounding half to even.

    Accepts ``Decimal``, ``int`` or a numeric string.  ``float`` is rejected
    on purpose: binary floats must be converted by the caller through their
    textual representation so the intended decimal value is preserved.
    """
    if isinstance(value, float):
        raise MoneyError("float is not an exact monetary amount; pass Decimal or str")
    try:
        dec = value if isinstance(value, Decimal) else Decimal(value)
    except InvalidOperation as exc:
        raise MoneyError(f"not a monetary amount: {value!r}") from exc
    if not dec.is_finite():
        raise MoneyError(f"not a finite monetary amount: {value!r}")
    with localcontext() as ctx:
        ctx.prec = _WORK_PRECISION
        return dec.quantize(MONEY_EXP, rounding=ROUND_HALF_EVEN)


def money_mul(*factors: Decimal) -> Decimal:
    """Multiply factors at full precision, then quantize the result once."""
    with localcontext() as ctx:
        ctx.prec = _WORK_PRECISION
        product = Decimal(1)
        for factor in factors:
            product *= factor
    return to_money(product)


def money_sum(amounts) -> Decimal:
    """Sum already-quantized amounts.

    Addition of six-digit decimals is exact at working precision, so the
    final quantize only normalizes the exponent.
    """
    with localcontext() as ctx:
        ctx.prec = _WORK_PRECISION
        total = Decimal(0)
        for amount in amounts:
            total += amount
    return to_money(total)


def convert_currency(amount: Decimal, rate: Decimal) -> Decimal:
    """Convert ``amount`` using the multiplicative exchange ``rate``."""
    if rate <= 0:
        raise MoneyError(f"exchange rate must be positive, got {rate}")
    return money_mul(amount, rate)
