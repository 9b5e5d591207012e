"""Half-up decimal rounding for presentation.

All internal math runs at full precision; values are rounded half-up to two
decimals only when rendered, so 1.125 displays as "1.13" regardless of the
platform's banker's rounding.
"""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal


def round_half_up(value: float, ndigits: int = 2) -> float:
    quantum = Decimal(1).scaleb(-ndigits)
    return float(Decimal(str(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def format_fixed(value: float, ndigits: int = 2) -> str:
    quantum = Decimal(1).scaleb(-ndigits)
    return str(Decimal(str(value)).quantize(quantum, rounding=ROUND_HALF_UP))
