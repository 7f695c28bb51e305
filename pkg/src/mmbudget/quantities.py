"""Decibel and unit conversions.

Link-budget arithmetic elsewhere in the package is carried as plain floats in
dB/dBm/Hz/m, with the unit in the argument name.  This module holds the
conversions between those and their linear counterparts, plus a small tagged
:class:`Quantity` for callers that want the unit to travel with the value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, UnitMismatchError

SPEED_OF_LIGHT = 299_792_458.0  # m/s

# unit tag -> (dimension, scale to the dimension's base unit).  Logarithmic
# tags carry scale None and are handled explicitly in convert().
_UNITS: dict[str, tuple[str, float | None]] = {
    "ratio": ("gain", 1.0),
    "dB": ("gain", None),
    "W": ("power", 1.0),
    "mW": ("power", 1e-3),
    "dBm": ("power", None),
    "dBW": ("power", None),
    "Hz": ("frequency", 1.0),
    "kHz": ("frequency", 1e3),
    "MHz": ("frequency", 1e6),
    "GHz": ("frequency", 1e9),
    "m": ("length", 1.0),
    "mm": ("length", 1e-3),
    "km": ("length", 1e3),
}


def db_to_linear(value_db: float) -> float:
    """Power ratio for a value in dB."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(ratio: float) -> float:
    """dB value of a strictly positive power ratio."""
    if not ratio > 0:
        raise DomainError(f"power ratio must be > 0, got {ratio!r}")
    return 10.0 * math.log10(ratio)


def dbm_to_mw(value_dbm: float) -> float:
    return db_to_linear(value_dbm)


def mw_to_dbm(value_mw: float) -> float:
    return linear_to_db(value_mw)


def dbm_to_watt(value_dbm: float) -> float:
    return db_to_linear(value_dbm) * 1e-3


def watt_to_dbm(value_w: float) -> float:
    return linear_to_db(value_w * 1e3)


@dataclass(frozen=True)
class Quantity:
    """A scalar tagged with one of the supported unit strings."""

    value: float
    unit: str

    def __post_init__(self):
        if self.unit not in _UNITS:
            raise UnitMismatchError(f"unknown unit {self.unit!r}")
        if not math.isfinite(self.value):
            raise DomainError(f"quantity must be finite, got {self.value!r}")

    @property
    def dimension(self) -> str:
        return _UNITS[self.unit][0]

    def to(self, unit: str) -> "Quantity":
        return convert(self, unit)


def _to_base(q: Quantity) -> float:
    dim, scale = _UNITS[q.unit]
    if scale is not None:
        return q.value * scale
    if q.unit == "dB":
        return db_to_linear(q.value)
    if q.unit == "dBm":
        return dbm_to_watt(q.value)
    if q.unit == "dBW":
        return db_to_linear(q.value)
    raise AssertionError(q.unit)


def _from_base(base: float, unit: str) -> float:
    scale = _UNITS[unit][1]
    if scale is not None:
        return base / scale
    if unit == "dB":
        return linear_to_db(base)
    if unit == "dBm":
        return watt_to_dbm(base)
    if unit == "dBW":
        return linear_to_db(base)
    raise AssertionError(unit)


def convert(q: Quantity, unit: str) -> Quantity:
    """Convert ``q`` to ``unit``.

    Raises
    ------
    UnitMismatchError
        If ``unit`` is unknown or of a different dimension than ``q``.
    """
    if unit not in _UNITS:
        raise UnitMismatchError(f"unknown unit {unit!r}")
    if _UNITS[unit][0] != q.dimension:
        raise UnitMismatchError(
            f"cannot convert {q.unit} ({q.dimension}) to {unit} ({_UNITS[unit][0]})"
        )
    if unit == q.unit:
        return q
    # dB <-> dBm style shifts are exact; avoid the round trip through linear.
    if {q.unit, unit} == {"dBm", "dBW"}:
        shift = -30.0 if q.unit == "dBm" else 30.0
        return Quantity(q.value + shift, unit)
    return Quantity(_from_base(_to_base(q), unit), unit)


def require_positive(name: str, value: float) -> float:
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return value


def require_non_negative(name: str, value: float) -> float:
    if not (math.isfinite(value) and value >= 0):
        raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
    return value


# Display rounding used by table views; CSV output keeps full precision.
def round_db(value: float) -> float:
    return round(value, 1)


def round_se(value: float) -> float:
    return round(value, 2)


def round_mbps(value_bps: float) -> int:
    return int(round(value_bps / 1e6))
