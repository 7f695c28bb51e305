"""Figures of merit for a cellular UE and for data converters."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .quantities import require_positive


@dataclass(frozen=True)
class ThroughputRecord:
    """Measured peak downlink throughput for one band (non-CA) or CC combination.

    ``label`` is free-form (a band number, or a CA combination name).
    ``n_cc`` is 1 for non-CA records and the component-carrier count otherwise.
    """

    label: str
    pdlt_bps: float
    b_eff_hz: float
    power_w: float
    n_cc: int = 1

    def __post_init__(self):
        require_positive("PDLT", self.pdlt_bps)
        require_positive("effective bandwidth", self.b_eff_hz)
        require_positive("power", self.power_w)

    @property
    def energy_spectral_efficiency(self) -> float:
        return self.pdlt_bps / (self.b_eff_hz * self.power_w)


MAX_CC = 5


@dataclass(frozen=True)
class UeFomInputs:
    volume_mm3: float
    mass_g: float
    non_ca: tuple[ThroughputRecord, ...] = ()
    ca: tuple[ThroughputRecord, ...] = field(default=())

    def __post_init__(self):
        require_positive("UE volume", self.volume_mm3)
        require_positive("UE mass", self.mass_g)
        for r in self.non_ca:
            if r.n_cc != 1:
                raise DomainError(f"non-CA record {r.label!r} must have n_cc == 1")
        for r in self.ca:
            if not 2 <= r.n_cc <= MAX_CC:
                raise DomainError(f"CA record {r.label!r}: n_cc must be in [2, {MAX_CC}], got {r.n_cc}")


def ue_fom(inp: UeFomInputs) -> float:
    """Cellular UE figure of merit in bit/Hz/J/mm^3/g."""
    total = sum(r.energy_spectral_efficiency for r in inp.non_ca)
    total += sum(r.energy_spectral_efficiency for r in inp.ca)
    return total / (inp.volume_mm3 * inp.mass_g)


@dataclass(frozen=True)
class AdcSpec:
    sndr_db: float
    enob: float
    bandwidth_hz: float
    power_w: float
    sample_rate_hz: float

    def __post_init__(self):
        for name in ("sndr_db", "enob", "bandwidth_hz", "power_w", "sample_rate_hz"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be finite and > 0, got {v!r}")


def fom_schreier(spec: AdcSpec) -> float:
    """SNDR + 10 log10(B / P), B in Hz and P in W."""
    return spec.sndr_db + 10 * math.log10(spec.bandwidth_hz / spec.power_w)


def fom_walden(spec: AdcSpec) -> float:
    """Energy per conversion step in joules."""
    return spec.power_w / (2.0**spec.enob * min(2 * spec.bandwidth_hz, spec.sample_rate_hz))


def enob_from_sndr(sndr_db: float) -> float:
    return (sndr_db - 1.76) / 6.02


def enob_for_walden(power_w: float, fom_j: float, nyquist_rate_hz: float) -> float:
    """Invert the Walden FOM for ENOB."""
    require_positive("power", power_w)
    require_positive("FOM", fom_j)
    require_positive("rate", nyquist_rate_hz)
    return math.log2(power_w / (fom_j * nyquist_rate_hz))
