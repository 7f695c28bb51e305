"""EIRP rules, receive array gain, thermal noise and the SNR chain."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .quantities import require_non_negative, require_positive

THERMAL_NOISE_DBM_PER_HZ = -174.0  # kT at 290 K, rounded as used for the tables


class PaArchitecture(str, enum.Enum):
    SINGLE_SPLIT_PA = "single-split-pa"
    PER_ELEMENT_PA = "per-element-pa"


@dataclass(frozen=True)
class ArrayConfig:
    n_ant: int
    p_pa_dbm: float
    element_gain_dbi: float = 5.0
    pa_architecture: PaArchitecture = PaArchitecture.PER_ELEMENT_PA

    def __post_init__(self):
        if self.n_ant < 1:
            raise DomainError(f"n_ant must be >= 1, got {self.n_ant!r}")
        if not math.isfinite(self.element_gain_dbi):
            raise DomainError("element gain must be finite")


@dataclass(frozen=True)
class ReceiverSpec:
    front_end_loss_db: float = 4.0
    noise_figure_db: float = 7.0
    n_rx_elements: int = 8
    element_gain_dbi: float = 5.0

    def __post_init__(self):
        require_non_negative("front-end loss", self.front_end_loss_db)
        require_non_negative("noise figure", self.noise_figure_db)
        if self.n_rx_elements < 1:
            raise DomainError(f"n_rx_elements must be >= 1, got {self.n_rx_elements!r}")


@dataclass(frozen=True)
class SnrChain:
    rx_power_dbm: float
    thermal_noise_dbm: float
    snr_before_bf_db: float
    array_gain_db: float
    snr_after_bf_db: float


def eirp(cfg: ArrayConfig) -> float:
    """Transmit EIRP in dBm, element gain excluded.

    A single PA split over ``n_ant`` elements gains only the coherent
    combining term; one PA per element adds the power-summing term as well.
    """
    if cfg.pa_architecture is PaArchitecture.SINGLE_SPLIT_PA:
        return cfg.p_pa_dbm + 10 * math.log10(cfg.n_ant)
    return cfg.p_pa_dbm + 20 * math.log10(cfg.n_ant)


def max_pa_power(eirp_limit_dbm: float, n_ant: int) -> float:
    """Largest per-element PA output that keeps a per-element-PA array under ``eirp_limit_dbm``."""
    if n_ant < 1:
        raise DomainError(f"n_ant must be >= 1, got {n_ant!r}")
    return eirp_limit_dbm - 20 * math.log10(n_ant)


def bs_eirp_from_psd(psd_limit_dbm: float, ref_bw_hz: float, bw_hz: float) -> float:
    """Scale a per-reference-bandwidth EIRP limit to ``bw_hz``."""
    require_positive("reference bandwidth", ref_bw_hz)
    require_positive("bandwidth", bw_hz)
    return psd_limit_dbm + 10 * math.log10(bw_hz / ref_bw_hz)


def rx_array_gain(n_elements: int, element_gain_dbi: float) -> float:
    if n_elements < 1:
        raise DomainError(f"n_elements must be >= 1, got {n_elements!r}")
    return 10 * math.log10(n_elements) + element_gain_dbi


def thermal_noise(bw_hz: float) -> float:
    require_positive("bandwidth", bw_hz)
    return THERMAL_NOISE_DBM_PER_HZ + 10 * math.log10(bw_hz)


def link_snr(eirp_dbm: float, total_loss_db: float, bw_hz: float, rx: ReceiverSpec) -> SnrChain:
    rx_power = eirp_dbm - total_loss_db
    noise = thermal_noise(bw_hz)
    before = rx_power - noise
    gain = rx_array_gain(rx.n_rx_elements, rx.element_gain_dbi)
    after = before - rx.front_end_loss_db + gain - rx.noise_figure_db
    return SnrChain(rx_power, noise, before, gain, after)
