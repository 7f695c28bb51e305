"""SNR to spectral efficiency, and spectral efficiency to throughput."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError
from .quantities import require_non_negative, require_positive

SE_CAP_256QAM = 8.0


class SeMode(str, enum.Enum):
    SHANNON = "shannon"
    SHANNON_WITH_BACKOFF = "shannon-with-backoff"
    TABLE_INJECTED = "table-injected"


@dataclass(frozen=True)
class SeMapping:
    """How SNR after beamforming becomes bits/s/Hz.

    ``injected`` is the spectral efficiency used verbatim in table-injected
    mode.  It may be left as None when the caller resolves it later (the
    scenario evaluator looks it up from the built-in tables).
    """

    mode: SeMode = SeMode.SHANNON
    backoff_db: float = 0.0
    se_cap: float = SE_CAP_256QAM
    injected: float | None = None

    def __post_init__(self):
        require_non_negative("SNR back-off", self.backoff_db)
        if not self.se_cap > 0:
            raise DomainError(f"SE cap must be > 0, got {self.se_cap!r}")
        if self.injected is not None:
            require_non_negative("injected SE", self.injected)

    @classmethod
    def from_flag(cls, flag: str, se_cap: float = SE_CAP_256QAM) -> "SeMapping":
        """Parse ``shannon``, ``backoff:<dB>`` or ``table``."""
        flag = flag.strip().lower()
        if flag == "shannon":
            return cls(SeMode.SHANNON, 0.0, se_cap)
        if flag in ("table", "table-injected"):
            return cls(SeMode.TABLE_INJECTED, 0.0, se_cap)
        if flag.startswith("backoff:"):
            try:
                delta = float(flag.split(":", 1)[1])
            except ValueError:
                raise DomainError(f"bad back-off value in {flag!r}") from None
            return cls(SeMode.SHANNON_WITH_BACKOFF, delta, se_cap)
        raise DomainError(f"unknown SE mode {flag!r}; expected shannon, backoff:<dB> or table")


def spectral_efficiency(snr_after_bf_db: float, m: SeMapping = SeMapping()) -> float:
    if m.mode is SeMode.TABLE_INJECTED:
        if m.injected is None:
            raise DomainError("table-injected SE mapping has no injected value")
        return m.injected
    backoff = m.backoff_db if m.mode is SeMode.SHANNON_WITH_BACKOFF else 0.0
    se = math.log2(1.0 + 10.0 ** ((snr_after_bf_db - backoff) / 10.0))
    return min(se, m.se_cap)


@dataclass(frozen=True)
class RateConfig:
    bandwidth_hz: float
    overhead: float = 0.2
    n_layers: int = 1

    def __post_init__(self):
        require_positive("bandwidth", self.bandwidth_hz)
        if not 0.0 <= self.overhead < 1.0:
            raise DomainError(f"overhead must be in [0, 1), got {self.overhead!r}")
        if self.n_layers < 1:
            raise DomainError(f"n_layers must be >= 1, got {self.n_layers!r}")


def throughput(se: float, cfg: RateConfig) -> float:
    """Bits/s delivered at ``se`` bits/s/Hz over ``cfg``."""
    require_non_negative("spectral efficiency", se)
    return se * cfg.bandwidth_hz * (1.0 - cfg.overhead) * cfg.n_layers


def aggregate_ca(carriers: Sequence[tuple[float, float]], overhead: float = 0.2, n_layers: int = 1) -> float:
    """Sum throughput over ``(bandwidth_hz, se)`` component carriers."""
    if not carriers:
        raise DomainError("carrier aggregation needs at least one carrier")
    return sum(throughput(se, RateConfig(bw, overhead, n_layers)) for bw, se in carriers)
