"""Propagation loss: close-in path-loss fits, atmospheric and penetration loss.

The built-in path-loss models are fitted from two anchor distances (100 m and
1 km) per deployment scenario and carrier frequency.  Each fit reproduces its
anchors exactly and interpolates log-linearly in distance between them.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from .errors import ConfigError, DegenerateFitError, DomainError, UnknownMaterialError
from .quantities import require_non_negative

REFERENCE_DISTANCE_M = 1.0


class DeploymentScenario(str, enum.Enum):
    UMA_LOS = "UMa-LOS"
    UMA_NLOS = "UMa-NLOS"
    UMI_SC_LOS = "UMi-StreetCanyon-LOS"
    UMI_SC_NLOS = "UMi-StreetCanyon-NLOS"
    UMI_SO_LOS = "UMi-StreetOpen-LOS"
    UMI_SO_NLOS = "UMi-StreetOpen-NLOS"

    @classmethod
    def parse(cls, text: str) -> "DeploymentScenario":
        key = text.strip().lower().replace("_", "-").replace(" ", "-")
        for member in cls:
            if member.value.lower() == key or member.name.lower().replace("_", "-") == key:
                return member
        raise ConfigError(
            f"unknown scenario {text!r}; expected one of {[m.value for m in cls]}"
        )


# Anchor path losses in dB, keyed by (frequency in GHz, distance in m).
# Columns follow DeploymentScenario declaration order.
_ANCHORS: dict[tuple[float, float], tuple[float, ...]] = {
    (2.6, 100.0): (84.8, 107.5, 83.4, 112.7, 81.9, 105.6),
    (28.0, 100.0): (105.5, 128.2, 104.1, 133.4, 102.6, 126.3),
    (39.0, 100.0): (108.4, 131.1, 107.0, 136.3, 105.5, 129.2),
    (2.6, 1000.0): (104.9, 137.5, 103.2, 144.6, 100.4, 134.5),
    (28.0, 1000.0): (125.5, 158.2, 123.9, 165.3, 121.1, 155.2),
    (39.0, 1000.0): (128.4, 161.1, 126.8, 168.2, 124.0, 158.1),
}

# 39 GHz rows with heavy rain (25 mm/h) and oxygen loss added.
_ANCHORS_RAIN_39GHZ: dict[float, tuple[float, ...]] = {
    100.0: (109.4, 132.1, 108.0, 137.3, 106.5, 139.2),
    1000.0: (136.5, 169.2, 134.9, 176.3, 132.1, 166.2),
}

FREQUENCIES_GHZ = (2.6, 28.0, 39.0)
ANCHOR_DISTANCES_M = (100.0, 1000.0)
HEAVY_RAIN_MM_H = 25.0


def table2_anchor(scenario: DeploymentScenario, frequency_ghz: float, distance_m: float) -> float:
    """Tabulated path loss (dB) without weather, for one anchor cell."""
    col = list(DeploymentScenario).index(scenario)
    return _ANCHORS[(float(frequency_ghz), float(distance_m))][col]


def table2_rain_anchor(scenario: DeploymentScenario, distance_m: float) -> float:
    """Tabulated 39 GHz path loss (dB) including rain and oxygen loss."""
    col = list(DeploymentScenario).index(scenario)
    return _ANCHORS_RAIN_39GHZ[float(distance_m)][col]


@dataclass(frozen=True)
class PathLossModel:
    """Close-in model ``PL(d) = intercept_db + 10 * exponent * log10(d / 1 m)``."""

    scenario: DeploymentScenario | None
    frequency_hz: float
    intercept_db: float
    exponent: float

    def __post_init__(self):
        if not self.exponent > 0:
            raise DomainError(f"path-loss exponent must be > 0, got {self.exponent!r}")
        if not self.intercept_db > 0:
            raise DomainError(f"1 m intercept must be > 0 dB, got {self.intercept_db!r}")
        if not self.frequency_hz > 0:
            raise DomainError(f"frequency must be > 0, got {self.frequency_hz!r}")


def fit_ci_model(
    anchor1: tuple[float, float],
    anchor2: tuple[float, float],
    scenario: DeploymentScenario | None = None,
    frequency_hz: float = 28e9,
) -> PathLossModel:
    """Fit a close-in model through two ``(distance_m, path_loss_db)`` anchors."""
    (d1, pl1), (d2, pl2) = anchor1, anchor2
    if not (d1 > 0 and d2 > 0):
        raise DomainError(f"anchor distances must be > 0, got {d1!r}, {d2!r}")
    if d1 == d2:
        raise DegenerateFitError(f"anchors share the same distance {d1!r} m")
    exponent = (pl2 - pl1) / (10.0 * (math.log10(d2) - math.log10(d1)))
    intercept = pl1 - 10.0 * exponent * math.log10(d1 / REFERENCE_DISTANCE_M)
    return PathLossModel(scenario, frequency_hz, intercept, exponent)


def path_loss(model: PathLossModel, distance_m):
    """Path loss in dB at ``distance_m`` (scalar or array, each >= 1 m)."""
    d = np.asarray(distance_m, dtype=float)
    if np.any(~np.isfinite(d)) or np.any(d < REFERENCE_DISTANCE_M):
        raise DomainError(
            f"distance must be >= {REFERENCE_DISTANCE_M} m (close-in reference), got {distance_m!r}"
        )
    pl = model.intercept_db + 10.0 * model.exponent * np.log10(d / REFERENCE_DISTANCE_M)
    return float(pl) if pl.ndim == 0 else pl


@lru_cache(maxsize=None)
def builtin_models() -> dict[tuple[DeploymentScenario, float], PathLossModel]:
    """The 18 fitted models, keyed by ``(scenario, frequency_ghz)``."""
    models = {}
    for f_ghz in FREQUENCIES_GHZ:
        for scen in DeploymentScenario:
            a = (100.0, table2_anchor(scen, f_ghz, 100.0))
            b = (1000.0, table2_anchor(scen, f_ghz, 1000.0))
            models[(scen, f_ghz)] = fit_ci_model(a, b, scen, f_ghz * 1e9)
    return models


def model_for(scenario: DeploymentScenario, frequency_hz: float) -> PathLossModel:
    """Look up the built-in model for a scenario at one of the fitted carriers."""
    for f_ghz in FREQUENCIES_GHZ:
        if math.isclose(frequency_hz, f_ghz * 1e9, rel_tol=1e-6):
            return builtin_models()[(scenario, f_ghz)]
    raise ConfigError(
        f"no fitted path-loss model for {scenario.value} at {frequency_hz / 1e9:g} GHz; "
        f"available carriers: {', '.join(f'{f:g}' for f in FREQUENCIES_GHZ)} GHz"
    )


def export_models_csv() -> str:
    """CSV of the built-in fits: scenario, frequency_GHz, intercept_dB, exponent."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scenario", "frequency_GHz", "intercept_dB", "exponent"])
    for (scen, f_ghz), m in builtin_models().items():
        w.writerow([scen.value, repr(f_ghz), repr(m.intercept_db), repr(m.exponent)])
    return buf.getvalue()


@dataclass(frozen=True)
class AttenuationModel:
    """Combined rain + oxygen specific attenuation at one carrier."""

    specific_attenuation_db_per_km: float = 0.0
    rain_rate_mm_h: float = 0.0

    def __post_init__(self):
        require_non_negative("specific attenuation", self.specific_attenuation_db_per_km)
        require_non_negative("rain rate", self.rain_rate_mm_h)


NO_WEATHER = AttenuationModel()


def calibrate_heavy_rain_39ghz() -> AttenuationModel:
    """Specific attenuation implied by the 1 km rain rows at 39 GHz.

    Every scenario column adds the same excess at 1 km; the mean is returned.
    The 100 m rows are not consistent with a linear specific attenuation and
    are reported separately by :func:`rain_rows_unmatched`.
    """
    excess = [
        table2_rain_anchor(s, 1000.0) - table2_anchor(s, 39.0, 1000.0) for s in DeploymentScenario
    ]
    return AttenuationModel(sum(excess) / len(excess), HEAVY_RAIN_MM_H)


def rain_rows_unmatched(tol_db: float = 0.05) -> list[tuple[DeploymentScenario, float, float, float]]:
    """Tabulated rain cells that the calibrated linear model does not reproduce.

    Returns ``(scenario, distance_m, tabulated_db, modelled_db)`` tuples.
    """
    atm = calibrate_heavy_rain_39ghz()
    out = []
    for d in ANCHOR_DISTANCES_M:
        for s in DeploymentScenario:
            modelled = table2_anchor(s, 39.0, d) + atmospheric_attenuation(atm, d)
            tab = table2_rain_anchor(s, d)
            if abs(modelled - tab) > tol_db:
                out.append((s, d, tab, modelled))
    return out


def atmospheric_attenuation(model: AttenuationModel, distance_m: float) -> float:
    """Rain + oxygen loss in dB, linear in distance."""
    require_non_negative("distance", distance_m)
    return model.specific_attenuation_db_per_km * distance_m / 1000.0


# Only the concrete value at 28 GHz is attested; glass entries are placeholders
# meant to be overridden from configuration.
DEFAULT_PENETRATION_28GHZ: dict[str, float] = {
    "none": 0.0,
    "regular-glass": 0.0,
    "irr-glass": 0.0,
    "concrete": 117.0,
}


@dataclass(frozen=True)
class PenetrationTable:
    frequency_hz: float = 28e9
    losses_db: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_PENETRATION_28GHZ))

    def __post_init__(self):
        for tag, loss in self.losses_db.items():
            require_non_negative(f"penetration loss for {tag!r}", loss)

    def with_losses(self, **losses_db: float) -> "PenetrationTable":
        merged = dict(self.losses_db)
        merged.update({k.replace("_", "-"): v for k, v in losses_db.items()})
        return PenetrationTable(self.frequency_hz, merged)


def penetration_loss(table: PenetrationTable, material: str) -> float:
    if material == "none":
        return 0.0
    try:
        return float(table.losses_db[material])
    except KeyError:
        raise UnknownMaterialError(
            f"material {material!r} not in penetration table ({sorted(table.losses_db)})"
        ) from None


def total_propagation_loss(
    path_loss_db: float, atmospheric_db: float = 0.0, penetration_db: float = 0.0, blockage_db: float = 0.0
) -> float:
    for name, v in (
        ("path loss", path_loss_db),
        ("atmospheric loss", atmospheric_db),
        ("penetration loss", penetration_db),
        ("blockage loss", blockage_db),
    ):
        require_non_negative(name, v)
    return path_loss_db + atmospheric_db + penetration_db + blockage_db
