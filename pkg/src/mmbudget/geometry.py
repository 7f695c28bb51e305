"""Antenna and BF-module geometry, UE layout rules, and frequency-plan checks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DomainError, LayoutError
from .quantities import SPEED_OF_LIGHT, require_non_negative, require_positive

# --------------------------------------------------------------------------
# Substrate and wavelength
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SubstrateSpec:
    epsilon_r: float
    width_mm: float
    height_mm: float

    def __post_init__(self):
        if not self.epsilon_r >= 1:
            raise DomainError(f"epsilon_r must be >= 1, got {self.epsilon_r!r}")
        require_positive("conductor width", self.width_mm)
        require_positive("substrate thickness", self.height_mm)


def _eps_eff_narrow(er: float, w_over_h: float) -> float:
    # W/H < 1 branch
    return (er + 1) / 2 + (er - 1) / 2 * (
        1 / math.sqrt(1 + 12 / w_over_h) + 0.04 * (1 - w_over_h) ** 2
    )


def _eps_eff_wide(er: float, w_over_h: float) -> float:
    # W/H >= 1 branch
    return (er + 1) / 2 + (er - 1) / (2 * math.sqrt(1 + 12 / w_over_h))


def effective_dielectric_constant(s: SubstrateSpec) -> float:
    """Quasi-static effective permittivity of a microstrip on ``s``."""
    w_over_h = s.width_mm / s.height_mm
    if w_over_h < 1:
        return _eps_eff_narrow(s.epsilon_r, w_over_h)
    return _eps_eff_wide(s.epsilon_r, w_over_h)


def effective_wavelength(frequency_hz: float, epsilon_eff: float = 1.0) -> float:
    """Guided wavelength in metres."""
    require_positive("frequency", frequency_hz)
    if not epsilon_eff >= 1:
        raise DomainError(f"effective dielectric constant must be >= 1, got {epsilon_eff!r}")
    return SPEED_OF_LIGHT / (frequency_hz * math.sqrt(epsilon_eff))


def free_space_wavelength(frequency_hz: float) -> float:
    return effective_wavelength(frequency_hz, 1.0)


def max_spacing_ratio(theta_max_deg: float) -> float:
    """Largest element spacing d/lambda0 free of grating lobes when steering to theta_max."""
    if not 0.0 <= theta_max_deg <= 90.0:
        raise DomainError(f"steering angle must be in [0, 90] degrees, got {theta_max_deg!r}")
    if theta_max_deg == 90.0:
        return 1.0
    return 1.0 / (1.0 + math.cos(math.radians(theta_max_deg)))


def isolation_threshold_mm(frequency_hz: float, wavelengths: float = 1.5) -> float:
    """Minimum BF-module clearance, ``wavelengths`` free-space wavelengths, in mm."""
    return wavelengths * free_space_wavelength(frequency_hz) * 1e3


# --------------------------------------------------------------------------
# Stack-up
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class StackUp:
    """Layer thicknesses of a BF module in mm."""

    h_ant: float = 0.4
    h_bump: float = 0.05
    h_die: float = 0.254
    h_pcb: float = 0.39
    h_connector: float = 0.4

    def __post_init__(self):
        for name in ("h_ant", "h_bump", "h_die", "h_pcb", "h_connector"):
            require_non_negative(name, getattr(self, name))


def stackup_thickness(s: StackUp) -> float:
    return s.h_ant + s.h_bump + s.h_die + s.h_pcb + s.h_connector


# --------------------------------------------------------------------------
# Validation reports
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    modules: tuple[int, ...] = ()


@dataclass
class ValidationReport:
    subject: str
    violations: list[Violation] = field(default_factory=list)
    notes: dict[str, float | str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def records(self) -> list[dict]:
        return [
            {"kind": v.kind, "message": v.message, "modules": list(v.modules)}
            for v in self.violations
        ]

    def render(self) -> str:
        lines = [f"{self.subject}: {'PASS' if self.ok else 'FAIL'}"]
        for k, v in self.notes.items():
            lines.append(f"  note {k}: {v}")
        for v in self.violations:
            lines.append(f"  violation [{v.kind}] {v.message}")
        return "\n".join(lines)


# --------------------------------------------------------------------------
# UE layout
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BfModulePlacement:
    """A BF module footprint; ``center`` is (x, y) in mm, x across the width."""

    id: int
    center: tuple[float, float]
    width: float = 25.0
    length: float = 18.0

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        cx, cy = self.center
        return (cx - self.width / 2, cy - self.length / 2, cx + self.width / 2, cy + self.length / 2)


@dataclass(frozen=True)
class UeLayout:
    """Housing size (height, width) in mm plus module placements."""

    housing: tuple[float, float]
    placements: tuple[BfModulePlacement, ...]
    carrier_frequency_hz: float = 28e9
    min_isolation_mm: float = 16.0

    def __post_init__(self):
        object.__setattr__(self, "placements", tuple(self.placements))

    @property
    def module_ids(self) -> tuple[int, ...]:
        return tuple(p.id for p in self.placements)

    def translated(self, dx: float, dy: float) -> "UeLayout":
        moved = tuple(
            BfModulePlacement(p.id, (p.center[0] + dx, p.center[1] + dy), p.width, p.length)
            for p in self.placements
        )
        return UeLayout(self.housing, moved, self.carrier_frequency_hz, self.min_isolation_mm)


def clearance_mm(a: BfModulePlacement, b: BfModulePlacement) -> float:
    """Edge-to-edge distance between two module rectangles (0 if they touch or overlap)."""
    ax0, ay0, ax1, ay1 = a.bounds
    bx0, by0, bx1, by1 = b.bounds
    dx = max(bx0 - ax1, ax0 - bx1, 0.0)
    dy = max(by0 - ay1, ay0 - by1, 0.0)
    return math.hypot(dx, dy)


def coverage_zones(housing: tuple[float, float]) -> dict[str, tuple[float, float, float, float]]:
    """Four corner zones and a central zone, each quarter-width by quarter-height."""
    height, width = housing
    zw, zh = width / 4, height / 4
    return {
        "bottom-left": (0.0, 0.0, zw, zh),
        "bottom-right": (width - zw, 0.0, width, zh),
        "top-left": (0.0, height - zh, zw, height),
        "top-right": (width - zw, height - zh, width, height),
        "center": ((width - zw) / 2, (height - zh) / 2, (width + zw) / 2, (height + zh) / 2),
    }


def _check_well_formed(layout: UeLayout) -> None:
    height, width = layout.housing
    if not (height > 0 and width > 0):
        raise LayoutError(f"housing dimensions must be > 0, got {layout.housing!r}")
    if not layout.min_isolation_mm > 0:
        raise LayoutError(f"min_isolation must be > 0, got {layout.min_isolation_mm!r}")
    seen = set()
    for p in layout.placements:
        if p.id in seen:
            raise LayoutError(f"duplicate module id {p.id}")
        seen.add(p.id)
        if not (p.width > 0 and p.length > 0):
            raise LayoutError(f"module {p.id}: footprint must be > 0, got {p.width}x{p.length}")
        if not all(math.isfinite(c) for c in p.center):
            raise LayoutError(f"module {p.id}: non-finite center {p.center!r}")


def validate_layout(
    layout: UeLayout,
    min_modules: int = 5,
    required_zones: Iterable[str] | None = None,
) -> ValidationReport:
    """Check isolation, containment, module count and corner/center coverage.

    Raises
    ------
    LayoutError
        If the layout itself is malformed (duplicate ids, empty footprints...).
    """
    _check_well_formed(layout)
    report = ValidationReport("layout")
    height, width = layout.housing
    pl = sorted(layout.placements, key=lambda p: p.id)

    for a, b in itertools.combinations(pl, 2):
        c = clearance_mm(a, b)
        if c < layout.min_isolation_mm:
            report.violations.append(
                Violation(
                    "isolation",
                    f"modules {a.id} and {b.id}: clearance {c:.2f} mm < {layout.min_isolation_mm:g} mm",
                    (a.id, b.id),
                )
            )

    for p in pl:
        x0, y0, x1, y1 = p.bounds
        if x0 < 0 or y0 < 0 or x1 > width or y1 > height:
            report.violations.append(
                Violation("containment", f"module {p.id} extends outside the {height:g}x{width:g} mm housing", (p.id,))
            )

    if len(pl) < min_modules:
        report.violations.append(
            Violation("count", f"{len(pl)} modules placed, at least {min_modules} required")
        )

    zones = coverage_zones(layout.housing)
    wanted = list(zones) if required_zones is None else list(required_zones)
    for name in wanted:
        zx0, zy0, zx1, zy1 = zones[name]
        if not any(zx0 <= p.center[0] <= zx1 and zy0 <= p.center[1] <= zy1 for p in pl):
            report.violations.append(Violation("coverage", f"no module centered in the {name} zone"))

    if pl:
        report.notes["min_clearance_mm"] = round(
            min((clearance_mm(a, b) for a, b in itertools.combinations(pl, 2)), default=math.inf), 3
        )
    report.notes["module_count"] = len(pl)
    return report


def fig5_layout() -> UeLayout:
    """Eight 25x18 mm modules in a 160x80 mm handset.

    Modules 1-2 sit in the top corners, 7-8 in the bottom corners, 5 in the
    centre and 3, 4, 6 along the long edges.  Edge-to-edge clearances are all
    at least 16 mm.
    """
    placements = (
        BfModulePlacement(1, (12.5, 151.0)),
        BfModulePlacement(2, (67.5, 151.0)),
        BfModulePlacement(3, (12.5, 114.0)),
        BfModulePlacement(4, (67.5, 114.0)),
        BfModulePlacement(5, (40.0, 80.0)),
        BfModulePlacement(6, (67.5, 46.0)),
        BfModulePlacement(7, (12.5, 9.0)),
        BfModulePlacement(8, (67.5, 9.0)),
    )
    return UeLayout((160.0, 80.0), placements, 28e9, 16.0)


# --------------------------------------------------------------------------
# Frequency plan
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FrequencyPlan:
    rf_band_hz: tuple[float, float]
    if_center_hz: float
    control_hz: float
    ref_clock_hz: float
    protected_bands_hz: tuple[tuple[float, float], ...] = ()
    if_bandwidth_hz: float = 200e6

    def __post_init__(self):
        lo, hi = self.rf_band_hz
        if not 0 < lo < hi:
            raise DomainError(f"RF band must satisfy 0 < low < high, got {self.rf_band_hz!r}")
        for name in ("if_center_hz", "control_hz", "ref_clock_hz", "if_bandwidth_hz"):
            require_positive(name, getattr(self, name))
        for band in self.protected_bands_hz:
            if not 0 < band[0] < band[1]:
                raise DomainError(f"protected band must satisfy 0 < low < high, got {band!r}")
        object.__setattr__(self, "protected_bands_hz", tuple(tuple(b) for b in self.protected_bands_hz))

    @property
    def if_channel_hz(self) -> tuple[float, float]:
        half = self.if_bandwidth_hz / 2
        return (self.if_center_hz - half, self.if_center_hz + half)


# Common LTE / WiFi / GNSS allocations below 6 GHz, in Hz.
LEGACY_PROTECTED_BANDS_HZ: tuple[tuple[float, float], ...] = (
    (1164e6, 1189e6),  # GNSS L5/E5a
    (1559e6, 1610e6),  # GNSS L1/E1/G1
    (2400e6, 2483.5e6),  # WiFi 2.4 GHz
    (2496e6, 2690e6),  # LTE band 41
    (3400e6, 3800e6),  # LTE bands 42/43
    (5150e6, 5925e6),  # WiFi 5 GHz / LTE band 46
)


def fig8_frequency_plan() -> FrequencyPlan:
    """28 GHz plan: 4.4 GHz IF, 600 MHz control, 100 MHz reference clock."""
    return FrequencyPlan(
        rf_band_hz=(27.5e9, 28.35e9),
        if_center_hz=4.4e9,
        control_hz=600e6,
        ref_clock_hz=100e6,
        protected_bands_hz=LEGACY_PROTECTED_BANDS_HZ,
        if_bandwidth_hz=200e6,
    )


def _overlaps(a: Sequence[float], b: Sequence[float]) -> bool:
    return a[0] <= b[1] and b[0] <= a[1]


def validate_frequency_plan(plan: FrequencyPlan, max_harmonic: int = 10) -> ValidationReport:
    """Image separation, control-harmonic and protected-band checks for an IF plan."""
    if max_harmonic < 1:
        raise DomainError(f"max_harmonic must be >= 1, got {max_harmonic!r}")
    report = ValidationReport("frequency plan")
    if_lo, if_hi = plan.if_channel_hz
    image_offset = 2 * plan.if_center_hz
    report.notes["image_offset_hz"] = image_offset
    report.notes["image_offset_ghz"] = image_offset / 1e9

    rf_lo, rf_hi = plan.rf_band_hz
    image_band = (rf_lo - image_offset, rf_hi - image_offset)
    if _overlaps(image_band, plan.rf_band_hz):
        report.violations.append(
            Violation(
                "image",
                f"image band {image_band[0] / 1e9:.3f}-{image_band[1] / 1e9:.3f} GHz overlaps the RF band",
            )
        )

    for k in range(1, max_harmonic + 1):
        h = k * plan.control_hz
        if if_lo <= h <= if_hi:
            report.violations.append(
                Violation(
                    "harmonic",
                    f"control harmonic {k} at {h / 1e9:.3f} GHz falls in the IF channel "
                    f"{if_lo / 1e9:.3f}-{if_hi / 1e9:.3f} GHz",
                )
            )

    for lo, hi in plan.protected_bands_hz:
        if _overlaps((if_lo, if_hi), (lo, hi)):
            report.violations.append(
                Violation(
                    "protected-band",
                    f"IF channel {if_lo / 1e9:.3f}-{if_hi / 1e9:.3f} GHz overlaps protected band "
                    f"{lo / 1e9:.4f}-{hi / 1e9:.4f} GHz",
                )
            )
    return report
