"""End-to-end link evaluation: holding position, budget column, sweeps."""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import tables
from .channel import (
    NO_WEATHER,
    AttenuationModel,
    DeploymentScenario,
    PathLossModel,
    PenetrationTable,
    atmospheric_attenuation,
    model_for,
    path_loss,
    penetration_loss,
    total_propagation_loss,
)
from .errors import BudgetError, ConfigError, DomainError
from .geometry import UeLayout
from .linkbudget import (
    ArrayConfig,
    PaArchitecture,
    ReceiverSpec,
    SnrChain,
    bs_eirp_from_psd,
    eirp,
    link_snr,
)
from .quantities import require_non_negative
from .rate import SeMapping, SeMode, aggregate_ca, spectral_efficiency


class Direction(str, enum.Enum):
    DOWNLINK = "downlink"
    UPLINK = "uplink"


class HoldingPosition(str, enum.Enum):
    PORTRAIT_ONE_HAND = "portrait-one-hand"
    PORTRAIT_TWO_THUMBS = "portrait-two-thumbs"
    LANDSCAPE_TWO_HANDS = "landscape-two-hands"
    ON_SURFACE = "on-surface"

    @classmethod
    def parse(cls, text: str) -> "HoldingPosition":
        aliases = {"i": cls.PORTRAIT_ONE_HAND, "ii": cls.PORTRAIT_TWO_THUMBS,
                   "iii": cls.LANDSCAPE_TWO_HANDS, "iv": cls.ON_SURFACE}
        key = text.strip().lower().replace("_", "-")
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ConfigError(
                f"unknown holding position {text!r}; expected one of {[m.value for m in cls]} or i-iv"
            ) from None


# Modules that stay unobstructed by the hand(s) in each position, and the
# MIMO order they support.  None means "every module".
_HOLDING_MODULES: dict[HoldingPosition, tuple[int, ...] | None] = {
    HoldingPosition.PORTRAIT_ONE_HAND: (1, 2),
    HoldingPosition.PORTRAIT_TWO_THUMBS: (1, 2),
    HoldingPosition.LANDSCAPE_TWO_HANDS: (3, 4, 5, 6),
    HoldingPosition.ON_SURFACE: None,
}


def active_modules(
    holding: HoldingPosition, layout: UeLayout | Iterable[int]
) -> tuple[frozenset[int], int]:
    """Unblocked module ids for ``holding`` and the MIMO order they can carry."""
    ids = layout.module_ids if isinstance(layout, UeLayout) else tuple(layout)
    wanted = _HOLDING_MODULES[holding]
    if wanted is None:
        return frozenset(ids), len(ids)
    missing = sorted(set(wanted) - set(ids))
    if missing:
        raise ConfigError(f"{holding.value} needs BF modules {missing} which the layout lacks")
    return frozenset(wanted), len(wanted)


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to compute one budget column.

    Defaults reproduce the 28 GHz downlink assumptions: 200 MHz carriers,
    4 dB front-end loss, 7 dB noise figure, 5 dBi elements, 20 % overhead,
    43 dBm UE EIRP cap and 75 dBm per 100 MHz BS EIRP.
    """

    scenario: DeploymentScenario = DeploymentScenario.UMA_NLOS
    frequency_hz: float = 28e9
    distance_m: float = 100.0
    bandwidth_hz: float = 200e6
    n_carriers: int = 1
    direction: Direction = Direction.DOWNLINK
    n_ant: int = 8
    n_bf: int = 8
    n_array: int = 64
    ue_layout: UeLayout | None = None
    holding: HoldingPosition = HoldingPosition.ON_SURFACE
    weather: AttenuationModel = NO_WEATHER
    penetration: str = "none"
    penetration_table: PenetrationTable = field(default_factory=PenetrationTable)
    body_blockage_db: float = 35.0
    se_mapping: SeMapping = SeMapping()
    overhead: float = 0.2
    ue_eirp_limit_dbm: float = 43.0
    bs_psd_dbm: float = 75.0
    bs_psd_ref_hz: float = 100e6
    p_pa_dbm: float | None = None
    front_end_loss_db: float = 4.0
    noise_figure_db: float = 7.0
    bs_noise_figure_db: float = 7.0
    element_gain_dbi: float = 5.0
    path_loss_model: PathLossModel | None = None

    def __post_init__(self):
        for name in ("n_ant", "n_bf", "n_array", "n_carriers"):
            v = getattr(self, name)
            if not (isinstance(v, int) and v >= 1):
                raise DomainError(f"{name} must be an integer >= 1, got {v!r}")
        if self.ue_layout is not None and len(self.ue_layout.placements) != self.n_bf:
            raise ConfigError(
                f"n_bf={self.n_bf} but the layout places {len(self.ue_layout.placements)} modules"
            )
        require_non_negative("body blockage", self.body_blockage_db)

    @property
    def n_ue(self) -> int:
        return self.n_ant * self.n_bf

    @property
    def n_bs(self) -> int:
        return self.n_bf * self.n_array

    @property
    def module_ids(self) -> tuple[int, ...]:
        if self.ue_layout is not None:
            return self.ue_layout.module_ids
        return tuple(range(1, self.n_bf + 1))

    @property
    def n_rx_elements(self) -> int:
        return self.n_ant if self.direction is Direction.DOWNLINK else self.n_array

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class LinkBudgetResult:
    direction: Direction
    scenario: DeploymentScenario
    distance_m: float
    bandwidth_hz: float
    n_carriers: int
    path_loss_db: float
    atmospheric_db: float
    penetration_db: float
    total_loss_db: float
    eirp_dbm: float
    receiver: ReceiverSpec
    chain: SnrChain
    se: float
    throughput_siso_bps: float
    throughput_mimo_bps: float
    mimo_order: int
    active_modules: tuple[int, ...]
    blocked_modules: tuple[int, ...]
    blocked_snr_after_bf_db: float | None

    def record(self) -> dict[str, object]:
        """Flat, ordered field mapping used for CSV and table output."""
        return {
            "direction": self.direction.value,
            "scenario": self.scenario.value,
            "distance_m": self.distance_m,
            "bandwidth_MHz": self.bandwidth_hz / 1e6,
            "n_carriers": self.n_carriers,
            "eirp_dBm": self.eirp_dbm,
            "path_loss_dB": self.path_loss_db,
            "atmospheric_dB": self.atmospheric_db,
            "penetration_dB": self.penetration_db,
            "total_loss_dB": self.total_loss_db,
            "rx_power_dBm": self.chain.rx_power_dbm,
            "thermal_noise_dBm": self.chain.thermal_noise_dbm,
            "snr_before_bf_dB": self.chain.snr_before_bf_db,
            "front_end_loss_dB": self.receiver.front_end_loss_db,
            "element_gain_dBi": self.receiver.element_gain_dbi,
            "n_rx_elements": self.receiver.n_rx_elements,
            "array_gain_dB": self.chain.array_gain_db,
            "noise_figure_dB": self.receiver.noise_figure_db,
            "snr_after_bf_dB": self.chain.snr_after_bf_db,
            "se_bps_hz": self.se,
            "throughput_siso_Mbps": self.throughput_siso_bps / 1e6,
            "mimo_order": self.mimo_order,
            "throughput_mimo_Mbps": self.throughput_mimo_bps / 1e6,
            "active_modules": " ".join(str(i) for i in self.active_modules),
            "blocked_modules": " ".join(str(i) for i in self.blocked_modules),
            "blocked_snr_after_bf_dB": self.blocked_snr_after_bf_db,
        }


def _resolve_se_mapping(cfg: ScenarioConfig) -> SeMapping:
    m = cfg.se_mapping
    if m.mode is not SeMode.TABLE_INJECTED or m.injected is not None:
        return m
    if not (math.isclose(cfg.frequency_hz, tables.FREQUENCY_HZ) and math.isclose(cfg.bandwidth_hz, tables.BANDWIDTH_HZ)):
        raise ConfigError("table-injected SE is only tabulated for 28 GHz with 200 MHz carriers")
    cell = tables.lookup_cell(cfg.direction.value, cfg.scenario, cfg.distance_m, cfg.n_rx_elements)
    return dataclasses.replace(m, injected=float(cell.se))


def _transmit_eirp(cfg: ScenarioConfig) -> float:
    if cfg.direction is Direction.DOWNLINK:
        return bs_eirp_from_psd(cfg.bs_psd_dbm, cfg.bs_psd_ref_hz, cfg.bandwidth_hz)
    if cfg.p_pa_dbm is None:
        # PA assumed sized to reach the regulatory cap.
        return cfg.ue_eirp_limit_dbm
    arr = ArrayConfig(cfg.n_ant, cfg.p_pa_dbm, cfg.element_gain_dbi, PaArchitecture.PER_ELEMENT_PA)
    return min(cfg.ue_eirp_limit_dbm, eirp(arr))


def evaluate(cfg: ScenarioConfig) -> LinkBudgetResult:
    model = cfg.path_loss_model or model_for(cfg.scenario, cfg.frequency_hz)
    pl = path_loss(model, cfg.distance_m)
    atm = atmospheric_attenuation(cfg.weather, cfg.distance_m)
    pen = penetration_loss(cfg.penetration_table, cfg.penetration)

    ids = cfg.module_ids
    active, order = active_modules(cfg.holding, ids)
    blocked = tuple(sorted(set(ids) - active))

    # the link is carried by unblocked modules, so no body loss on it
    total = total_propagation_loss(pl, atm, pen, 0.0)
    tx_eirp = _transmit_eirp(cfg)
    nf = cfg.noise_figure_db if cfg.direction is Direction.DOWNLINK else cfg.bs_noise_figure_db
    rx = ReceiverSpec(cfg.front_end_loss_db, nf, cfg.n_rx_elements, cfg.element_gain_dbi)
    chain = link_snr(tx_eirp, total, cfg.bandwidth_hz, rx)

    se = spectral_efficiency(chain.snr_after_bf_db, _resolve_se_mapping(cfg))
    siso = aggregate_ca([(cfg.bandwidth_hz, se)] * cfg.n_carriers, cfg.overhead, 1)
    # one BS unit per UE module, so BS side never limits below n_bf
    mimo_order = min(order, cfg.n_bf)

    return LinkBudgetResult(
        direction=cfg.direction,
        scenario=cfg.scenario,
        distance_m=cfg.distance_m,
        bandwidth_hz=cfg.bandwidth_hz,
        n_carriers=cfg.n_carriers,
        path_loss_db=pl,
        atmospheric_db=atm,
        penetration_db=pen,
        total_loss_db=total,
        eirp_dbm=tx_eirp,
        receiver=rx,
        chain=chain,
        se=se,
        throughput_siso_bps=siso,
        throughput_mimo_bps=siso * mimo_order,
        mimo_order=mimo_order,
        active_modules=tuple(sorted(active)),
        blocked_modules=blocked,
        blocked_snr_after_bf_db=chain.snr_after_bf_db - cfg.body_blockage_db if blocked else None,
    )


class SweepAxis(str, enum.Enum):
    DISTANCE = "distance"
    N_ANT = "n_ant"
    N_ARRAY = "n_array"
    BANDWIDTH = "bandwidth"


_AXIS_FIELD = {
    SweepAxis.DISTANCE: "distance_m",
    SweepAxis.N_ANT: "n_ant",
    SweepAxis.N_ARRAY: "n_array",
    SweepAxis.BANDWIDTH: "bandwidth_hz",
}


def sweep(
    cfg: ScenarioConfig, axis: SweepAxis | str, values: Sequence[float]
) -> list[tuple[float, LinkBudgetResult]]:
    """Evaluate ``cfg`` at each value of ``axis``, preserving input order.

    ``distance`` is in metres and ``bandwidth`` in Hz.
    """
    axis = SweepAxis(axis)
    if not values:
        raise DomainError("sweep needs at least one value")
    out = []
    for v in values:
        if axis in (SweepAxis.N_ANT, SweepAxis.N_ARRAY):
            if float(v) != int(v):
                raise DomainError(f"sweep value {v!r} for {axis.value} is not an integer")
            v = int(v)
        try:
            res = evaluate(cfg.replace(**{_AXIS_FIELD[axis]: v}))
        except BudgetError as e:
            raise type(e)(f"sweep {axis.value}={v!r}: {e}") from e
        out.append((v, res))
    return out
