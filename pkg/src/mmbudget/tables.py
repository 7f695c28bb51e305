"""Printed 28 GHz downlink/uplink budget tables, kept as reference data.

Each :class:`TableCell` is one (column, element count) entry exactly as
printed.  These values serve as golden fixtures and as the source for the
table-injected spectral-efficiency mode; the engine never computes with them
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .channel import DeploymentScenario as S
from .errors import ConfigError

COLUMNS: tuple[tuple[S, float], ...] = (
    (S.UMI_SO_NLOS, 100.0),
    (S.UMI_SO_NLOS, 200.0),
    (S.UMI_SC_NLOS, 100.0),
    (S.UMI_SC_NLOS, 200.0),
    (S.UMA_NLOS, 200.0),
    (S.UMA_NLOS, 500.0),
    (S.UMA_NLOS, 1000.0),
    (S.UMA_NLOS, 2000.0),
)

BANDWIDTH_HZ = 200e6
FREQUENCY_HZ = 28e9
FRONT_END_LOSS_DB = 4.0
ELEMENT_GAIN_DBI = 5.0
NOISE_FIGURE_DB = 7.0
OVERHEAD = 0.2
MIMO_LAYERS = 8
CA_CARRIERS = 4

_PATH_LOSS = (126.3, 135.0, 133.4, 143.0, 137.2, 149.2, 158.2, 167.2)

_DL = {
    "eirp": 78.0,
    "n": (8, 16),
    "rx_power": (-48.3, -57.0, -55.4, -65.0, -59.2, -71.2, -80.2, -89.2),
    "snr_before": (42.7, 34.0, 35.6, 20.0, 31.8, 19.8, 10.8, 1.8),
    "array_gain": (14.0, 17.0),
    "snr_after": (
        (45.7, 48.7), (37.0, 40.0), (38.6, 41.6), (29.0, 32.0),
        (34.8, 37.8), (22.8, 25.8), (13.8, 16.8), (4.8, 7.8),
    ),
    "se": (
        (8, 8), (8, 8), (8, 8), (7.98, 8),
        (8, 8), (7.11, 7.76), (4.35, 5.18), (1.69, 1.94),
    ),
    "siso_200": (
        (1280, 1280), (1280, 1280), (1280, 1280), (1280, 1280),
        (1280, 1280), (1138, 1242), (696, 828), (270, 310),
    ),
    "mimo_200": (
        (10240, 10240), (10240, 10240), (10240, 10240), (10240, 10240),
        (10240, 10240), (9104, 9936), (5568, 6624), (2160, 2480),
    ),
    "siso_800": (
        (5120, 5120), (5120, 5120), (5120, 5120), (5120, 5120),
        (5120, 5120), (4552, 4968), (2784, 3312), (1080, 1240),
    ),
    "mimo_800": (
        (40960, 40960), (40960, 40960), (40960, 40960), (40960, 40960),
        (40960, 40960), (36416, 39744), (22272, 26496), (8640, 9920),
    ),
}

_UL = {
    "eirp": 43.0,
    "n": (64, 256),
    "rx_power": (-83.3, -92.0, -90.4, -100.0, -94.2, -106.2, -115.2, -124.2),
    "snr_before": (7.7, -1.0, 0.6, -9.0, -3.2, -15.2, -24.2, -33.2),
    "array_gain": (23.0, 29.0),
    "snr_after": (
        (19.8, 25.8), (11.1, 17.1), (12.6, 18.6), (3.0, 9.0),
        (8.8, 14.8), (-3.2, 2.8), (-12.2, -6.2), (-21.2, -15.2),
    ),
    "se": (
        (6.19, 7.75), (3.56, 5.25), (4.01, 5.6), (1.55, 2.95),
        (2.90, 4.64), (0.57, 1.52), (0.08, 0.31), (0.01, 0.04),
    ),
    "siso_200": (
        (989, 1240), (570, 839), (642, 896), (248, 472),
        (464, 742), (92, 244), (13.7, 50), (1.7, 7),
    ),
    "mimo_200": (
        (7912, 9920), (4560, 6952), (5136, 7168), (1984, 3776),
        (3712, 5936), (736, 1952), (109.6, 400), (13.6, 56),
    ),
    "siso_800": (
        (3956, 4960), (2280, 3476), (2568, 3584), (992, 1888),
        (1856, 2968), (368, 976), (54.86, 200), (6.8, 28),
    ),
    "mimo_800": (
        (31648, 39680), (18240, 27808), (20544, 28672), (7936, 15104),
        (14848, 23744), (2944, 7808), (438.4, 1600), (54.4, 224),
    ),
}


@dataclass(frozen=True)
class TableCell:
    direction: str  # "downlink" | "uplink"
    column: int  # 1-based
    scenario: S
    distance_m: float
    n_rx_elements: int  # N_ANT for downlink, N_array for uplink
    eirp_dbm: float
    path_loss_db: float
    rx_power_dbm: float
    thermal_noise_dbm: float
    snr_before_bf_db: float
    array_gain_db: float
    snr_after_bf_db: float
    se: float
    siso_200_mbps: float
    mimo_200_mbps: float
    siso_800_mbps: float
    mimo_800_mbps: float

    @property
    def throughputs(self) -> dict[str, tuple[float, int, int]]:
        """Printed throughput by row name -> (Mbps, layers, carriers)."""
        return {
            "siso_200": (self.siso_200_mbps, 1, 1),
            "mimo_200": (self.mimo_200_mbps, MIMO_LAYERS, 1),
            "siso_800": (self.siso_800_mbps, 1, CA_CARRIERS),
            "mimo_800": (self.mimo_800_mbps, MIMO_LAYERS, CA_CARRIERS),
        }


def _build(direction: str, t: dict) -> tuple[TableCell, ...]:
    cells = []
    for i, (scen, d) in enumerate(COLUMNS):
        for j, n in enumerate(t["n"]):
            cells.append(
                TableCell(
                    direction, i + 1, scen, d, n, t["eirp"], _PATH_LOSS[i], t["rx_power"][i], -91.0,
                    t["snr_before"][i], t["array_gain"][j], t["snr_after"][i][j], t["se"][i][j],
                    t["siso_200"][i][j], t["mimo_200"][i][j], t["siso_800"][i][j], t["mimo_800"][i][j],
                )
            )
    return tuple(cells)


DOWNLINK_CELLS = _build("downlink", _DL)
UPLINK_CELLS = _build("uplink", _UL)
ALL_CELLS = DOWNLINK_CELLS + UPLINK_CELLS


def lookup_cell(direction: str, scenario: S, distance_m: float, n_rx_elements: int) -> TableCell:
    cells = DOWNLINK_CELLS if direction == "downlink" else UPLINK_CELLS
    for c in cells:
        if c.scenario is scenario and c.distance_m == float(distance_m) and c.n_rx_elements == n_rx_elements:
            return c
    raise ConfigError(
        f"no printed {direction} table entry for {scenario.value} at {distance_m:g} m "
        f"with {n_rx_elements} receive elements"
    )
