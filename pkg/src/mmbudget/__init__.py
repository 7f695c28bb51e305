"""Link-budget and throughput planning for mmWave handsets with distributed phased arrays."""

__version__ = "0.1.0"

from .channel import (
    AttenuationModel,
    DeploymentScenario,
    PathLossModel,
    PenetrationTable,
    atmospheric_attenuation,
    fit_ci_model,
    path_loss,
    penetration_loss,
    total_propagation_loss,
)
from .errors import (
    BudgetError,
    ConfigError,
    DegenerateFitError,
    DomainError,
    LayoutError,
    UnitMismatchError,
    UnknownMaterialError,
)
from .linkbudget import (
    ArrayConfig,
    PaArchitecture,
    ReceiverSpec,
    SnrChain,
    bs_eirp_from_psd,
    eirp,
    link_snr,
    max_pa_power,
    rx_array_gain,
    thermal_noise,
)
from .rate import RateConfig, SeMapping, SeMode, aggregate_ca, spectral_efficiency, throughput
from .scenario import (
    Direction,
    HoldingPosition,
    LinkBudgetResult,
    ScenarioConfig,
    active_modules,
    evaluate,
    sweep,
)
