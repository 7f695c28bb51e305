"""Exception hierarchy shared by every module of the engine."""


class BudgetError(Exception):
    """Base class for all engine errors."""


class DomainError(BudgetError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class UnitMismatchError(BudgetError, ValueError):
    """Conversion requested between dimensionally incompatible units."""


class DegenerateFitError(DomainError):
    """Two-point fit with coincident anchor distances."""


class UnknownMaterialError(BudgetError, KeyError):
    """Penetration-loss lookup for a material missing from the table."""


class LayoutError(BudgetError, ValueError):
    """A UE layout is malformed (not merely in violation of a rule)."""


class ConfigError(BudgetError, ValueError):
    """Configuration is inconsistent, incomplete, or references unknown data."""
