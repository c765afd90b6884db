"""Platform geometry limits: measuring, checking, and decimation."""

from .budget import BudgetReport, PlatformProfile, check, max_texture_edge, measure
from .decimate import active_kernel_name, decimate

__all__ = [
    "BudgetReport",
    "PlatformProfile",
    "active_kernel_name",
    "check",
    "decimate",
    "max_texture_edge",
    "measure",
]
