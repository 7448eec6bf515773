"""Bound states, tunneling and scattering from turning-point quantization."""

from .core import (
    ConvergenceError,
    DomainError,
    InfeasibleError,
    NoTurningPointsError,
    QuantareaError,
    QuantizationMode,
    UnsupportedError,
    scale_constants,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "InfeasibleError",
    "NoTurningPointsError",
    "QuantareaError",
    "QuantizationMode",
    "UnsupportedError",
    "scale_constants",
]
