"""Patch-based ADER-WENO finite-volume solver for the 3D Euler equations."""

from .errors import ConfigurationError, UnphysicalStateError
from .euler import AIR, GasModel
from .mesh import ModalState, PatchGeometry, SkinnyState

__all__ = [
    "AIR",
    "ConfigurationError",
    "GasModel",
    "ModalState",
    "PatchGeometry",
    "SkinnyState",
    "UnphysicalStateError",
]
__version__ = "0.1.0"
