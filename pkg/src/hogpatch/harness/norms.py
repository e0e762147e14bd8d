"""Error norms and observed convergence order."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError
from ..mesh import PatchGeometry, SkinnyState


@dataclass
class ErrorReport:
    l1: np.ndarray
    linf: np.ndarray
    n: int = 0
    order_estimate: float | None = None


def _active(field, geom):
    arr = field.values if isinstance(field, SkinnyState) else np.asarray(field)
    if geom is not None and arr.shape[:3] == geom.total_shape:
        arr = arr[geom.active()]
    return arr


def error_norms(numerical, exact, geom: PatchGeometry | None = None) -> ErrorReport:
    """Per-variable L1 (mean absolute) and max-norm errors over active zones."""
    a = _active(numerical, geom)
    b = _active(exact, geom)
    if a.shape != b.shape:
        raise ConfigurationError(f"shape mismatch: {a.shape} vs {b.shape}")
    diff = np.abs(a - b).reshape(-1, a.shape[-1])
    return ErrorReport(diff.mean(axis=0), diff.max(axis=0), n=round(diff.shape[0] ** (1 / 3)))


def order_estimate(e_coarse, e_fine, n_coarse, n_fine):
    """Observed order ``log(e_coarse / e_fine) / log(n_fine / n_coarse)``."""
    if n_fine <= n_coarse:
        raise ConfigurationError("meshes must be listed coarse to fine")
    if e_coarse <= 0.0 or e_fine <= 0.0:
        return float("nan")
    return math.log(e_coarse / e_fine) / math.log(n_fine / n_coarse)
