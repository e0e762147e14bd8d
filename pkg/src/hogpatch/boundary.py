"""Ghost-zone fill for a single patch: periodic wrap or zero-gradient outflow."""

from __future__ import annotations

from .errors import ConfigurationError
from .mesh import PatchGeometry, array_axis

BOUNDARY_KINDS = ("periodic", "outflow")


def _slab(ndim, ax, start, stop):
    idx = [slice(None)] * ndim
    idx[ax] = slice(start, stop)
    return tuple(idx)


def normalize_kinds(kinds):
    """Expand a kind spec to ``((xlo, xhi), (ylo, yhi), (zlo, zhi))``."""
    if isinstance(kinds, str):
        kinds = (kinds,) * 3
    out = []
    for k in kinds:
        pair = (k, k) if isinstance(k, str) else tuple(k)
        for side in pair:
            if side not in BOUNDARY_KINDS:
                raise ConfigurationError(f"unknown boundary kind {side!r}")
        if ("periodic" in pair) and pair[0] != pair[1]:
            raise ConfigurationError("periodic boundaries must be paired on both sides")
        out.append(pair)
    if len(out) != 3:
        raise ConfigurationError("boundary kinds need one entry per axis")
    return tuple(out)


def fill_axis(arr, geom: PatchGeometry, axis: int, lo: str, hi: str):
    """Fill both ghost slabs of one axis over the full transverse extent."""
    ax = array_axis(axis)
    g, n, nd = geom.ghost, geom.n[axis], arr.ndim
    if lo == "periodic":
        arr[_slab(nd, ax, 0, g)] = arr[_slab(nd, ax, n, n + g)]
        arr[_slab(nd, ax, n + g, n + 2 * g)] = arr[_slab(nd, ax, g, 2 * g)]
        return arr
    if lo == "outflow":
        arr[_slab(nd, ax, 0, g)] = arr[_slab(nd, ax, g, g + 1)]
    if hi == "outflow":
        arr[_slab(nd, ax, n + g, n + 2 * g)] = arr[_slab(nd, ax, n + g - 1, n + g)]
    return arr


def apply_boundary(arr, geom: PatchGeometry, kinds="periodic"):
    """Fill every ghost layer of ``arr`` (skinny or modal) in x, y, z sweeps.

    Sweeping axes in turn over the full transverse extent fills edges and
    corners as well. Works on any array whose leading axes are ``[z][y][x]``.
    """
    if arr.shape[:3] != geom.total_shape:
        raise ConfigurationError(
            f"array shape {arr.shape[:3]} does not match geometry {geom.total_shape}")
    for axis, (lo, hi) in enumerate(normalize_kinds(kinds)):
        fill_axis(arr, geom, axis, lo, hi)
    return arr
