"""Patch geometry and the modal / skinny / flux / rate storage layouts.

Arrays are indexed ``[z][y][x]`` over zones, followed by the variable index
(rho, mx, my, mz, E) and, for the modal state, the mode index. Spatial axis
numbers used throughout the package are 0 = x, 1 = y, 2 = z; because of the
``[z][y][x]`` layout, spatial axis ``a`` lives on array axis ``2 - a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

NVAR = 5
RHO, MX, MY, MZ, ENE = range(NVAR)
VARIABLE_NAMES = ("rho", "mx", "my", "mz", "E")

# mode indices; order-3 basis is [avg, x, y, z, xx, yy, zz, xy, yz, zx, time]
AVG = 0
SLOPE = (1, 2, 3)
CURV = (4, 5, 6)
XY, YZ, ZX = 7, 8, 9

AXIS_NAMES = ("x", "y", "z")


def n_modes(order: int) -> int:
    if order == 2:
        return 5
    if order == 3:
        return 11
    raise ConfigurationError(f"unsupported order {order!r}; expected 2 or 3")


def time_mode(order: int) -> int:
    return n_modes(order) - 1


def ghost_width(order: int) -> int:
    n_modes(order)  # validates
    return order


def array_axis(axis: int) -> int:
    """Array axis holding spatial axis ``axis`` (0=x, 1=y, 2=z)."""
    if axis not in (0, 1, 2):
        raise ConfigurationError(f"axis must be 0, 1 or 2, got {axis!r}")
    return 2 - axis


@dataclass(frozen=True)
class PatchGeometry:
    nx: int
    ny: int
    nz: int
    ghost: int
    dx: float
    dy: float
    dz: float
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if min(self.nx, self.ny, self.nz) < 4:
            raise ConfigurationError(
                f"each axis needs at least 4 active zones, got {self.n}")
        if self.ghost < 1:
            raise ConfigurationError("ghost width must be positive")
        if not min(self.dx, self.dy, self.dz) > 0:
            raise ConfigurationError("zone sizes must be positive")

    @classmethod
    def for_order(cls, order, nx, ny, nz, lo=(0.0, 0.0, 0.0), hi=(1.0, 1.0, 1.0)):
        """Geometry covering the box ``[lo, hi]`` with the order's ghost width."""
        return cls(nx, ny, nz, ghost_width(order),
                   (hi[0] - lo[0]) / nx, (hi[1] - lo[1]) / ny, (hi[2] - lo[2]) / nz,
                   tuple(float(v) for v in lo))

    @property
    def n(self) -> tuple[int, int, int]:
        """Active zone counts in spatial order (nx, ny, nz)."""
        return (self.nx, self.ny, self.nz)

    @property
    def spacing(self) -> tuple[float, float, float]:
        return (self.dx, self.dy, self.dz)

    @property
    def active_shape(self) -> tuple[int, int, int]:
        return (self.nz, self.ny, self.nx)

    @property
    def total_shape(self) -> tuple[int, int, int]:
        g2 = 2 * self.ghost
        return (self.nz + g2, self.ny + g2, self.nx + g2)

    @property
    def zone_volume(self) -> float:
        return self.dx * self.dy * self.dz

    def active(self) -> tuple[slice, slice, slice]:
        """Slices selecting the active zones of a ``[z][y][x]`` array."""
        g = self.ghost
        return (slice(g, g + self.nz), slice(g, g + self.ny), slice(g, g + self.nx))

    def ring(self, width: int = 1) -> tuple[slice, slice, slice]:
        """Active zones plus ``width`` layers of ghost zones on every side."""
        g = self.ghost
        if not 0 <= width <= g:
            raise ConfigurationError(f"ring width {width} exceeds ghost width {g}")
        return tuple(slice(g - width, g + n + width) for n in (self.nz, self.ny, self.nx))

    def centers(self, include_ghost: bool = False):
        """Zone-center coordinates as broadcastable ``(z, y, x)`` arrays."""
        g = self.ghost if include_ghost else 0
        out = []
        for n, d, o in zip(self.n, self.spacing, self.origin):
            idx = np.arange(-g, n + g)
            out.append(o + (idx + 0.5) * d)
        x, y, z = out
        return z[:, None, None], y[None, :, None], x[None, None, :]


def zone_count(geom: PatchGeometry, include_ghost: bool = False) -> int:
    shape = geom.total_shape if include_ghost else geom.active_shape
    return int(np.prod(shape))


@dataclass
class SkinnyState:
    """Zone averages only, over active and ghost zones: ``[z][y][x][var]``."""

    values: np.ndarray

    @classmethod
    def zeros(cls, geom: PatchGeometry) -> "SkinnyState":
        return cls(np.zeros(geom.total_shape + (NVAR,)))

    def copy(self) -> "SkinnyState":
        return SkinnyState(self.values.copy())


@dataclass
class ModalState:
    """Per-zone modes ``[z][y][x][var][mode]``; the temporal mode is last."""

    values: np.ndarray
    order: int = 2

    def __post_init__(self):
        if self.values.ndim != 5 or self.values.shape[3:] != (NVAR, n_modes(self.order)):
            raise ConfigurationError(
                f"modal array shape {self.values.shape} does not match order {self.order}")

    @classmethod
    def zeros(cls, geom: PatchGeometry, order: int = 2) -> "ModalState":
        return cls(np.zeros(geom.total_shape + (NVAR, n_modes(order))), order)

    @property
    def n_modes(self) -> int:
        return self.values.shape[-1]

    @property
    def time_mode(self) -> int:
        return self.values.shape[-1] - 1

    def mode(self, k: int) -> np.ndarray:
        return self.values[..., k]

    def copy(self) -> "ModalState":
        return ModalState(self.values.copy(), self.order)


@dataclass
class FaceFluxField:
    """Face fluxes: x-faces ``[nz][ny][nx+1]``, y-faces ``[nz][ny+1][nx]``, ..."""

    flux_x: np.ndarray
    flux_y: np.ndarray
    flux_z: np.ndarray

    @classmethod
    def zeros(cls, geom: PatchGeometry) -> "FaceFluxField":
        nz, ny, nx = geom.active_shape
        return cls(np.zeros((nz, ny, nx + 1, NVAR)),
                   np.zeros((nz, ny + 1, nx, NVAR)),
                   np.zeros((nz + 1, ny, nx, NVAR)))

    def axis(self, a: int) -> np.ndarray:
        return (self.flux_x, self.flux_y, self.flux_z)[a]


@dataclass
class RateField:
    """``dt * dU/dt`` over the active zones: ``[nz][ny][nx][var]``."""

    du_dt: np.ndarray

    def __post_init__(self):
        if self.du_dt.ndim != 4 or self.du_dt.shape[-1] != NVAR:
            raise ConfigurationError(f"rate field shape {self.du_dt.shape} is not (nz, ny, nx, 5)")

    @classmethod
    def zeros(cls, geom: PatchGeometry) -> "RateField":
        return cls(np.zeros(geom.active_shape + (NVAR,)))


@dataclass
class TimeState:
    dt: float
    cfl: float
    dt_next: float = field(default=1.0e32)
    t: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.cfl < 1.0:
            raise ConfigurationError(f"cfl must lie in (0, 1), got {self.cfl}")
        if not self.dt > 0.0:
            raise ConfigurationError(f"dt must be positive, got {self.dt}")


def skinny_to_modal(skinny: SkinnyState, modal: ModalState) -> ModalState:
    """Copy zone averages into mode 0 at every zone, ghosts included."""
    if skinny.values.shape != modal.values.shape[:4]:
        raise ConfigurationError(
            f"skinny shape {skinny.values.shape} incompatible with modal "
            f"shape {modal.values.shape}")
    modal.values[..., AVG] = skinny.values
    return modal


def modal_to_skinny(modal: ModalState, skinny: SkinnyState | None = None,
                    geom: PatchGeometry | None = None) -> SkinnyState:
    """Refresh the skinny state from mode 0.

    With ``geom`` only the active zones are written and the ghost shell of
    ``skinny`` keeps whatever the last boundary fill put there; without it
    every zone is copied.
    """
    if skinny is None:
        skinny = SkinnyState(np.zeros(modal.values.shape[:4]))
    if skinny.values.shape != modal.values.shape[:4]:
        raise ConfigurationError(
            f"skinny shape {skinny.values.shape} incompatible with modal "
            f"shape {modal.values.shape}")
    if geom is None:
        skinny.values[...] = modal.values[..., AVG]
    else:
        act = geom.active()
        skinny.values[act] = modal.values[act + (slice(None), AVG)]
    return skinny
