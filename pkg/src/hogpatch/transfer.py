"""Patch sets, ghost exchange and host/device transfer accounting.

The "device" is the worker that advances a patch; nothing leaves the
process, but every value a real offload would move is counted in a
:class:`TransferLedger` and the payload is copied through a staging buffer
so its cost shows up in the profile.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import product

import numpy as np

from .boundary import fill_axis, normalize_kinds, _slab
from .corrector import make_du_dt, make_fluxes, next_timestep, update_u_timestep
from .errors import ConfigurationError
from .euler import AIR, GasModel
from .mesh import (AVG, NVAR, ModalState, PatchGeometry, SkinnyState, TimeState,
                   array_axis, n_modes, skinny_to_modal, zone_count)
from .predictor import STAGE_COEFFICIENTS, IntegratorChoice, integrator, predict_patch, rk_substep
from .profiling import StageTimer, null_timer
from .reconstruction import DEFAULT_LIMITER, LimiterConfig, reconstruct
from .riemann import RiemannStats


class TransferStrategy(str, Enum):
    FULL_STATE = "full"
    SKINNY = "skinny"


def strategy(kind) -> TransferStrategy:
    if kind == "full_state":
        return TransferStrategy.FULL_STATE
    try:
        return TransferStrategy(kind)
    except ValueError:
        raise ConfigurationError(f"unknown transfer strategy {kind!r}") from None


def step_transfer_accounting(kind, geom: PatchGeometry, order: int, include_ghost=True):
    """Values moved host->device and device->host by one transfer of a patch."""
    values = zone_count(geom, include_ghost) * NVAR
    if strategy(kind) is TransferStrategy.FULL_STATE:
        values *= n_modes(order)
    return values, values


@dataclass
class TransferLedger:
    """Exact counts of values crossing the host/device boundary.

    ``uploads``/``downloads`` count active+ghost zones, the ``*_active``
    fields active zones only. ``setup_scalars`` covers the one-time upload
    of cfl, dx, dy, dz.
    """

    strategy: str = "skinny"
    uploads: int = 0
    downloads: int = 0
    uploads_active: int = 0
    downloads_active: int = 0
    scalar_uploads: int = 0
    scalar_downloads: int = 0
    setup_scalars: int = 0
    steps: int = 0
    rows: list = field(default_factory=list)

    def record(self, up, down, up_active, down_active, scalars_up=1, scalars_down=1):
        self.uploads += up
        self.downloads += down
        self.uploads_active += up_active
        self.downloads_active += down_active
        self.scalar_uploads += scalars_up
        self.scalar_downloads += scalars_down

    def close_step(self, step_uploads, step_downloads, step_scalars):
        self.steps += 1
        self.rows.append((self.steps, self.strategy, step_uploads, step_downloads, step_scalars))

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "strategy", "uploads", "downloads", "scalar_uploads"])
            w.writerows(self.rows)


@dataclass
class Patch:
    geom: PatchGeometry
    modal: ModalState
    skinny: SkinnyState
    offset: tuple[int, int, int] = (0, 0, 0)
    u_start: np.ndarray | None = None
    dt_next: float = 1.0e32
    staging: np.ndarray | None = None


@dataclass
class StepConfig:
    order: int = 2
    integrator: str = "ader"
    solver: str = "hll"
    strategy: str = "skinny"
    cfl: float = 0.6
    gas: GasModel = AIR
    limiter: LimiterConfig = DEFAULT_LIMITER
    workers: int = 1


class PatchSet:
    """Patches tiling a box, with a per-face neighbour map.

    ``neighbors[p][axis]`` is a ``(lo, hi)`` pair of patch indices, or
    ``None`` on a side where the physical boundary condition applies.
    """

    def __init__(self, patches, neighbors, boundary, order, split=(1, 1, 1)):
        self.patches = list(patches)
        self.neighbors = [tuple(tuple(pair) for pair in nb) for nb in neighbors]
        self.boundary = normalize_kinds(boundary)
        self.order = order
        self.split = tuple(split)
        self.ledger = TransferLedger()
        self.stats = RiemannStats()
        self.timer = StageTimer()
        self.validate()

    @property
    def ghost_width(self) -> int:
        return self.patches[0].geom.ghost

    @classmethod
    def decompose(cls, geom: PatchGeometry, split=(1, 1, 1), order=2, boundary="periodic"):
        """Split a global geometry into ``px * py * pz`` equal patches."""
        px, py, pz = split
        nx, ny, nz = geom.n
        if min(split) < 1 or nx % px or ny % py or nz % pz:
            raise ConfigurationError(f"split {split} does not divide mesh {geom.n} evenly")
        kinds = normalize_kinds(boundary)
        sub = (nx // px, ny // py, nz // pz)
        patches, neighbors = [], []

        def index(ix, iy, iz):
            return (iz * py + iy) * px + ix

        for iz, iy, ix in product(range(pz), range(py), range(px)):
            pos = (ix, iy, iz)
            off = tuple(p * s for p, s in zip(pos, sub))
            origin = tuple(o + k * d for o, k, d in zip(geom.origin, off, geom.spacing))
            pg = PatchGeometry(*sub, geom.ghost, geom.dx, geom.dy, geom.dz, origin)
            patches.append(Patch(pg, ModalState.zeros(pg, order), SkinnyState.zeros(pg), off))
            nb = []
            for axis, count in enumerate(split):
                pair = []
                for step in (-1, 1):
                    q = pos[axis] + step
                    if 0 <= q < count:
                        other = list(pos)
                        other[axis] = q
                        pair.append(index(*other))
                    elif kinds[axis][0] == "periodic":
                        other = list(pos)
                        other[axis] = q % count
                        pair.append(index(*other))
                    else:
                        pair.append(None)
                nb.append(tuple(pair))
            neighbors.append(tuple(nb))
        return cls(patches, neighbors, kinds, order, split)

    def validate(self):
        ghosts = {p.geom.ghost for p in self.patches}
        sizes = {p.geom.spacing for p in self.patches}
        if len(ghosts) != 1 or len(sizes) != 1:
            raise ConfigurationError("all patches must share ghost width and zone sizes")
        for p, nb in enumerate(self.neighbors):
            for axis, (lo, hi) in enumerate(nb):
                for side, q in ((0, lo), (1, hi)):
                    if q is None:
                        continue
                    if not 0 <= q < len(self.patches):
                        raise ConfigurationError(f"patch {p} names missing neighbour {q}")
                    if self.neighbors[q][axis][1 - side] != p:
                        raise ConfigurationError(
                            f"neighbour map not involutive at patch {p}, axis {axis}")
                    a, b = self.patches[p].geom, self.patches[q].geom
                    if [n for i, n in enumerate(a.n) if i != axis] != \
                            [n for i, n in enumerate(b.n) if i != axis]:
                        raise ConfigurationError(
                            f"patches {p} and {q} disagree on transverse size")

    def scatter(self, u_global):
        """Write a global active-zone ``[z][y][x][var]`` array into the patches."""
        for patch in self.patches:
            act = patch.geom.active()
            ox, oy, oz = patch.offset
            nz, ny, nx = patch.geom.active_shape
            patch.skinny.values[act] = u_global[oz:oz + nz, oy:oy + ny, ox:ox + nx]
            skinny_to_modal(patch.skinny, patch.modal)

    def gather(self):
        """Assemble the global active-zone state from the patches."""
        shape = [0, 0, 0]
        for patch in self.patches:
            for i, (o, n) in enumerate(zip(patch.offset[::-1], patch.geom.active_shape)):
                shape[i] = max(shape[i], o + n)
        out = np.empty(tuple(shape) + (NVAR,))
        for patch in self.patches:
            ox, oy, oz = patch.offset
            nz, ny, nx = patch.geom.active_shape
            out[oz:oz + nz, oy:oy + ny, ox:ox + nx] = patch.skinny.values[patch.geom.active()]
        return out


def exchange_ghosts(pset: PatchSet) -> PatchSet:
    """Fill every skinny ghost shell from neighbours, then physical boundaries.

    Axes are swept x, y, z; each sweep copies over the full transverse
    extent, so edge and corner ghosts arrive through two or three hops.
    """
    g = pset.ghost_width
    for axis in range(3):
        ax = array_axis(axis)
        for p, patch in enumerate(pset.patches):
            arr = patch.skinny.values
            nd = arr.ndim
            n = patch.geom.n[axis]
            lo, hi = pset.neighbors[p][axis]
            if lo is not None:
                src = pset.patches[lo]
                m = src.geom.n[axis]
                arr[_slab(nd, ax, 0, g)] = src.skinny.values[_slab(nd, ax, m, m + g)]
            if hi is not None:
                src = pset.patches[hi]
                arr[_slab(nd, ax, n + g, n + 2 * g)] = src.skinny.values[_slab(nd, ax, g, 2 * g)]
            fill_axis(arr, patch.geom, axis,
                      "outflow" if lo is None else "none",
                      "outflow" if hi is None else "none")
    return pset


def _transfer(patch: Patch, kind: TransferStrategy):
    # stand-in for the host<->device copy: moves exactly the counted payload
    payload = patch.skinny.values if kind is TransferStrategy.SKINNY else patch.modal.values
    if patch.staging is None or patch.staging.shape != payload.shape:
        patch.staging = np.empty_like(payload)
    np.copyto(patch.staging, payload)


def _stage_patch(patch: Patch, cfg: StepConfig, kind, stage, dt, stats, timer, step):
    geom = patch.geom
    strat = strategy(cfg.strategy)
    with timer("transfer"):
        _transfer(patch, strat)
    skinny_to_modal(patch.skinny, patch.modal)
    last = stage == len(STAGE_COEFFICIENTS[kind]) - 1
    if kind is IntegratorChoice.ADER:
        with timer("reconstruct"):
            reconstruct(patch.modal, geom, cfg.limiter)
        with timer("predict"):
            predict_patch(patch.modal, dt, geom, cfg.gas)
        with timer("flux"):
            fluxes = make_fluxes(patch.modal, geom, cfg.solver, cfg.gas, stats)
        with timer("rate"):
            rate = make_du_dt(fluxes, dt, geom)
        with timer("update"):
            patch.dt_next = update_u_timestep(patch.modal, patch.skinny, rate,
                                              TimeState(dt, cfg.cfl), geom, cfg.gas, step)
    else:
        if stage == 0:
            patch.u_start = patch.skinny.values[geom.active()].copy()
        rk_substep(patch.modal, patch.skinny, patch.u_start, stage, kind, dt, geom,
                   cfg.gas, cfg.solver, stats, cfg.limiter, timer)
        if last:
            with timer("update"):
                patch.dt_next = next_timestep(patch.skinny.values[geom.active()],
                                              TimeState(dt, cfg.cfl), geom, cfg.gas)
    with timer("transfer"):
        _transfer(patch, strat)


def run_patch_step(pset: PatchSet, cfg: StepConfig, dt: float, step=None, profile=True):
    """Advance every patch by ``dt``; return the global ``dt_next``.

    Each integrator stage is: ghost exchange (a barrier), then for every
    patch upload, skinny-to-modal, reconstruct, predict, fluxes, rate,
    update and download. Patches run concurrently when ``cfg.workers > 1``.
    """
    kind = integrator(cfg.integrator)
    strat = strategy(cfg.strategy)
    pset.ledger.strategy = strat.value
    n_stages = len(STAGE_COEFFICIENTS[kind])
    step_up = step_down = step_scalars = 0
    for stage in range(n_stages):
        timer = pset.timer if profile else null_timer
        with timer("boundary"):
            exchange_ghosts(pset)
        stats = [RiemannStats() for _ in pset.patches]
        timers = [StageTimer() if profile else null_timer for _ in pset.patches]

        def work(i):
            _stage_patch(pset.patches[i], cfg, kind, stage, dt, stats[i], timers[i], step)

        if cfg.workers > 1 and len(pset.patches) > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                list(pool.map(work, range(len(pset.patches))))
        else:
            for i in range(len(pset.patches)):
                work(i)

        for i, patch in enumerate(pset.patches):
            pset.stats.merge(stats[i])
            if profile:
                pset.timer.merge(timers[i])
            up, down = step_transfer_accounting(strat, patch.geom, cfg.order)
            up_a, down_a = step_transfer_accounting(strat, patch.geom, cfg.order, False)
            pset.ledger.record(up, down, up_a, down_a)
            step_up += up
            step_down += down
            step_scalars += 1
    pset.ledger.close_step(step_up, step_down, step_scalars)
    return min(p.dt_next for p in pset.patches)
