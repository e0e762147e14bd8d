"""Run configuration and the timestep driver."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from ..corrector import DT_SEED
from ..errors import ConfigurationError
from ..euler import GasModel, eval_tstep_ptwise
from ..mesh import PatchGeometry, ghost_width
from ..predictor import integrator
from ..riemann import get_solver
from ..transfer import PatchSet, StepConfig, run_patch_step, strategy
from .norms import error_norms
from .problems import BOUNDARIES, BOXES, exact_state, initial_state, vortex_crossing_time

DEFAULT_CFL = {2: 0.6, 3: 0.4}
PROBLEMS = ("vortex", "sod", "constant")


@dataclass
class RunConfig:
    problem: str = "vortex"
    order: int = 2
    integrator: str = "ader"
    riemann: str = "hll"
    strategy: str = "skinny"
    nx: int = 24
    ny: int = 24
    nz: int = 24
    cfl: float | None = None
    t_final: float | None = None
    steps: int | None = None
    split: tuple[int, int, int] = (1, 1, 1)
    workers: int = 1
    gamma: float = 1.4
    out: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ConfigurationError(f"unknown problem {self.problem!r}")
        ghost_width(self.order)
        integrator(self.integrator)
        get_solver(self.riemann)
        strategy(self.strategy)
        self.split = tuple(int(s) for s in self.split)
        if len(self.split) != 3 or any(
                s < 1 or n % s for s, n in zip(self.split, (self.nx, self.ny, self.nz))):
            raise ConfigurationError(
                f"split {self.split} does not divide mesh {(self.nx, self.ny, self.nz)}")
        if self.cfl is None:
            self.cfl = DEFAULT_CFL[self.order]
        if not 0.0 < self.cfl < 1.0:
            raise ConfigurationError(f"cfl must lie in (0, 1), got {self.cfl}")
        if self.t_final is not None and self.steps is not None:
            raise ConfigurationError("set either t_final or steps, not both")
        if self.t_final is None and self.steps is None:
            self.t_final = vortex_crossing_time() if self.problem == "vortex" else 0.2
        if self.workers < 1:
            raise ConfigurationError("workers must be at least 1")
        GasModel(self.gamma)

    @property
    def gas(self) -> GasModel:
        return GasModel(self.gamma)

    def geometry(self) -> PatchGeometry:
        lo, hi = BOXES[self.problem]
        return PatchGeometry.for_order(self.order, self.nx, self.ny, self.nz, lo, hi)

    def step_config(self) -> StepConfig:
        return StepConfig(order=self.order, integrator=self.integrator, solver=self.riemann,
                          strategy=self.strategy, cfl=self.cfl, gas=self.gas,
                          workers=self.workers)

    def echo(self) -> dict:
        d = asdict(self)
        d["split"] = "x".join(str(s) for s in self.split)
        return d


@dataclass
class RunResult:
    config: RunConfig
    geom: PatchGeometry
    patches: PatchSet
    t: float
    steps: int
    wall: float
    totals: list = field(default_factory=list)

    def state(self) -> np.ndarray:
        return self.patches.gather()

    def exact(self):
        return exact_state(self.config.problem, self.geom, self.t, self.config.gas,
                           self.config.order)

    def errors(self):
        exact = self.exact()
        if exact is None:
            raise ConfigurationError(f"no exact solution for {self.config.problem!r}")
        return error_norms(self.state(), exact)

    @property
    def zones_per_sec(self) -> float:
        zones = self.config.nx * self.config.ny * self.config.nz
        return zones * self.steps / self.wall if self.wall > 0 else float("nan")


def conserved_totals(u, geom: PatchGeometry) -> np.ndarray:
    return u.reshape(-1, u.shape[-1]).sum(axis=0) * geom.zone_volume


def run(cfg: RunConfig, track_totals=False, profile=True) -> RunResult:
    """Set up ``cfg.problem`` and advance it to ``t_final`` or for ``steps`` steps.

    The first ``dt`` comes from the initial condition; afterwards each step
    uses the ``dt_next`` reduced over all patches by the previous step, and
    the last step is clipped to land on ``t_final``.
    """
    geom = cfg.geometry()
    gas = cfg.gas
    pset = PatchSet.decompose(geom, cfg.split, cfg.order, BOUNDARIES[cfg.problem])
    u0 = initial_state(cfg.problem, geom, gas, cfg.order)
    pset.scatter(u0)
    pset.ledger.setup_scalars = 4  # cfl, dx, dy, dz
    step_cfg = cfg.step_config()

    dt = float(min(DT_SEED, eval_tstep_ptwise(u0, cfg.cfl, geom.dx, geom.dy, geom.dz, gas).min()))
    t, n = 0.0, 0
    totals = [conserved_totals(u0, geom)] if track_totals else []
    t0 = time.perf_counter()
    while True:
        if cfg.steps is not None:
            if n >= cfg.steps:
                break
        else:
            remaining = cfg.t_final - t
            if remaining <= 1e-12 * cfg.t_final:
                break
            dt = min(dt, remaining)
        dt_next = run_patch_step(pset, step_cfg, dt, step=n + 1, profile=profile)
        t += dt
        n += 1
        dt = dt_next
        if track_totals:
            totals.append(conserved_totals(pset.gather(), geom))
    wall = time.perf_counter() - t0
    return RunResult(cfg, geom, pset, t, n, wall, totals)
