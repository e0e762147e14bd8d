"""Convergence, benchmark and reproducibility studies with CSV output.

Every CSV row starts with ``run_id`` and the full run configuration, so a
row can be re-run on its own. Column order is fixed by :data:`CSV_COLUMNS`.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ConfigurationError
from ..mesh import VARIABLE_NAMES
from ..profiling import STAGES, StageTimer
from .norms import ErrorReport, order_estimate
from .runner import RunConfig, RunResult, run

CONFIG_COLUMNS = ("problem", "order", "integrator", "riemann", "strategy", "nx", "ny", "nz",
                  "cfl", "t_final", "steps", "split", "workers", "gamma", "seed")
EXACT_PROBLEMS = ("vortex", "constant")
LEDGER_COLUMNS = ("uploads", "downloads", "uploads_active", "downloads_active",
                  "scalar_uploads", "scalar_downloads", "setup_scalars")
CSV_COLUMNS = (
    ("run_id",) + CONFIG_COLUMNS + ("t_reached", "steps_taken")
    + tuple(f"l1_{v}" for v in VARIABLE_NAMES) + tuple(f"linf_{v}" for v in VARIABLE_NAMES)
    + ("order_estimate", "zones_per_sec", "wall")
    + tuple(f"t_{s}" for s in STAGES) + ("predictor_fraction",)
    + LEDGER_COLUMNS + ("face_solves", "degenerate_fans")
)


@dataclass
class StageProfile:
    """Seconds per pipeline stage for one run."""

    seconds: dict
    wall: float

    @classmethod
    def from_timer(cls, timer: StageTimer, wall: float) -> "StageProfile":
        return cls({s: timer.seconds.get(s, 0.0) for s in STAGES}, wall)

    @property
    def total(self) -> float:
        return sum(self.seconds.values())

    @property
    def predictor_fraction(self) -> float:
        total = self.total
        return self.seconds["predict"] / total if total > 0 else 0.0


def result_row(result: RunResult, run_id: str, errors: ErrorReport | None = None,
               order: float | None = None) -> dict:
    cfg = result.config
    echo = cfg.echo()
    row = {"run_id": run_id}
    row.update({k: echo[k] for k in CONFIG_COLUMNS})
    row["t_reached"] = result.t
    row["steps_taken"] = result.steps
    for i, name in enumerate(VARIABLE_NAMES):
        row[f"l1_{name}"] = "" if errors is None else float(errors.l1[i])
        row[f"linf_{name}"] = "" if errors is None else float(errors.linf[i])
    row["order_estimate"] = "" if order is None else order
    row["zones_per_sec"] = result.zones_per_sec
    row["wall"] = result.wall
    prof = StageProfile.from_timer(result.patches.timer, result.wall)
    for s in STAGES:
        row[f"t_{s}"] = prof.seconds[s]
    row["predictor_fraction"] = prof.predictor_fraction
    ledger = result.patches.ledger
    for k in LEDGER_COLUMNS:
        row[k] = getattr(ledger, k)
    row["face_solves"] = result.patches.stats.face_solves
    row["degenerate_fans"] = result.patches.stats.degenerate_fans
    return row


def write_csv(path, rows) -> None:
    """Write rows under the fixed header, appending if the file already has it."""
    append = os.path.exists(path) and os.path.getsize(path) > 0
    with open(path, "a" if append else "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        if not append:
            w.writeheader()
        w.writerows(rows)


def _errors_or_none(result):
    return result.errors() if result.config.problem in EXACT_PROBLEMS else None


# --- convergence -----------------------------------------------------------

@dataclass
class ConvergenceStudy:
    meshes: list
    reports: list
    rows: list = field(default_factory=list)

    @property
    def orders(self) -> list:
        return [r.order_estimate for r in self.reports[1:]]


def run_convergence_study(cfg: RunConfig, meshes=(24, 48), out=None) -> ConvergenceStudy:
    """Run ``cfg`` on cubic meshes of each size to the same ``t_final``.

    Each report after the first carries the density L1 order estimate
    against the previous mesh.
    """
    if cfg.problem not in EXACT_PROBLEMS:
        raise ConfigurationError("convergence studies need a problem with an exact solution")
    if cfg.t_final is None:
        raise ConfigurationError("convergence studies need a fixed t_final")
    meshes = sorted(int(n) for n in meshes)
    if len(meshes) < 2:
        raise ConfigurationError("convergence studies need at least two meshes")
    reports, rows = [], []
    for k, n in enumerate(meshes):
        res = run(replace(cfg, nx=n, ny=n, nz=n, split=(1, 1, 1)))
        rep = res.errors()
        if reports:
            rep.order_estimate = order_estimate(reports[-1].l1[0], rep.l1[0], meshes[k - 1], n)
        reports.append(rep)
        rows.append(result_row(res, f"convergence-{k}", rep, rep.order_estimate))
    if out:
        write_csv(out, rows)
    return ConvergenceStudy(meshes, reports, rows)


# --- benchmark -------------------------------------------------------------

@dataclass
class BenchmarkReport:
    result: RunResult
    profile: StageProfile
    row: dict

    @property
    def zones_per_sec(self) -> float:
        return self.result.zones_per_sec

    @property
    def predictor_fraction(self) -> float:
        return self.profile.predictor_fraction

    @property
    def face_solves_per_step(self) -> float:
        return self.result.patches.stats.face_solves / max(self.result.steps, 1)


def warm_up(cfg: RunConfig) -> None:
    """One step on a tiny mesh so compiled kernels are loaded before timing."""
    n = 2 * cfg.order + 2
    run(replace(cfg, nx=n, ny=n, nz=n, split=(1, 1, 1), workers=1, t_final=None, steps=1),
        profile=False)


def run_benchmark(cfg: RunConfig, out=None, warm=True) -> BenchmarkReport:
    """Throughput (zones x steps / s), stage profile and ledger of one run."""
    if warm:
        warm_up(cfg)
    res = run(cfg, profile=True)
    prof = StageProfile.from_timer(res.patches.timer, res.wall)
    row = result_row(res, "benchmark-0", _errors_or_none(res))
    if out:
        write_csv(out, [row])
    return BenchmarkReport(res, prof, row)


# --- reproducibility -------------------------------------------------------

@dataclass
class ReproReport:
    serial_max_diff: float
    worker_l1_diff: float
    patch_max_rel_diff: float
    worst_zone: tuple | None
    workers: int
    split: tuple
    tol_workers: float = 1e-10
    tol_patches: float = 1e-12
    rows: list = field(default_factory=list)

    @property
    def bit_identical(self) -> bool:
        return self.serial_max_diff == 0.0

    @property
    def passed(self) -> bool:
        return (self.bit_identical and self.worker_l1_diff < self.tol_workers
                and self.patch_max_rel_diff < self.tol_patches)

    def summary(self) -> str:
        lines = [
            f"serial runs bit-identical: {self.bit_identical} (max |diff| {self.serial_max_diff:.3e})",
            f"1 vs {self.workers} workers, density L1 difference: {self.worker_l1_diff:.3e}"
            f" (tol {self.tol_workers:.0e})",
            f"1 vs {int(np.prod(self.split))} patches, max relative difference:"
            f" {self.patch_max_rel_diff:.3e} (tol {self.tol_patches:.0e})",
        ]
        if not self.passed and self.worst_zone is not None:
            lines.append(f"largest difference at zone (z, y, x, var) = {self.worst_zone}")
        return "\n".join(lines)


def _density_l1(result):
    # error norm when an exact solution exists, else the plain density L1
    ref = result.exact()[..., 0] if result.config.problem in EXACT_PROBLEMS else 0.0
    return float(np.abs(result.state()[..., 0] - ref).mean())


def run_reproducibility_check(cfg: RunConfig, workers=4, split=(2, 2, 2), out=None) -> ReproReport:
    """Serial determinism, worker-count invariance and patch-count invariance.

    The baseline is a single patch on one worker, run twice. The threaded
    run and the patch run both use ``split``.
    """
    base_cfg = replace(cfg, split=(1, 1, 1), workers=1)
    a = run(base_cfg)
    b = run(base_cfg)
    ua, ub = a.state(), b.state()
    serial = float(np.abs(ua - ub).max())

    threaded = run(replace(cfg, split=tuple(split), workers=workers))
    worker_diff = abs(_density_l1(a) - _density_l1(threaded))

    patched = run(replace(cfg, split=tuple(split), workers=1))
    up = patched.state()
    rel = np.abs(up - ua) / np.maximum(np.abs(ua), 1e-300)
    worst = np.unravel_index(int(np.argmax(rel)), rel.shape)
    rows = [result_row(r, f"repro-{k}", _errors_or_none(r))
            for k, r in enumerate((a, b, threaded, patched))]
    if out:
        write_csv(out, rows)
    return ReproReport(serial, worker_diff, float(rel.max()), tuple(int(i) for i in worst),
                       workers, tuple(split), rows=rows)
