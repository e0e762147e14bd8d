"""Command-line entry point."""

from __future__ import annotations

import argparse
import sys
import warnings

from ..errors import ConfigurationError, UnphysicalStateError
from ..mesh import VARIABLE_NAMES
from .config import _meshes, parse_split, read_config, run_config_kwargs
from .problems import VortexDomainWarning
from .runner import RunConfig, run
from .studies import (EXACT_PROBLEMS, result_row, run_benchmark, run_convergence_study,
                      run_reproducibility_check, write_csv)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_UNPHYSICAL = 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hogpatch",
        description="Patch-based ADER/WENO Euler solver: runs, convergence studies, benchmarks.")
    p.add_argument("--problem", choices=("vortex", "sod", "constant"))
    p.add_argument("--order", type=int, choices=(2, 3))
    p.add_argument("--integrator", choices=("ader", "rk2", "rk3"))
    p.add_argument("--riemann", help="rusanov or hll (or any registered solver)")
    p.add_argument("--strategy", choices=("skinny", "full"))
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--nz", type=int)
    p.add_argument("--split", type=parse_split, help="patch split PxQxR, e.g. 2x2x1")
    p.add_argument("--cfl", type=float)
    stop = p.add_mutually_exclusive_group()
    stop.add_argument("--tfinal", type=float)
    stop.add_argument("--steps", type=int)
    p.add_argument("--workers", type=int, help="threads advancing patches")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="CSV file to write (appended if it exists)")
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--check", choices=("convergence", "benchmark", "repro"))
    p.add_argument("--meshes", type=_meshes,
                   help="comma-separated cubic mesh sizes for --check convergence")
    p.add_argument("--quiet-warnings", action="store_true",
                   help="suppress the vortex domain-size warning")
    return p


def merged_options(args) -> dict:
    values = read_config(args.config) if args.config else {}
    flags = {k: v for k, v in vars(args).items()
             if v is not None and k not in ("config", "quiet_warnings")}
    if "steps" in flags:
        values.pop("tfinal", None)
    if "tfinal" in flags:
        values.pop("steps", None)
    values.update(flags)
    return values


def _print_errors(prefix, rep):
    cells = "  ".join(f"{v}={e:.4e}" for v, e in zip(VARIABLE_NAMES, rep.l1))
    print(f"{prefix} L1: {cells}")
    print(f"{prefix} Linf density: {rep.linf[0]:.4e}")


def _dispatch(values) -> int:
    cfg = RunConfig(**run_config_kwargs(values))
    check = values.get("check")
    out = cfg.out

    if check == "convergence":
        meshes = values.get("meshes", (cfg.nx, 2 * cfg.nx))
        study = run_convergence_study(cfg, meshes, out)
        for n, rep in zip(study.meshes, study.reports):
            _print_errors(f"{n}^3", rep)
            if rep.order_estimate is not None:
                print(f"{n}^3 density L1 order estimate: {rep.order_estimate:.3f}")
        return EXIT_OK

    if check == "benchmark":
        rep = run_benchmark(cfg, out)
        r = rep.result
        print(f"{r.steps} steps, t = {r.t:.6g}, wall {r.wall:.3f} s")
        print(f"zones/s: {rep.zones_per_sec:.4e}")
        print("stage seconds: " + "  ".join(f"{k}={v:.3f}" for k, v in rep.profile.seconds.items()))
        print(f"predictor_fraction: {rep.predictor_fraction:.4f}")
        led = r.patches.ledger
        print(f"ledger ({led.strategy}): uploads={led.uploads} downloads={led.downloads}")
        print(f"riemann face solves per step: {rep.face_solves_per_step:.0f}")
        return EXIT_OK

    if check == "repro":
        split = cfg.split if cfg.split != (1, 1, 1) else (2, 2, 2)
        workers = cfg.workers if cfg.workers > 1 else 4
        rep = run_reproducibility_check(cfg, workers=workers, split=split, out=out)
        print(rep.summary())
        print("PASS" if rep.passed else "FAIL")
        return EXIT_OK if rep.passed else EXIT_CHECK_FAILED

    res = run(cfg)
    print(f"{cfg.problem}: {res.steps} steps to t = {res.t:.6g} in {res.wall:.3f} s "
          f"({res.zones_per_sec:.4e} zones/s)")
    errors = None
    if cfg.problem in EXACT_PROBLEMS:
        errors = res.errors()
        _print_errors("", errors)
    if out:
        write_csv(out, [result_row(res, "run-0", errors)])
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            if args.quiet_warnings:
                warnings.simplefilter("ignore", VortexDomainWarning)
            return _dispatch(merged_options(args))
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnphysicalStateError as exc:
        print(f"unphysical state: {exc}", file=sys.stderr)
        return EXIT_UNPHYSICAL


if __name__ == "__main__":
    sys.exit(main())
