"""Per-stage wall-clock accounting."""

from __future__ import annotations

import time
from collections import defaultdict
from contextlib import contextmanager

STAGES = ("transfer", "boundary", "reconstruct", "predict", "flux", "rate", "update")


class StageTimer:
    """Accumulates seconds per named stage; call it as a context manager."""

    def __init__(self):
        self.seconds = defaultdict(float)

    @contextmanager
    def __call__(self, name):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.seconds[name] += time.perf_counter() - t0

    def merge(self, other: "StageTimer") -> None:
        for k, v in other.seconds.items():
            self.seconds[k] += v

    @property
    def total(self) -> float:
        return sum(self.seconds.values())

    @property
    def predictor_fraction(self) -> float:
        total = self.total
        return self.seconds.get("predict", 0.0) / total if total > 0 else 0.0

    def as_dict(self) -> dict:
        return {f"t_{name}": self.seconds.get(name, 0.0) for name in STAGES}


@contextmanager
def _noop(name):
    yield


def null_timer(name):
    return _noop(name)
