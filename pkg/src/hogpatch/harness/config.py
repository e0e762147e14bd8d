"""Plain ``key = value`` run-configuration files.

Blank lines and ``#`` comments are ignored. Keys are the command-line flag
names without dashes (``tfinal``, ``riemann``, ``split = 2x2x1``, ...).
"""

from __future__ import annotations

from ..errors import ConfigurationError


def parse_split(text) -> tuple[int, int, int]:
    """``"2x2x1"`` -> ``(2, 2, 1)``."""
    if isinstance(text, (tuple, list)):
        parts = list(text)
    else:
        parts = str(text).lower().split("x")
    try:
        split = tuple(int(p) for p in parts)
    except ValueError:
        raise ConfigurationError(f"bad patch split {text!r}; expected PxQxR") from None
    if len(split) != 3:
        raise ConfigurationError(f"bad patch split {text!r}; expected PxQxR")
    return split


def _meshes(text):
    try:
        return tuple(int(n) for n in str(text).split(","))
    except ValueError:
        raise ConfigurationError(f"bad mesh list {text!r}") from None


# file key -> (RunConfig field or None for CLI-only options, converter)
KEYS = {
    "problem": ("problem", str),
    "order": ("order", int),
    "integrator": ("integrator", str),
    "riemann": ("riemann", str),
    "strategy": ("strategy", str),
    "nx": ("nx", int),
    "ny": ("ny", int),
    "nz": ("nz", int),
    "split": ("split", parse_split),
    "cfl": ("cfl", float),
    "tfinal": ("t_final", float),
    "steps": ("steps", int),
    "workers": ("workers", int),
    "gamma": ("gamma", float),
    "seed": ("seed", int),
    "out": ("out", str),
    "check": (None, str),
    "meshes": (None, _meshes),
}


def read_config(path) -> dict:
    """Parse a config file into ``{key: converted value}`` using flag names."""
    values = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_").lower()
        if key == "t_final":
            key = "tfinal"
        if key not in KEYS:
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = KEYS[key][1](value)
        except ValueError:
            raise ConfigurationError(f"{path}:{lineno}: bad value {value!r} for {key}") from None
    return values


def run_config_kwargs(values: dict) -> dict:
    """Keep the keys that map onto :class:`RunConfig` fields, renamed."""
    return {KEYS[k][0]: v for k, v in values.items() if KEYS[k][0] is not None}
