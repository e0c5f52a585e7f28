"""Run configuration: strict key = value text with a versioned schema.

Unknown keys are errors, not warnings; silent config drift would invalidate
the bit-for-bit reproducibility the artifacts promise.  The canonical echo
(fixed key order, normalized value formatting) is what gets hashed into
``config_hash`` and written next to every run's outputs.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .flow import FlowConfig

SCHEMA_VERSION = 1

_START_KINDS = ("cold", "hot", "abelian_flux")

# key -> (parser, default); REQUIRED means no default
_REQUIRED = object()


def _parse_bool(s: str) -> bool:
    if s in ("true", "false"):
        return s == "true"
    raise ValueError(f"expected true or false, got {s!r}")


def _parse_ints(s: str) -> tuple:
    return tuple(int(tok) for tok in s.split())


_KEYS = {
    "schema": (int, _REQUIRED),
    "group": (str, _REQUIRED),
    "dims": (int, _REQUIRED),
    "extents": (_parse_ints, _REQUIRED),
    "start": (str, _REQUIRED),
    "seed": (int, 0),
    "amplitude": (float, 0.0),
    "flux": (_parse_ints, (0, 0, 0, 0, 0, 0)),
    "step_init": (float, _REQUIRED),
    "step_shrink": (float, 0.5),
    "step_grow": (float, 1.1),
    "tol_force": (float, _REQUIRED),
    "max_iters": (int, _REQUIRED),
    "measure_every": (int, 100),
    "reunitarize_every": (int, 100),
    "diagnostics": (_parse_bool, True),
    "variations": (int, 0),
    "variation_h": (float, 1e-3),
    "variation_amplitude": (float, 0.05),
    "variation_seed": (int, 1),
    "out": (str, _REQUIRED),
}

_KEY_ORDER = tuple(_KEYS)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    schema: int
    group: str
    dims: int
    extents: tuple
    start: str
    seed: int
    amplitude: float
    flux: tuple
    step_init: float
    step_shrink: float
    step_grow: float
    tol_force: float
    max_iters: int
    measure_every: int
    reunitarize_every: int
    diagnostics: bool
    variations: int
    variation_h: float
    variation_amplitude: float
    variation_seed: int
    out: str

    def flow_config(self) -> FlowConfig:
        return FlowConfig(
            step_init=self.step_init,
            tol_force=self.tol_force,
            max_iters=self.max_iters,
            step_shrink=self.step_shrink,
            step_grow=self.step_grow,
            measure_every=self.measure_every,
            reunitarize_every=self.reunitarize_every,
        )


def parse_config(text: str) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        parser, _ = _KEYS[key]
        try:
            values[key] = parser(val)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None

    for key, (_, default) in _KEYS.items():
        if key not in values:
            if default is _REQUIRED:
                raise ConfigError(f"missing required key {key!r}")
            values[key] = default

    cfg = RunConfig(**values)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    if cfg.schema != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema version {cfg.schema}")
    if cfg.group not in ("U1", "SU2", "SU3"):
        raise ConfigError(f"group must be U1, SU2 or SU3, got {cfg.group!r}")
    if cfg.dims not in (3, 4):
        raise ConfigError("dims must be 3 or 4")
    if len(cfg.extents) != cfg.dims:
        raise ConfigError(f"extents needs {cfg.dims} entries, got {len(cfg.extents)}")
    if any(L < 1 for L in cfg.extents):
        raise ConfigError("extents must be positive")
    if cfg.start not in _START_KINDS:
        raise ConfigError(f"start must be one of {_START_KINDS}")
    if cfg.start == "abelian_flux":
        if cfg.group != "U1" or cfg.dims != 4:
            raise ConfigError("abelian_flux start requires group = U1 and dims = 4")
        if len(cfg.flux) != 6:
            raise ConfigError("flux needs 6 integers (plane order 01 02 03 12 13 23)")
    if cfg.amplitude < 0 or cfg.variation_amplitude < 0:
        raise ConfigError("amplitudes must be >= 0")
    if cfg.variations < 0:
        raise ConfigError("variations must be >= 0")
    if cfg.variation_h <= 0:
        raise ConfigError("variation_h must be positive")
    cfg.flow_config()  # FlowConfig validates the descent controls


def _format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, tuple):
        return " ".join(str(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def canonical_text(cfg: RunConfig) -> str:
    lines = [f"{key} = {_format_value(getattr(cfg, key))}" for key in _KEY_ORDER]
    return "\n".join(lines) + "\n"


def config_hash(cfg: RunConfig) -> str:
    return hashlib.sha256(canonical_text(cfg).encode("utf-8")).hexdigest()
