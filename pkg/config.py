"""Run configuration: a flat KEY=value file, overridden by command-line flags."""

import os
from collections.abc import Mapping
from dataclasses import dataclass, fields, replace
from pathlib import Path

from dotenv import dotenv_values, load_dotenv

from errors import ConfigError
from links import LINK_FAMILIES

FORMATS = ("json", "csv", "both")
DEFAULT_ESTIMATORS = ("iv", "cf", "telser")


@dataclass(frozen=True)
class RunConfig:
    input: Path | None = None
    dgp: Path | None = None
    estimators: tuple[str, ...] = DEFAULT_ESTIMATORS
    link: str = "probit"
    poly_order: int | None = None
    eta: float | None = None
    bootstrap: int = 0
    seed: int | None = None
    out: Path = Path("results")
    format: str = "json"
    jobs: int = 1
    mte_grid: int = 99

    def validate(self) -> "RunConfig":
        if (self.input is None) == (self.dgp is None):
            raise ConfigError("exactly one of INPUT or DGP is required")
        if self.link not in LINK_FAMILIES:
            raise ConfigError(f"Unknown link: {self.link}. Available: {list(LINK_FAMILIES.keys())}")
        if self.format not in FORMATS:
            raise ConfigError(f"FORMAT must be one of {FORMATS}, got {self.format!r}")
        if not self.estimators:
            raise ConfigError("ESTIMATORS is empty")
        if self.poly_order is not None and self.poly_order < 1:
            raise ConfigError(f"POLY_ORDER must be at least 1, got {self.poly_order}")
        if self.eta is not None and not self.eta > 0:
            raise ConfigError(f"ETA must be positive, got {self.eta}")
        if self.bootstrap < 0:
            raise ConfigError(f"BOOTSTRAP must be nonnegative, got {self.bootstrap}")
        if self.bootstrap and self.seed is None:
            raise ConfigError("BOOTSTRAP needs an explicit SEED")
        if self.seed is not None and not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"SEED must be an unsigned 64-bit integer, got {self.seed}")
        if self.jobs == 0 or self.jobs < -1:
            raise ConfigError(f"JOBS must be positive or -1, got {self.jobs}")
        if self.mte_grid < 2:
            raise ConfigError(f"MTE_GRID must be at least 2, got {self.mte_grid}")
        return self

    def to_dict(self) -> dict:
        """JSON-ready view (paths as strings)."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Path):
                value = value.as_posix()
            elif isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out


def _convert(name: str, text: str):
    if name in ("input", "dgp", "out"):
        return Path(text)
    if name == "estimators":
        return tuple(item.strip() for item in text.split(",") if item.strip())
    if name in ("poly_order", "bootstrap", "seed", "jobs", "mte_grid"):
        return int(text)
    if name == "eta":
        return float(text)
    if name in ("link", "format"):
        return text.lower()
    return text


def parse_values(values: Mapping[str, str | None]) -> dict:
    """Typed RunConfig fields from raw KEY=value strings."""
    known = {f.name for f in fields(RunConfig)}
    parsed = {}
    for key, raw in values.items():
        name = key.strip().lower()
        if name not in known:
            raise ConfigError(f"unknown config key: {key}")
        if raw is None or not raw.strip():
            continue
        try:
            parsed[name] = _convert(name, raw.strip())
        except ValueError as exc:
            raise ConfigError(f"bad value for {key.upper()}: {raw!r}") from exc
    return parsed


def load_config_file(path: str | Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_values(dotenv_values(path))


def build_config(file_path: str | Path | None = None, overrides: Mapping[str, str | None] | None = None) -> RunConfig:
    """File values first, then flag values on top."""
    values = load_config_file(file_path) if file_path else {}
    values.update(parse_values(overrides or {}))
    return replace(RunConfig(), **values).validate()


def log_level() -> str:
    load_dotenv()
    return os.getenv("LOG_LEVEL", "INFO").upper()
