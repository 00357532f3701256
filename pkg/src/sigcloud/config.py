"""Service configuration: flat file (JSON, or TOML where available) + overrides."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from .aggregation import DEFAULT_BASIS_POINTS, DEFAULT_SA_CONFIG
from .annealing import AnnealingConfig
from .errors import ConfigError, ValidationError
from .verification import DecisionThresholds


@dataclass(frozen=True)
class ServiceConfig:
    store_path: Path = Path("sigcloud-store")
    host: str = "127.0.0.1"
    port: int = 8000
    accept_below: float = 0.06
    reject_at_or_above: float = 0.14
    basis_points: int = DEFAULT_BASIS_POINTS
    sa: AnnealingConfig = field(default_factory=lambda: DEFAULT_SA_CONFIG)
    learn_on_accept: bool = True
    backup_target: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "store_path", Path(self.store_path))
        if not 0 < self.port < 65536:
            raise ConfigError(f"port: must be in 1..65535, got {self.port}")
        if self.basis_points < 2:
            raise ConfigError(f"basis_points: must be >= 2, got {self.basis_points}")
        try:
            self.thresholds
        except ValidationError as err:
            raise ConfigError(f"thresholds: {err}") from err

    @property
    def thresholds(self) -> DecisionThresholds:
        return DecisionThresholds(self.accept_below, self.reject_at_or_above)

    @classmethod
    def from_file(cls, path: str | Path, **overrides: Any) -> "ServiceConfig":
        path = Path(path)
        text = path.read_text()
        if path.suffix == ".toml":
            try:
                import tomllib  # Python 3.11+
            except ImportError:
                try:
                    import tomli as tomllib
                except ImportError as err:
                    raise ConfigError(
                        "config: .toml files need Python 3.11+ (tomllib) or the tomli package;"
                        " use a .json config instead"
                    ) from err
            data = tomllib.loads(text)
        else:
            try:
                data = json.loads(text)
            except ValueError as err:
                raise ConfigError(f"config: {path} is not valid JSON: {err}") from err
        return cls.from_dict(data, **overrides)

    @classmethod
    def from_dict(cls, data: dict[str, Any], **overrides: Any) -> "ServiceConfig":
        known = {
            "store_path",
            "host",
            "port",
            "accept_below",
            "reject_at_or_above",
            "basis_points",
            "sa",
            "learn_on_accept",
            "backup_target",
        }
        for key in data:
            if key not in known:
                raise ConfigError(f"{key}: unknown configuration field")
        merged = dict(data)
        merged.update({k: v for k, v in overrides.items() if v is not None})
        if isinstance(merged.get("sa"), dict):
            try:
                merged["sa"] = AnnealingConfig.from_dict(merged["sa"])
            except (KeyError, ValidationError) as err:
                raise ConfigError(f"sa: {err}") from err
        return cls(**merged)

    def with_overrides(self, **overrides: Any) -> "ServiceConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})
