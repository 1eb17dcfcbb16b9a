"""Analysis configuration and its key=value (TOML) file form."""

from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from crim.errors import ConfigError

RATE_METHODS = ("mean", "mean_high", "median", "both")


@dataclass(frozen=True)
class AnalysisConfig:
    """Thresholds for classification and URE evaluation.

    ``mctdr_lower_hours``/``mctdr_upper_hours`` bound the model CTD range
    (inclusive). ``ure_daily_cap_hours`` is the plausible resolved effort per
    elapsed day.
    """

    mctdr_lower_hours: float = 0.5
    mctdr_upper_hours: float = 8.0
    exclude_merges: bool = True
    ure_daily_cap_hours: float = 8.0
    min_candidates_for_quartiles: int = 8
    rate_method: str = "both"

    def __post_init__(self) -> None:
        if not 0 < self.mctdr_lower_hours < self.mctdr_upper_hours:
            raise ConfigError(
                f"need 0 < mctdr_lower_hours < mctdr_upper_hours, got "
                f"{self.mctdr_lower_hours} and {self.mctdr_upper_hours}"
            )
        if not 0 < self.ure_daily_cap_hours <= 24:
            raise ConfigError(f"ure_daily_cap_hours must be in (0, 24], got {self.ure_daily_cap_hours}")
        if self.min_candidates_for_quartiles < 4:
            raise ConfigError("min_candidates_for_quartiles must be at least 4")
        if self.rate_method not in RATE_METHODS:
            raise ConfigError(f"rate_method must be one of {', '.join(RATE_METHODS)}")

    @property
    def methods(self) -> tuple[str, ...]:
        """Imputation methods whose per-commit efforts are emitted."""
        if self.rate_method == "both":
            return ("mean", "mean_high")
        return (self.rate_method,)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_mapping(cls, data: dict) -> "AnalysisConfig":
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        kwargs = {}
        for key, value in data.items():
            expected = known[key].type
            if expected == "bool":
                ok = isinstance(value, bool)
            elif expected == "int":
                ok = isinstance(value, int) and not isinstance(value, bool)
            elif expected == "float":
                ok = isinstance(value, (int, float)) and not isinstance(value, bool)
                value = float(value) if ok else value
            else:
                ok = isinstance(value, str)
            if not ok:
                raise ConfigError(f"config key {key!r} expects {expected}, got {value!r}")
            kwargs[key] = value
        return cls(**kwargs)


def load_config(path: str | Path | None) -> AnalysisConfig:
    if path is None:
        return AnalysisConfig()
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    return AnalysisConfig.from_mapping(data)
