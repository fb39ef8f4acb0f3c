"""Tool configuration: defaults, optional TOML file, and name-list files."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .bindings import DEFAULT_COMPARISON_FUNCTIONS
from .corpus import DEFAULT_MIN_WORDS
from .relater import DEFAULT_THRESHOLD


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ToolConfig:
    threshold: float = DEFAULT_THRESHOLD
    min_words: int = DEFAULT_MIN_WORDS
    getters: tuple[str, ...] = ()
    comparison_functions: tuple[str, ...] = DEFAULT_COMPARISON_FUNCTIONS
    log_functions: tuple[str, ...] | None = None
    error_lexicon: str | None = None
    slot_lexicons: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold must be within [0, 1], got {self.threshold}")
        if self.min_words < 1:
            raise ConfigError(f"min_words must be at least 1, got {self.min_words}")

    def with_(self, **changes: Any) -> ToolConfig:
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


_LIST_KEYS = ("getters", "comparison_functions", "log_functions")


def load_config(path: str | Path) -> ToolConfig:
    try:
        data = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    unknown = set(data) - {"threshold", "min_words", "error_lexicon", "slot_lexicons", *_LIST_KEYS}
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    kwargs: dict[str, Any] = {}
    for key in _LIST_KEYS:
        if key in data:
            value = data[key]
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                raise ConfigError(f"{key} must be a list of strings")
            kwargs[key] = tuple(value)
    if "threshold" in data:
        kwargs["threshold"] = float(data["threshold"])
    if "min_words" in data:
        kwargs["min_words"] = int(data["min_words"])
    if "error_lexicon" in data:
        kwargs["error_lexicon"] = str(data["error_lexicon"])
    if "slot_lexicons" in data:
        kwargs["slot_lexicons"] = {str(k): str(v) for k, v in dict(data["slot_lexicons"]).items()}
    return ToolConfig(**kwargs)
