from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

log = logging.getLogger(__name__)

CONFIG_NAME = "evenartin.config.json"
LOG_LEVEL_SET = {"DEBUG", "INFO", "WARNING", "ERROR"}

DEFAULT_MAX_SYLLABLES = 10_000
DEFAULT_ORACLE_RADIUS = 8
DEFAULT_ORACLE_BUDGET = 20_000


@dataclass(frozen=True)
class Settings:
    max_syllables: int = DEFAULT_MAX_SYLLABLES
    oracle_radius: int = DEFAULT_ORACLE_RADIUS
    oracle_budget: int = DEFAULT_ORACLE_BUDGET
    log_level: str = "WARNING"
    selftest: dict[str, int] = field(default_factory=lambda: {"seed": 0, "vertices": 3, "length": 6, "cases": 200})

    def as_dict(self) -> dict[str, Any]:
        return {
            "max_syllables": self.max_syllables,
            "oracle_radius": self.oracle_radius,
            "oracle_budget": self.oracle_budget,
            "log_level": self.log_level,
            "selftest": dict(self.selftest),
        }


_lock = threading.Lock()
_length_cap = DEFAULT_MAX_SYLLABLES


def _clamp_int(v: Any, lo: int, hi: int, default: int) -> int:
    try:
        return max(lo, min(hi, int(v)))
    except (TypeError, ValueError):
        return default


def default_config_path() -> Path:
    env_home = os.getenv("EVENARTIN_HOME")
    if env_home:
        return Path(env_home).expanduser().resolve() / CONFIG_NAME
    return Path.home().expanduser().resolve() / ".evenartin" / CONFIG_NAME


def load_config(path: Path | None) -> dict[str, Any]:
    if path and path.exists():
        return json.loads(path.read_text(encoding="utf-8"))
    p = default_config_path()
    if p.exists():
        return json.loads(p.read_text(encoding="utf-8"))
    return {}


def load_settings(path: Path | None = None) -> Settings:
    cfg = load_config(path)
    base = Settings()
    selftest = dict(base.selftest)
    for k, v in dict(cfg.get("selftest") or {}).items():
        if k in selftest:
            selftest[k] = _clamp_int(v, 0, 1_000_000, selftest[k])
    level = str(os.getenv("EVENARTIN_LOG_LEVEL") or cfg.get("log_level") or base.log_level).strip().upper()
    if level not in LOG_LEVEL_SET:
        log.warning("ignoring unknown log level %r", level)
        level = base.log_level
    return Settings(
        max_syllables=_clamp_int(
            os.getenv("EVENARTIN_MAX_SYLLABLES") or cfg.get("max_syllables"), 1, 10_000_000, base.max_syllables
        ),
        oracle_radius=_clamp_int(cfg.get("oracle_radius"), 1, 64, base.oracle_radius),
        oracle_budget=_clamp_int(cfg.get("oracle_budget"), 1, 10_000_000, base.oracle_budget),
        log_level=level,
        selftest=selftest,
    )


def with_overrides(settings: Settings, *, max_syllables: int | None = None, log_level: str | None = None) -> Settings:
    out = settings
    if max_syllables is not None:
        out = replace(out, max_syllables=_clamp_int(max_syllables, 1, 10_000_000, out.max_syllables))
    if log_level:
        lvl = str(log_level).strip().upper()
        if lvl in LOG_LEVEL_SET:
            out = replace(out, log_level=lvl)
    return out


def apply_settings(settings: Settings) -> None:
    set_length_cap(settings.max_syllables)


def set_length_cap(cap: int) -> None:
    global _length_cap
    with _lock:
        _length_cap = max(1, int(cap))


def length_cap() -> int:
    with _lock:
        return _length_cap
