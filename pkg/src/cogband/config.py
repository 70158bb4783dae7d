"""``key = value`` config files for :class:`SimConfig`.

Nested settings use dotted keys (``tv.base_power_dbm = 30``); ``#`` starts a
comment. Keys that are not set keep their defaults, unknown keys are
rejected.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path

from .simkit import SimConfig

NESTED = ("cellular", "tv", "budget", "pattern")
_FIXED = {("cellular", "name"), ("tv", "name")}

_ALLOCATOR_ALIASES = {
    "prefixscan": "prefix_scan",
    "firstdecrease": "first_decrease",
    "exhaustive": "exhaustive",
}


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def _convert(key: str, raw: str, like):
    try:
        if isinstance(like, bool):
            low = raw.lower()
            if low in ("true", "yes", "on", "1"):
                return True
            if low in ("false", "no", "off", "0"):
                return False
            raise ValueError(raw)
        if isinstance(like, int):
            return int(raw)
        if isinstance(like, float):
            return float(raw)
    except ValueError:
        raise ConfigError(key, f"cannot parse {raw!r} as {type(like).__name__}") from None
    return raw


def known_keys() -> list[str]:
    base = SimConfig()
    keys = []
    for f in dataclasses.fields(base):
        if f.name in NESTED:
            sub = getattr(base, f.name)
            keys += [f"{f.name}.{g.name}" for g in dataclasses.fields(sub) if (f.name, g.name) not in _FIXED]
        else:
            keys.append(f.name)
    return keys


def parse_config(text: str, base: SimConfig | None = None) -> SimConfig:
    base = base if base is not None else SimConfig()
    top: dict = {}
    nested: dict = {name: {} for name in NESTED}
    allowed = set(known_keys())
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(line, f"line {lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in allowed:
            raise ConfigError(key, f"line {lineno}: unknown key")
        if "." in key:
            group, name = key.split(".", 1)
            nested[group][name] = _convert(key, raw, getattr(getattr(base, group), name))
        else:
            value = _convert(key, raw, getattr(base, key))
            if key == "allocator":
                value = _ALLOCATOR_ALIASES.get(value.lower().replace("_", ""), value)
            top[key] = value
    try:
        for group, values in nested.items():
            if values:
                top[group] = dataclasses.replace(getattr(base, group), **values)
        return dataclasses.replace(base, **top)
    except ValueError as exc:
        raise ConfigError("config", str(exc)) from None


def load_config(path) -> SimConfig:
    return parse_config(Path(path).read_text())
