from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import yaml

from .ca import BOUNDARY_POLICIES
from .checker import DEFAULT_MAX_GEN
from .lsystem.grammar import Grammar, grammar_from_mapping

_LOGGER = logging.getLogger(__name__)

CONFIG_ENV = "LSYS_MODEL_CONFIG"


@dataclass
class Settings:
    log_level: str = "INFO"
    max_gen: int = DEFAULT_MAX_GEN
    workers: int = 1
    boundary: str = "periodic"
    grammars: dict[str, Grammar] = field(default_factory=dict)


def _parse_int(name: str, value: Any, default: int) -> int:
    if value is None:
        return default
    try:
        return int(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"Invalid integer value for {name}: {value!r}") from exc


def _as_str(value: Any, default: str) -> str:
    if value is None:
        return default
    text = str(value).strip()
    return text or default


def _first_non_none(*values: Any) -> Any:
    for value in values:
        if value is not None:
            return value
    return None


def load_config_file(path: str | Path) -> dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f) or {}
        except yaml.YAMLError as exc:
            raise ValueError(f"Config file {path} is not valid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"Config file {path} must contain a mapping at the top level")
    return data


def _parse_grammars(value: Any) -> dict[str, Grammar]:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ValueError("Config 'grammars' must be a mapping of name -> {axiom, rules}")
    return {str(name): grammar_from_mapping(str(name), spec) for name, spec in value.items()}


def resolve_settings(
    config: Mapping[str, Any] | None = None,
    env: Mapping[str, str] | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> Settings:
    """Defaults < environment < config file < explicit overrides."""
    env = env or {}
    config = dict(config or {})
    overrides = {k: v for k, v in dict(overrides or {}).items() if v is not None}

    log_level = _as_str(
        _first_non_none(overrides.get("log_level"), config.get("log_level"), env.get("LOG_LEVEL")),
        "INFO",
    ).upper()
    max_gen = _parse_int(
        "max_gen",
        _first_non_none(overrides.get("max_gen"), config.get("max_gen")),
        _parse_int("LSYS_MODEL_MAX_GEN", env.get("LSYS_MODEL_MAX_GEN"), DEFAULT_MAX_GEN),
    )
    if max_gen < 0:
        raise ValueError(f"max_gen must be >= 0, got {max_gen}")
    workers = _parse_int(
        "workers",
        _first_non_none(overrides.get("workers"), config.get("workers")),
        _parse_int("LSYS_MODEL_WORKERS", env.get("LSYS_MODEL_WORKERS"), 1),
    )
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    boundary = _as_str(
        _first_non_none(overrides.get("boundary"), config.get("boundary"), env.get("LSYS_MODEL_BOUNDARY")),
        "periodic",
    ).lower()
    if boundary not in BOUNDARY_POLICIES:
        raise ValueError(f"Invalid boundary policy: {boundary!r}. Expected one of {sorted(BOUNDARY_POLICIES)}")

    return Settings(
        log_level=log_level,
        max_gen=max_gen,
        workers=workers,
        boundary=boundary,
        grammars=_parse_grammars(config.get("grammars")),
    )


def load_settings(
    config_path: str | None,
    env: Mapping[str, str],
    overrides: Mapping[str, Any] | None = None,
) -> Settings:
    path = config_path or env.get(CONFIG_ENV)
    config: dict[str, Any] = {}
    if path:
        _LOGGER.debug("Reading config file %s", path)
        config = load_config_file(path)
    return resolve_settings(config, env=env, overrides=overrides)
