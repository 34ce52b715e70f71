"""Runtime configuration: one JSON file plus FAIRUSE_* environment overrides."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Mapping

from .chunking import DEFAULT_MAX_TOKENS
from .embedding import DEFAULT_DIMENSION
from .pipeline import DEFAULT_POOL_SIZE, WHOLE_QUERY


@dataclass(frozen=True)
class AppConfig:
    store_path: str | None = None
    bind: str = "127.0.0.1:8800"
    embedder: str = "reference"  # reference | http
    embedder_endpoint: str | None = None
    embedder_dimension: int = DEFAULT_DIMENSION
    completion_endpoint: str | None = None
    w_text: float = 1.0 / 3.0
    w_cit: float = 1.0 / 3.0
    w_court: float = 1.0 / 3.0
    k: int = 5
    n: int = 0
    factor_mode: str = WHOLE_QUERY
    pool_size: int = DEFAULT_POOL_SIZE
    max_tokens: int = DEFAULT_MAX_TOKENS


_ENV_PREFIX = "FAIRUSE_"
_FLOAT_FIELDS = {"w_text", "w_cit", "w_court"}
_INT_FIELDS = {"embedder_dimension", "k", "n", "pool_size", "max_tokens"}


def load_config(path: str | Path | None = None, env: Mapping[str, str] | None = None) -> AppConfig:
    """File values override defaults; environment variables override the file."""
    env = os.environ if env is None else env
    config = AppConfig()

    values: dict[str, object] = {}
    if path is not None:
        payload = json.loads(Path(path).read_text("utf-8"))
        if not isinstance(payload, dict):
            raise ValueError(f"config file {path} must hold a JSON object")
        known = {f.name for f in fields(AppConfig)}
        unknown = sorted(set(payload) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        values.update(payload)

    for f in fields(AppConfig):
        raw = env.get(_ENV_PREFIX + f.name.upper())
        if raw is None:
            continue
        if f.name in _FLOAT_FIELDS:
            values[f.name] = float(raw)
        elif f.name in _INT_FIELDS:
            values[f.name] = int(raw)
        else:
            values[f.name] = raw

    return replace(config, **values) if values else config
