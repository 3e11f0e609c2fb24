"""Service configuration: one TOML file, overridable by environment.

Recognized keys (file key = lowercase, environment variable = uppercase
with the ``CLOUDRANK_`` prefix): host, port, data_dir, display_currency,
admin_token, agent_token, probe_interval, static_dir.  Durations accept a
number with an optional s/m/h suffix ("45s", "30m", "2h", plain seconds
otherwise).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path

try:
    import tomllib  # Python 3.11+
except ModuleNotFoundError:  # pragma: no cover - version dependent
    import tomli as tomllib

ENV_PREFIX = "CLOUDRANK_"


class ConfigError(Exception):
    """Unusable configuration: unknown key, bad type or bad value."""


def parse_duration(text: str | int | float) -> float:
    """Duration in seconds from '45s', '30m', '2h' or a bare number."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        value = float(text)
    else:
        raw = str(text).strip().lower()
        multiplier = 1.0
        if raw.endswith(("s", "m", "h")):
            multiplier = {"s": 1.0, "m": 60.0, "h": 3600.0}[raw[-1]]
            raw = raw[:-1]
        try:
            value = float(raw) * multiplier
        except ValueError:
            raise ConfigError(f"bad duration {text!r}, expected forms like '45s', '30m', '2h'") from None
    if value <= 0:
        raise ConfigError(f"duration must be positive, got {text!r}")
    return value


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    data_dir: Path = Path("data")
    display_currency: str = "AUD"
    admin_token: str | None = None
    agent_token: str | None = None
    #: Seconds between probe rounds; probing defaults to every two hours.
    probe_interval_s: float = 7200.0
    static_dir: Path | None = None


_STRING_KEYS = {"host", "display_currency", "admin_token", "agent_token"}
_PATH_KEYS = {"data_dir", "static_dir"}
_ALL_KEYS = _STRING_KEYS | _PATH_KEYS | {"port", "probe_interval"}


def _apply(config: ServiceConfig, key: str, value, source: str) -> None:
    if key not in _ALL_KEYS:
        raise ConfigError(f"{source}: unknown configuration key {key!r}")
    if key == "port":
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            raise ConfigError(f"{source}: port must be an integer")
        try:
            port = int(value)
        except ValueError:
            raise ConfigError(f"{source}: port must be an integer") from None
        if not 0 < port < 65536:
            raise ConfigError(f"{source}: port {port} out of range")
        config.port = port
    elif key == "probe_interval":
        config.probe_interval_s = parse_duration(value)
    elif key in _PATH_KEYS:
        if not isinstance(value, str) or not value:
            raise ConfigError(f"{source}: {key} must be a non-empty path string")
        setattr(config, key, Path(value))
    else:
        if not isinstance(value, str) or not value:
            raise ConfigError(f"{source}: {key} must be a non-empty string")
        setattr(config, key, value)


def load_config(path: str | Path | None = None, environ: dict[str, str] | None = None) -> ServiceConfig:
    """Build the effective configuration.

    File values (when a path is given) are applied first, then environment
    overrides.  Unknown keys fail loudly rather than being ignored.
    """
    config = ServiceConfig()
    if path is not None:
        path = Path(path)
        try:
            raw = path.read_bytes()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        try:
            document = tomllib.loads(raw.decode("utf-8"))
        except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
            raise ConfigError(f"config file {path} is not valid TOML: {exc}") from exc
        for key, value in document.items():
            _apply(config, key, value, str(path))

    environ = os.environ if environ is None else environ
    for key in sorted(_ALL_KEYS):
        env_name = ENV_PREFIX + key.upper()
        if env_name in environ:
            _apply(config, key, environ[env_name], env_name)
    return config
