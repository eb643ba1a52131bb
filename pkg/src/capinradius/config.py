"""INI configuration files with one section per subcommand.

Example::

    [constants]
    N = 3
    p = 2
    gamma = 0.5
    mazya_C = 1.0

    [inradius]
    domain.kind = slab
    domain.params = 1.0
    gamma = 0.5
    tol = 1e-4
    grid.n = 256

Keys are the long flag names (``-`` and ``.`` may be used in place of
``_``); ``domain.kind``, ``domain.params`` and ``grid.n`` are aliases for
``domain``, ``size`` and ``n``. Values from the file become parser defaults,
so explicit flags override them. ``CAPINRADIUS_CONFIG`` names a default file.
"""

from __future__ import annotations

import argparse
import configparser
import os
from typing import Optional

ENV_VAR = "CAPINRADIUS_CONFIG"
ALIASES = {"domain_kind": "domain", "domain_params": "size", "grid_n": "n"}


class ConfigError(ValueError):
    """Invalid configuration file or value."""


def _normalize(key: str) -> str:
    k = key.strip().replace("-", "_").replace(".", "_")
    return ALIASES.get(k, k)


def config_path(explicit: Optional[str]) -> Optional[str]:
    if explicit:
        return explicit
    return os.environ.get(ENV_VAR) or None


def load_section(path: str, section: str) -> dict:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path!r}: {exc}") from exc
    if not parser.has_section(section):
        return {}
    return {_normalize(k): v for k, v in parser.items(section)}


def apply_defaults(sub: argparse.ArgumentParser, values: dict) -> None:
    """Install config values as defaults of the subcommand parser."""
    actions = {a.dest: a for a in sub._actions}
    out = {}
    for key, raw in values.items():
        if key not in actions:
            raise ConfigError(f"unknown config key {key!r}")
        act = actions[key]
        if isinstance(act, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            low = raw.strip().lower()
            if low not in ("1", "0", "true", "false", "yes", "no", "on", "off"):
                raise ConfigError(f"{key!r} expects a boolean, got {raw!r}")
            out[key] = low in ("1", "true", "yes", "on")
            continue
        try:
            if act.nargs in ("+", "*"):
                conv = act.type or str
                out[key] = [conv(v) for v in raw.replace(",", " ").split()]
            else:
                out[key] = act.type(raw) if act.type else raw
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
        if act.choices is not None and out[key] not in act.choices:
            raise ConfigError(f"{key!r} must be one of {sorted(act.choices)!r}")
    sub.set_defaults(**out)
