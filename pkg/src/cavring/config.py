"""Run configuration: INI-style file parsing, validation, flag overrides.

Files use key = value sections.  Conventions: rates in 2pi x kHz,
angles as fractions of pi, times in ms.  Unknown sections or keys are
errors (a silent typo would otherwise change physics), and rates are
sanity-checked against (0, 1000] 2pi x kHz to catch unit mistakes.
Every value has a documented default; the fully resolved configuration
is echoed into each output file's metadata header.
"""

import configparser
import math
import os
from dataclasses import dataclass

import numpy as np

from .dynamics import DEFAULT_DT, DEFAULT_RECORD_EVERY, IntegratorConfig
from .errors import ConfigError
from .model import ModelParams
from .protocols import SensingConfig
from .sweep import GridSpec
from .units import twopi_khz_to_rad_per_ms

_RATE_LIMIT = 1000.0  # 2pi x kHz; anything above this is a unit mistake


def _parse_float(text):
    try:
        return float(text)
    except ValueError as err:
        raise ConfigError(f"not a number: {text!r}") from err


def _parse_int(text):
    try:
        return int(text)
    except ValueError as err:
        raise ConfigError(f"not an integer: {text!r}") from err


def _parse_rate(text):
    value = _parse_float(text)
    if not (0.0 < value <= _RATE_LIMIT):
        raise ConfigError(
            f"rate {value} outside the sane range (0, {_RATE_LIMIT}] 2pi x kHz; "
            f"rates are given in units of 2pi x kHz"
        )
    return value


def _parse_rate_or_zero(text):
    value = _parse_float(text)
    if value == 0.0:
        return 0.0
    return _parse_rate(text)


def _parse_angle(text):
    """Angles are written as fractions of pi."""
    return _parse_float(text) * math.pi


def _parse_float_list(text):
    return [_parse_float(part) for part in text.split(",") if part.strip()]


def _parse_angle_list(text):
    return [v * math.pi for v in _parse_float_list(text)]


def _parse_threads(text):
    if text.strip().lower() == "auto":
        return os.cpu_count() or 1
    value = _parse_int(text)
    if value < 1:
        raise ConfigError(f"threads must be >= 1 or 'auto', got {text!r}")
    return value


def _parse_format(text):
    value = text.strip().lower()
    if value not in ("csv", "json"):
        raise ConfigError(f"format must be 'csv' or 'json', got {text!r}")
    return value


# section -> key -> (parser, default-as-string)
_SCHEMA = {
    "model": {
        "omega": (_parse_rate, "10"),
        "kappa": (_parse_rate_or_zero, "5"),
        "j": (_parse_rate, "2"),
        "n_atoms": (_parse_float, "60000"),
        "m": (_parse_int, "4"),
        "omega_rec": (_parse_rate, "3.5"),
    },
    "run": {
        "seed": (_parse_int, "1234"),
        "threads": (_parse_threads, "1"),
        "format": (_parse_format, "csv"),
    },
    "integrator": {
        "dt": (_parse_float, str(DEFAULT_DT)),
        "record_every": (_parse_int, str(DEFAULT_RECORD_EVERY)),
    },
    "ensemble": {
        "theta": (_parse_angle, "0"),
        "g_rel": (_parse_float, "1.2"),
        "t_end": (_parse_float, "10"),
        "n_traj": (_parse_int, "100"),
    },
    "sense": {
        "theta0": (_parse_angle, "0"),
        "delta_theta": (_parse_angle, "0.05"),
        "omega_drive": (_parse_rate, "0.5"),
        "g_rel": (_parse_float, "1.09"),
        "t_ramp": (_parse_float, "1"),
        "t0": (_parse_float, "3"),
        "t_end": (_parse_float, "10"),
        "n_traj": (_parse_int, "1000"),
        "sigma_frac": (_parse_float, "0"),
    },
    "sweep": {
        "theta_min": (_parse_angle, "0"),
        "theta_max": (_parse_angle, "0.46"),
        "theta_steps": (_parse_int, "12"),
        "g_rel_min": (_parse_float, "0.6"),
        "g_rel_max": (_parse_float, "1.4"),
        "g_rel_steps": (_parse_int, "12"),
        "n_traj": (_parse_int, "100"),
        "t_end": (_parse_float, "15"),
        "tail_ms": (_parse_float, "5"),
    },
    "meanfield": {
        "theta": (_parse_angle_list, "0"),
        "g_rel": (_parse_float_list, "0.5,0.8,0.9,1.0,1.1,1.2,1.5"),
    },
}


@dataclass
class RunConfig:
    """Fully resolved configuration of one CLI invocation."""

    raw: dict          # section -> key -> parsed value
    params: ModelParams
    seed: int
    threads: int
    format: str

    def integrator(self, t_end):
        return IntegratorConfig(
            dt=self.raw["integrator"]["dt"],
            record_every=self.raw["integrator"]["record_every"],
            t_end=t_end,
        )

    def sensing(self):
        s = self.raw["sense"]
        return SensingConfig(
            theta0=s["theta0"],
            delta_theta=s["delta_theta"],
            omega_drive=twopi_khz_to_rad_per_ms(s["omega_drive"]),
            g_final_rel=s["g_rel"],
            t_ramp=s["t_ramp"],
            t0=s["t0"],
            t_end=s["t_end"],
            n_traj=s["n_traj"],
        )

    def sigma_atoms(self):
        return self.raw["sense"]["sigma_frac"] * self.params.n_atoms

    def sweep_grid(self):
        s = self.raw["sweep"]
        t_end = s["t_end"]
        tail = (t_end - s["tail_ms"], t_end)
        return GridSpec(
            theta_values=np.linspace(s["theta_min"], s["theta_max"], s["theta_steps"]),
            g_rel_values=np.linspace(s["g_rel_min"], s["g_rel_max"], s["g_rel_steps"]),
            n_traj=s["n_traj"],
            t_end=t_end,
            tail=tail,
            seed=self.seed,
        )

    def metadata(self, command):
        meta = {"command": command}
        for section in sorted(self.raw):
            for key in sorted(self.raw[section]):
                if (section, key) == ("run", "threads"):
                    # execution detail with no effect on the numbers;
                    # keeping it out preserves byte-identical outputs
                    # across thread counts
                    continue
                value = self.raw[section][key]
                if isinstance(value, list):
                    value = ",".join(format(v, ".9g") for v in value)
                meta[f"{section}.{key}"] = value
        return meta


def parse_config(path=None, overrides=None):
    """Read a config file, apply flag overrides, validate everything.

    path=None uses the documented defaults; overrides maps
    (section, key) -> raw string and wins over file values.
    """
    texts = {s: dict() for s in _SCHEMA}
    if path is not None:
        parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
        try:
            with open(path, "r", encoding="utf-8") as fh:
                parser.read_file(fh)
        except OSError as err:
            raise ConfigError(f"cannot read config file {path}: {err}") from err
        except configparser.Error as err:
            raise ConfigError(f"malformed config file {path}: {err}") from err
        for section in parser.sections():
            s = section.lower()
            if s not in _SCHEMA:
                raise ConfigError(
                    f"unknown config section [{section}]; known sections: "
                    f"{', '.join(sorted(_SCHEMA))}"
                )
            for key, value in parser.items(section):
                k = key.lower()
                if k not in _SCHEMA[s]:
                    raise ConfigError(
                        f"unknown key '{key}' in section [{section}]; known "
                        f"keys: {', '.join(sorted(_SCHEMA[s]))}"
                    )
                texts[s][k] = value
    env_threads = os.environ.get("CAVRING_THREADS")
    if env_threads:
        texts["run"]["threads"] = env_threads
    for (section, key), value in (overrides or {}).items():
        if value is None:
            continue
        if section not in _SCHEMA or key not in _SCHEMA[section]:
            raise ConfigError(f"unknown override {section}.{key}")
        texts[section][key] = str(value)

    raw = {}
    for section, keys in _SCHEMA.items():
        raw[section] = {}
        for key, (parse, default) in keys.items():
            text = texts[section].get(key, default)
            try:
                raw[section][key] = parse(text)
            except ConfigError as err:
                raise ConfigError(f"[{section}] {key}: {err}") from err

    m = raw["model"]
    params = ModelParams.from_twopi_khz(
        omega=m["omega"], kappa=m["kappa"], hop_j=m["j"],
        n_atoms=m["n_atoms"], n_sites=m["m"], omega_rec=m["omega_rec"],
    )
    return RunConfig(
        raw=raw,
        params=params,
        seed=raw["run"]["seed"],
        threads=raw["run"]["threads"],
        format=raw["run"]["format"],
    )
