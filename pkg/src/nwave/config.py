"""Line-oriented configuration files, layered resolution, and run manifests.

Config grammar: one ``key = value`` pair per line; blank lines and lines
starting with ``#`` are ignored.  Unknown keys are errors that name the
key and line.  Resolution is layered: built-in defaults (the production
Set-1 grid), then the file, then explicit flag overrides.
"""

from __future__ import annotations

import dataclasses
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import ConfigError
from .grid import DomainConfig
from .turbulence import TurbulenceParams

_DOMAIN_KEYS = {
    "Sigma": float,
    "rho_min": float,
    "rho_max": float,
    "theta_min": float,
    "theta_max": float,
    "N_sigma": int,
    "N_rho": int,
    "N_theta": int,
    "A": float,
    "B": float,
    "roi_rho_min": float,
    "roi_rho_max": float,
    "roi_theta_min": float,
    "roi_theta_max": float,
}

_TURBULENCE_KEYS = {
    "n_modes": int,
    "sigma_u": float,
    "c0": float,
    "T0": float,
    "k_min": float,
    "k_max": float,
    "seed": int,
}

_RUN_KEYS = {
    "solver": str,
    "precision": str,
    "threads": int,
    "set": int,
    "guard": float,
    "v_max_bound": float,
    "strict_cfl": bool,
    "max_hours": float,
    "deterministic": bool,
}

KNOWN_KEYS = {**_DOMAIN_KEYS, **_TURBULENCE_KEYS, **_RUN_KEYS}

RUN_DEFAULTS = {
    "solver": "exprk22",
    "precision": "double",
    "threads": 1,
    "guard": 10.0,
    "v_max_bound": 5.0,
    "strict_cfl": False,
    "max_hours": None,
    "deterministic": True,
}


def _parse_value(key: str, raw: str, lineno: int):
    typ = KNOWN_KEYS[key]
    try:
        if typ is bool:
            low = raw.lower()
            if low in ("true", "1", "yes", "on"):
                return True
            if low in ("false", "0", "no", "off"):
                return False
            raise ValueError(raw)
        return typ(raw)
    except ValueError:
        raise ConfigError(
            f"line {lineno}: value {raw!r} for key {key!r} is not a valid "
            f"{typ.__name__}"
        ) from None


def read_config_file(path) -> dict:
    """Parse a key = value file into a flat dict of known keys."""
    out: dict = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
            key, _, raw = stripped.partition("=")
            key = key.strip()
            raw = raw.strip()
            if key not in KNOWN_KEYS:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            out[key] = _parse_value(key, raw, lineno)
    return out


def resolve(file_values: dict | None = None, overrides: dict | None = None):
    """Layer defaults <- file <- overrides into typed configuration.

    Returns (DomainConfig, TurbulenceParams, run_options dict).  A ``set``
    key selects a Table-1 grid preset before the remaining domain keys
    apply on top of it.
    """
    from .analysis import GRID_SETS

    merged: dict = {}
    for layer in (file_values or {}, overrides or {}):
        for key, value in layer.items():
            if value is None:
                continue
            if key not in KNOWN_KEYS:
                raise ConfigError(f"unknown key {key!r}")
            merged[key] = value

    domain_kwargs: dict = {}
    set_id = merged.pop("set", None)
    if set_id is not None:
        if set_id not in GRID_SETS:
            raise ConfigError(f"set must be 1..4, got {set_id}")
        domain_kwargs.update(GRID_SETS[set_id])

    roi = {}
    for key, value in merged.items():
        if key in _DOMAIN_KEYS:
            if key.startswith("roi_"):
                roi[key] = value
            else:
                domain_kwargs[key] = value

    # Default roi: the production window clamped to the resolved domain
    # (full domain if disjoint).  Explicit roi keys are validated strictly.
    defaults = {f.name: f.default for f in dataclasses.fields(DomainConfig)}
    bounds_rho = (domain_kwargs.get("rho_min", defaults["rho_min"]),
                  domain_kwargs.get("rho_max", defaults["rho_max"]))
    bounds_theta = (domain_kwargs.get("theta_min", defaults["theta_min"]),
                    domain_kwargs.get("theta_max", defaults["theta_max"]))

    def clamp(default_roi, bounds):
        lo = max(default_roi[0], bounds[0])
        hi = min(default_roi[1], bounds[1])
        return (lo, hi) if lo < hi else bounds

    roi_rho_default = clamp(defaults["roi_rho"], bounds_rho)
    roi_theta_default = clamp(defaults["roi_theta"], bounds_theta)
    domain_kwargs["roi_rho"] = (roi.get("roi_rho_min", roi_rho_default[0]),
                                roi.get("roi_rho_max", roi_rho_default[1]))
    domain_kwargs["roi_theta"] = (roi.get("roi_theta_min", roi_theta_default[0]),
                                  roi.get("roi_theta_max", roi_theta_default[1]))
    try:
        domain = DomainConfig(**domain_kwargs)
    except ConfigError as exc:
        raise ConfigError(f"invalid domain configuration: {exc}") from None

    turb_kwargs = {k: v for k, v in merged.items() if k in _TURBULENCE_KEYS}
    turbulence = TurbulenceParams(**turb_kwargs)

    run = dict(RUN_DEFAULTS)
    run.update({k: v for k, v in merged.items() if k in _RUN_KEYS})
    if run["solver"] not in ("splitting", "exprk22", "expeuler", "both"):
        raise ConfigError(f"unknown solver {run['solver']!r}")
    if run["precision"] not in ("double", "single"):
        raise ConfigError(f"unknown precision {run['precision']!r}")
    return domain, turbulence, run


def output_root() -> str:
    """Default directory for run outputs (NWAVE_OUTPUT_ROOT or cwd)."""
    return os.environ.get("NWAVE_OUTPUT_ROOT", os.getcwd())


def default_snapshot_sigmas(domain: DomainConfig):
    """Ten evenly spaced sigma stations plus the figure checkpoints 41, 115."""
    stations = list(np.linspace(0.0, domain.Sigma, 10))
    for extra in (41.0, 115.0):
        if 0.0 <= extra <= domain.Sigma:
            stations.append(extra)
    snapped = sorted({round(s / domain.d_sigma) * domain.d_sigma for s in stations})
    return snapped


@dataclass
class RunManifest:
    """Everything needed to reproduce a run bitwise in deterministic mode."""

    domain: dict
    turbulence: dict
    run: dict
    code_version: str = __version__
    started: str = ""
    finished: str = ""
    outputs: list = field(default_factory=list)

    @classmethod
    def create(cls, domain: DomainConfig, turbulence: TurbulenceParams,
               run: dict) -> "RunManifest":
        return cls(
            domain=dataclasses.asdict(domain),
            turbulence=dataclasses.asdict(turbulence),
            run={k: v for k, v in run.items()},
            started=time.strftime("%Y-%m-%dT%H:%M:%S"),
        )

    def resolved(self):
        domain_kwargs = dict(self.domain)
        domain_kwargs["roi_rho"] = tuple(domain_kwargs["roi_rho"])
        domain_kwargs["roi_theta"] = tuple(domain_kwargs["roi_theta"])
        domain = DomainConfig(**domain_kwargs)
        turbulence = TurbulenceParams(**self.turbulence)
        run = dict(RUN_DEFAULTS)
        run.update(self.run)
        return domain, turbulence, run

    def write(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(dataclasses.asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def read(cls, path) -> "RunManifest":
        with open(path) as fh:
            data = json.load(fh)
        return cls(**data)
