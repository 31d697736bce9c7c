"""Experiment configuration: a flat TOML document with one table per concern."""
from __future__ import annotations

import copy
import hashlib
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib
import numpy as np
import tomli_w

KINDS = ("geometry", "qfi-free", "qfi-field", "fi-position", "ratio-scan", "mle")


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending field."""


def _default_gamma():
    return [float(g) for g in (math.pi / 2) * (0.5 + np.arange(25)) / 25]


DEFAULTS: dict[str, dict] = {
    "geometry": {
        "surface": {"type": "torus", "r": 1.0, "R": 3.0},
        "physics": {"hbar": 1.0, "mass": 1.0, "xi": [-1.0, 0.0, 1.0 / 6.0, 1.0]},
        "scan": {"u": [0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi], "v": [0.0]},
    },
    "qfi-free": {
        "surface": {"type": "sphere"},
        "probe": {"type": "two-level", "j": 1, "m": 0, "alpha": math.pi / 4, "beta": 0.0},
        "physics": {"hbar": 1.0, "mass": 1.0, "t": [1.0, 2.0, 4.0], "lam": [1.0]},
    },
    "qfi-field": {
        "surface": {"type": "sphere"},
        "physics": {"hbar": 1.0, "mass": 1.0, "charge": 1.0, "field": 1.0, "lam": [0.5, 1.0, 2.0]},
        "probe": {"k": 1.0, "m": 0},
        "numerics": {"fd_step": 1e-5},
    },
    "fi-position": {
        "surface": {"type": "sphere"},
        "probe": {"type": "two-level", "j": 1, "m": 0, "alpha": math.pi / 4, "beta": math.pi / 2},
        "physics": {"hbar": 1.0, "mass": 1.0, "t": [0.5, 1.0, 2.0], "lam": [1.0]},
        "numerics": {"n_theta": 400, "n_phi": 64},
    },
    "ratio-scan": {
        "surface": {"type": "sphere"},
        "physics": {"hbar": 1.0, "mass": 1.0, "t": [10.0, 100.0], "lam": [0.1, 1.0, 10.0]},
        "scan": {"j": [1, 2], "gamma": _default_gamma()},
        "numerics": {"n_theta": 800, "n_phi": 16},
    },
    "mle": {
        "surface": {"type": "sphere"},
        "probe": {"type": "two-level", "j": 1, "m": 0, "alpha": math.pi / 4, "beta": 0.0},
        "physics": {"hbar": 1.0, "mass": 1.0, "t": 1.0, "lam0": 1.0},
        "numerics": {"n_samples": 10000, "replicas": 200, "interval": [0.5, 2.0]},
    },
}


@dataclass
class ExperimentConfig:
    kind: str
    seed: int = 0
    surface: dict = field(default_factory=dict)
    probe: dict = field(default_factory=dict)
    physics: dict = field(default_factory=dict)
    scan: dict = field(default_factory=dict)
    numerics: dict = field(default_factory=dict)

    @classmethod
    def default(cls, kind: str) -> "ExperimentConfig":
        if kind not in KINDS:
            raise ConfigError(f"kind: unknown experiment kind {kind!r}")
        return cls(kind=kind, **copy.deepcopy(DEFAULTS[kind]))

    @classmethod
    def from_dict(cls, doc: dict, kind: str | None = None) -> "ExperimentConfig":
        doc = dict(doc)
        k = doc.pop("kind", kind)
        if k is None:
            raise ConfigError("kind: missing")
        if kind is not None and k != kind:
            raise ConfigError(f"kind: config is for {k!r} but command is {kind!r}")
        unknown = set(doc) - {"seed", "surface", "probe", "physics", "scan", "numerics"}
        if unknown:
            raise ConfigError(f"{sorted(unknown)[0]}: unknown key")
        cfg = cls.default(k)
        if "seed" in doc:
            cfg.seed = doc["seed"]
        for table in ("surface", "probe", "physics", "scan", "numerics"):
            if table in doc:
                if not isinstance(doc[table], dict):
                    raise ConfigError(f"{table}: expected a table")
                # a new surface/probe type replaces the default table outright
                if table in ("surface", "probe") and "type" in doc[table]:
                    getattr(cfg, table).clear()
                getattr(cfg, table).update(doc[table])
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path, kind: str | None = None) -> "ExperimentConfig":
        try:
            with open(path, "rb") as fh:
                doc = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        return cls.from_dict(doc, kind)

    def to_dict(self) -> dict:
        return asdict(self)

    def dump(self, path) -> None:
        Path(path).write_text(tomli_w.dumps({k: v for k, v in self.to_dict().items() if v != {}}), encoding="utf-8")

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    # -- validation -----------------------------------------------------------

    def validate(self) -> None:
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed < 2**64:
            raise ConfigError("seed: must be an integer in [0, 2^64)")
        for key in ("hbar", "mass"):
            self._positive("physics", key)
        stype = self.surface.get("type")
        allowed = {"geometry": ("sphere", "cylinder", "torus"), "qfi-free": ("sphere", "cylinder"),
                   "qfi-field": ("sphere", "cylinder"), "fi-position": ("sphere", "cylinder"),
                   "ratio-scan": ("sphere",), "mle": ("sphere",)}[self.kind]
        if stype not in allowed:
            raise ConfigError(f"surface.type: {stype!r} not supported for {self.kind} (choose from {allowed})")
        if self.kind == "geometry":
            if stype == "torus":
                self._positive("surface", "r")
                self._positive("surface", "R")
                if not self.surface["R"] > self.surface["r"]:
                    raise ConfigError("surface.R: must exceed surface.r")
            else:
                self._positive("surface", "radius")
            self._grid("scan", "u")
            self._grid("scan", "v")
            self._grid("physics", "xi")
        if self.kind in ("qfi-free", "fi-position"):
            self._grid("physics", "t")
            self._grid("physics", "lam", positive=True)
            self._probe()
        if self.kind == "qfi-field":
            self._grid("physics", "lam", positive=True)
            for key in ("charge", "field"):
                self._number("physics", key)
            self._positive("numerics", "fd_step")
        if self.kind == "ratio-scan":
            self._grid("physics", "t")
            self._grid("physics", "lam", positive=True)
            self._grid("scan", "j")
            self._grid("scan", "gamma")
        if self.kind == "mle":
            self._probe()
            self._number("physics", "t")
            self._positive("physics", "lam0")
            n = self.numerics.get("n_samples")
            r = self.numerics.get("replicas")
            if not (isinstance(n, int) and n >= 1):
                raise ConfigError("numerics.n_samples: must be a positive integer")
            if not (isinstance(r, int) and r >= 2):
                raise ConfigError("numerics.replicas: must be an integer >= 2")
            lo_hi = self.numerics.get("interval")
            if not (isinstance(lo_hi, list) and len(lo_hi) == 2 and 0 < lo_hi[0] < self.physics["lam0"] < lo_hi[1]):
                raise ConfigError("numerics.interval: need [lo, hi] with 0 < lo < lam0 < hi")

    def _number(self, table, key):
        val = getattr(self, table).get(key)
        if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
            raise ConfigError(f"{table}.{key}: must be a finite number")
        return val

    def _positive(self, table, key):
        if not self._number(table, key) > 0:
            raise ConfigError(f"{table}.{key}: must be positive")

    def _grid(self, table, key, positive=False):
        val = getattr(self, table).get(key)
        if not isinstance(val, list) or not val:
            raise ConfigError(f"{table}.{key}: must be a non-empty list")
        if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in val):
            raise ConfigError(f"{table}.{key}: entries must be numbers")
        if any(b <= a for a, b in zip(val, val[1:])):
            raise ConfigError(f"{table}.{key}: must be strictly increasing")
        if positive and val[0] <= 0:
            raise ConfigError(f"{table}.{key}: entries must be positive")

    def _probe(self):
        ptype = self.probe.get("type")
        stype = self.surface.get("type")
        if ptype == "two-level":
            for key in ("alpha", "beta"):
                self._number("probe", key)
            j = self.probe.get("j") if stype == "sphere" else self.probe.get("m")
            if not isinstance(j, int):
                raise ConfigError("probe.j: must be an integer" if stype == "sphere" else "probe.m: must be an integer")
        elif ptype == "modes":
            modes = self.probe.get("modes")
            if not isinstance(modes, list) or not modes or any(not isinstance(r, list) or len(r) != 4 for r in modes):
                raise ConfigError("probe.modes: list of [label1, m, re, im] rows required")
        elif ptype == "von-mises":
            if stype != "sphere":
                raise ConfigError("probe.type: von-mises packets live on the sphere")
            if not self._number("probe", "kappa") >= 0:
                raise ConfigError("probe.kappa: must be non-negative")
        else:
            raise ConfigError(f"probe.type: unknown probe type {ptype!r}")
