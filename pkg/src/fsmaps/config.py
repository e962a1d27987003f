"""Run configuration shared by the command line and the scripts."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

from .census import DEFAULT_EDGE_CAP
from .curve import Potential
from .errors import ConfigError
from .exactring import as_rational, fmt_rational


@dataclass
class RunConfig:
    couplings: dict = field(default_factory=dict)  # {j: "p/q"}
    order: int = 16  # truncation D in beta
    chi: int = 3  # largest 2g - 2 + n computed
    degree_cap: int = 8  # K, largest boundary degree extracted
    edge_cap: int = DEFAULT_EDGE_CAP
    out_dir: str | None = None

    def __post_init__(self):
        self.validate()

    def validate(self):
        clean = {}
        for j, v in dict(self.couplings).items():
            try:
                j = int(j)
                q = as_rational(v)
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise ConfigError(f"bad coupling t{j}={v!r}: {exc}") from exc
            if j < 3:
                raise ConfigError(f"coupling t{j}: internal faces have degree >= 3")
            if q:
                clean[j] = fmt_rational(q)
        self.couplings = dict(sorted(clean.items()))
        for name in ("order", "chi", "degree_cap", "edge_cap"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise ConfigError(f"{name} must be an integer, got {v!r}")
        if self.order < 4:
            raise ConfigError("order must be at least 4")
        if self.chi < 1:
            raise ConfigError("chi must be at least 1")
        if self.degree_cap < 1:
            raise ConfigError("degree_cap must be positive")
        if self.edge_cap < 2 or self.edge_cap % 2:
            raise ConfigError("edge_cap must be a positive even number")

    @property
    def potential(self) -> Potential:
        return Potential.from_couplings(self.couplings)

    def to_json(self):
        d = asdict(self)
        d["couplings"] = {f"t{j}": v for j, v in self.couplings.items()}
        return d

    @classmethod
    def from_json(cls, data):
        data = dict(data)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cp = data.get("couplings", {})
        if not isinstance(cp, dict):
            raise ConfigError("couplings must be an object")
        data["couplings"] = {str(k).lstrip("t"): v for k, v in cp.items()}
        return cls(**data)

    @classmethod
    def load(cls, path):
        try:
            with open(path) as fh:
                return cls.from_json(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
