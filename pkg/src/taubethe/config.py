"""Run configuration and verification report, both JSON-serializable."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any

from .core import Tolerance

SCHEMA = "v1"

CHECKS = ("oracle-vs-slavnov", "schur-expansion", "casoratian-columns", "ratio-constancy",
          "A1", "A2", "bilinear", "hirota-miwa", "laplace", "symfun-identities")

DEFAULT_THRESHOLDS = {
    "oracle-vs-slavnov": 1e-8,
    "schur-expansion": 1e-8,
    "casoratian-columns": 1e-9,
    "ratio-constancy": 1e-7,
    "A1": 1e-8,
    "A2": 1e-8,
    "bilinear": 1e-8,
    "hirota-miwa": 1e-8,
    "laplace": 1e-8,
    "symfun-identities": 1e-10,
    "bethe-solve": 0.0,
}


class ConfigError(ValueError):
    pass


def encode_complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def decode_complex(v: Any) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ConfigError(f"complex numbers are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise ConfigError(f"cannot read a complex number from {v!r}")


def encode_real(x: float) -> float | str:
    # strict JSON has no inf/nan
    return float(x) if math.isfinite(x) else repr(float(x))


def decode_real(v: Any) -> float:
    return float(v)


@dataclass(frozen=True)
class ChainConfig:
    L: int = 5
    nu: tuple[complex, ...] | str = "auto"
    gamma: complex = 0.4 + 0.15j

    def __post_init__(self):
        if not isinstance(self.L, int) or self.L < 1:
            raise ConfigError(f"L must be a positive integer, got {self.L!r}")
        if self.nu != "auto":
            if isinstance(self.nu, str):
                raise ConfigError(f"nu must be a list or 'auto', got {self.nu!r}")
            nu = tuple(complex(v) for v in self.nu)
            if len(nu) != self.L:
                raise ConfigError(f"nu has {len(nu)} entries but L = {self.L}")
            object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "gamma", complex(self.gamma))


@dataclass(frozen=True)
class SamplesConfig:
    lambda_sets: int = 3
    x_sets: int = 5
    max_multiplicity: int = 2

    def __post_init__(self):
        if self.lambda_sets < 1:
            raise ConfigError("lambda_sets must be at least 1")
        if self.x_sets < 2:
            raise ConfigError("x_sets must be at least 2")
        if self.max_multiplicity < 1:
            raise ConfigError("max_multiplicity must be at least 1")


@dataclass(frozen=True)
class RunConfig:
    chain: ChainConfig = field(default_factory=ChainConfig)
    n_roots: int = 3
    seed: int = 42
    tolerance: Tolerance = field(default_factory=Tolerance)
    checks: tuple[str, ...] = CHECKS
    samples: SamplesConfig = field(default_factory=SamplesConfig)
    max_solutions: int = 2
    thresholds: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "checks", tuple(self.checks))
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown checks {unknown}; known: {list(CHECKS)}")
        if not 1 <= self.n_roots <= self.chain.L:
            raise ConfigError(f"need 1 <= n_roots <= L = {self.chain.L}, got {self.n_roots}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.max_solutions < 1:
            raise ConfigError("max_solutions must be at least 1")
        bad = [k for k in self.thresholds if k not in DEFAULT_THRESHOLDS]
        if bad:
            raise ConfigError(f"thresholds given for unknown checks {bad}")

    def threshold(self, name: str) -> float:
        return float(self.thresholds.get(name, DEFAULT_THRESHOLDS[name]))

    def to_dict(self) -> dict:
        nu = self.chain.nu if self.chain.nu == "auto" else [encode_complex(v) for v in self.chain.nu]
        return {
            "chain": {"L": self.chain.L, "nu": nu, "gamma": encode_complex(self.chain.gamma)},
            "n_roots": self.n_roots,
            "seed": self.seed,
            "tolerance": {"rel": self.tolerance.rel, "abs_floor": self.tolerance.abs_floor},
            "checks": list(self.checks),
            "samples": asdict(self.samples),
            "max_solutions": self.max_solutions,
            "thresholds": {k: float(v) for k, v in sorted(self.thresholds.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {"chain", "n_roots", "seed", "tolerance", "checks", "samples", "max_solutions", "thresholds"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        ch = dict(d.get("chain", {}))
        nu = ch.get("nu", "auto")
        if nu != "auto":
            nu = tuple(decode_complex(v) for v in nu)
        chain = ChainConfig(L=int(ch.get("L", len(nu) if nu != "auto" else 5)), nu=nu,
                            gamma=decode_complex(ch.get("gamma", [0.4, 0.15])))
        tol = d.get("tolerance", {})
        try:
            tolerance = Tolerance(float(tol.get("rel", 1e-8)), float(tol.get("abs_floor", 1e-300)))
            samples = SamplesConfig(**d.get("samples", {}))
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        return cls(chain=chain, n_roots=int(d.get("n_roots", 3)), seed=int(d.get("seed", 42)),
                   tolerance=tolerance, checks=tuple(d.get("checks", CHECKS)), samples=samples,
                   max_solutions=int(d.get("max_solutions", 2)),
                   thresholds=dict(d.get("thresholds", {})))

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def load_config(path) -> RunConfig:
    with open(path) as fh:
        return RunConfig.from_dict(json.load(fh))


@dataclass
class CheckRecord:
    name: str
    fixture: str
    residual: float
    threshold: float
    status: str
    wall_time_ms: float = 0.0
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "fixture": self.fixture, "residual": encode_real(self.residual),
                "threshold": self.threshold, "status": self.status,
                "wall_time_ms": self.wall_time_ms, "detail": self.detail}

    @classmethod
    def from_dict(cls, d: dict) -> "CheckRecord":
        return cls(d["name"], d["fixture"], decode_real(d["residual"]), float(d["threshold"]),
                   d["status"], float(d["wall_time_ms"]), dict(d.get("detail", {})))


@dataclass
class Report:
    records: list[CheckRecord] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)
    schema: str = SCHEMA

    @property
    def summary(self) -> dict:
        counts = {"total": len(self.records), "passed": 0, "failed": 0, "degenerate": 0}
        for r in self.records:
            key = {"pass": "passed", "fail": "failed", "degenerate": "degenerate"}[r.status]
            counts[key] += 1
        return counts

    @property
    def ok(self) -> bool:
        return self.summary["failed"] == 0

    def to_dict(self, timing: bool = True) -> dict:
        recs = [r.to_dict() for r in self.records]
        if not timing:
            for r in recs:
                r.pop("wall_time_ms")
        return {"schema": self.schema, "records": recs, "summary": self.summary,
                "provenance": dict(self.provenance)}

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        rep = cls([CheckRecord.from_dict(r) for r in d["records"]], dict(d["provenance"]), d["schema"])
        if d.get("summary") is not None and d["summary"] != rep.summary:
            raise ValueError("report summary is inconsistent with its records")
        return rep

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))
