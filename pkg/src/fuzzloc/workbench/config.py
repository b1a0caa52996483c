from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from importlib import resources
from pathlib import Path

ENV_VAR = "FUZZLOC_WORKSPACE"


class ConfigError(ValueError):
    pass


def shipped(relpath: str) -> Path:
    """Path of a file shipped under ``fuzzloc/data``."""
    return Path(str(resources.files("fuzzloc.data").joinpath(relpath)))


@dataclass(frozen=True)
class WorkspaceConfig:
    store: Path | None = None
    catalog: Path | None = None
    kb: Path | None = None
    network: Path | None = None
    scenario: Path | None = None
    alpha: float = 0.5
    dedup_threshold: float = 0.85
    risk_thresholds: tuple[float, float] | None = None

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha {self.alpha} outside [0, 1]")
        if not 0.0 < self.dedup_threshold <= 1.0:
            raise ConfigError(f"dedup_threshold {self.dedup_threshold} outside (0, 1]")
        if self.risk_thresholds is not None:
            t1, t2 = self.risk_thresholds
            if not t1 < t2:
                raise ConfigError(f"risk_thresholds need t1 < t2, got {self.risk_thresholds}")

    @classmethod
    def from_file(cls, path: str | Path) -> WorkspaceConfig:
        """JSON object with any of the field names; paths resolve against the file."""
        path = Path(path)
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
        kw = {}
        for key, value in doc.items():
            if key in ("store", "catalog", "kb", "network", "scenario") and value is not None:
                kw[key] = (path.parent / value).resolve()
            elif key == "risk_thresholds" and value is not None:
                kw[key] = (float(value[0]), float(value[1]))
            elif key in ("alpha", "dedup_threshold"):
                kw[key] = float(value)
        return cls(**kw)

    @classmethod
    def from_env(cls) -> WorkspaceConfig:
        p = os.environ.get(ENV_VAR)
        return cls.from_file(p) if p else cls()

    def with_defaults(self) -> WorkspaceConfig:
        """Fill unset paths with the shipped demo files."""
        return replace(
            self,
            store=self.store or shipped("store/subscribers.csv"),
            catalog=self.catalog or shipped("store/catalog.json"),
            kb=self.kb or shipped("kb/schedule_risk/manifest.json"),
            network=self.network or shipped("network/demo_grid.json"),
            scenario=self.scenario or shipped("scenarios/scripted_walk.json"),
        )
