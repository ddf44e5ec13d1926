"""Engine configuration with environment-variable overrides (FGT_*)."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields

from .errors import ConfigError

DEFAULT_FAMILIES = (
    "cyclic",
    "abelian",
    "dihedral",
    "dicyclic",
    "symmetric",
    "alternating",
    "elementary",
    "special",
    "products",
)

OUTPUT_FORMATS = ("json", "csv", "table")


@dataclass
class EngineConfig:
    table_cap: int = 4096
    lattice_cap: int = 256
    subgroup_count_cap: int = 100_000
    max_order: int = 100
    families: tuple = DEFAULT_FAMILIES
    extra_exprs: tuple = ()
    output: str = "json"
    cache_dir: str | None = None
    jobs: int = 1
    seed: int = 0
    skip_threshold: float = 0.2
    vacuity_floor: int = 10
    pair_scan_max_order: int = 60

    def validate(self) -> "EngineConfig":
        for name in ("table_cap", "lattice_cap", "subgroup_count_cap",
                     "max_order", "jobs", "vacuity_floor",
                     "pair_scan_max_order"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.output not in OUTPUT_FORMATS:
            raise ConfigError(f"output must be one of {OUTPUT_FORMATS}")
        if not 0 <= self.skip_threshold <= 1:
            raise ConfigError("skip_threshold must be in [0, 1]")
        unknown = set(self.families) - set(DEFAULT_FAMILIES)
        if unknown:
            raise ConfigError(f"unknown families {sorted(unknown)}")
        return self

    def snapshot(self) -> dict:
        """Deterministic dict embedded in every report."""
        return {
            "table_cap": self.table_cap,
            "lattice_cap": self.lattice_cap,
            "subgroup_count_cap": self.subgroup_count_cap,
            "max_order": self.max_order,
            "families": list(self.families),
            "extra_exprs": list(self.extra_exprs),
            "seed": self.seed,
            "skip_threshold": self.skip_threshold,
            "vacuity_floor": self.vacuity_floor,
            "pair_scan_max_order": self.pair_scan_max_order,
        }


_ENV_INT = {
    "FGT_TABLE_CAP": "table_cap",
    "FGT_LATTICE_CAP": "lattice_cap",
    "FGT_SUBGROUP_COUNT_CAP": "subgroup_count_cap",
    "FGT_MAX_ORDER": "max_order",
    "FGT_JOBS": "jobs",
    "FGT_SEED": "seed",
    "FGT_VACUITY_FLOOR": "vacuity_floor",
    "FGT_PAIR_SCAN_MAX_ORDER": "pair_scan_max_order",
}


def config_from_env(**overrides) -> EngineConfig:
    kwargs = {}
    for env, name in _ENV_INT.items():
        raw = os.environ.get(env)
        if raw is not None:
            try:
                kwargs[name] = int(raw)
            except ValueError:
                raise ConfigError(f"{env} must be an integer, got {raw!r}")
    if "FGT_SKIP_THRESHOLD" in os.environ:
        kwargs["skip_threshold"] = float(os.environ["FGT_SKIP_THRESHOLD"])
    if "FGT_CACHE_DIR" in os.environ:
        kwargs["cache_dir"] = os.environ["FGT_CACHE_DIR"] or None
    if "FGT_OUTPUT" in os.environ:
        kwargs["output"] = os.environ["FGT_OUTPUT"]
    if "FGT_FAMILIES" in os.environ:
        kwargs["families"] = tuple(
            f.strip() for f in os.environ["FGT_FAMILIES"].split(",") if f.strip())
    valid = {f.name for f in fields(EngineConfig)}
    for k, v in overrides.items():
        if k not in valid:
            raise ConfigError(f"unknown config field {k!r}")
        if v is not None:
            kwargs[k] = v
    return EngineConfig(**kwargs).validate()
