"""Content-addressed subgroup lattice cache.

Files are keyed by the group's table hash, so a cache entry can never be
applied to the wrong group. Loads are spot-validated by re-closing three
seeded-random entries; a corrupt file is purged and the lattice recomputed.
Writes go through a temp file and an atomic rename.
"""

from __future__ import annotations

import json
import logging
import os
import random
import tempfile
from pathlib import Path

from . import kernels
from .errors import CacheCorrupt
from .groups import Group
from .subgroups import SubgroupLattice, all_subgroups, lattice_from_masks

log = logging.getLogger("fgt.cache")

CACHE_VERSION = 1


class LatticeCache:
    def __init__(self, directory, seed: int = 0):
        self.directory = Path(directory)
        self.seed = seed

    def path_for(self, g: Group) -> Path:
        return self.directory / f"lat-{g.key}.json"

    # -- io -----------------------------------------------------------------

    def load(self, g: Group) -> SubgroupLattice | None:
        path = self.path_for(g)
        if not path.exists():
            return None
        try:
            lattice = self._load_checked(g, path)
        except (CacheCorrupt, OSError, ValueError, KeyError) as exc:
            log.warning("purging corrupt cache entry %s: %s", path.name, exc)
            path.unlink(missing_ok=True)
            return None
        return lattice

    def _load_checked(self, g: Group, path: Path) -> SubgroupLattice:
        payload = json.loads(path.read_text())
        if payload.get("version") != CACHE_VERSION:
            raise CacheCorrupt("version mismatch")
        if payload.get("group") != g.key or payload.get("order") != g.order:
            raise CacheCorrupt("group hash mismatch")
        masks = [int(m, 16) for m in payload["subgroups"]]
        full = (1 << g.order) - 1
        rng = random.Random(f"{self.seed}:{g.key}")
        for mask in rng.sample(masks, min(3, len(masks))):
            if mask & ~full or not mask & 1:
                raise CacheCorrupt("mask out of range")
            if kernels.closure(g.flat, g.order, mask) != mask:
                raise CacheCorrupt("stored entry is not closed")
        lattice = lattice_from_masks(g, masks)
        flags = payload.get("flags", {})
        if "normal" in flags and len(flags["normal"]) == len(masks):
            order = {m: i for i, m in enumerate(masks)}
            lattice._normal = [bool(flags["normal"][order[h.mask]])
                               for h in lattice.subgroups]
        if "sqn" in flags and len(flags["sqn"]) == len(masks):
            order = {m: i for i, m in enumerate(masks)}
            lattice._sqn = [bool(flags["sqn"][order[h.mask]])
                            for h in lattice.subgroups]
        return lattice

    def store(self, lattice: SubgroupLattice) -> Path:
        g = lattice.group
        self.directory.mkdir(parents=True, exist_ok=True)
        payload = {
            "version": CACHE_VERSION,
            "group": g.key,
            "order": g.order,
            "subgroups": [hex(h.mask) for h in lattice.subgroups],
            "flags": {},
        }
        if lattice._normal is not None:
            payload["flags"]["normal"] = [int(b) for b in lattice._normal]
        if lattice._sqn is not None:
            payload["flags"]["sqn"] = [int(b) for b in lattice._sqn]
        path = self.path_for(g)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(json.dumps(payload, sort_keys=True))
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return path

    # -- operations ----------------------------------------------------------

    def lattice_for(self, g: Group, lattice_cap=None, count_cap=None,
                    persist: bool = True) -> SubgroupLattice:
        """Load when present, else compute (optionally persisting)."""
        hit = g._cache.get("lattice")
        if hit is not None:
            return hit
        lattice = self.load(g)
        if lattice is None:
            lattice = all_subgroups(g, lattice_cap=lattice_cap,
                                    count_cap=count_cap)
            lattice.sqn_flags()  # the hot flags are worth persisting
            if persist:
                self.store(lattice)
        return lattice

    def warm(self, groups, lattice_cap=None, count_cap=None) -> int:
        written = 0
        for g in groups:
            if self.load(g) is None:
                lattice = all_subgroups(g, lattice_cap=lattice_cap,
                                        count_cap=count_cap)
                lattice.sqn_flags()
                self.store(lattice)
                written += 1
        return written

    def validate(self, groups) -> list[str]:
        """Re-derive three seeded-random entries of each present file and
        byte-compare against a fresh closure; corrupt files are purged."""
        issues = []
        for g in groups:
            path = self.path_for(g)
            if not path.exists():
                continue
            try:
                self._load_checked(g, path)
            except (CacheCorrupt, OSError, ValueError, KeyError) as exc:
                issues.append(f"{path.name}: {exc}")
                log.warning("cache validate: purging %s (%s)", path.name, exc)
                path.unlink(missing_ok=True)
        return issues

    def purge(self) -> int:
        if not self.directory.exists():
            return 0
        removed = 0
        for path in self.directory.glob("lat-*.json"):
            path.unlink()
            removed += 1
        return removed

    def entries(self) -> list[Path]:
        if not self.directory.exists():
            return []
        return sorted(self.directory.glob("lat-*.json"))
