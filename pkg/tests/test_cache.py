import json
import time

import pytest

from fgt import groups
from fgt.cache import LatticeCache
from fgt.config import EngineConfig
from fgt.subgroups import all_subgroups
from fgt.theorems import verify


def fresh(expr_order=4):
    return groups.elementary_abelian(2, expr_order)


def test_store_and_load(tmp_path):
    store = LatticeCache(tmp_path)
    g = fresh()
    lattice = all_subgroups(g)
    lattice.sqn_flags()
    path = store.store(lattice)
    assert path.exists()
    g2 = groups.elementary_abelian(2, 4)
    loaded = store.load(g2)
    assert loaded is not None
    assert [h.mask for h in loaded.subgroups] == \
        [h.mask for h in lattice.subgroups]
    assert loaded.sqn_flags() == lattice.sqn_flags()


def test_load_missing(tmp_path):
    store = LatticeCache(tmp_path)
    assert store.load(fresh()) is None


def test_tampered_entry_detected(tmp_path):
    store = LatticeCache(tmp_path)
    g = fresh()
    store.store(all_subgroups(g))
    path = store.path_for(g)
    payload = json.loads(path.read_text())
    # corrupt every stored mask by toggling the bit for element 1, so any
    # spot-check sample hits a non-closed or identity-less set
    payload["subgroups"] = [hex(int(m, 16) ^ 2) for m in payload["subgroups"]]
    path.write_text(json.dumps(payload))
    g2 = groups.elementary_abelian(2, 4)
    issues = store.validate([g2])
    assert issues
    assert not store.path_for(g2).exists()


def test_group_hash_mismatch_purged(tmp_path):
    store = LatticeCache(tmp_path)
    g = fresh()
    store.store(all_subgroups(g))
    path = store.path_for(g)
    payload = json.loads(path.read_text())
    payload["group"] = "0" * 64
    path.write_text(json.dumps(payload))
    assert store.load(groups.elementary_abelian(2, 4)) is None
    assert not path.exists()


def test_warm_validate_purge(tmp_path):
    store = LatticeCache(tmp_path)
    gs = [groups.cyclic(6), groups.dihedral(8), groups.quaternion8()]
    written = store.warm(gs)
    assert written == 3
    assert len(store.entries()) == 3
    assert store.warm([groups.cyclic(6)]) == 0  # already present
    fresh_gs = [groups.cyclic(6), groups.dihedral(8), groups.quaternion8()]
    assert store.validate(fresh_gs) == []
    assert store.purge() == 3
    assert store.entries() == []
    assert store.validate(fresh_gs) == []  # empty cache no-op


def test_warm_then_verify_identical_and_faster(tmp_path):
    corpus = ["C(2)xC(2)xC(2)xC(2)xC(2)", "D(24)", "S(4)"]
    cold_cfg = EngineConfig(max_order=32, cache_dir=str(tmp_path / "c1"))
    t0 = time.perf_counter()
    cold = verify("L2.2.7", corpus, cold_cfg)
    cold_time = time.perf_counter() - t0
    warm_cfg = EngineConfig(max_order=32, cache_dir=str(tmp_path / "c1"))
    t0 = time.perf_counter()
    warm = verify("L2.2.7", corpus, warm_cfg)
    warm_time = time.perf_counter() - t0
    assert warm.to_json() == cold.to_json()
    # the warm run reads lattices instead of rebuilding them
    assert warm_time < cold_time


def test_cache_vs_no_cache_reports_match(tmp_path):
    corpus = ["D(12)", "Q8", "S(4)"]
    with_cache = verify("L2.3.2", corpus,
                        EngineConfig(max_order=24,
                                     cache_dir=str(tmp_path / "c2")))
    without = verify("L2.3.2", corpus, EngineConfig(max_order=24))
    assert with_cache.to_json() == without.to_json()
