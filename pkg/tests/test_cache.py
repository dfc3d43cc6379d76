import json

from schurcone import barhom, cache, groups as gr
from schurcone.cones import group_homology, pair_multiplier
from schurcone.abgrp import FgAbelianGroup


def test_roundtrip_and_counters(tmp_path):
    c = cache.DiskCache(tmp_path)
    assert c.get("x", 1, "a") is None
    c.put("x", 1, "a", payload={"v": [1, 2]})
    assert c.get("x", 1, "a") == {"v": [1, 2]}
    assert (c.hits, c.misses) == (1, 1)
    # no stray temporary files after an atomic write
    assert [p.name for p in (tmp_path / "x").iterdir() if p.name.startswith(".tmp")] == []


def test_corrupt_and_stale_entries_are_ignored(tmp_path):
    c = cache.DiskCache(tmp_path)
    c.put("x", 1, payload=5)
    path = next((tmp_path / "x").iterdir())
    path.write_text("{not json")
    assert c.get("x", 1) is None
    path.write_text(json.dumps({"version": "0.0.0", "format": 1, "key": ["x", 1], "payload": 5}))
    assert c.get("x", 1) is None
    c.put("x", 1, payload=6)
    assert c.get("x", 1) == 6


def test_results_are_recomputed_after_corruption(tmp_path):
    g = gr.dihedral(3)
    c = cache.DiskCache(tmp_path)
    with cache.using(c):
        first = group_homology(g, 3)
    for p in (tmp_path / "homology").iterdir():
        p.write_text("garbage")
    c2 = cache.DiskCache(tmp_path)
    with cache.using(c2):
        assert group_homology(g, 3) == first == FgAbelianGroup(0, (6,))
    assert c2.hits == 0


def test_warm_cache_hits(tmp_path):
    g = gr.cyclic(6)
    n = gr.subgroup_closure(g, [2])
    with cache.using(cache.DiskCache(tmp_path)):
        cold = pair_multiplier(g, n)
    warm_cache = cache.DiskCache(tmp_path)
    with cache.using(warm_cache):
        warm = pair_multiplier(g, n)
    assert cold == warm and warm_cache.hits >= 1


def test_bar_complex_from_disk(tmp_path):
    g = gr.cyclic(5)
    with cache.using(cache.DiskCache(tmp_path)):
        barhom._BAR_CACHE.clear()
        cx = barhom.bar_complex(g, 3)
    barhom._BAR_CACHE.clear()
    c = cache.DiskCache(tmp_path)
    with cache.using(c):
        cx2 = barhom.bar_complex(g, 3)
    assert c.hits == 1
    assert all(a == b for a, b in zip(cx.boundary, cx2.boundary))


def test_env_var(monkeypatch, tmp_path):
    monkeypatch.setenv(cache.ENV_VAR, str(tmp_path))
    assert cache.default_cache_dir() == tmp_path
    monkeypatch.delenv(cache.ENV_VAR)
    assert cache.default_cache_dir().name == "schurcone"
