import json

import pytest

from src.utils import cache
from src.utils.cache import cache_path, clear_cache, list_cached, load_or_build


@pytest.fixture
def fresh(monkeypatch, tmp_path):
    monkeypatch.setattr(cache, "_memo", {})
    return tmp_path


def test_build_writes_json(fresh):
    cat = load_or_build(2, 2, cache_dir=fresh)
    path = cache_path(2, 2, fresh)
    assert path.name == "c2_d2.json"
    doc = json.loads(path.read_text(encoding="utf-8"))
    assert doc["n"] == 2 and doc["d"] == 2
    assert len(cat.objects) == 5


def test_second_load_reads_cache(fresh, monkeypatch):
    load_or_build(2, 2, cache_dir=fresh)
    monkeypatch.setattr(cache, "_memo", {})

    def boom(n, d):
        raise AssertionError("不应重建")

    monkeypatch.setattr(cache, "build_category", boom)
    again = load_or_build(2, 2, cache_dir=fresh)
    assert len(again.objects) == 5


def test_corrupt_file_is_rebuilt(fresh):
    path = cache_path(2, 2, fresh)
    path.write_text("{not json", encoding="utf-8")
    cat = load_or_build(2, 2, cache_dir=fresh)
    assert len(cat.objects) == 5
    assert json.loads(path.read_text(encoding="utf-8"))["n"] == 2


def test_no_cache_skips_memo(fresh):
    first = load_or_build(1, 2, cache_dir=fresh)
    assert load_or_build(1, 2, cache_dir=fresh) is first
    assert load_or_build(1, 2, no_cache=True, cache_dir=fresh) is not first


def test_list_and_clear(fresh):
    load_or_build(1, 2, cache_dir=fresh)
    load_or_build(2, 2, cache_dir=fresh)
    (fresh / "c9_d9.json").write_text("garbage", encoding="utf-8")
    entries = list_cached(fresh)
    assert [(e["n"], e["d"]) for e in entries] == [(1, 2), (2, 2), (None, None)]
    assert entries[0]["objects"] == 2
    assert clear_cache(n=1, cache_dir=fresh) == 1
    assert clear_cache(cache_dir=fresh) == 2
    assert list_cached(fresh) == []


def test_list_missing_dir(tmp_path):
    assert list_cached(tmp_path / "nope") == []
