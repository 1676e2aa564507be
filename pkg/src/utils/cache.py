"""范畴缓存：每个 (n, d) 一个 JSON 文件"""
import json
import logging
from pathlib import Path
from typing import Optional

from ..cluster.orbit import OrbitCategory, build_category
from .config import get_cache_dir

logger = logging.getLogger(__name__)

# 进程内复用
_memo: dict[tuple[int, int], OrbitCategory] = {}


def cache_path(n: int, d: int, cache_dir: Optional[Path] = None) -> Path:
    return (cache_dir or get_cache_dir()) / f"c{n}_d{d}.json"


def load_or_build(n: int, d: int, no_cache: bool = False, cache_dir: Optional[Path] = None) -> OrbitCategory:
    """优先读缓存；缺失、版本不符或 no_cache 时重建并写回"""
    key = (n, d)
    if not no_cache and key in _memo:
        return _memo[key]
    path = cache_path(n, d, cache_dir)
    cat = None
    if not no_cache and path.exists():
        try:
            cat = OrbitCategory.from_json(json.loads(path.read_text(encoding="utf-8")))
            cat.verify()
            logger.info("缓存命中: %s", path)
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            logger.warning("缓存 %s 无效，重建: %s", path, exc)
            cat = None
    if cat is None:
        logger.info("构造 C_%d(A_%d)", d, n)
        cat = build_category(n, d)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(cat.to_json(), ensure_ascii=False, indent=1), encoding="utf-8")
    _memo[key] = cat
    return cat


def list_cached(cache_dir: Optional[Path] = None) -> list[dict]:
    """缓存目录中的所有范畴文件"""
    root = cache_dir or get_cache_dir()
    if not root.exists():
        return []
    out = []
    for path in sorted(root.glob("c*_d*.json")):
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
            out.append({"path": path, "n": doc.get("n"), "d": doc.get("d"), "version": doc.get("version"),
                        "objects": len(doc.get("objects", [])), "size": path.stat().st_size})
        except (OSError, json.JSONDecodeError):
            out.append({"path": path, "n": None, "d": None, "version": None, "objects": 0,
                        "size": path.stat().st_size})
    return out


def clear_cache(n: Optional[int] = None, d: Optional[int] = None, cache_dir: Optional[Path] = None) -> int:
    """删除匹配的缓存文件，返回删除数"""
    removed = 0
    for entry in list_cached(cache_dir):
        if (n is None or entry["n"] == n) and (d is None or entry["d"] == d):
            entry["path"].unlink()
            removed += 1
    _memo.clear()
    return removed
