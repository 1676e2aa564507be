"""运行配置：从 .env 与环境变量读取"""
import os
from pathlib import Path

from dotenv import load_dotenv

# 加载环境变量
load_dotenv()

PROJECT_ROOT = Path(__file__).parent.parent.parent
DEFAULT_SEED = 20240607


def get_cache_dir() -> Path:
    """范畴缓存目录"""
    return Path(os.getenv("CY_CACHE_DIR", str(Path.home() / ".cache" / "cy"))).expanduser()


def get_out_dir() -> Path:
    """产物输出目录"""
    return Path(os.getenv("CY_OUT_DIR", "out"))


def get_jobs() -> int:
    """枚举扫描的默认并发数"""
    try:
        return max(1, int(os.getenv("CY_JOBS", "1")))
    except ValueError:
        return 1


def get_log_level() -> str:
    return os.getenv("CY_LOG_LEVEL", "WARNING").upper()


def get_seed() -> int:
    """求同构时一般元素的随机种子"""
    try:
        return int(os.getenv("CY_SEED", str(DEFAULT_SEED)))
    except ValueError:
        return DEFAULT_SEED
