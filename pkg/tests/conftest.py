"""共享夹具：已构造的范畴与 hypothesis 配置"""
import os

import pytest
from hypothesis import HealthCheck, Verbosity, settings

from src.cluster.orbit import build_category

# sympy 消元较慢，统一关闭 deadline
settings.register_profile("fast", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.register_profile("debugger", max_examples=10, deadline=None, verbosity=Verbosity.verbose,
                          suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fast"))


@pytest.fixture(scope="session", autouse=True)
def isolated_dirs(tmp_path_factory):
    """缓存与产物都写到临时目录"""
    saved = {key: os.environ.get(key) for key in ("CY_CACHE_DIR", "CY_OUT_DIR")}
    os.environ["CY_CACHE_DIR"] = str(tmp_path_factory.mktemp("cache"))
    os.environ["CY_OUT_DIR"] = str(tmp_path_factory.mktemp("out"))
    yield
    for key, value in saved.items():
        if value is None:
            os.environ.pop(key, None)
        else:
            os.environ[key] = value


@pytest.fixture(scope="session")
def c2a1():
    return build_category(1, 2)


@pytest.fixture(scope="session")
def c2a2():
    return build_category(2, 2)


@pytest.fixture(scope="session")
def c2a3():
    return build_category(3, 2)


@pytest.fixture(scope="session")
def c2a4():
    return build_category(4, 2)


@pytest.fixture(scope="session")
def c4a3():
    return build_category(3, 4)


@pytest.fixture(scope="session")
def c3a2():
    return build_category(2, 3)
