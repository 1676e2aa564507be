"""验收套件"""
import pytest

from src.cluster.suites import SUITES, run_suite


def test_example_c4a3_suite():
    summary = run_suite("example-c4a3")["example-c4a3"]
    assert summary["complements"] == ["P2", "S3", "S3[1]", "S3[2]"]
    assert summary["condition3_witness"]["k"] == 1


def test_subquotient_suite():
    assert run_suite("subquotient-example")["subquotient-example"]["T"] == ["P3", "E", "S3", "P4[1]"]


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("no-such-suite")


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes(name):
    summary = run_suite(name, n=3)
    assert name in summary


@pytest.mark.slow
def test_all_suites_at_n4():
    summary = run_suite("all", n=4, jobs=2)
    assert set(summary) == set(SUITES)
    assert summary["mutation-example"]["I1"] == ["P3", "S3"]
    assert summary["mutation-example"]["I2"] == ["P3", "S2"]
