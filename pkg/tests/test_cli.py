"""命令行：退出码与最后一行 JSON 摘要"""
import json

import pytest
from PIL import Image

from main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, run

START_PAIR = "X=P1,P2,P3,S2;Y=P2,P3,P4,P4[1]"


@pytest.fixture
def cli(capsys, tmp_path):
    def invoke(*argv):
        code = run([*argv, "--out", str(tmp_path)] if argv and not argv[0].startswith("-") else list(argv))
        lines = capsys.readouterr().out.strip().splitlines()
        return code, (json.loads(lines[-1]) if lines else None)

    invoke.out = tmp_path
    return invoke


def test_build_writes_category(cli):
    code, summary = cli("build", "-n", "2")
    assert code == EXIT_OK
    assert summary["objects"] == 5
    assert summary["serre_ok"] is True
    assert summary["command"] == "build" and summary["n"] == 2
    assert (cli.out / "category_c2_d2.json").exists()


def test_build_ar_quiver_dot(cli):
    code, summary = cli("build", "-n", "3", "--format", "dot")
    assert code == EXIT_OK
    assert summary["irreducible"] == 12
    assert (cli.out / "ar_c3_d2.dot").read_text(encoding="utf-8").startswith("digraph")


def test_homs_table(cli):
    code, summary = cli("homs", "-n", "2", "--at", "P1")
    assert code == EXIT_OK
    assert summary["sources"] == 1
    doc = json.loads((cli.out / "homs_c2_d2.json").read_text(encoding="utf-8"))
    assert doc["P1"]["P1"] == 1


def test_enum_cotorsion(cli):
    code, summary = cli("enum-cotorsion", "-n", "4", "--core", "P2@1,P3@1")
    assert code == EXIT_OK
    assert summary["count"] == 4
    assert summary["ns"] == 2
    doc = json.loads((cli.out / "cotorsion_c4_d2.json").read_text(encoding="utf-8"))
    assert len(doc["pairs"]) == 4


def test_t_structures(cli):
    code, summary = cli("t-structures", "-n", "3")
    assert code == EXIT_OK
    assert summary["count"] == 2


def test_cluster_tilting_count(cli):
    code, summary = cli("cluster-tilting", "-n", "3")
    assert code == EXIT_OK
    assert summary["count"] == 14


def test_cluster_tilting_complements(cli):
    code, summary = cli("cluster-tilting", "-n", "3", "-d", "4", "--core", "P1,P3")
    assert code == EXIT_FAILED
    assert summary["ok"] is False
    assert summary["cluster_tilting"] is False
    assert summary["complements"] == ["P2", "S3", "S3[1]", "S3[2]"]


def test_cluster_tilting_check_passes(cli):
    code, summary = cli("cluster-tilting", "-n", "3", "-d", "4", "--core", "P1,P3,S3[1]")
    assert code == EXIT_OK
    assert summary["cluster_tilting"] is True
    assert summary["complements"] == []


def test_decompose_with_core(cli):
    code, summary = cli("decompose", "-n", "4", "--core", "E")
    assert code == EXIT_OK
    assert summary["ns"] == 2


def test_decompose_needs_flag_for_higher_d(cli):
    code, summary = cli("decompose", "-n", "3", "-d", "4", "--core", "")
    assert code == EXIT_USAGE
    assert summary["ok"] is False


def test_mutate_pair_at_core_summand(cli):
    code, summary = cli("mutate-pair", "-n", "4", "--pair", START_PAIR, "--at", "P2")
    assert code == EXIT_OK
    assert summary["core"] == ["P3", "S3"]
    assert summary["D"] == ["P3"]


def test_mutate_ct(cli):
    code, summary = cli("mutate-ct", "-n", "4", "--core", "P1,P2,P3,P4", "--at", "P1")
    assert code == EXIT_OK
    assert summary["new"] == "S2"


def test_heart(cli):
    code, summary = cli("heart", "-n", "4", "--pair", "X=P2@1,P3@1,P4@1,I4;Y=P2@1,P3@1,P1@1,P1")
    assert code == EXIT_OK
    assert summary["heart"] == ["P2", "P4", "I3"]


def test_mutation_quiver_of_trivial_stratum(cli):
    code, summary = cli("mutation-quiver", "-n", "3", "--stratum", "0")
    assert code == EXIT_OK
    assert summary["vertices"] == 2
    assert summary["arrows"] == 2


def test_verify_suite(cli):
    code, summary = cli("verify", "example-c4a3")
    assert code == EXIT_OK
    assert summary["passed"] == ["example-c4a3"]


def test_draw_svg_and_png(cli):
    code, summary = cli("draw", "-n", "4", "--core", "E", "--format", "svg")
    assert code == EXIT_OK
    assert (cli.out / "polygon_c4_d2.svg").read_text(encoding="utf-8").startswith("<svg")
    code, _ = cli("draw", "-n", "4", "--pair", START_PAIR, "--format", "png")
    assert code == EXIT_OK
    with Image.open(cli.out / "polygon_c4_d2.png") as img:
        assert img.format == "PNG"


# ============ 失败与用法错误 ============

def test_non_rigid_set_fails(cli):
    code, summary = cli("rigid", "-n", "4", "--core", "S1,S2")
    assert code == EXIT_FAILED
    assert summary["rigid"] is False
    assert summary["ok"] is False


def test_invalid_pair_reports_counterexample(cli):
    code, summary = cli("heart", "-n", "4", "--pair", "X=P1;Y=P1")
    assert code == EXIT_FAILED
    assert summary["counterexample"]["reason"] == "decomposition"


def test_bad_object_name(cli):
    code, summary = cli("rigid", "-n", "4", "--core", "Q7")
    assert code == EXIT_USAGE
    assert summary["ok"] is False


def test_missing_core(cli):
    code, summary = cli("enum-cotorsion", "-n", "4")
    assert code == EXIT_USAGE
    assert "--core" in summary["error"]


def test_draw_needs_d2(cli):
    code, _ = cli("draw", "-n", "3", "-d", "4", "--core", "P1")
    assert code == EXIT_USAGE


def test_unknown_command(cli):
    code, _ = cli("frobnicate")
    assert code == EXIT_USAGE


def test_no_command():
    assert run([]) == EXIT_USAGE


def test_help():
    assert run(["--help"]) == EXIT_OK
