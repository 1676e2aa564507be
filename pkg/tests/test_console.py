"""终端表格与判定行"""
from src.utils.console import direct_sum, print_dim_table, print_table, render_table, verdict


def test_direct_sum():
    assert direct_sum(["P1", "S2[1]"]) == "P1 ⊕ S2[1]"
    assert direct_sum([]) == "0"


def test_table_pads_by_display_width():
    lines = render_table(["对象", "n"], [["P1", 1], ["M[2,3]@1", 22]])
    assert lines[1] == "─┼─" + "─" * 8 + "─┼─" + "─" * 2 + "─┼─"
    assert lines[2] == " │ P1       │ 1  │"
    assert lines[3] == " │ M[2,3]@1 │ 22 │"


def test_list_cells_are_direct_sums():
    lines = render_table(["核"], [[["P2", "P3"]], [[]]])
    assert lines[2] == " │ P2 ⊕ P3 │"
    assert lines[3] == " │ 0       │"


def test_long_cells_are_cut_by_display_width():
    lines = render_table(["x"], [["对象" * 10]], max_width=9)
    assert lines[2] == " │ 对象对... │"


def test_dim_table_marks_zeros(capsys):
    print_dim_table(["P1", "S2"], ["P1", "S2"], {("P1", "P1"): 1, ("S2", "S2"): 1})
    out = capsys.readouterr().out.splitlines()
    assert out[2] == " │ P1      │ 1  │ ·  │"
    assert out[3] == " │ S2      │ ·  │ 1  │"


def test_empty_table(capsys):
    print_table(["核"], [])
    assert "(无数据)" in capsys.readouterr().out


def test_verdict():
    assert "✅ P1 ⊕ P2 是刚性的" in verdict(True, "P1 ⊕ P2", "是刚性的", "不是刚性的")
    assert "❌ S2 不是刚性的" in verdict(False, "S2", "是刚性的", "不是刚性的")
