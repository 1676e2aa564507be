"""终端输出：彩色文本、对象直和与维数表"""
import unicodedata
from typing import Iterable, Mapping, Sequence


# ANSI 颜色码
class Colors:
    HEADER = '\033[95m'
    BLUE = '\033[94m'
    CYAN = '\033[96m'
    GREEN = '\033[92m'
    YELLOW = '\033[93m'
    RED = '\033[91m'
    ENDC = '\033[0m'
    BOLD = '\033[1m'
    DIM = '\033[2m'


def color(text, c):
    """给文本添加颜色"""
    return f"{c}{text}{Colors.ENDC}"


def verdict(ok: bool, subject: str, passed: str, failed: str) -> str:
    """一行判定结果：✅/❌ + 主语 + 谓语"""
    return color(f"{'✅' if ok else '❌'} {subject} {passed if ok else failed}", Colors.GREEN if ok else Colors.RED)


def direct_sum(names: Iterable[str]) -> str:
    """对象名列表写成直和，空列表是零对象"""
    names = list(names)
    return " ⊕ ".join(names) if names else "0"


# ============ 表格 ============

def _width(text: str) -> int:
    """终端显示宽度，全角字符占两格"""
    return sum(2 if unicodedata.east_asian_width(ch) in "WF" else 1 for ch in text)


def _pad(text: str, width: int) -> str:
    return text + " " * (width - _width(text))


def _cell(cell, max_width: int) -> str:
    if isinstance(cell, (list, tuple, set, frozenset)):
        cell = direct_sum(str(x) for x in cell)
    text = "" if cell is None else str(cell)
    if _width(text) > max_width:
        while _width(text) > max_width - 3:
            text = text[:-1]
        text += "..."
    return text


def render_table(headers: Sequence[str], rows: Iterable[Sequence], max_width: int = 60) -> list[str]:
    """表格的各行；列表单元格按直和显示"""
    rows = [[_cell(c, max_width) for c in row] for row in rows]
    widths = [_width(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], _width(cell))
    lines = [" │ " + " │ ".join(color(_pad(h, widths[i]), Colors.BOLD) for i, h in enumerate(headers)) + " │",
             "─┼─" + "─┼─".join("─" * w for w in widths) + "─┼─"]
    lines += [" │ " + " │ ".join(_pad(cell, widths[i]) for i, cell in enumerate(row)) + " │" for row in rows]
    return lines


def print_table(headers: Sequence[str], rows: Sequence[Sequence], max_width: int = 60) -> None:
    if not rows:
        print(color("  (无数据)", Colors.DIM))
        return
    print("\n".join(render_table(headers, rows, max_width)))


def print_dim_table(sources: Sequence[str], targets: Sequence[str], dims: Mapping[tuple[str, str], int]) -> None:
    """源 × 靶 的维数方阵，零记作 ·"""
    rows = [[s] + [dims.get((s, t)) or "·" for t in targets] for s in sources]
    print_table(["源 \\ 靶"] + list(targets), rows, max_width=12)
