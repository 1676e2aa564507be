"""对象命名文法

    OBJ   := BASE SHIFT*
    BASE  := "M[" a "," b "]" | ("P" | "I" | "S") ["_"] i | "E"
    SHIFT := "@" int | "[" int "]"

P{i} = [1,i]，I{i} = [i,n]，S{i} = [i,i]，E = [2,3]（仅 n = 4）。
多个平移后缀累加，例如 "P4[1]"、"P4@1"、"M[1,4]@1" 是同一个对象。
规范输出优先用别名，顺序 P > I > S > E，平移非零时追加 "[s]"。
"""
import re

from .derived import Summand
from .errors import InvalidInterval, ObjectSyntaxError
from .repcore import Interval, interval

_OBJECT_RE = re.compile(
    r"^(?:M\[\s*(\d+)\s*,\s*(\d+)\s*\]|([PIS])_?(\d+)|(E))((?:@-?\d+|\[-?\d+\])*)$"
)
_SHIFT_RE = re.compile(r"@(-?\d+)|\[(-?\d+)\]")


def parse_summand(text: str, n: int) -> Summand:
    """解析单个对象名"""
    m = _OBJECT_RE.match(text.strip())
    if not m:
        raise ObjectSyntaxError(f"无法解析对象名: {text!r}")
    a_str, b_str, alias, idx, e, shifts = m.groups()
    try:
        if a_str is not None:
            iv = interval(int(a_str), int(b_str), n)
        elif e is not None:
            if n != 4:
                raise ObjectSyntaxError("别名 E 只在 n = 4 时可用")
            iv = Interval(2, 3)
        else:
            i = int(idx)
            iv = {"P": lambda: interval(1, i, n),
                  "I": lambda: interval(i, n, n),
                  "S": lambda: interval(i, i, n)}[alias]()
    except InvalidInterval as exc:
        raise ObjectSyntaxError(str(exc)) from exc
    shift = sum(int(x or y) for x, y in _SHIFT_RE.findall(shifts))
    return Summand(shift, iv)


def split_list(text: str) -> list[str]:
    """按顶层逗号切分（方括号内的逗号不算）"""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return [p.strip() for p in parts if p.strip()]


def parse_list(text: str, n: int) -> list[Summand]:
    return [parse_summand(p, n) for p in split_list(text)]


def base_name(iv: Interval, n: int) -> str:
    if iv.a == 1:
        return f"P{iv.b}"
    if iv.a == iv.b:
        return f"S{iv.a}"
    if iv.b == n:
        return f"I{iv.a}"
    if n == 4 and iv == Interval(2, 3):
        return "E"
    return f"M[{iv.a},{iv.b}]"


def format_summand(x: Summand, n: int) -> str:
    """规范名称"""
    name = base_name(x.interval, n)
    return name if x.shift == 0 else f"{name}[{x.shift}]"
