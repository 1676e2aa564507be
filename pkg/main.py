#!/usr/bin/env python3
"""
cy - d-簇范畴 C_d(A_n) 的计算工作台
构造/缓存范畴，运行各项枚举与校验，输出 JSON / DOT / SVG / PNG 产物
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from src.cluster.cotorsion import (CotorsionPair, classify, enumerate_all, enumerate_co_t_structures,
                                   enumerate_t_structures, enumerate_with_core, pair_to_json, validated_pair)
from src.cluster.heart import heart, heart_projection
from src.cluster.mutation import mutate_at, mutate_ct, mutate_pair, mutation_quiver
from src.cluster.orbit import OrbitCategory
from src.cluster.polygon import PolygonModel
from src.cluster.subcalc import (cluster_tilting_objects, complements, components_of_quotient, decompose_category,
                                 is_cluster_tilting, is_rigid, rigid_subcategories)
from src.cluster.suites import SUITES, run_suite
from src.engine.errors import CyError, ObjectSyntaxError, SuiteFailure, UnknownObject
from src.utils.cache import load_or_build
from src.utils.config import get_jobs, get_log_level, get_out_dir
from src.utils.console import Colors, color, direct_sum, print_dim_table, print_table, verdict
from src.utils.render import graph_dot, polygon_dot, polygon_png, polygon_svg, quiver_dot

logger = logging.getLogger("cy")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


# ============ 参数辅助 ============

def _category(args) -> OrbitCategory:
    return load_or_build(args.n, args.d, no_cache=args.no_cache)


def _objects(cat: OrbitCategory, text) -> frozenset:
    return frozenset(cat.parse_list(text)) if text else frozenset()


def _require(value, flag: str):
    if value is None:
        raise ObjectSyntaxError(f"缺少参数 {flag}")
    return value


def parse_pair(cat: OrbitCategory, text: str) -> CotorsionPair:
    """解析 "X=...;Y=..." 并校验余挠对"""
    parts = {}
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        key, sep, value = chunk.partition("=")
        if not sep or key.strip() not in ("X", "Y"):
            raise ObjectSyntaxError(f"无法解析余挠对: {text!r}")
        parts[key.strip()] = _objects(cat, value)
    if set(parts) != {"X", "Y"}:
        raise ObjectSyntaxError(f"余挠对需要同时给出 X 与 Y: {text!r}")
    return validated_pair(cat, parts["X"], parts["Y"])


def _pair_row(cat: OrbitCategory, P: CotorsionPair) -> list:
    kinds = [k for k, v in classify(cat, P).items() if v]
    return [P.delta, cat.names(P.core), cat.names(P.X - P.core), cat.names(P.Y - P.core), ",".join(kinds)]


PAIR_HEADERS = ["δ", "核 I", "X \\ I", "Y \\ I", "类型"]


def _write(args, stem: str, text: str, ext: str) -> Path:
    out_dir = Path(args.out) if args.out else get_out_dir()
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{stem}_c{args.n}_d{args.d}.{ext}"
    path.write_text(text, encoding="utf-8")
    logger.info("写出 %s", path)
    return path


def _write_json(args, stem: str, doc: dict) -> Path:
    return _write(args, stem, json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True) + "\n", "json")


# ============ 范畴命令 ============

def cmd_build(args) -> tuple[dict, bool]:
    """构造（或读取缓存）并列出基本区域"""
    cat = _category(args)
    print(color(f"\n📐 C_{cat.d}(A_{cat.n})：{len(cat.objects)} 个不可分解对象\n", Colors.HEADER))
    rows = [[cat.name(X), X.shift, f"[{X.interval.a},{X.interval.b}]", cat.name(cat.shift_perm[X])]
            for X in cat.objects]
    print_table(["对象", "平移", "区间", "[1]"], rows)
    arrows = cat.ar_quiver()
    if args.format == "dot":
        edges = [(cat.name(X), cat.name(Y), str(c) if c > 1 else "") for (X, Y), c in sorted(arrows.items())]
        path = _write(args, "ar", quiver_dot(f"AR C_{cat.d}(A_{cat.n})", cat.names(cat.objects), edges), "dot")
    else:
        path = _write_json(args, "category", cat.to_json())
    return {"objects": len(cat.objects), "serre_ok": cat.serre_ok,
            "irreducible": sum(arrows.values()), "artifact": str(path)}, cat.serre_ok


def cmd_homs(args) -> tuple[dict, bool]:
    """Hom 维数表；--at 限定源对象"""
    cat = _category(args)
    sources = sorted(_objects(cat, args.at)) if args.at else cat.objects
    table = {}
    for X in sources:
        table[cat.name(X)] = {cat.name(Y): dim for Y in cat.objects if (dim := cat.hom_dim(X, Y))}
    print(color(f"\n📊 Hom 维数表 (C_{cat.d}(A_{cat.n}))\n", Colors.HEADER))
    print_dim_table(list(table), cat.names(cat.objects),
                    {(s, t): dim for s, row in table.items() for t, dim in row.items()})
    path = _write_json(args, "homs", table)
    return {"sources": len(sources), "nonzero": sum(len(v) for v in table.values()), "artifact": str(path)}, True


def cmd_rigid(args) -> tuple[dict, bool]:
    """给定 --core 时判定刚性，否则列出全部刚性子范畴"""
    cat = _category(args)
    if args.core:
        S = _objects(cat, args.core)
        ok = is_rigid(cat, S)
        print(verdict(ok, direct_sum(cat.names(S)), "是刚性的", "不是刚性的"))
        return {"objects": cat.names(S), "rigid": ok}, ok
    found = rigid_subcategories(cat)
    by_size: dict[int, int] = {}
    for S in found:
        by_size[len(S)] = by_size.get(len(S), 0) + 1
    print(color(f"\n🧱 刚性子范畴共 {len(found)} 个\n", Colors.HEADER))
    print_table(["大小", "个数"], sorted(by_size.items()))
    path = _write_json(args, "rigid", {"rigid": [cat.names(S) for S in found]})
    return {"count": len(found), "by_size": {str(k): v for k, v in sorted(by_size.items())},
            "artifact": str(path)}, True


def cmd_cluster_tilting(args) -> tuple[dict, bool]:
    """给定 --core 时判定簇倾斜并列出补，否则列出全部簇倾斜对象"""
    cat = _category(args)
    if args.core:
        T = _objects(cat, args.core)
        ok = is_cluster_tilting(cat, T)
        comps = complements(cat, T)
        print(verdict(ok, direct_sum(cat.names(T)), f"是 {cat.d}-簇倾斜的", f"不是 {cat.d}-簇倾斜的"))
        print_table(["补"], [[cat.name(X)] for X in comps])
        return {"objects": cat.names(T), "cluster_tilting": ok, "complements": cat.names(comps)}, ok
    found = cluster_tilting_objects(cat)
    print(color(f"\n🌿 {cat.d}-簇倾斜对象共 {len(found)} 个\n", Colors.HEADER))
    print_table(["#", "直和项"], [[i, cat.names(T)] for i, T in enumerate(found)], max_width=90)
    path = _write_json(args, "cluster_tilting", {"cluster_tilting": [cat.names(T) for T in found]})
    return {"count": len(found), "artifact": str(path)}, True


def cmd_decompose(args) -> tuple[dict, bool]:
    """给定 --core 时分解 ⊥(I[1])/I，否则分解整个范畴"""
    cat = _category(args)
    if args.core is not None:
        I = _objects(cat, args.core)
        dec = components_of_quotient(cat, I, allow_higher=args.allow_higher)
        title = f"⊥({cat.names(I)}[1])/I"
    else:
        I = frozenset()
        dec = decompose_category(cat)
        title = f"C_{cat.d}(A_{cat.n})"
    print(color(f"\n🧩 {title}：{dec.ns} 个分支\n", Colors.HEADER))
    print_table(["#", "对象"], [[i, cat.names(c)] for i, c in enumerate(dec.components)], max_width=90)
    doc = {"core": cat.names(I), "components": [cat.names(c) for c in dec.components]}
    if args.format == "dot":
        groups = [(f"分支 {i}", cat.names(c)) for i, c in enumerate(dec.components)]
        edges = [(cat.name(X), cat.name(Y)) for c in dec.components for X in sorted(c) for Y in sorted(c)
                 if X < Y and (cat.hom_dim(X, Y) or cat.hom_dim(Y, X))]
        path = _write(args, "decompose", graph_dot(title, groups, edges), "dot")
    else:
        path = _write_json(args, "decompose", doc)
    return {"ns": dec.ns, "core": cat.names(I), "artifact": str(path)}, True


# ============ 余挠对命令 ============

def _report_pairs(args, cat: OrbitCategory, pairs: list, stem: str, title: str) -> dict:
    print(color(f"\n🔗 {title}：{len(pairs)} 个\n", Colors.HEADER))
    print_table(PAIR_HEADERS, [_pair_row(cat, P) for P in pairs], max_width=70)
    path = _write_json(args, stem, {"pairs": [pair_to_json(cat, P) for P in pairs]})
    return {"count": len(pairs), "artifact": str(path)}


def cmd_enum_cotorsion(args) -> tuple[dict, bool]:
    cat = _category(args)
    I = _objects(cat, _require(args.core, "--core"))
    pairs = enumerate_with_core(cat, I)
    ns = components_of_quotient(cat, I).ns
    summary = _report_pairs(args, cat, pairs, "cotorsion", f"核为 {cat.names(I)} 的余挠对")
    summary.update({"core": cat.names(I), "ns": ns})
    return summary, len(pairs) == 2 ** ns


def cmd_enum_all(args) -> tuple[dict, bool]:
    cat = _category(args)
    jobs = args.jobs or get_jobs()
    strata = enumerate_all(cat, jobs=jobs)
    print(color(f"\n🗂  C_2(A_{cat.n}) 全部余挠对（jobs={jobs}）\n", Colors.HEADER))
    print_table(["δ", "个数"], [[delta, len(v)] for delta, v in strata.items()])
    doc = {str(delta): [pair_to_json(cat, P) for P in v] for delta, v in strata.items()}
    path = _write_json(args, "cotorsion_all", doc)
    return {"strata": {str(k): len(v) for k, v in strata.items()},
            "total": sum(len(v) for v in strata.values()), "artifact": str(path)}, True


def cmd_t_structures(args) -> tuple[dict, bool]:
    cat = _category(args)
    return _report_pairs(args, cat, enumerate_t_structures(cat), "t_structures", "t-结构"), True


def cmd_co_t_structures(args) -> tuple[dict, bool]:
    cat = _category(args)
    return _report_pairs(args, cat, enumerate_co_t_structures(cat), "co_t_structures", "余 t-结构"), True


# ============ 变换命令 ============

def cmd_mutate_pair(args) -> tuple[dict, bool]:
    """--at I0 在单个核直和项处变换；否则 --core 给出 D"""
    cat = _category(args)
    P = parse_pair(cat, _require(args.pair, "--pair"))
    if args.at:
        Q = mutate_at(cat, P, cat.parse(args.at))
        D = P.core - {cat.parse(args.at)}
    else:
        D = _objects(cat, args.core)
        Q = mutate_pair(cat, P, D)
    print(color(f"\n🔄 μ(−; {cat.names(D)})\n", Colors.HEADER))
    print_table(PAIR_HEADERS, [_pair_row(cat, P), _pair_row(cat, Q)], max_width=70)
    doc = {"D": cat.names(D), "before": pair_to_json(cat, P), "after": pair_to_json(cat, Q)}
    path = _write_json(args, "mutate_pair", doc)
    return {"D": cat.names(D), "core": cat.names(Q.core), "X": cat.names(Q.X), "Y": cat.names(Q.Y),
            "artifact": str(path)}, True


def cmd_mutate_ct(args) -> tuple[dict, bool]:
    cat = _category(args)
    T = _objects(cat, _require(args.core, "--core"))
    ex = mutate_ct(cat, T, cat.parse(_require(args.at, "--at")))
    print(color(f"\n🔄 交换三角 {cat.name(ex.T0)} → {cat.names(ex.B)} → {cat.name(ex.T0_new)}\n",
                Colors.HEADER))
    print_table(["原", "新", "结果"], [[cat.name(ex.T0), cat.name(ex.T0_new), cat.names(ex.result)]], max_width=80)
    return {"T0": cat.name(ex.T0), "B": cat.names(ex.B), "new": cat.name(ex.T0_new),
            "result": cat.names(ex.result)}, True


def cmd_mutation_quiver(args) -> tuple[dict, bool]:
    cat = _category(args)
    strata = enumerate_all(cat, jobs=args.jobs or get_jobs())
    pairs = strata.get(args.stratum, [])
    G = mutation_quiver(cat, pairs)
    labels = {P: f"P{i}" for i, P in enumerate(pairs)}
    print(color(f"\n🕸  CTN_{args.stratum}：{len(pairs)} 个顶点，{G.number_of_edges()} 条箭头\n", Colors.HEADER))
    print_table(["顶点"] + PAIR_HEADERS, [[labels[P]] + _pair_row(cat, P) for P in pairs], max_width=60)
    edges = [(labels[u], labels[v], cat.name(data["at"]) if data["at"] is not None else "")
             for u, v, data in G.edges(data=True)]
    if args.format == "dot":
        path = _write(args, f"mutation_quiver_{args.stratum}", quiver_dot(f"CTN_{args.stratum}", list(labels.values()), edges), "dot")
    else:
        doc = {"vertices": {labels[P]: pair_to_json(cat, P) for P in pairs},
               "arrows": [{"from": u, "to": v, "at": at} for u, v, at in edges]}
        path = _write_json(args, f"mutation_quiver_{args.stratum}", doc)
    return {"stratum": args.stratum, "vertices": len(pairs), "arrows": G.number_of_edges(),
            "artifact": str(path)}, True


# ============ 心命令 ============

def cmd_heart(args) -> tuple[dict, bool]:
    cat = _category(args)
    P = parse_pair(cat, _require(args.pair, "--pair"))
    report = heart(cat, P)
    print(color(f"\n❤️  心 H/I（核 {cat.names(P.core)}）\n", Colors.HEADER))
    rows = [[cat.name(A), [f"{cat.name(B)}:{v}" for B in report.heart
                           if (v := report.quotient_hom_table.get((A, B), 0))]] for A in report.heart]
    print_table(["对象", "商 Hom 非零"], rows, max_width=80)
    doc = report.to_json(cat)
    doc["pair"] = pair_to_json(cat, P)
    path = _write_json(args, "heart", doc)
    return {"heart": cat.names(report.heart), "A": cat.names(report.tstructure_heart_A),
            "artifact": str(path)}, True


def cmd_heart_projection(args) -> tuple[dict, bool]:
    cat = _category(args)
    P = parse_pair(cat, _require(args.pair, "--pair"))
    M = cat.parse(_require(args.at, "--at"))
    witness = heart_projection(cat, M, P)
    doc = witness.to_json(cat)
    print(color(f"\n🎯 {cat.name(M)} 的心投影\n", Colors.HEADER))
    print_table(["阶段", "对象"], [[k, v] for k, v in doc.items() if k != "M"], max_width=80)
    path = _write_json(args, "heart_projection", doc)
    return {"M": cat.name(M), "M_bar": cat.names(witness.M_bar), "artifact": str(path)}, True


# ============ 校验与绘图 ============

def cmd_verify(args) -> tuple[dict, bool]:
    result = run_suite(args.suite, n=args.n, jobs=args.jobs or get_jobs(), no_cache=args.no_cache)
    print(color(f"\n✅ 套件 {args.suite} 通过\n", Colors.GREEN))
    print_table(["套件", "摘要"], [[k, json.dumps(v, ensure_ascii=False, sort_keys=True)] for k, v in result.items()],
                max_width=90)
    return {"suite": args.suite, "passed": sorted(result)}, True


def cmd_draw(args) -> tuple[dict, bool]:
    """多边形上高亮 --core 或 --pair 的对角线（仅 d = 2）"""
    cat = _category(args)
    model = PolygonModel(cat)
    if args.pair:
        P = parse_pair(cat, args.pair)
        groups = [("I", model.arcs_of(P.core)), ("X\\I", model.arcs_of(P.X - P.core)),
                  ("Y\\I", model.arcs_of(P.Y - P.core))]
    else:
        groups = [("S", model.arcs_of(_objects(cat, _require(args.core, "--core"))))]
    title = f"C_2(A_{cat.n})"
    if args.format == "png":
        out_dir = Path(args.out) if args.out else get_out_dir()
        path = polygon_png(out_dir / f"polygon_c{args.n}_d{args.d}.png", cat.n, groups)
    elif args.format == "dot":
        path = _write(args, "polygon", polygon_dot(cat.n, groups, title), "dot")
    elif args.format == "svg":
        path = _write(args, "polygon", polygon_svg(cat.n, groups, title), "svg")
    else:
        doc = {label: [str(a) for a in arcs] for label, arcs in groups}
        path = _write_json(args, "polygon", doc)
    print(color(f"🖼  已写出 {path}", Colors.GREEN))
    return {"arcs": {label: [str(a) for a in arcs] for label, arcs in groups}, "artifact": str(path)}, True


COMMANDS = {
    'build': cmd_build,
    'homs': cmd_homs,
    'rigid': cmd_rigid,
    'cluster-tilting': cmd_cluster_tilting,
    'decompose': cmd_decompose,
    'enum-cotorsion': cmd_enum_cotorsion,
    'enum-all': cmd_enum_all,
    't-structures': cmd_t_structures,
    'co-t-structures': cmd_co_t_structures,
    'mutate-pair': cmd_mutate_pair,
    'mutate-ct': cmd_mutate_ct,
    'mutation-quiver': cmd_mutation_quiver,
    'heart': cmd_heart,
    'heart-projection': cmd_heart_projection,
    'verify': cmd_verify,
    'draw': cmd_draw,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-n', type=int, default=4, help='A_n 的秩 (默认: 4)')
    common.add_argument('-d', type=int, default=2, help='CY 维数 d (默认: 2)')
    common.add_argument('--core', help='对象列表，逗号分隔 (如: "P2@1,P3@1")')
    common.add_argument('--pair', help='余挠对 "X=...;Y=..."')
    common.add_argument('--at', help='单个对象')
    common.add_argument('--out', help='产物目录 (默认: CY_OUT_DIR)')
    common.add_argument('--format', choices=['json', 'dot', 'svg', 'png'], default='json', help='产物格式')
    common.add_argument('--jobs', type=int, help='枚举并发数 (默认: CY_JOBS)')
    common.add_argument('--no-cache', action='store_true', help='忽略缓存强制重建')
    common.add_argument('-v', '--verbose', action='store_true', help='输出 DEBUG 日志')

    parser = argparse.ArgumentParser(
        prog='cy',
        description='d-簇范畴 C_d(A_n) 计算工作台',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  cy build -n 4 -d 2                          构造 C_2(A_4)
  cy enum-cotorsion -n 4 --core "P2@1,P3@1"   核为 P2[1]⊕P3[1] 的余挠对
  cy t-structures -n 4                        枚举 t-结构
  cy mutation-quiver -n 4 --stratum 1         δ = 1 层的变换箭图
  cy verify all -n 4                          全部校验套件
  cy draw -n 4 --core "E" --format svg        多边形图
"""
    )
    subparsers = parser.add_subparsers(dest='command', help='可用命令')

    # ============ 范畴命令 ============
    subparsers.add_parser('build', parents=[common], help='构造并缓存范畴')
    subparsers.add_parser('homs', parents=[common], help='Hom 维数表')
    subparsers.add_parser('rigid', parents=[common], help='刚性判定 / 枚举')
    subparsers.add_parser('cluster-tilting', parents=[common], help='簇倾斜判定 / 枚举')
    p_decompose = subparsers.add_parser('decompose', parents=[common], help='商范畴的不可分解分支')
    p_decompose.add_argument('--allow-higher', action='store_true', help='允许 d > 2')

    # ============ 余挠对命令 ============
    subparsers.add_parser('enum-cotorsion', parents=[common], help='给定核的全部余挠对')
    subparsers.add_parser('enum-all', parents=[common], help='按 δ 分层的全部余挠对')
    subparsers.add_parser('t-structures', parents=[common], help='枚举 t-结构')
    subparsers.add_parser('co-t-structures', parents=[common], help='枚举余 t-结构')

    # ============ 变换与心命令 ============
    subparsers.add_parser('mutate-pair', parents=[common], help='余挠对的 D-变换')
    subparsers.add_parser('mutate-ct', parents=[common], help='簇倾斜对象的变换')
    p_quiver = subparsers.add_parser('mutation-quiver', parents=[common], help='CTN_δ 的变换箭图')
    p_quiver.add_argument('--stratum', type=int, default=0, help='δ (默认: 0)')
    subparsers.add_parser('heart', parents=[common], help='余挠对的心')
    subparsers.add_parser('heart-projection', parents=[common], help='对象的心投影')

    # ============ 校验与绘图 ============
    p_verify = subparsers.add_parser('verify', parents=[common], help='运行校验套件')
    p_verify.add_argument('suite', choices=sorted(SUITES) + ['all'], help='套件名')
    subparsers.add_parser('draw', parents=[common], help='多边形图 (d = 2)')
    return parser


def _emit(summary: dict) -> None:
    """最后一行总是机器可读的 JSON"""
    print(json.dumps(summary, ensure_ascii=False, sort_keys=True, default=str))


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else get_log_level(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        summary, ok = COMMANDS[args.command](args)
    except (ObjectSyntaxError, UnknownObject, ValueError) as exc:
        print(color(f"错误: {exc}", Colors.RED), file=sys.stderr)
        _emit({"command": args.command, "ok": False, "error": str(exc)})
        return EXIT_USAGE
    except SuiteFailure as exc:
        print(color(f"❌ 校验失败: {exc}", Colors.RED), file=sys.stderr)
        _emit({"command": args.command, "ok": False, "error": str(exc),
               "counterexample": exc.counterexample})
        return EXIT_FAILED
    except CyError as exc:
        print(color(f"❌ {type(exc).__name__}: {exc}", Colors.RED), file=sys.stderr)
        _emit({"command": args.command, "ok": False, "error": str(exc), "kind": type(exc).__name__})
        return EXIT_FAILED

    summary.update({"command": args.command, "n": args.n, "d": args.d, "ok": ok})
    _emit(summary)
    return EXIT_OK if ok else EXIT_FAILED


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
