#!/usr/bin/env python3
"""
范畴缓存运维工具
列出、查看、清理 CY_CACHE_DIR 下的 c{n}_d{d}.json
"""

import argparse
import json
import sys
from pathlib import Path

# 添加项目根目录到路径
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from src.utils.cache import cache_path, clear_cache, list_cached, load_or_build  # noqa: E402
from src.utils.config import get_cache_dir  # noqa: E402
from src.utils.console import Colors, color, print_table  # noqa: E402


def _dir(args) -> Path:
    return Path(args.dir).expanduser() if args.dir else get_cache_dir()


def cmd_list(args):
    """列出缓存文件"""
    entries = list_cached(_dir(args))
    print(color(f"\n📋 缓存目录 {_dir(args)} (共 {len(entries)} 个)\n", Colors.HEADER))
    rows = [[e["path"].name, e["n"], e["d"], e["version"], e["objects"], f"{e['size'] / 1024:.1f} KB"]
            for e in entries]
    print_table(["文件", "n", "d", "版本", "对象数", "大小"], rows)


def cmd_show(args):
    """显示单个缓存的对象与非零 Hom 统计"""
    path = cache_path(args.n, args.d, _dir(args))
    if not path.exists():
        print(color(f"错误: 缓存不存在: {path}", Colors.RED))
        sys.exit(1)
    doc = json.loads(path.read_text(encoding="utf-8"))
    print(color(f"\n📝 C_{doc['d']}(A_{doc['n']}) ({path.name})\n", Colors.HEADER))
    counts = {}
    for key, twists in doc.get("homs", {}).items():
        src = key.split("|", 1)[0]
        counts[src] = counts.get(src, 0) + len(twists)
    rows = [[name, raw, doc["shift_perm"].get(raw, ""), counts.get(raw, 0)]
            for raw, name in zip(doc["objects"], doc.get("names", doc["objects"]))]
    print_table(["对象", "内部名", "[1]", "Hom 总维数"], rows)


def cmd_build(args):
    """预先构造并写入缓存"""
    cat = load_or_build(args.n, args.d, no_cache=True, cache_dir=_dir(args))
    print(color(f"✅ 已缓存 C_{args.d}(A_{args.n})：{len(cat.objects)} 个对象", Colors.GREEN))


def cmd_clear(args):
    """清理缓存（可按 n、d 过滤）"""
    if not args.force:
        confirm = input(f"确定要清理 {_dir(args)} 中的缓存吗? (y/N): ")
        if confirm.lower() != 'y':
            print("已取消")
            return
    removed = clear_cache(args.n, args.d, _dir(args))
    print(color(f"✅ 已删除 {removed} 个缓存文件", Colors.GREEN))


def main():
    parser = argparse.ArgumentParser(
        description='范畴缓存运维工具',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  %(prog)s list                    列出缓存
  %(prog)s show -n 4 -d 2          查看 C_2(A_4) 的缓存
  %(prog)s build -n 3 -d 4         预先构造 C_4(A_3)
  %(prog)s clear -d 4 -f           删除所有 d = 4 的缓存
"""
    )
    parser.add_argument('--dir', help='缓存目录 (默认: CY_CACHE_DIR)')
    subparsers = parser.add_subparsers(dest='command', help='可用命令')

    subparsers.add_parser('list', help='列出缓存')

    p_show = subparsers.add_parser('show', help='查看缓存内容')
    p_show.add_argument('-n', type=int, required=True, help='A_n 的秩')
    p_show.add_argument('-d', type=int, required=True, help='CY 维数')

    p_build = subparsers.add_parser('build', help='构造并写入缓存')
    p_build.add_argument('-n', type=int, required=True, help='A_n 的秩')
    p_build.add_argument('-d', type=int, required=True, help='CY 维数')

    p_clear = subparsers.add_parser('clear', help='清理缓存')
    p_clear.add_argument('-n', type=int, help='只删除该 n')
    p_clear.add_argument('-d', type=int, help='只删除该 d')
    p_clear.add_argument('-f', '--force', action='store_true', help='跳过确认')

    args = parser.parse_args()

    if not args.command:
        parser.print_help()
        return

    commands = {
        'list': cmd_list,
        'show': cmd_show,
        'build': cmd_build,
        'clear': cmd_clear,
    }

    commands[args.command](args)


if __name__ == '__main__':
    main()
