#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""辛群夹层分类工具 - 有限 F2-代数上的 Sp_2n(R, Λ)"""

import sys
import io
import os

if sys.platform == 'win32':
    if sys.stdout.encoding != 'utf-8':
        sys.stdout = io.TextIOWrapper(sys.stdout.buffer, encoding='utf-8', errors='replace')
    if sys.stderr.encoding != 'utf-8':
        sys.stderr = io.TextIOWrapper(sys.stderr.buffer, encoding='utf-8', errors='replace')
    os.environ['PYTHONIOENCODING'] = 'utf-8'

import argparse

from app.cli.commands import (apply_overrides, cmd_classify, cmd_closure, cmd_recheck, cmd_ring,
                              cmd_verify)
from app.core.errors import EXIT_CHECK_FAILED, EXIT_USAGE, SandwichError
from app.core.logging import ICONS, setup_logger
from app.core.shutdown import install_signal_handlers
from app.services.theorems import SUITES
from app.utils.display import print_banner


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-D', '--debug', action='store_true', help='启用调试模式')
    common.add_argument('--format', choices=['text', 'json'], default='text', help='输出格式 (默认: text)')
    common.add_argument('--output', metavar='PATH', help='报告输出路径 (默认: data/reports/)')
    common.add_argument('--seed', type=int, help='随机种子 (默认取 config.yaml)')
    common.add_argument('--cap', type=int, help='闭包元素数上限')

    instance = argparse.ArgumentParser(add_help=False)
    instance.add_argument('--ring', help='目录中的环名称，如 F2eps')
    instance.add_argument('--n', type=int, default=3, help='秩 n (默认: 3)')
    instance.add_argument('--k-gens', help='K 的生成元，逗号分隔 (默认: 素子环)')
    instance.add_argument('--extra', action='append', metavar='SPEC',
                          help='额外生成元: T[i,j]=<元素>*...、M:<行>;<行>、random[:长度]，可重复')

    parser = argparse.ArgumentParser(
        description='辛群夹层分类工具: 形式环、Bak 辛群与子群证书',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
        epilog="""
示例:
  python main.py ring list                                  列出环目录
  python main.py ring describe F2eps                        子环与形式参数
  python main.py closure --ring F2 --n 2                    Ep_4(F2, F2) 的阶
  python main.py classify --ring F2eps --extra "T[1,2]=eps" 分类 H = ⟨Ep(F2), T12(ε)⟩
  python main.py verify commutator                          交换子公式套件
  python main.py --recheck data/reports/classify_F2eps_n3.json  复核报告证书
        """
    )
    parser.add_argument('--recheck', metavar='REPORT', help='离线复核报告中的证书')
    sub = parser.add_subparsers(dest='command')

    ring = sub.add_parser('ring', parents=[common], help='环目录')
    ring.add_argument('action', choices=['list', 'describe'])
    ring.add_argument('name', nargs='?')
    ring.set_defaults(func=cmd_ring)

    clos = sub.add_parser('closure', parents=[common, instance], help='生成子群的穷举闭包')
    clos.add_argument('--gens', choices=['ep', 'none'], default='ep', help='是否加入 Ep(R,Λ) 生成元')
    clos.add_argument('--r-gens', help='R 的额外生成元')
    clos.add_argument('--lambda-gens', help='Λ 的额外生成元')
    clos.add_argument('--cache', action='store_true', help='读写 data/cache/ 中的闭包缓存')
    clos.set_defaults(func=cmd_closure)

    cls = sub.add_parser('classify', parents=[common, instance], help='求 H 的夹层形式环并给出证书')
    cls.add_argument('--depth', type=int, help='最大收集深度 (默认: 6)')
    cls.add_argument('--exploratory', action='store_true', help='允许 n = 2 (结果仅供参考)')
    cls.set_defaults(func=cmd_classify)

    ver = sub.add_parser('verify', parents=[common], help='运行性质校验套件')
    ver.add_argument('suite', choices=SUITES)
    ver.add_argument('--trials', type=int, help='随机试验次数')
    ver.set_defaults(func=cmd_verify)
    return parser


def main():
    """主程序入口"""
    parser = build_parser()
    args = parser.parse_args()

    try:
        setup_logger(debug=args.debug)
        install_signal_handlers()
        apply_overrides(args)
        if args.format != 'json':
            print_banner()
        if args.recheck:
            return cmd_recheck(args)
        if not args.command:
            parser.print_help()
            return EXIT_USAGE
        return args.func(args)

    except SandwichError as e:
        print(f"{ICONS['CROSS']} {e.message}")
        return e.exit_code
    except KeyboardInterrupt:
        print(f"\n{ICONS['CROSS']} 用户中断")
        return EXIT_CHECK_FAILED
    except Exception as e:
        print(f"{ICONS['CROSS']} 执行出错: {str(e)}")
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    exit(main())
