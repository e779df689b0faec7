#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""CLI命令模块"""

from argparse import Namespace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from rich.table import Table

from app.core.config import REPORTS_DIR, config, ensure_dirs
from app.core.errors import EXIT_CAPACITY, EXIT_CHECK_FAILED, EXIT_INCONCLUSIVE, EXIT_PASS, UsageError
from app.core.logging import ICONS, bind_instance, get_console, get_logger, stage_timer
from app.models.group import STATUS_INTERRUPTED, GroupClosure
from app.models.report import CHECK_FAIL, CHECK_PASS, CHECK_SKIP, CheckResult, SubgroupInput
from app.models.ring import Ring, Subring
from app.services.catalog import RingCatalog, load_catalog
from app.services.closure_cache import cache_path, load_closure, save_closure
from app.services.group_engine import closure, sample_witnesses
from app.services.ring_core import (enumerate_form_params, enumerate_subrings, make_form_ring,
                                    subring_generated, whole_ring)
from app.services.sandwich import UNIQUENESS_VIOLATED, classify, recheck_report
from app.services.symplectic import SymplecticSpace, ep_generators, get_space
from app.services.theorems import full_form_ring, run_suite
from app.utils.display import closure_progress, print_checks, print_section, print_summary
from app.utils.helpers import parse_elements, parse_extra
from app.utils.report_writer import (checks_to_dict, dumps, generators_to_rows, new_document, read_report,
                                     sandwich_to_dict, write_report)

logger = get_logger()

WITNESS_SAMPLE = 1000


def apply_overrides(args: Namespace):
    """把命令行参数写入配置 (未给出的参数保留配置文件中的值)"""
    config.override('engine', 'cap', getattr(args, 'cap', None))
    config.override('harvest', 'max_depth', getattr(args, 'depth', None))
    config.override('verify', 'seed', getattr(args, 'seed', None))
    config.override('verify', 'trials', getattr(args, 'trials', None))


def args_echo(args: Namespace) -> Dict[str, Any]:
    skip = {'func', 'debug', 'output', 'format'}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _rng() -> np.random.Generator:
    return np.random.default_rng(config.seed)


def _ring(args: Namespace, catalog: RingCatalog) -> Ring:
    if not args.ring:
        raise UsageError("需要 --ring 指定环")
    return catalog.ring(args.ring)


def _subring_k(args: Namespace, ring: Ring) -> Subring:
    return subring_generated(ring, parse_elements(ring, args.k_gens))


def _extras(args: Namespace, space: SymplecticSpace, rng: np.random.Generator) -> Tuple[List[np.ndarray], List[str]]:
    specs = list(args.extra or [])
    random_gens = ep_generators(full_form_ring(space.ring), space.n)
    return [parse_extra(spec, space, rng, random_gens) for spec in specs], specs


def _emit(document: Dict[str, Any], args: Namespace, default_name: str,
          timings: Optional[Dict[str, float]] = None) -> Path:
    ensure_dirs()
    path = Path(args.output) if args.output else REPORTS_DIR / default_name
    write_report(document, path, timings)
    if args.format == 'json':
        print(dumps(document))
    else:
        get_console().print(f"{ICONS['INFO']} 报告: {path}")
    return path


# ---------------------------------------------------------------------- ring

def cmd_ring(args: Namespace) -> int:
    """列出目录或描述单个环"""
    catalog = load_catalog()
    console = get_console()
    if args.action == 'list':
        table = Table(title=f"环目录 ({catalog.source})")
        table.add_column("名称")
        table.add_column("基")
        table.add_column("元素数", justify="right")
        for name in catalog.names():
            ring = catalog.ring(name)
            table.add_row(name, ' '.join(ring.basis_names), str(ring.size))
        console.print(table)
        return EXIT_PASS

    if not args.name:
        raise UsageError("describe 需要环名称")
    ring = catalog.ring(args.name)
    subrings = enumerate_subrings(ring)
    whole_params = enumerate_form_params(whole_ring(ring))
    if args.format == 'json':
        print(dumps({
            'ring': ring.spec.to_dict(),
            'size': ring.size,
            'subrings': [S.to_dict() for S in subrings],
            'form_parameters': [p.to_dict() for p in whole_params],
        }))
        return EXIT_PASS

    print_section("环", ring.name)
    console.print(f"{ICONS['INFO']} 基: {' '.join(ring.basis_names)}，{ring.size} 个元素")
    mult = Table(title="基元乘法表")
    mult.add_column("*")
    for b in ring.basis_names:
        mult.add_column(b)
    for i, a in enumerate(ring.basis_names):
        row = [ring.format(ring.mul(1 << i, 1 << j)) for j in range(ring.dim)]
        mult.add_row(a, *row)
    console.print(mult)
    console.print(f"{ICONS['COMPONENT']} 子环 {len(subrings)} 个:")
    for S in subrings:
        params = enumerate_form_params(S)
        console.print(f"  {ICONS['ARROW']} {S.label()} ({len(S)} 个元素，形式参数 {len(params)} 个)")
    console.print(f"{ICONS['COMPONENT']} {ring.name} 的形式参数 {len(whole_params)} 个:")
    for p in whole_params:
        console.print(f"  {ICONS['ARROW']} {p.label()}")
    return EXIT_PASS


# ---------------------------------------------------------------------- closure

def _closure_generators(args: Namespace, ring: Ring, space: SymplecticSpace,
                        rng: np.random.Generator) -> List[np.ndarray]:
    gens: List[np.ndarray] = []
    if args.gens == 'ep':
        fr = make_form_ring(ring, parse_elements(ring, args.r_gens), parse_elements(ring, args.lambda_gens),
                            parse_elements(ring, args.k_gens))
        logger.info(f"生成元: Ep{fr.label()}")
        gens.extend(ep_generators(fr, space.n))
    extras, _ = _extras(args, space, rng)
    return gens + extras


def _load_or_enumerate(args: Namespace, space: SymplecticSpace, gens: List[np.ndarray]) -> GroupClosure:
    path = cache_path(space, gens) if args.cache else None
    if path is not None and path.exists():
        G = load_closure(path)
        if G is not None:
            logger.info(f"从缓存载入闭包: {path.name}")
            return G
    with closure_progress(f"闭包 Sp_{space.m}({space.ring.name})", args.format != 'json') as progress:
        G = closure(gens, space, config.cap, progress)
    if path is not None and G.status != STATUS_INTERRUPTED:
        save_closure(G, path)
        logger.info(f"闭包已缓存: {path.name}")
    return G


def cmd_closure(args: Namespace) -> int:
    catalog = load_catalog()
    ring = _ring(args, catalog)
    space = get_space(ring, args.n)
    rng = _rng()
    gens = _closure_generators(args, ring, space, rng)
    timings: Dict[str, float] = {}
    with bind_instance(ring.name, args.n), stage_timer('closure', timings):
        G = _load_or_enumerate(args, space, gens)

    checked = min(len(G), WITNESS_SAMPLE)
    witnesses_ok = sample_witnesses(G, WITNESS_SAMPLE, rng)
    lengths = [len(G.word(int(i))) for i in range(0, len(G), max(1, len(G) // checked))][:checked]

    document = new_document('closure', args_echo(args), ring, args.n)
    document['closure'] = {
        'order': len(G),
        'status': G.status,
        'cap': G.cap,
        'generators': len(gens),
        'witnesses': {
            'checked': checked,
            'verified': bool(witnesses_ok),
            'max_length': max(lengths) if lengths else 0,
        },
    }
    if G.status == STATUS_INTERRUPTED:
        exit_code = EXIT_CHECK_FAILED
    elif not G.complete:
        exit_code = EXIT_CAPACITY
    else:
        exit_code = EXIT_PASS if witnesses_ok else EXIT_CHECK_FAILED
    document['exit_code'] = exit_code
    if args.format != 'json':
        icon = ICONS['CHECK'] if G.complete else ICONS['WARNING']
        get_console().print(f"{icon} |G| = {len(G):,} ({G.status})，见证字抽查 "
                            f"{'通过' if witnesses_ok else '失败'}，用时 {timings['closure']:.1f}s")
    _emit(document, args, f"closure_{ring.name}_n{args.n}.json", timings)
    return exit_code


# ---------------------------------------------------------------------- classify

def cmd_classify(args: Namespace) -> int:
    catalog = load_catalog()
    ring = _ring(args, catalog)
    space = get_space(ring, args.n)
    K = _subring_k(args, ring)
    extras, specs = _extras(args, space, _rng())
    inp = SubgroupInput(ring, K, args.n, extras, specs)
    timings: Dict[str, float] = {}
    with bind_instance(ring.name, args.n), stage_timer('classify', timings):
        report = classify(inp, config.max_depth, exploratory=args.exploratory)

    document = new_document('classify', args_echo(args), ring, args.n)
    document['K'] = K.to_dict()
    document['extra'] = specs
    document['generators'] = generators_to_rows(report.generators, ring)
    document['result'] = sandwich_to_dict(report, ring, args.n)
    if report.uniqueness == UNIQUENESS_VIOLATED:
        exit_code = EXIT_CHECK_FAILED
    elif report.certified:
        exit_code = EXIT_PASS
    else:
        exit_code = EXIT_INCONCLUSIVE
    document['exit_code'] = exit_code

    if args.format != 'json':
        console = get_console()
        print_section("分类结果", ring.name, args.n)
        if report.certified:
            console.print(f"{ICONS['SUCCESS']} 认证形式环: [green]{report.form_ring.label()}[/]")
            console.print(f"{ICONS['CHECK']} 下侧证书 {len(report.lower_certs)} 个，"
                          f"上侧检查 {len(report.upper_checks)} 个生成元全部通过")
        else:
            console.print(f"{ICONS['WARNING']} [yellow]无法判定[/] (深度 {report.depth_used})")
            for key in ('uncovered_R', 'uncovered_Lambda', 'failing_generators'):
                if report.diagnostics.get(key):
                    console.print(f"  {ICONS['ARROW']} {key}: {report.diagnostics[key]}")
        console.print(f"{ICONS['INFO']} 唯一性: {report.uniqueness} ({report.uniqueness_reason})")
        if report.exploratory:
            console.print(f"{ICONS['WARNING']} n = {args.n} 为探索模式，结果仅供参考")
    _emit(document, args, f"classify_{ring.name}_n{args.n}.json", timings)
    return exit_code


# ---------------------------------------------------------------------- verify

def _exit_for_checks(results: List[CheckResult]) -> int:
    """有失败为 1；无失败但有因容量跳过的项为 3；否则为 0"""
    if any(r.status == CHECK_FAIL for r in results):
        return EXIT_CHECK_FAILED
    if any(r.capacity_skip for r in results):
        return EXIT_CAPACITY
    return EXIT_PASS


def cmd_verify(args: Namespace) -> int:
    catalog = load_catalog()
    timings: Dict[str, float] = {}
    with bind_instance(args.suite), stage_timer('verify', timings), \
            closure_progress(f"校验套件 {args.suite}", args.format != 'json') as progress:
        results = run_suite(args.suite, catalog, _rng(), progress, trials=args.trials)

    document = new_document('verify', args_echo(args))
    document['suite'] = args.suite
    document.update(checks_to_dict(results))
    exit_code = _exit_for_checks(results)
    document['exit_code'] = exit_code
    if args.format != 'json':
        print_checks(results, f"校验套件 {args.suite}")
        print_summary(*(sum(r.status == s for r in results) for s in (CHECK_PASS, CHECK_FAIL, CHECK_SKIP)))
    _emit(document, args, f"verify_{args.suite}.json", timings)
    return exit_code


# ---------------------------------------------------------------------- recheck

def cmd_recheck(args: Namespace) -> int:
    """只用报告中的环定义与矩阵重新验证证书"""
    path = Path(args.recheck)
    if not path.exists():
        raise UsageError(f"报告文件不存在: {path}")
    document = read_report(path)
    if 'ring' not in document or 'n' not in document:
        raise UsageError(f"报告 {path} 不含可复核的证书")
    results = recheck_report(document)
    if args.format == 'json':
        print(dumps(checks_to_dict(results)))
    else:
        print_checks(results, f"复核 {path.name}")
    return _exit_for_checks(results)
