#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""JSON 报告生成器

报告结构见 README；不含时间戳 (除非开启 report.include_timings)，
固定配置与种子下输出逐字节相同。
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from app import __version__
from app.core.config import config
from app.core.errors import UsageError
from app.models.report import CHECK_FAIL, CHECK_PASS, CHECK_SKIP, CheckResult, SandwichReport
from app.models.ring import Ring
from app.services.symplectic import ep_generator_labels, matrix_to_rows
from app.utils.helpers import config_hash

TOOL_NAME = 'sp-sandwich'


def new_document(command: str, args: Dict[str, Any], ring: Optional[Ring] = None,
                 n: Optional[int] = None) -> Dict[str, Any]:
    """报告骨架: 版本、命令回显、配置摘要与环定义"""
    settings = {'args': args, 'config': config.as_dict()}
    document: Dict[str, Any] = {
        'schema_version': config.schema_version,
        'tool': {'name': TOOL_NAME, 'version': __version__},
        'command': {'name': command, 'args': args},
        'config_hash': config_hash(settings),
    }
    if ring is not None:
        if ring.spec is None:
            raise UsageError(f"环 {ring.name} 没有目录定义，无法写入报告")
        document['ring'] = ring.spec.to_dict()
    if n is not None:
        document['n'] = n
    return document


def sandwich_to_dict(report: SandwichReport, ring: Ring, n: int) -> Dict[str, Any]:
    fr = report.form_ring
    upper: Dict[str, Any] = {'ep_generators': [], 'table': report.upper_checks}
    if fr is not None:
        upper['ep_generators'] = [{'root': alpha.label(), 'scalar': ring.bits(xi)}
                                  for alpha, xi in ep_generator_labels(fr, n)]
    return {
        'status': report.status,
        'exploratory': report.exploratory,
        'depth_used': report.depth_used,
        'form_ring': fr.to_dict() if fr is not None else None,
        'lower_certificates': [cert.to_dict(ring) for cert in report.lower_certs],
        'upper_checks': upper,
        'uniqueness': {'status': report.uniqueness, 'reason': report.uniqueness_reason},
        'diagnostics': report.diagnostics,
    }


def generators_to_rows(generators: Sequence, ring: Ring) -> List[List[List[str]]]:
    return [matrix_to_rows(g, ring) for g in generators]


def checks_to_dict(results: Sequence[CheckResult]) -> Dict[str, Any]:
    counts = {CHECK_PASS: 0, CHECK_FAIL: 0, CHECK_SKIP: 0}
    for r in results:
        counts[r.status] = counts.get(r.status, 0) + 1
    return {'checks': [r.to_dict() for r in results], 'summary': counts}


def write_report(document: Dict[str, Any], path: Path, timings: Optional[Dict[str, float]] = None) -> Path:
    """写入 JSON 报告；timings 只在配置开启时写入"""
    if timings and config.include_timings:
        document = dict(document, timings={k: round(v, 3) for k, v in timings.items()})
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(document, f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write('\n')
    return path


def read_report(path: Path) -> Dict[str, Any]:
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def dumps(document: Dict[str, Any]) -> str:
    return json.dumps(document, ensure_ascii=False, indent=2, sort_keys=True)
