# -*- coding: utf-8 -*-
"""命令行子命令测试 (JSON 输出，报告写入临时目录)"""

import json

import pytest

from app.cli.commands import (_exit_for_checks, args_echo, cmd_classify, cmd_closure, cmd_recheck, cmd_ring,
                              cmd_verify)
from app.core.config import config
from app.core.errors import EXIT_CAPACITY, EXIT_CHECK_FAILED, EXIT_PASS, UsageError
from app.models.report import CHECK_FAIL, CHECK_PASS, CHECK_SKIP, CheckResult
from app.utils.report_writer import read_report
from main import build_parser


def _parse(*argv):
    return build_parser().parse_args(list(argv))


def test_parser_defaults():
    args = _parse("classify", "--ring", "F2eps")
    assert args.n == 3
    assert args.format == "text"
    assert args.func is cmd_classify
    assert args.extra is None


def test_args_echo_drops_output_options(tmp_path):
    args = _parse("closure", "--ring", "F2", "--n", "2", "--format", "json", "--output", str(tmp_path / "r.json"))
    echo = args_echo(args)
    assert echo["ring"] == "F2" and echo["n"] == 2
    assert "output" not in echo and "format" not in echo and "func" not in echo


def test_ring_describe_json(capsys):
    args = _parse("ring", "describe", "F2eps", "--format", "json")
    assert cmd_ring(args) == EXIT_PASS
    data = json.loads(capsys.readouterr().out)
    assert data["size"] == 4
    assert len(data["subrings"]) == 2
    assert len(data["form_parameters"]) == 5


def test_ring_list():
    assert cmd_ring(_parse("ring", "list")) == EXIT_PASS


def test_ring_describe_requires_name():
    with pytest.raises(UsageError):
        cmd_ring(_parse("ring", "describe"))


def test_closure_sp4(tmp_path):
    out = tmp_path / "closure.json"
    args = _parse("closure", "--ring", "F2", "--n", "2", "--format", "json", "--output", str(out))
    assert cmd_closure(args) == EXIT_PASS
    report = read_report(out)
    assert report["closure"]["order"] == 720
    assert report["closure"]["status"] == "complete"
    assert report["closure"]["witnesses"]["verified"] is True
    assert report["exit_code"] == EXIT_PASS
    assert "timings" not in report


def test_closure_without_generators(tmp_path):
    out = tmp_path / "trivial.json"
    args = _parse("closure", "--ring", "F2", "--n", "2", "--gens", "none", "--format", "json", "--output", str(out))
    assert cmd_closure(args) == EXIT_PASS
    assert read_report(out)["closure"]["order"] == 1


def test_closure_capacity_exit(tmp_path, monkeypatch):
    monkeypatch.setitem(config.engine, "cap", 100)
    out = tmp_path / "cap.json"
    args = _parse("closure", "--ring", "F2", "--n", "2", "--format", "json", "--output", str(out))
    assert cmd_closure(args) == EXIT_CAPACITY
    assert read_report(out)["closure"]["status"] == "overflowed"


def test_closure_requires_ring():
    with pytest.raises(UsageError):
        cmd_closure(_parse("closure", "--n", "2"))


def test_classify_then_recheck(tmp_path):
    out = tmp_path / "classify.json"
    args = _parse("classify", "--ring", "F2eps", "--extra", "T[1,2]=eps",
                  "--format", "json", "--output", str(out))
    assert cmd_classify(args) == EXIT_PASS
    report = read_report(out)
    assert report["result"]["status"] == "certified"
    assert report["extra"] == ["T[1,2]=eps"]
    assert report["K"]["elements"] == ["00", "10"]
    assert report["result"]["form_ring"]["Lambda"]["elements"] == ["00", "10"]

    recheck = _parse("--recheck", str(out), "--format", "json")
    assert cmd_recheck(recheck) == EXIT_PASS


def test_classify_reports_are_reproducible(tmp_path):
    paths = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        args = _parse("classify", "--ring", "F2eps", "--extra", "random:20",
                      "--format", "json", "--output", str(out))
        cmd_classify(args)
        paths.append(out)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_recheck_missing_file(tmp_path):
    with pytest.raises(UsageError):
        cmd_recheck(_parse("--recheck", str(tmp_path / "missing.json")))


def test_verify_commutator(tmp_path):
    out = tmp_path / "verify.json"
    args = _parse("verify", "commutator", "--format", "json", "--output", str(out))
    assert cmd_verify(args) == EXIT_PASS
    report = read_report(out)
    assert report["suite"] == "commutator"
    assert report["summary"]["fail"] == 0


def test_verify_capacity_skip_exit(tmp_path, monkeypatch):
    monkeypatch.setitem(config.engine, "cap", 100)
    monkeypatch.setitem(config.verify, "membership_rings", ["F2"])
    out = tmp_path / "membership.json"
    args = _parse("verify", "membership", "--format", "json", "--output", str(out))
    assert cmd_verify(args) == EXIT_CAPACITY
    report = read_report(out)
    assert report["summary"] == {"pass": 0, "fail": 0, "skip": 2}
    assert report["exit_code"] == EXIT_CAPACITY


@pytest.mark.parametrize("checks, expected", [
    ([CheckResult("a", CHECK_PASS), CheckResult("b", CHECK_SKIP)], EXIT_PASS),
    ([CheckResult("a", CHECK_PASS), CheckResult("b", CHECK_SKIP, data={"cap": 10})], EXIT_CAPACITY),
    ([CheckResult("a", CHECK_FAIL), CheckResult("b", CHECK_SKIP, data={"cap": 10})], EXIT_CHECK_FAILED),
])
def test_exit_for_checks(checks, expected):
    assert _exit_for_checks(checks) == expected
