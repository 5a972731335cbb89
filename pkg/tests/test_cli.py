"""Command line front end: parsing, output formats, determinism."""

import json
import os
import subprocess
import sys

import pytest

from fglsym.cli import main
from fglsym.series import from_json_obj, t, x


def run_cli(args, **kw):
    return subprocess.run([sys.executable, "-m", "fglsym.cli"] + args,
                          capture_output=True, text=True, **kw)


def test_compute_json(capsys):
    rc = main(["compute", "--family", "hq", "--lambda", "1", "--n", "3",
               "--fgl", "additive", "--factorial",
               "--route", "symmetrizer", "--out", "json"])
    assert rc == 0
    obj = json.loads(capsys.readouterr().out)
    got = from_json_obj(obj)
    assert got == (1 - t()) * (x(1) + x(2) + x(3))


def test_routes_agree(capsys):
    argv = ["compute", "--family", "s_kl", "--lambda", "2,1", "--n", "3",
            "--fgl", "additive", "--out", "json"]
    outs = []
    for route in ("symmetrizer", "gf", "det"):
        rc = main(argv + ["--route", route])
        assert rc == 0
        outs.append(json.loads(capsys.readouterr().out))
    a, bb, c = (from_json_obj(o) for o in outs)
    assert a == bb == c


def test_csv_output(capsys):
    rc = main(["compute", "--family", "s_kl", "--lambda", "1", "--n", "2",
               "--fgl", "additive", "--route", "symmetrizer",
               "--out", "csv"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "coeff,x1,x2"
    assert len(lines) == 3


def test_invalid_route_family_combination(capsys):
    rc = main(["compute", "--family", "hp", "--lambda", "1", "--n", "2",
               "--route", "det", "--fgl", "additive"])
    assert rc == 2


def test_det_route_requires_special_law():
    rc = main(["compute", "--family", "s_kl", "--lambda", "1", "--n", "2",
               "--route", "det", "--fgl", "universal"])
    assert rc == 2


def test_table(capsys):
    rc = main(["table", "--family", "s_kl", "--n", "2", "--max-weight", "2",
               "--fgl", "additive", "--route", "symmetrizer"])
    assert rc == 0
    obj = json.loads(capsys.readouterr().out)
    assert set(obj["entries"]) == {"()", "(1)", "(2)", "(1,1)"}


def test_custom_law_file(tmp_path, capsys):
    path = tmp_path / "law.json"
    path.write_text(json.dumps({"log_coeffs": ["1/2", "1/3", "1/4"]}))
    rc = main(["compute", "--family", "s_kl", "--lambda", "1", "--n", "2",
               "--fgl", "custom:%s" % path, "--route", "symmetrizer",
               "--out", "json"])
    assert rc == 0
    json.loads(capsys.readouterr().out)


def test_verify_subcommand(capsys):
    rc = main(["verify", "--suite", "examples"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "pass" in out and "FAIL" not in out


def test_determinism_across_thread_counts():
    argv = ["compute", "--family", "q", "--lambda", "2,1", "--n", "2",
            "--fgl", "multiplicative", "--factorial", "--route", "gf",
            "--out", "json"]
    outs = []
    for threads in ("1", "4"):
        env = dict(os.environ, SYMFUN_THREADS=threads)
        proc = run_cli(argv, env=env)
        assert proc.returncode == 0, proc.stderr
        outs.append(proc.stdout)
    assert outs[0] == outs[1]
