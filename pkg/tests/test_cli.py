import subprocess
import sys

import pytest

from coopwsn.cli import EXIT_CONFIG, EXIT_OK, main
from coopwsn.csvio import parse_table

CFG = """
topology = src
strategy = arq
detector = crc4
seed = 3
trials = 120

[sweep]
variable = ber
points = 0.01 0.03
"""


@pytest.fixture
def cfg(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text(CFG)
    return p


def test_run_to_stdout(cfg, capsys):
    assert main(["run", "--config", str(cfg)]) == EXIT_OK
    cols, rows = parse_table(capsys.readouterr().out)
    assert cols[0] == "channel_ber" and "ber" in cols and "throughput" in cols
    assert [r[0] for r in rows] == [0.01, 0.03]


def test_run_to_file_is_reproducible(cfg, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["run", "--config", str(cfg), "--out", str(a)]) == EXIT_OK
    assert main(["run", "--config", str(cfg), "--out", str(b), "--workers", "2"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_seed_override(cfg, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["run", "--config", str(cfg), "--out", str(a)])
    main(["run", "--config", str(cfg), "--out", str(b), "--seed", "4"])
    assert a.read_bytes() != b.read_bytes()


def test_run_with_analytic_rows(tmp_path, capsys):
    p = tmp_path / "both.cfg"
    p.write_text(CFG + "[output]\nemit_analytic = true\n")
    assert main(["run", "--config", str(p)]) == EXIT_OK
    cols, rows = parse_table(capsys.readouterr().out)
    modes = [r[cols.index("mode")] for r in rows]
    assert modes == ["simulated", "simulated", "analytic", "analytic"]


def test_energy_table(cfg, capsys):
    assert main(["energy-table", "--config", str(cfg)]) == EXIT_OK
    cols, rows = parse_table(capsys.readouterr().out)
    assert cols[:4] == ["channel_ber", "per_dt", "per_src", "per_mrc"]
    assert len(rows) == 2


def test_figure_writes_files(tmp_path, capsys):
    out = tmp_path / "figs"
    code = main(["figure", "fig6", "--trials", "60", "--points", "0.01", "--out-dir", str(out), "--analytic"])
    assert code == EXIT_OK
    names = sorted(p.name for p in out.iterdir())
    assert "fig6_theoretical.csv" in names and "fig6_mrc.csv" in names and "fig6_dt_analytic.csv" in names
    printed = capsys.readouterr().out.split()
    assert len(printed) == len(names)


def test_figure_curve_filter_tsv(tmp_path):
    code = main(["figure", "fig5", "--trials", "40", "--points", "10", "--curves", "rs",
                 "--out-dir", str(tmp_path), "--format", "tsv"])
    assert code == EXIT_OK
    assert [p.name for p in tmp_path.iterdir()] == ["fig5_rs.tsv"]


def test_codecs_selftest(capsys):
    assert main(["codecs", "selftest"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(line.startswith("PASS ") for line in lines)


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["figure", "fig10"],
        ["figure", "fig5", "--trials", "0"],
        ["figure", "fig5", "--curves", "nope", "--trials", "5", "--points", "10"],
        ["run"],
        ["run", "--config", "/nonexistent/x.cfg"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_CONFIG
    assert "coopwsn: config error" in capsys.readouterr().err


def test_bad_config_reports_line(tmp_path, capsys):
    p = tmp_path / "bad.cfg"
    p.write_text("[sweep]\ntrials = many\n")
    assert main(["run", "--config", str(p)]) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "line 2" in err and "sweep.trials" in err


def test_bad_seed(cfg):
    assert main(["run", "--config", str(cfg), "--seed", "-1"]) == EXIT_CONFIG


def test_console_module(cfg):
    proc = subprocess.run([sys.executable, "-m", "coopwsn.cli", "codecs", "selftest"], capture_output=True, text=True)
    assert proc.returncode == 0
