import json
import subprocess
import sys

import numpy as np
import pytest
from click.testing import CliRunner

from cevchart import ParseError, generate
from cevchart.cli import main
from cevchart.csvio import format_csv, ingest_csv, parse_csv
from cevchart.datagen import paper_example_spec


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def paper_csv(tmp_path):
    path = tmp_path / "regen.csv"
    path.write_text(format_csv(generate(paper_example_spec())))
    return path


class TestIngest:
    def test_table1(self, table1_csv):
        m = ingest_csv(table1_csv, 50.0, 5)
        assert m.data.shape == (25, 5)
        # cells printed as "50,0" in the published grid
        assert int(m.censored.sum()) == 106

    def test_all_at_threshold(self):
        m = parse_csv("50.0,50.0,50.0,50.0,50.0\n", 50.0, 5)
        assert m.censored.all()

    def test_token_and_below_threshold(self):
        m = parse_csv("a,b,c\n<,49.2,51\n", 50.0, 3)
        assert m.data.tolist() == [[50.0, 50.0, 51.0]]
        assert m.censored.tolist() == [[True, True, False]]

    def test_ragged_row(self):
        with pytest.raises(ParseError, match="row 2"):
            parse_csv("1,2,3,4,5\n1,2,3,4\n", 0.0, 5)

    def test_non_numeric(self):
        with pytest.raises(ParseError, match="row 1, column 2"):
            parse_csv("1,x,3\n", 0.0, 3)

    def test_empty(self):
        with pytest.raises(ParseError, match="empty"):
            parse_csv("\n\n", 0.0, 3)

    def test_round_trip(self, tmp_path):
        m = generate(paper_example_spec())
        path = tmp_path / "m.csv"
        path.write_text(format_csv(m))
        again = ingest_csv(path, 50.0, 5)
        assert np.array_equal(again.data, m.data)
        assert np.array_equal(again.censored, m.censored)


class TestCommands:
    def test_simulate_full_censoring(self, runner):
        r = runner.invoke(main, "simulate --mu 0 --sigma 1 --threshold 10 --k 2 --n 3 --seed 7".split())
        assert r.exit_code == 0
        assert r.stdout == "10.0,10.0,10.0\n10.0,10.0,10.0\n"

    def test_estimate(self, runner, paper_csv):
        r = runner.invoke(main, ["estimate", "-i", str(paper_csv), "--threshold", "50",
                                 "--subgroup-size", "5", "--trace"])
        assert r.exit_code == 0, r.output
        doc = json.loads(r.stdout)
        assert set(doc) == {"mu", "sigma", "wc", "pc", "iterations", "converged", "trace"}
        assert doc["mu"] == pytest.approx(49.03, abs=0.15)
        assert doc["sigma"] == pytest.approx(0.99, abs=0.2)
        assert doc["converged"]

    def test_limits_table(self, runner):
        r = runner.invoke(main, "limits --n 5 --pc 0.84 --limit-source table".split())
        doc = json.loads(r.stdout)
        assert (doc["ucl_xbar"], doc["ucl_s"]) == (1.42, 2.09)
        assert doc["provenance"] == "paper_table"

    def test_limits_other_sources(self, runner):
        r = runner.invoke(main, "limits --n 5 --pc 0.5 --limit-source classical".split())
        assert json.loads(r.stdout)["ucl_xbar"] == pytest.approx(1.427, abs=1e-3)
        r = runner.invoke(main, "limits --n 5 --pc 0.5 --limit-source montecarlo "
                                "--replicates 5000 --seed 2".split())
        assert json.loads(r.stdout)["provenance"] == "monte_carlo"

    def test_tables(self, runner):
        r = runner.invoke(main, "tables --replicates 1000 --seed 1".split())
        assert r.exit_code == 0
        assert len(json.loads(r.stdout)["rows"]) == 48

    def test_phase1_and_monitor(self, runner, paper_csv, tmp_path):
        out = tmp_path / "p1.json"
        charts = tmp_path / "charts"
        r = runner.invoke(main, ["phase1", "-i", str(paper_csv), "-c", "50", "-n", "5",
                                 "-o", str(out), "--chart-dir", str(charts)])
        assert r.exit_code == 0, r.output
        doc = json.loads(out.read_text())
        for key in ("final_params", "w_c", "p_c", "xbar_report", "s_report",
                    "excluded_subgroups", "rounds"):
            assert key in doc
        assert (charts / "cev_xbar.svg").exists() and (charts / "cev_s.svg").exists()

        new = tmp_path / "new.csv"
        new.write_text("50.0,50.0,50.0,50.0,50.0\n55,55,55,55,55\n")
        r = runner.invoke(main, ["monitor", "-i", str(new), "--baseline", str(out)])
        assert r.exit_code == 0, r.output
        sig = json.loads(r.stdout)
        assert sig["xbar_signals"] == [1] and sig["s_signals"] == []

    def test_compare_naive(self, runner, paper_csv):
        r = runner.invoke(main, ["compare-naive", "-i", str(paper_csv), "-c", "50", "-n", "5"])
        doc = json.loads(r.stdout)
        means = [doc["naive"][k]["mu"] for k in ("zero", "half_c", "at_c", "ignore")]
        assert means == sorted(means)
        assert doc["cev"]["mu"] < doc["naive"]["at_c"]["mu"]


class TestExitCodes:
    def test_data_error(self, runner, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("1,2,3\n1,2\n")
        r = runner.invoke(main, ["estimate", "-i", str(bad), "-c", "0", "-n", "3"])
        assert r.exit_code == 1

    def test_all_censored_is_data_error(self, runner, tmp_path):
        f = tmp_path / "c.csv"
        f.write_text("1,1,1\n" * 5)
        r = runner.invoke(main, ["estimate", "-i", str(f), "-c", "1", "-n", "3"])
        assert r.exit_code == 1

    def test_config_errors(self, runner):
        assert runner.invoke(main, "limits --n 5 --pc 1.5".split()).exit_code == 2
        assert runner.invoke(main, "limits --pc 0.5".split()).exit_code == 2
        assert runner.invoke(main, "limits --n 5 --pc 0.5 --alpha 0.9 "
                                   "--limit-source montecarlo".split()).exit_code == 2

    def test_streams_separated(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("1,x\n")
        p = subprocess.run([sys.executable, "-m", "cevchart", "estimate", "-i", str(bad),
                            "-c", "0", "-n", "2"], capture_output=True, text=True)
        assert p.returncode == 1
        assert p.stdout == ""
        assert "row 1, column 2" in p.stderr

    def test_stdout_is_only_json(self, paper_csv):
        p = subprocess.run([sys.executable, "-m", "cevchart", "-v", "estimate", "-i",
                            str(paper_csv), "-c", "50", "-n", "5"], capture_output=True, text=True)
        assert p.returncode == 0
        json.loads(p.stdout)
