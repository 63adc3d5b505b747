import math

import pytest

from hvpade import cli, published
from hvpade.report import (
    ConfigError,
    DEFECTIVE,
    FLAGS,
    OK,
    POLE,
    SweepConfig,
    anomalies,
    parse_config,
    parse_csv,
    render,
    run_sweep,
    series_csv,
)
from hvpade.series import ModelSpec, compute_series


class TestParseConfig:
    def test_empty_document_gives_default_grid(self):
        cfg = parse_config("")
        assert cfg == SweepConfig()
        assert cfg.states == (0, 1, 2, 3, 4, 5)
        assert cfg.lambdas == (0.005, 0.01, 0.05, 0.1)
        assert cfg.pade_orders == ((3, 3), (3, 4))
        assert cfg.order == 8

    def test_single_cell(self):
        cfg = parse_config("states = 0\nlambdas = 0")
        assert cfg.states == (0,) and cfg.lambdas == (0.0,)

    def test_order_must_cover_pade(self):
        cfg = parse_config("pade = 3:3, 3:4\norder = 7")
        assert cfg.pade_orders == ((3, 3), (3, 4)) and cfg.order == 7
        with pytest.raises(ConfigError) as err:
            parse_config("pade = 3:3, 3:4\norder = 5")
        assert err.value.key == "order" and err.value.line == 2

    def test_all_keys(self):
        text = """
        # comment line
        omega = 3/2
        states = 1, 2
        lambdas = 0.01, 0.2   # trailing comment
        order = 9
        pade = 2:2
        cubic = off
        oracle = both
        format = csv
        pole_threshold = 1e-4
        precision = float
        """
        cfg = parse_config(text)
        assert cfg == SweepConfig("3/2", (1, 2), (0.01, 0.2), 9, ((2, 2),), 0, "both", "csv", 1e-4, "float")

    @pytest.mark.parametrize(
        "text, key, line",
        [
            ("colour = blue", "colour", 1),
            ("\nstates = a, b", "states", 2),
            ("lambdas = -0.1", "lambdas", 1),
            ("pade = 3-3", "pade", 1),
            ("order = two", "order", 1),
            ("cubic = maybe", "cubic", 1),
            ("oracle = psychic", "oracle", 1),
            ("format = xml", "format", 1),
            ("pole_threshold = 0", "pole_threshold", 1),
            ("precision = half", "precision", 1),
            ("omega = -1", "omega", 1),
            ("states 1", "states 1", 1),
            ("lambdas = ", "lambdas", 1),
        ],
    )
    def test_errors_name_key_and_line(self, text, key, line):
        with pytest.raises(ConfigError) as err:
            parse_config(text)
        assert err.value.key == key
        assert err.value.line == line
        assert key in str(err.value) and f"line {line}" in str(err.value)


class TestSweep:
    def test_trivial_cell(self):
        rows = run_sweep(parse_config("states = 0\nlambdas = 0"))
        (row,) = rows
        assert row.partial_sum_4 == 0.5 and row.eq13 == 0.5 and row.oracle == 0.5
        assert [c.value for c in row.pade] == [0.5, 0.5]
        assert all(c.flag == OK for c in row.pade)
        assert row.max_disc == 0.0

    def test_rows_ordered_and_flagged(self):
        cfg = parse_config("states = 2, 0\nlambdas = 0.1, 0.01\noracle = off")
        rows = run_sweep(cfg)
        assert [(r.n, r.lam) for r in rows] == [(2, 0.1), (2, 0.01), (0, 0.1), (0, 0.01)]
        for r in rows:
            assert len(r.pade) == 2
            assert all(c.flag in FLAGS for c in r.pade)
            assert math.isnan(r.oracle) and r.oracle_converged is None

    def test_default_first_row(self):
        rows = run_sweep(parse_config("states = 0\nlambdas = 0.005\noracle = off"))
        row = rows[0]
        assert round(row.partial_sum_4, 6) == 0.501248
        assert [round(c.value, 6) for c in row.pade] == [0.501248, 0.501248]

    def test_pole_threshold_flags(self):
        # a threshold above |Q| marks every cell; defaults leave them ok
        rows = run_sweep(parse_config("states = 5\nlambdas = 0.1\noracle = off\npole_threshold = 2"))
        assert all(c.flag == POLE for c in rows[0].pade)
        assert anomalies(rows)

    def test_defective_cell_recorded(self, monkeypatch):
        from hvpade import report
        from hvpade.pade import DefectiveApproximant

        def refuse(series, N, M):
            raise DefectiveApproximant("forced")

        monkeypatch.setattr(report, "build_pade", refuse)
        rows = run_sweep(parse_config("states = 0\nlambdas = 0.01\noracle = off"))
        assert [c.flag for c in rows[0].pade] == [DEFECTIVE, DEFECTIVE]
        assert all(math.isnan(c.value) for c in rows[0].pade)
        assert anomalies(rows) == [(0, 0.01, (3, 3), DEFECTIVE), (0, 0.01, (3, 4), DEFECTIVE)]
        assert "nan" in render(rows, "csv")

    def test_rspt_and_both_oracles(self):
        rows = run_sweep(parse_config("states = 1\nlambdas = 0.01\noracle = rspt"))
        assert rows[0].oracle == pytest.approx(rows[0].pade[0].value, abs=1e-9)
        assert rows[0].oracle_converged is True
        rows = run_sweep(parse_config("states = 1\nlambdas = 0.01\noracle = both"))
        assert rows[0].oracle_converged is True

    def test_float_precision(self):
        a = run_sweep(parse_config("states = 3\nlambdas = 0.05\noracle = off"))
        b = run_sweep(parse_config("states = 3\nlambdas = 0.05\noracle = off\nprecision = float"))
        assert b[0].pade[1].value == pytest.approx(a[0].pade[1].value, rel=1e-15)


class TestRender:
    def test_trivial_table(self):
        text = render(run_sweep(parse_config("states = 0\nlambdas = 0")), "table")
        assert "0.500000" in text
        assert text.count("0.500000") == 5

    def test_default_grid_row_count(self):
        rows = run_sweep(parse_config("oracle = off"))
        assert len(rows) == 24
        lines = render(rows, "table").splitlines()
        assert len(lines) == 2 + 24

    def test_half_even_rounding(self):
        from hvpade.report import _six

        assert _six(0.0000005) == "0.000000"
        assert _six(0.0000015) == "0.000002"
        assert _six(0.50249375) == "0.502494"

    def test_csv_contract(self):
        rows = run_sweep(parse_config("states = 0, 1\nlambdas = 0.01, 0.1"))
        text = render(rows, "csv")
        lines = text.split("\n")
        assert lines[-1] == ""
        assert "\r" not in text
        header = lines[0].split(",")
        assert header == ["n", "lambda", "E4", "E_3_3", "E_3_4", "flag_3_3", "flag_3_4",
                          "eq13", "oracle", "oracle_converged", "max_disc"]
        assert len(lines) == 2 + len(rows)

    def test_csv_roundtrip_is_lossless(self):
        rows = run_sweep(parse_config("states = 0, 5\nlambdas = 0.005, 0.1\noracle = both"))
        parsed = parse_csv(render(rows, "csv"))
        for row, rec in zip(rows, parsed):
            assert rec["n"] == row.n and rec["lambda"] == row.lam
            assert rec["E4"] == row.partial_sum_4
            assert rec["E_3_4"] == row.pade[1].value
            assert rec["flag_3_3"] == row.pade[0].flag
            assert rec["eq13"] == row.eq13 and rec["oracle"] == row.oracle
            assert rec["max_disc"] == row.max_disc

    def test_deterministic_bytes(self):
        cfg = parse_config("states = 0, 3\nlambdas = 0.05\nformat = csv")
        assert render(run_sweep(cfg), "csv") == render(run_sweep(cfg), "csv")

    def test_series_csv(self):
        s, _ = compute_series(ModelSpec(1, 0, 1, 4))
        assert series_csv(s) == "k,numerator,denominator\n0,1,2\n1,1,4\n2,-1,16\n3,1,32\n4,-357,256\n"


class TestCli:
    def test_default_run(self, capsys):
        code = cli.main([])
        out = capsys.readouterr().out
        assert len(out.splitlines()) == 26
        assert code in (0, 2)

    def test_config_file_and_overrides(self, tmp_path, capsys):
        path = tmp_path / "sweep.cfg"
        path.write_text("states = 0\nlambdas = 0.005\nformat = table\n", encoding="utf-8")
        assert cli.main(["--config", str(path), "--format", "csv", "--oracle", "off"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("n,lambda,E4,")
        assert len(out.splitlines()) == 2

    def test_config_error_exit(self, capsys):
        assert cli.main(["--pade", "3:3,3:4", "--order", "5"]) == 1
        assert "order" in capsys.readouterr().err
        assert cli.main(["--config", "/nonexistent/file.cfg"]) == 1

    def test_anomaly_exit(self, capsys):
        code = cli.main(["--states", "5", "--lambdas", "0.1", "--pole-threshold", "2", "--oracle", "off"])
        assert code == 2
        assert POLE in capsys.readouterr().err

    def test_series_dump(self, capsys):
        assert cli.main(["--states", "0", "--order", "7", "--series-csv"]) == 0
        out = capsys.readouterr().out
        assert "4,-357,256" in out
        assert cli.main(["--series-csv", "--precision", "float"]) == 1

    def test_published_comparison(self, capsys):
        assert cli.main(["--states", "0", "--published"]) == 0
        out = capsys.readouterr().out
        assert "published" in out and "sides-with" in out


def test_published_comparison_records():
    rows = run_sweep(parse_config("states = 3\nlambdas = 0.05, 0.1"))
    recs = published.compare(rows)
    assert len(recs) == 6
    assert {r["oracle_sides_with"] for r in recs} == {"computed"}
    assert all(abs(r["gap"]) > 1e-3 for r in recs)
