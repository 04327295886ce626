import json

import pytest

from sievelab import cli


def run(capsys, *args):
    code = cli.main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestConstants:
    def test_unconditional_passes(self, capsys):
        code, out, _ = run(capsys, "constants", "--mode", "unconditional")
        assert code == 0
        assert "overall: pass" in out
        assert "| 6 " in out and "| 16 " in out

    def test_selberg_json(self, capsys):
        code, out, _ = run(capsys, "constants", "--mode", "selberg",
                           "--output", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["all_pass"] is True
        by_name = {r["name"]: r["computed"] for r in payload["rows"]}
        assert by_name["r (one coordinate)"] == "5"
        assert by_name["r (coordinate product)"] == "14"

    def test_csv_output(self, capsys):
        code, out, _ = run(capsys, "constants", "--output", "csv")
        assert code == 0
        assert out.splitlines()[0] == "name,computed,expected,pass"

    def test_failing_row_gives_exit_one(self, capsys, monkeypatch):
        from sievelab import thresholds
        expected = dict(thresholds._EXPECTED)
        bad = dict(expected["unconditional"])
        bad["threshold"] = (99.0, 100.0)
        expected = {**expected, "unconditional": bad}
        monkeypatch.setattr(thresholds, "_EXPECTED", expected)
        code, out, _ = run(capsys, "constants", "--mode", "unconditional")
        assert code == 1
        assert "overall: FAIL" in out

    def test_byte_identical_reruns(self, capsys):
        _, out1, _ = run(capsys, "constants", "--output", "json")
        _, out2, _ = run(capsys, "constants", "--output", "json")
        assert out1 == out2


class TestLocal:
    def test_text_report(self, capsys):
        code, out, _ = run(capsys, "local", "--form", "1,1,-3,0,0,0",
                           "--t", "1", "--pmax", "97")
        assert code == 0
        assert "bad primes <= 97: none" in out
        assert "NO" not in out

    def test_csv_has_agreement_column(self, capsys):
        code, out, _ = run(capsys, "local", "--form", "1,1,-3,0,0,0",
                           "--t", "1", "--pmax", "30", "--output", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "p,count_V,count_V0,omega_num,omega_den,is_bad,cassels_agree"
        assert lines[1] == "2,4,2,0,1,0,"
        assert lines[3].endswith(",1")  # p=5 agrees with the closed form

    def test_triple_variant_bad_set(self, capsys):
        code, out, _ = run(capsys, "local", "--form", "1,1,-3,0,0,0", "--t", "1",
                           "--pmax", "50", "--projection", "x1x2x3",
                           "--output", "json")
        assert code == 0
        payload = json.loads(out)
        assert set(payload["bad_primes"]) <= {2, 3, 5, 7}

    def test_pmax_guard_is_config_error(self, capsys):
        code, _, err = run(capsys, "local", "--form", "1,1,-3,0,0,0",
                           "--t", "1", "--pmax", "100000")
        assert code == 2
        assert "error" in err

    def test_missing_form(self, capsys):
        code, _, err = run(capsys, "local", "--t", "1")
        assert code == 2
        assert "requires" in err


class TestEquidist:
    def test_small_run(self, capsys):
        code, out, _ = run(capsys, "equidist", "--form", "1,1,-3,0,0,0",
                           "--t", "1", "--T", "50", "--dmax", "15")
        assert code == 0
        lines = out.splitlines()
        d1 = next(line for line in lines if line.startswith("1 |"))
        assert "| 0 |" in d1  # R_1 = 0
        assert any(line.startswith("level statistic") for line in lines)

    def test_byte_identical_reruns(self, capsys):
        args = ("equidist", "--form", "1,1,-3,0,0,0", "--t", "1",
                "--T", "50", "--dmax", "12", "--output", "json")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2

    def test_trend_flag(self, capsys):
        code, out, _ = run(capsys, "equidist", "--form", "1,1,-3,0,0,0",
                           "--t", "1", "--T", "50", "--dmax", "12", "--trend")
        assert code == 0
        assert "trend:" in out


class TestCensus:
    def test_report_fields(self, capsys):
        code, out, _ = run(capsys, "census", "--form", "1,1,-3,0,0,0",
                           "--t", "1", "--T", "60", "--r", "6",
                           "--output", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["published_r"] == 6
        assert payload["weighted"] > 0
        assert 0 <= payload["ratio"] <= 1 + 1e-12

    def test_published_r_by_projection_and_mode(self, capsys):
        code, out, _ = run(capsys, "census", "--form", "1,1,-3,0,0,0",
                           "--t", "1", "--T", "60", "--r", "16",
                           "--projection", "x1x2", "--mode", "selberg",
                           "--output", "json")
        assert code == 0
        assert json.loads(out)["published_r"] == 14


class TestEnumerate:
    def test_csv_points(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--form", "1,1,-3,0,0,0",
                           "--t", "1", "--R", "3")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "x1,x2,x3,weight"
        assert len(lines) == 13
        assert lines[1].startswith("-2,0,-1")

    def test_radius_from_T(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--form", "1,1,-3,0,0,0",
                           "--t", "1", "--T", "10", "--c0", "2.0")
        assert code == 0
        assert len(out.strip().splitlines()) > 1


class TestAutomorphs:
    def test_count(self, capsys):
        code, out, _ = run(capsys, "automorphs", "--form", "1,1,-3,0,0,0",
                           "--H", "1", "--output", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["count"] == 8

    def test_text(self, capsys):
        code, out, _ = run(capsys, "automorphs", "--form", "1,1,-3,0,0,0",
                           "--H", "0")
        assert code == 0
        assert "count=1" in out

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "automorphs", "--form", "1,1,-3,0,0,0",
                           "--H", "0", "--output", "csv")
        assert code == 0
        assert out.strip().splitlines() == [
            "m11,m12,m13,m21,m22,m23,m31,m32,m33",
            "1,0,0,0,1,0,0,0,1"]


class TestConfigAndErrors:
    def test_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("form=1,1,-3,0,0,0\nt=1\npmax=20\n")
        code, out, _ = run(capsys, "--config", str(cfg), "local")
        assert code == 0
        assert "form 1,1,-3,0,0,0" in out

    def test_flags_beat_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("form=1,1,-3,0,0,0\nt=1\npmax=20\n")
        code, out, _ = run(capsys, "--config", str(cfg), "local", "--pmax", "11")
        assert code == 0
        assert "11 |" in out and "13 |" not in out

    def test_bad_config_line(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("this is not a pair\n")
        code, _, err = run(capsys, "--config", str(cfg), "constants")
        assert code == 2
        assert "key=value" in err

    def test_zero_t_is_config_error(self, capsys):
        code, _, err = run(capsys, "local", "--form", "1,1,-3,0,0,0", "--t", "0")
        assert code == 2
        assert "nonzero" in err

    def test_degenerate_form_is_config_error(self, capsys):
        code, _, err = run(capsys, "local", "--form", "1,1,0,0,0,0", "--t", "1")
        assert code == 2
        assert "degenerate" in err

    def test_unknown_flag_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["constants", "--frobnicate"])
        assert exc.value.code == 2

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run(capsys, "constants", "--output", "json",
                           "--out", str(target))
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text())["all_pass"] is True
