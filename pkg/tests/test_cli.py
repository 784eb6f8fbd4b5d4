import csv
import io
import json

import pytest

from zonalprop import cli


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


class TestParsing:
    def test_colon_range_inclusive(self):
        assert cli.parse_range("0:1:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_integer_range(self):
        assert cli.parse_ints("0..3") == [0, 1, 2, 3]

    def test_list_with_exponents(self):
        assert cli.parse_ints("1e2,1e3") == [100, 1000]

    def test_bad_range(self):
        with pytest.raises(cli.DomainError):
            cli.parse_range("3:0:1")
        with pytest.raises(cli.DomainError):
            cli.parse_ints("0.5,1")


class TestHyperbolic:
    def test_odd_table_within_tolerance(self, capsys):
        code, out, _ = run(capsys, "hyperbolic", "--d", 3, "--beta", 1, "--theta", "0:3:0.1", "--method", "both")
        table = rows(out)
        assert code == 0
        assert table[0] == ["theta", "beta", "spectral_integral", "closed_form", "abs_diff"]
        assert len(table) == 32
        assert max(float(r[-1]) for r in table[1:]) < 1e-6

    def test_even_path(self, capsys):
        code, out, _ = run(capsys, "hyperbolic", "--d", 2, "--method", "both", "--theta", "0,1,2")
        assert code == 0
        assert max(float(r[-1]) for r in rows(out)[1:]) < 1e-4

    def test_parity_mismatch(self, capsys):
        code, _, err = run(capsys, "hyperbolic", "--d", 4, "--method", "odd")
        assert code == 2 and "odd" in err

    def test_real_time_columns(self, capsys):
        code, out, _ = run(capsys, "hyperbolic", "--d", 3, "--tau", 0.5, "--method", "closed", "--theta", "0.5")
        assert code == 0
        assert rows(out)[0] == ["theta", "tau", "closed_form_real", "closed_form_imag"]

    def test_real_time_spectral_refused(self, capsys):
        assert run(capsys, "hyperbolic", "--tau", 0.5)[0] == 2

    def test_tolerance_failure(self, capsys):
        code, _, _ = run(capsys, "hyperbolic", "--d", 2, "--theta", "0,1", "--tol", 1e-30)
        assert code == 1


class TestOscillator:
    def test_radial_matches_oracle(self, capsys):
        code, out, _ = run(capsys, "oscillator", "radial", "--d", 3, "--l", 0, "--beta", 0.7)
        table = rows(out)
        assert code == 0
        assert "image_method_oracle" in table[0]
        assert max(float(r[-1]) for r in table[1:]) < 1e-10

    def test_caustic_exit(self, capsys):
        code, _, err = run(capsys, "oscillator", "radial", "--tau", 3.141592653589793)
        assert code == 2 and "caustic" in err

    def test_spectrum(self, capsys):
        code, out, _ = run(capsys, "oscillator", "spectrum", "--d", 3, "--n", "0..5")
        assert code == 0
        assert [float(r[1]) for r in rows(out)[1:]] == [1.5, 2.5, 3.5, 4.5, 5.5, 6.5]

    def test_green(self, capsys):
        code, out, _ = run(capsys, "oscillator", "green", "--l", 0, "--E", -1)
        assert code == 0
        assert all(float(r[-1]) < 1e-8 for r in rows(out)[1:])

    def test_green_above_threshold(self, capsys):
        assert run(capsys, "oscillator", "green", "--l", 0, "--E", 2)[0] == 2

    def test_full(self, capsys):
        code, out, _ = run(capsys, "oscillator", "full", "--d", 2, "--beta", 0.5, "--x1", "0.3,0.4", "--x2=-1,0.2")
        assert code == 0
        assert float(rows(out)[1][-1]) < 1e-8


class TestCheck:
    @pytest.mark.parametrize("name", ["weber", "commutators", "casimir", "ortho", "planewave"])
    def test_passes(self, capsys, name):
        code, out, _ = run(capsys, "check", name)
        recs = json.loads(out)
        assert code == 0
        assert recs and all(r["pass"] and r["name"] == name for r in recs)
        assert set(recs[0]) == {"name", "parameters", "residual", "tolerance", "pass"}

    def test_limit(self, capsys):
        code, out, _ = run(capsys, "check", "limit47", "--N", 10000)
        assert code == 0
        assert max(r["residual"] for r in json.loads(out)) < 1e-3

    def test_unknown(self, capsys):
        assert run(capsys, "check", "nonsense")[0] == 2

    def test_failing_tolerance(self, capsys):
        assert run(capsys, "check", "weber", "--tol", 1e-30)[0] == 1


class TestConverge:
    def test_single_row_has_no_rate(self, capsys):
        code, out, _ = run(capsys, "converge", "--N", 1)
        table = rows(out)
        assert code == 0 and len(table) == 2 and table[1][2] == ""

    def test_hyperbolic_coefficients(self, capsys):
        code, out, _ = run(capsys, "converge", "--scenario", "hyperbolic-coeff", "--N", "1e2,1e3,1e4")
        table = rows(out)
        assert code == 0
        errs = [float(r[1]) for r in table[1:]]
        assert errs[0] > errs[1] > errs[2]

    def test_descending_refused(self, capsys):
        assert run(capsys, "converge", "--N", "64,32")[0] == 2

    def test_resolution_refusal_propagates(self, capsys):
        code, _, err = run(capsys, "converge", "--N", "256", "--grid", 20)
        assert code == 2 and "coarse" in err

    def test_json(self, capsys):
        code, out, _ = run(capsys, "converge", "--N", "8,16", "--format", "json")
        recs = json.loads(out)
        assert code == 0 and recs[0]["rate"] is None and recs[1]["N"] == 16


class TestUsage:
    def test_missing_verb(self, capsys):
        assert run(capsys)[0] == 2

    def test_bad_flag(self, capsys):
        assert run(capsys, "hyperbolic", "--bogus")[0] == 2

    def test_beta_and_tau_exclusive(self, capsys):
        assert run(capsys, "hyperbolic", "--beta", 1, "--tau", 1)[0] == 2


class TestConfigAndOutput:
    def test_config_defaults_and_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# spectrum run\nd = 2\nn = 0..2\n", encoding="utf-8")
        code, out, _ = run(capsys, "oscillator", "spectrum", "--config", cfg)
        assert code == 0 and [r[1] for r in rows(out)[1:]] == ["1", "2", "3"]
        code, out, _ = run(capsys, "oscillator", "spectrum", "--config", cfg, "--d", 4)
        assert [r[1] for r in rows(out)[1:]] == ["2", "3", "4"]

    def test_config_unknown_key(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("colour = blue\n", encoding="utf-8")
        assert run(capsys, "oscillator", "spectrum", "--config", cfg)[0] == 2

    def test_out_file_deterministic(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            assert run(capsys, "hyperbolic", "--d", 5, "--theta", "0:2:0.5", "--out", path)[0] == 0
        assert a.read_bytes() == b.read_bytes()
        assert a.read_text(encoding="utf-8").startswith("theta,beta,")


class TestColumnRegistry:
    COMMANDS = [
        ("hyperbolic", "--d", "3", "--theta", "0,1"),
        ("hyperbolic", "--d", "3", "--tau", "0.5", "--method", "closed", "--theta", "1"),
        ("oscillator", "radial", "--grid", "1"),
        ("oscillator", "radial", "--tau", "0.5", "--grid", "1"),
        ("oscillator", "radial", "--l", "1", "--grid", "1"),
        ("oscillator", "full"),
        ("oscillator", "spectrum"),
        ("oscillator", "green"),
        ("converge", "--N", "4,8"),
    ]

    @pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a[:2]))
    def test_every_header_documented(self, capsys, argv):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        header = rows(out)[0]
        missing = [h for h in header if h not in cli.COLUMNS]
        assert not missing

    def test_registry_entries_are_descriptive(self):
        assert all(len(v.split()) >= 2 for v in cli.COLUMNS.values())
