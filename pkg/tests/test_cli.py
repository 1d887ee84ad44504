import csv
import io
import json
import math

import numpy as np
import pytest

from ptdirac import cli
from ptdirac.model import sech


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    return list(csv.DictReader(io.StringIO(body)))


def header_values(text):
    pairs = [line[2:].split(" = ", 1) for line in text.splitlines()
             if line.startswith("# ") and " = " in line]
    return dict(pairs)


class TestFormatting:
    def test_seventeen_digits(self):
        assert cli.fmt(0.1) == "0.10000000000000001"
        assert float(cli.fmt(math.pi)) == math.pi

    def test_special_values(self):
        assert cli.fmt(None) == ""
        assert cli.fmt(True) == "true"


class TestSpectrum:
    def test_complex_scarf_k2(self, capsys):
        code, out, _ = run(["spectrum", "--model", "eq38", "--branch", "k2"], capsys)
        assert code == 0
        rows = [r for r in table(out) if r["normalizable"] == "true"]
        assert len(rows) == 1 and float(rows[0]["re_e"]) == pytest.approx(-0.25)

    def test_free_has_no_bound_rows(self, capsys):
        code, out, _ = run(["spectrum", "--a", "0"], capsys)
        assert code == 0
        assert not any(r["normalizable"] == "true" for r in table(out))
        assert header_values(out)["rejected_branches"] == "k1"

    def test_negative_nmax(self, capsys):
        code, _, err = run(["spectrum", "--nmax", "-1"], capsys)
        assert code == 2 and "nmax" in err

    def test_marginal_hidden_by_default(self, capsys):
        _, out, _ = run(["spectrum", "--branch", "k1"], capsys)
        assert all(r["marginal"] == "false" for r in table(out))
        _, out, _ = run(["spectrum", "--branch", "k1", "--include-marginal"], capsys)
        assert table(out)[0]["marginal"] == "true"

    def test_imaginary_velocity(self, capsys):
        _, out, _ = run(["spectrum", "--branch", "k2", "--nmax", "0", "--imaginary-vf"], capsys)
        row = table(out)[0]
        assert float(row["im_dirac"]) == 0 and abs(float(row["re_dirac"])) == pytest.approx(0.5)

    def test_custom_bs_requires_coefficients(self, capsys):
        code, _, err = run(["spectrum", "--model", "custom-bs"], capsys)
        assert code == 2 and "--b1" in err

    def test_custom_bs_matches_named_member(self, capsys):
        _, named, _ = run(["spectrum", "--model", "eq39", "--format", "report"], capsys)
        _, custom, _ = run(["spectrum", "--model", "custom-bs", "--b1", "1", "--s", "1",
                            "--format", "report"], capsys)
        strip = lambda t: [l for l in t.splitlines() if not l.startswith("#")]
        assert strip(named) == strip(custom)

    def test_inline_oracle(self, capsys):
        code, out, _ = run(["spectrum", "--branch", "k2", "--nmax", "1", "--verify-inline",
                            "--grid-n", "1501"], capsys)
        assert code == 0
        rows = table(out)
        assert float(rows[0]["abs_err"]) <= 2e-3
        assert rows[1]["abs_err"] == ""


class TestOtherCommands:
    def test_constraints(self, capsys):
        code, out, _ = run(["constraints", "--a", "1", "--mu", "1"], capsys)
        rows = table(out)
        assert code == 0 and len(rows) == 4
        got = [(float(r["re_b1"]), float(r["re_s"])) for r in rows]
        assert got == [(0, -1), (1, 1), (-0.5, -0.5), (1.5, 0.5)]

    def test_pdfv_real_unit(self, capsys):
        code, out, _ = run(["pdfv", "--kind", "real", "--alpha", "1", "--beta", "1"], capsys)
        rows = table(out)
        x = np.array([float(r["x"]) for r in rows])
        simp = np.array([float(r["re_simplified"]) for r in rows])
        full = np.array([float(r["re_full"]) for r in rows])
        assert code == 0
        assert np.max(np.abs(simp - sech(x) * np.tanh(x))) <= 1e-15
        assert np.max(np.abs(full - simp)) <= 1e-10

    def test_pdfv_invalid_alpha(self, capsys):
        code, _, err = run(["pdfv", "--alpha", "0"], capsys)
        assert code == 2 and "alpha" in err

    def test_potential_v1(self, capsys):
        code, out, _ = run(["potential", "--which", "V1", "--grid-l", "2", "--grid-n", "5"], capsys)
        rows = table(out)
        assert code == 0 and len(rows) == 5
        assert float(rows[2]["re"]) == -1 and float(rows[2]["im"]) == 0

    def test_potential_effective_real_kind(self, capsys):
        code, _, _ = run(["potential", "--which", "Veff", "--grid-l", "2", "--grid-n", "11"], capsys)
        assert code == 0  # the effective potential itself has no 1/v

    def test_bad_flag_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["spectrum", "--model", "eq99"])
        assert exc.value.code == 2


class TestConfig:
    def test_flags_override_file(self, tmp_path, capsys):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"a": 2.0, "mu": 0.5}))
        _, out, _ = run(["constraints", "--config", str(cfg), "--a", "1"], capsys)
        h = header_values(out)
        assert float(h["a"]) == 1 and float(h["mu"]) == 0.5

    def test_unknown_key(self, tmp_path, capsys):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"colour": "red"}))
        code, _, err = run(["constraints", "--config", str(cfg)], capsys)
        assert code == 2 and "colour" in err

    def test_unreadable(self, tmp_path, capsys):
        code, _, _ = run(["constraints", "--config", str(tmp_path / "missing.json")], capsys)
        assert code == 2

    def test_defaults_echoed(self, capsys):
        _, out, _ = run(["verify", "--suite", "factorization"], capsys)
        h = header_values(out)
        assert h["grid_n"] == "1501" and h["suite"] == "factorization"


class TestVerify:
    def test_corrupted_coefficient_fails(self, tmp_path, capsys):
        out = tmp_path / "report.txt"
        code, _, _ = run(["verify", "--suite", "constraints", "--perturb-b1", "0.1",
                          "--out", str(out)], capsys)
        assert code == 1
        assert "false" in out.read_text()

    def test_unknown_suite(self, capsys):
        code, _, err = run(["verify", "--suite", "nonsense"], capsys)
        assert code == 2 and "nonsense" in err

    def test_quick_suites_pass(self, capsys):
        code, out, _ = run(["verify", "--suite", "factorization,pt-symmetry,constraints,pdfv-reduction"],
                           capsys)
        assert code == 0

    def test_byte_identical(self, tmp_path, capsys):
        paths = [tmp_path / "a.txt", tmp_path / "b.txt"]
        for p in paths:
            cli.main(["constraints", "--out", str(p)])
            capsys.readouterr()
        assert paths[0].read_bytes() == paths[1].read_bytes()
