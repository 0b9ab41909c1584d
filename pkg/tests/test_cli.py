import json

import numpy as np
import pytest

from steerlab.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, read_rows

SQRT2 = np.sqrt(2)


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _envelope(rows):
    env = [(s1, s2) for s1, s2, label, _ in rows if label not in ("case", "bound")]
    return np.array(env)


class TestTradeoff:
    def test_csv_envelope_starts_at_sqrt2(self, tmp_path, capsys):
        out = tmp_path / "ll.csv"
        code, _, err = _run(capsys, "tradeoff", "--scenario", "steer-ab-ll", "--alpha", "max", "-o", str(out))
        assert code == EXIT_OK
        env = _envelope(read_rows(out.read_text(), "csv"))
        assert env[0, 0] == 0.0
        assert env[0, 1] == pytest.approx(1.41421, abs=5e-6)
        assert "mix(1,3)" in err

    def test_bc_3a_envelope(self, tmp_path, capsys):
        out = tmp_path / "bc.csv"
        assert _run(capsys, "tradeoff", "--scenario", "steer-bc-ll-3a", "-o", str(out))[0] == EXIT_OK
        env = _envelope(read_rows(out.read_text(), "csv"))
        x = env[:, 0]
        ref = np.select([x <= 0.619, x <= 1.161],
                        [-0.503 * x + SQRT2, -0.218 * x + 1.238], 0.5 * (x + np.sqrt(np.clip(2 - x * x, 0, None))))
        assert np.abs(env[:, 1] - ref).max() < 2e-3

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_round_trip_bit_exact(self, fmt):
        from steerlab.cli import RunManifest, render, tradeoff_rows
        from steerlab.strategies.catalog import Scenario

        rows, _ = tradeoff_rows(Scenario.STEER_AB_CL, np.pi / 4, 200, 0, "tangent")
        text = render(rows, RunManifest("tradeoff", "steer-ab-cl", "pi/4", 200, 0, "-"), fmt)
        back = read_rows(text, fmt)
        assert back == [tuple(r) for r in rows]

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_identical_manifest_identical_bytes(self, tmp_path, capsys, fmt):
        out = tmp_path / f"t.{fmt}"
        argv = ["tradeoff", "--scenario", "steer-ab-ll", "--samples", "300", "--seed", "3", "--format", fmt,
                "-o", str(out)]
        _run(capsys, *argv)
        first = out.read_bytes()
        _run(capsys, *argv)
        assert out.read_bytes() == first

    def test_manifest_and_columns(self, tmp_path, capsys):
        out = tmp_path / "t.json"
        _run(capsys, "tradeoff", "--scenario", "steer-ab-cl", "--alpha", "7pi/36", "--samples", "200",
             "--format", "json", "-o", str(out))
        payload = json.loads(out.read_text())
        assert payload["columns"] == ["s1", "s2", "segment_label", "case_lambda"]
        assert payload["manifest"]["alpha"] == "7pi/36"
        assert payload["manifest"]["samples"] == 200
        assert {"bound", "case"} <= {r["segment_label"] for r in payload["rows"]}

    def test_csv_header_comment(self, tmp_path, capsys):
        out = tmp_path / "t.csv"
        _run(capsys, "tradeoff", "--scenario", "steer-ab-ll", "--samples", "100", "-o", str(out))
        first, second = out.read_text().splitlines()[:2]
        assert first.startswith("# manifest:") and '"samples": 100' in first
        assert second == "s1,s2,segment_label,case_lambda"

    def test_stdout(self, capsys):
        code, out, _ = _run(capsys, "tradeoff", "--scenario", "steer-ab-ll", "--samples", "100", "-o", "-")
        assert code == EXIT_OK and out.startswith("# manifest:")

    def test_all_mixing(self, capsys):
        code, _, err = _run(capsys, "tradeoff", "--scenario", "steer-ab-ll", "--samples", "200", "--mixing",
                            "all", "-o", "-")
        assert code == EXIT_OK and "mix(1,2)" in err

    def test_unknown_scenario(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["tradeoff", "--scenario", "steer-zz"])
        assert exc.value.code == EXIT_USAGE

    def test_unwritable_path(self, tmp_path, capsys):
        code, _, err = _run(capsys, "tradeoff", "--scenario", "steer-ab-ll", "--samples", "100",
                            "-o", str(tmp_path / "missing" / "x.csv"))
        assert code == EXIT_USAGE and "cannot write" in err

    def test_bad_alpha(self, capsys):
        assert _run(capsys, "tradeoff", "--scenario", "steer-ab-ll", "--alpha", "abc")[0] == EXIT_USAGE

    def test_too_few_samples(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["tradeoff", "--scenario", "steer-ab-ll", "--samples", "10"])
        assert exc.value.code == EXIT_USAGE


class TestOptimize:
    def test_maximal(self, capsys):
        code, out, _ = _run(capsys, "optimize", "--scenario", "steer-ab-ll", "--mix", "1,3", "--alpha", "max")
        assert code == EXIT_OK
        assert "value     1.02" in out and "no violation" not in out

    def test_no_violation_flag(self, capsys):
        code, out, _ = _run(capsys, "optimize", "--scenario", "steer-bc-lc", "--mix", "1,3")
        assert code == EXIT_OK and "no violation" in out

    def test_json(self, capsys):
        code, out, _ = _run(capsys, "optimize", "--scenario", "steer-ab-cl", "--mix", "1,2", "--format", "json")
        payload = json.loads(out)
        assert payload["value"] == pytest.approx(1.0, abs=2e-3)
        assert set(payload["mix"]) == {"1", "2"}

    def test_infeasible_pattern(self, capsys):
        code, _, err = _run(capsys, "optimize", "--scenario", "steer-ab-ll", "--mix", "1,7")
        assert code == EXIT_USAGE and "unknown case" in err


class TestWeak:
    def test_square(self, capsys):
        code, out, _ = _run(capsys, "weak", "--family", "square", "--g", "0.8")
        assert code == EXIT_OK
        assert out.count("S1=1.13137  S2=1.13137") == 3
        assert "F=0.600000" in out

    def test_linear(self, capsys):
        _, out, _ = _run(capsys, "weak", "--family", "linear", "--g", "0.5")
        assert "F=0.500000" in out
        assert f"S1={np.sqrt(2) / 2:.5f}  S2={1.5 / np.sqrt(2):.5f}" in out

    def test_strong_limit(self, capsys):
        _, out, _ = _run(capsys, "weak", "--g", "1.0")
        assert f"S1={np.sqrt(2):.5f}  S2={np.sqrt(2) / 2:.5f}" in out

    @pytest.mark.parametrize("g", ["-0.1", "1.2"])
    def test_invalid_g(self, capsys, g):
        assert _run(capsys, "weak", "--g", g)[0] == EXIT_USAGE


class TestVerify:
    def test_only_weak(self, capsys):
        code, out, _ = _run(capsys, "verify", "--only", "weak")
        assert code == EXIT_OK
        rows = [ln for ln in out.splitlines() if ln.startswith("weak")]
        assert len(rows) == 6 and all(ln.endswith("PASS") for ln in rows)
        assert "1.131370" in out

    def test_table_columns(self, capsys):
        _, out, _ = _run(capsys, "verify", "--only", "bounds")
        assert out.splitlines()[0].split() == ["group", "check", "expected", "computed", "tol", "status"]

    def test_fault_injection_is_caught(self, capsys):
        code, out, _ = _run(capsys, "verify", "--only", "crossval", "--inject-fault", "unitary")
        assert code == EXIT_FAIL
        failing = [ln for ln in out.splitlines() if ln.endswith("FAIL")]
        assert failing and all("maximal case 1" in ln for ln in failing)

    def test_unknown_group(self, capsys):
        assert _run(capsys, "verify", "--only", "everything")[0] == EXIT_USAGE
