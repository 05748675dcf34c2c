import json

import pytest

from linedelta.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestApply:
    def test_square(self, capsys):
        code, out, _ = run(capsys, "apply", '{"coeffs": [1, 0, 0]}', "--theta", "0", "--h", "1")
        assert code == 0
        coeffs = json.loads(out)["coeffs"]
        assert [complex(*c) if isinstance(c, list) else c for c in coeffs] == [2, 0]

    def test_malformed(self, capsys):
        assert run(capsys, "apply", "{not json", "--h", "1")[0] == 2

    def test_zero_step(self, capsys):
        assert run(capsys, "apply", '{"coeffs": [1, 0]}', "--h", "0")[0] == 3

    def test_file_input(self, capsys, tmp_path):
        f = tmp_path / "p.json"
        f.write_text('{"coeffs": [1, 0, 1]}')
        out_file = tmp_path / "img.json"
        assert run(capsys, "apply", str(f), "--theta", "1.5707963267948966", "--h", "2",
                   "--out", str(out_file))[0] == 0
        assert json.loads(out_file.read_text())["coeffs"][2] in (-3, -3.0, [-3.0, 0.0])


def test_roots(capsys):
    code, out, _ = run(capsys, "roots", '{"coeffs": [1, -3, 3, -1]}')
    assert code == 0
    roots = json.loads(out)["roots"]
    assert len(roots) == 1 and roots[0]["mult"] == 3


class TestVerify:
    def test_mesh(self, capsys, tmp_path):
        code, _, err = run(capsys, "verify", "mesh", "--n-max", "10", "--trials", "200", "--seed", "7",
                           "--out", str(tmp_path))
        assert code == 0 and "200 trials" in err
        assert (tmp_path / "verify_mesh.json").exists() and (tmp_path / "manifest.json").exists()

    def test_strip_wide(self, capsys):
        assert run(capsys, "verify", "strip", "--r", "5", "--h", "1", "--trials", "50")[0] == 0

    def test_line_bad_operator(self, capsys):
        op = '{"l": 0, "m": 1, "coeffs": [[-2, 0], [1, 0]], "step": [0, 1]}'
        assert run(capsys, "verify", "line", "--operator", op, "--trials", "5")[0] == 3

    def test_reproducible(self, capsys, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for d in (a, b):
            assert run(capsys, "verify", "czd", "--trials", "30", "--seed", "4", "--out", str(d))[0] == 0
        assert (a / "verify_czd.json").read_bytes() == (b / "verify_czd.json").read_bytes()

    def test_bad_trials(self, capsys):
        assert run(capsys, "verify", "mesh", "--trials", "0")[0] == 2

    def test_unknown_theorem(self, capsys):
        assert run(capsys, "verify", "nonsense")[0] == 2


class TestFigures:
    def test_small(self, capsys, tmp_path):
        assert run(capsys, "figures", "fig12_small", "--out", str(tmp_path))[0] == 0
        for mag in ("10", "50"):
            rows = (tmp_path / f"fig12_small_h{mag}.csv").read_text().strip().split("\n")
            assert len(rows) == 1 + 11    # the theta = 0 image drops one degree
        summary = json.loads((tmp_path / "fig12_small_summary.json").read_text())
        assert summary["deviation"][0] / summary["deviation"][1] >= 4

    def test_csv_is_reproducible(self, capsys, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for d in (a, b):
            run(capsys, "figures", "fig12_small", "--out", str(d))
        assert (a / "fig12_small_h10.csv").read_bytes() == (b / "fig12_small_h10.csv").read_bytes()

    @pytest.mark.slow
    def test_full_preset(self, capsys, tmp_path):
        assert run(capsys, "figures", "fig12_full", "--h-magnitudes", "50", "--out", str(tmp_path))[0] == 0
        rows = (tmp_path / "fig12_full_h50.csv").read_text().strip().split("\n")
        # 44 input roots; the theta = 0 operator lowers the degree by one
        assert len(rows) == 1 + 43
        summary = json.loads((tmp_path / "fig12_full_summary.json").read_text())
        assert summary["angle_error"][0] < 0.05
        assert summary["precision"] == ["extended"]

    def test_bad_out_dir(self, capsys, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        assert run(capsys, "figures", "fig12_small", "--out", str(blocker / "sub"))[0] == 4


class TestExplore:
    def test_geometric_sum(self, capsys):
        code, out, _ = run(capsys, "explore", "geometric_sum_si", "--n", "6", "--theta", "0", "--h", "1")
        assert code == 0
        assert json.loads(out)["details"]["classification"] in ("si", "x_times_si", "neither")

    def test_generic_simplicity(self, capsys):
        code, out, _ = run(capsys, "explore", "generic_simplicity", "--trials", "50")
        assert code == 0 and json.loads(out)["violating"] == 0

    def test_strip_decrease(self, capsys):
        code, out, _ = run(capsys, "explore", "strip_decrease", "--trials", "10")
        assert code == 0 and len(json.loads(out)["details"]["mean_width"]) == 5


class TestStirling:
    def test_values(self, capsys):
        code, out, _ = run(capsys, "stirling", "--n", "4", "--m", "2")
        lines = out.strip().split("\n")
        assert code == 0 and lines[0] == "7" and len(lines) == 4
        assert all(float(l.split()[2]) <= 1e-9 for l in lines[2:])
        assert run(capsys, "stirling", "--n", "5", "--m", "4")[1].split("\n")[0] == "10"

    def test_range(self, capsys):
        assert run(capsys, "stirling", "--n", "3", "--m", "3")[0] == 2


def test_env_precision(capsys, monkeypatch):
    monkeypatch.setenv("LINEDELTA_PRECISION", "quad")
    assert run(capsys, "roots", '{"coeffs": [1, 0]}')[0] == 2
    monkeypatch.setenv("LINEDELTA_PRECISION", "extended")
    code, out, _ = run(capsys, "roots", '{"coeffs": [1, 0, -1]}')
    assert code == 0 and json.loads(out)["precision"] == "extended"
