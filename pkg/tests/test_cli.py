import json

import numpy as np
import pytest

from direop.cli import FIGURES, RunConfig, figure_config, main, read_config, to_json
from direop.numerics import quadrature
from direop.potentials import PotentialSpec, phi
from direop.spectra import default_grid, normalized_eigenfunction


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    lines = text.splitlines()
    assert lines[0].startswith("# config: ")
    header = lines[1].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[2:]])
    return header, data


class TestSpectrum:
    def test_scarf_rows(self, capsys):
        code, out, _ = run_cli(capsys, "spectrum", "--family", "scarf", "--A", "3", "--B", "1", "--check")
        assert code == 0
        header, data = csv_rows(out)
        assert header == ["m", "n", "energy_analytic", "energy_paper", "numeric", "abs_err"]
        assert np.array_equal(data[:, 2], [0, 7, 16, 27])
        assert np.all(data[:, 5] < 1e-4)

    def test_oscillator_display_column(self, capsys):
        code, out, _ = run_cli(capsys, "spectrum", "--family", "oscillator", "--omega", "2", "--ell", "1",
                               "--m", "0,1", "--n-levels", "2")
        header, data = csv_rows(out)
        assert data[:, 0].tolist() == [0, 0, 1, 1]
        assert data[:, 3].tolist() == [5, 9, 0, 4]

    def test_check_fails_with_impossible_tolerance(self, capsys):
        code, _, _ = run_cli(capsys, "spectrum", "--family", "scarf", "--A", "3", "--B", "1",
                             "--check", "--tol", "1e-16", "--n-levels", "2")
        assert code == 1

    def test_json(self, capsys):
        code, out, _ = run_cli(capsys, "spectrum", "--family", "pt", "--A", "1", "--B", "3", "--format", "json")
        doc = json.loads(out)
        assert set(doc) == {"config", "columns", "rows"}
        assert len(doc["rows"]) == 1


class TestExitCodes:
    def test_invalid_spec(self, capsys):
        code, out, err = run_cli(capsys, "spectrum", "--family", "scarf", "--A", "1", "--B", "3")
        assert code == 2
        assert out == ""
        assert "A" in err and "B" in err

    def test_missing_parameter(self, capsys):
        code, _, err = run_cli(capsys, "potential", "--family", "oscillator", "--omega", "2")
        assert code == 2
        assert "--ell" in err

    def test_level_out_of_range(self, capsys):
        code, _, _ = run_cli(capsys, "wavefunction", "--family", "pt", "--A", "1", "--B", "3", "--n", "1")
        assert code == 2

    def test_unknown_figure(self, capsys):
        assert run_cli(capsys, "figure", "6a")[0] == 2

    def test_missing_replay_file(self, capsys, tmp_path):
        assert run_cli(capsys, "replay", str(tmp_path / "absent.csv"))[0] == 2

    def test_bad_m_list(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["potential", "--family", "scarf", "--A", "3", "--B", "1", "--m", "x"])
        assert exc.value.code == 2


class TestVerify:
    args = ("verify", "--family", "scarf", "--A", "3", "--B", "1", "--m", "0,1", "--suite", "quick")

    def test_passes(self, capsys):
        code, out, _ = run_cli(capsys, *self.args)
        doc = json.loads(out)
        assert code == 0 and doc["passed"]
        assert [r["spec"]["m"] for r in doc["reports"]] == [0, 1]

    def test_zero_tolerance_scale_fails(self, capsys):
        code, _, err = run_cli(capsys, *self.args, "--tol-scale", "0")
        assert code == 1
        assert err.startswith("FAIL")

    def test_perturbation_fails(self, capsys):
        assert run_cli(capsys, *self.args, "--perturb-energy", "1:0.01")[0] == 1

    def test_perturbation_syntax(self, capsys):
        with pytest.raises(SystemExit):
            main([*self.args, "--perturb-energy", "oops"])

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run_cli(capsys, *self.args, "--output", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["passed"]


class TestReplay:
    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_byte_identical(self, capsys, tmp_path, fmt):
        first = tmp_path / f"first.{fmt}"
        second = tmp_path / f"second.{fmt}"
        assert run_cli(capsys, "figure", "2b", "--format", fmt, "--points", "51", "--output", str(first))[0] == 0
        assert run_cli(capsys, "replay", str(first), "--output", str(second))[0] == 0
        assert first.read_bytes() == second.read_bytes()

    def test_config_round_trip(self, capsys, tmp_path):
        target = tmp_path / "spec.csv"
        run_cli(capsys, "spectrum", "--family", "oscillator", "--omega", "2", "--ell", "1", "--n-levels", "2",
                "--output", str(target))
        cfg = read_config(str(target))
        assert cfg == RunConfig.from_dict(cfg.to_dict())
        assert (cfg.command, cfg.omega, cfg.n_levels) == ("spectrum", 2.0, 2)

    def test_seed_override(self, capsys, monkeypatch):
        monkeypatch.setenv("DIREOP_SEED", "7")
        _, out, _ = run_cli(capsys, "spectrum", "--family", "pt", "--A", "1", "--B", "3", "--format", "json")
        assert json.loads(out)["config"]["seed"] == 7


class TestFigures:
    @pytest.mark.parametrize("fig", [f"{k}{p}" for k in FIGURES for p in "ab"])
    def test_parameters(self, fig):
        cfg = figure_config(fig)
        assert cfg.m == [0, 1, 2]
        assert cfg.command == ("potential" if fig[1] == "a" else "wavefunction")
        for key, value in FIGURES[fig[0]].items():
            assert getattr(cfg, key) == value

    @pytest.mark.parametrize("fig", [f"{k}b" for k in FIGURES])
    def test_ground_states_nodeless_and_normalized(self, capsys, fig):
        code, out, _ = run_cli(capsys, "figure", fig, "--points", "201")
        assert code == 0
        header, data = csv_rows(out)
        cfg = figure_config(fig)
        for spec in cfg.specs():
            rows = data[data[:, 0] == spec.m]
            psi = rows[:, 2]
            assert np.all(psi > 0) or np.all(psi < 0)
            assert np.all(rows[:, 3] == 0.0)
            grid = default_grid(spec, 1)
            dense = normalized_eigenfunction(spec, 0, grid.nodes, grid)
            assert quadrature(dense * dense, grid) == pytest.approx(1.0, abs=1e-8)
            assert np.allclose(psi, normalized_eigenfunction(spec, 0, rows[:, 1], default_grid(spec, 1)), rtol=1e-12)

    def test_potential_columns(self, capsys):
        code, out, _ = run_cli(capsys, "figure", "1a", "--points", "11")
        header, data = csv_rows(out)
        assert header == ["m", "x", "phi", "v1", "v2"]
        assert data.shape == (33, 5)
        assert np.all(data[:, 1] > 0)


class TestFormat:
    def test_seventeen_digits(self):
        assert to_json(0.1) == "0.10000000000000001"
        assert to_json({"a": [1, 2.5], "b": None, "c": True}) == '{"a": [1, 2.5], "b": null, "c": true}'

    def test_csv_numbers_round_trip(self, capsys):
        # 17 significant digits reproduce every double bit for bit
        _, out, _ = run_cli(capsys, "potential", "--family", "scarf", "--A", "3", "--B", "1", "--points", "7")
        _, data = csv_rows(out)
        assert np.array_equal(data[:, 2], phi(PotentialSpec.scarf(3.0, 1.0), data[:, 1]))

    def test_spec_labels(self):
        assert RunConfig("spectrum", family="pt", A=1.0, B=3.0, m=[2]).specs()[0] == PotentialSpec.poschl_teller(1.0, 3.0, 2)
