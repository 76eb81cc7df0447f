"""End-to-end tests of the command-line interface.

Commands run in-process through ``main`` so exit codes, stdout and
written files can all be inspected without subprocess overhead.
"""

import argparse
import csv
import json
import math
import os

import numpy as np
import pytest

import specpole
from specpole.cli import build_parser, main


def write_json(path, doc):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
    return str(path)


def read_csv(path):
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def read_table(path):
    """Rows of a CSV with mixed column types, as dicts keyed by header."""
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def read_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


GEGEN_MODEL = {"family": "gegenbauer", "d": 0.1, "u": 0.3, "truncation": 40}
INDICATOR_MODEL = {"family": "indicator", "s0": 2.0, "alpha": 0.2, "M": 4.0}


# ---------------------------------------------------------------------------
# Parser surface
# ---------------------------------------------------------------------------


def subcommand_parsers():
    parser = build_parser()
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return parser, action.choices
    raise AssertionError("no subparsers registered")


class TestParser:
    def test_every_flag_is_documented(self):
        parser, subs = subcommand_parsers()
        assert set(subs) == {
            "constants", "spectrum", "simulate",
            "transform", "estimate", "montecarlo",
        }
        for name, sub in subs.items():
            text = sub.format_help()
            for action in sub._actions:
                assert action.help, (
                    "flag %s of %s lacks help text" % (action.option_strings, name)
                )
                for opt in action.option_strings:
                    assert opt in text, "%s missing from %s --help" % (opt, name)

    def test_unknown_flag_is_rejected(self):
        with pytest.raises(SystemExit) as err:
            main(["constants", "--filter", "shannon-father", "--bogus"])
        assert err.value.code == 2

    def test_missing_subcommand_is_rejected(self):
        with pytest.raises(SystemExit) as err:
            main([])
        assert err.value.code == 2

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["--version"])
        assert err.value.code == 0
        assert specpole.__version__ in capsys.readouterr().out


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


class TestConstants:
    def run_json(self, argv, capsys):
        rc = main(argv)
        assert rc == 0
        return json.loads(capsys.readouterr().out)

    def test_shannon_father_values(self, capsys):
        doc = self.run_json(["constants", "--filter", "shannon-father"], capsys)
        assert set(doc) == {"name", "A_effective", "c2", "c3"}
        assert doc["name"] == "shannon-father"
        np.testing.assert_allclose(doc["c2"], 2.0 * math.pi, rtol=1e-6)
        np.testing.assert_allclose(doc["c3"], (4.0 / 3.0) * math.pi**3, rtol=1e-6)

    def test_mexican_hat_moment_ratio(self, capsys):
        doc = self.run_json(
            ["constants", "--filter", "mexican-hat", "--sigma", "1"], capsys
        )
        np.testing.assert_allclose(doc["c3"] / doc["c2"], 5.0, rtol=1e-6)

    def test_sigma_rescales_band_limit(self, capsys):
        one = self.run_json(["constants", "--filter", "mexican-hat"], capsys)
        two = self.run_json(
            ["constants", "--filter", "mexican-hat", "--sigma", "2"], capsys
        )
        np.testing.assert_allclose(
            two["A_effective"], one["A_effective"] / 2.0, rtol=1e-12
        )

    def test_unknown_filter_is_domain_error(self, capsys):
        rc = main(["constants", "--filter", "haar"])
        assert rc == 1
        assert "unknown filter" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------


class TestSpectrum:
    def test_indicator_grid_even_and_zero_outside_band(self, capsys):
        rc = main([
            "spectrum", "--family", "indicator", "--s0", "2.0",
            "--alpha", "0.2", "--M", "4.0",
            "--lam-max", "6.0", "--n-grid", "9",
        ])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "lam,f"
        arr = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        lam, f = arr[:, 0], arr[:, 1]
        np.testing.assert_allclose(f, f[::-1], rtol=1e-15)
        assert np.all(f[np.abs(lam) > 4.0] == 0.0)
        assert np.all(f[np.abs(lam) <= 4.0] > 0.0)

    def test_grid_hitting_pole_is_shifted_with_warning(self, capsys):
        argv = [
            "spectrum", "--family", "indicator", "--s0", "2.0",
            "--alpha", "0.2", "--M", "4.0",
            "--lam-max", "4.0", "--n-grid", "5",
        ]
        with pytest.warns(UserWarning, match="singular"):
            rc = main(argv)
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        arr = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        assert not np.any(np.abs(arr[:, 0]) == 2.0)
        assert np.all(np.isfinite(arr[:, 1]))

    def test_indicator_covariance_at_zero_matches_quadrature(self, tmp_path):
        cfg = write_json(tmp_path / "spec.json", {
            "model": INDICATOR_MODEL, "cov_lags": 2, "n_grid": 11,
        })
        out = str(tmp_path / "out")
        assert main(["spectrum", "--config", cfg, "--out", out]) == 0
        cov = read_csv(os.path.join(out, "covariance.csv"))
        model = specpole.model_from_json(INDICATOR_MODEL)
        np.testing.assert_allclose(
            cov[0, 1], specpole.covariance_eval(model, 0.0), rtol=1e-8
        )
        assert cov.shape == (3, 2)

    def test_ma_covariance_at_zero_is_coefficient_energy(self, tmp_path):
        out = str(tmp_path / "out")
        rc = main([
            "spectrum", "--family", "gegenbauer", "--d", "0.1", "--u", "0.3",
            "--cov-lags", "1", "--out", out,
        ])
        assert rc == 0
        cov = read_csv(os.path.join(out, "covariance.csv"))
        coeffs = specpole.gegenbauer_coeffs(39, 0.1, 0.3)
        np.testing.assert_allclose(cov[0, 1], np.dot(coeffs, coeffs), rtol=1e-12)

    def test_ma_density_integrates_to_lag_zero_covariance(self, tmp_path):
        out = str(tmp_path / "out")
        rc = main([
            "spectrum", "--family", "gegenbauer", "--d", "0.1", "--u", "0.3",
            "--n-grid", "8193", "--out", out,
        ])
        assert rc == 0
        arr = read_csv(os.path.join(out, "spectrum.csv"))
        coeffs = specpole.gegenbauer_coeffs(39, 0.1, 0.3)
        total = np.trapezoid(arr[:, 1], arr[:, 0])
        np.testing.assert_allclose(total, np.dot(coeffs, coeffs), rtol=1e-5)

    def test_manifest_lists_written_files(self, tmp_path):
        out = str(tmp_path / "out")
        rc = main([
            "spectrum", "--family", "gegenbauer", "--d", "0.1", "--u", "0.3",
            "--cov-lags", "2", "--out", out,
        ])
        assert rc == 0
        with open(os.path.join(out, "manifest.json")) as fh:
            manifest = json.load(fh)
        assert manifest["command"] == "spectrum"
        assert manifest["artifact_version"] == specpole.__version__
        assert manifest["outputs"] == ["covariance.csv", "spectrum.csv"]
        for name in manifest["outputs"]:
            assert os.path.exists(os.path.join(out, name))

    def test_config_and_inline_flags_conflict(self, tmp_path, capsys):
        cfg = write_json(tmp_path / "spec.json", {"model": GEGEN_MODEL})
        rc = main([
            "spectrum", "--config", cfg, "--family", "gegenbauer",
            "--d", "0.1", "--u", "0.3",
        ])
        assert rc == 2
        assert "not both" in capsys.readouterr().err

    def test_incomplete_inline_model_is_usage_error(self, capsys):
        rc = main(["spectrum", "--family", "indicator", "--s0", "2.0"])
        assert rc == 2
        assert "--alpha" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def simulate_config(tmp_path, **overrides):
    doc = {"model": GEGEN_MODEL, "n_points": 500, "t0": 0, "dt": 1.0, "seed": 11}
    doc.update(overrides)
    return write_json(tmp_path / "sim.json", doc)


class TestSimulate:
    def test_writes_path_and_manifest(self, tmp_path):
        cfg = simulate_config(tmp_path)
        out = str(tmp_path / "out")
        assert main(["simulate", "--config", cfg, "--out", out]) == 0
        arr = read_csv(os.path.join(out, "path.csv"))
        assert arr.shape == (500, 2)
        np.testing.assert_allclose(np.diff(arr[:, 0]), 1.0)
        with open(os.path.join(out, "manifest.json")) as fh:
            manifest = json.load(fh)
        assert manifest["seed"] == 11
        assert manifest["config"]["model"]["family"] == "gegenbauer"
        assert manifest["outputs"] == ["path.csv"]

    def test_rerun_is_bit_identical(self, tmp_path):
        cfg = simulate_config(tmp_path)
        out_a, out_b = str(tmp_path / "a"), str(tmp_path / "b")
        assert main(["simulate", "--config", cfg, "--out", out_a]) == 0
        assert main(["simulate", "--config", cfg, "--out", out_b]) == 0
        for name in ("path.csv", "manifest.json"):
            assert read_bytes(os.path.join(out_a, name)) == read_bytes(
                os.path.join(out_b, name)
            )

    def test_manifest_config_reproduces_output(self, tmp_path):
        cfg = simulate_config(tmp_path)
        out_a = str(tmp_path / "a")
        assert main(["simulate", "--config", cfg, "--out", out_a]) == 0
        with open(os.path.join(out_a, "manifest.json")) as fh:
            manifest = json.load(fh)
        replay = write_json(tmp_path / "replay.json", manifest["config"])
        out_b = str(tmp_path / "b")
        assert main(["simulate", "--config", replay, "--out", out_b]) == 0
        assert read_bytes(os.path.join(out_a, "path.csv")) == read_bytes(
            os.path.join(out_b, "path.csv")
        )

    def test_seed_flag_overrides_config(self, tmp_path):
        cfg = simulate_config(tmp_path)
        out_a, out_b = str(tmp_path / "a"), str(tmp_path / "b")
        assert main(["simulate", "--config", cfg, "--out", out_a]) == 0
        assert main(["simulate", "--config", cfg, "--out", out_b,
                     "--seed", "99"]) == 0
        path_a = read_csv(os.path.join(out_a, "path.csv"))
        path_b = read_csv(os.path.join(out_b, "path.csv"))
        assert not np.array_equal(path_a[:, 1], path_b[:, 1])
        with open(os.path.join(out_b, "manifest.json")) as fh:
            assert json.load(fh)["seed"] == 99

    def test_missing_config_file_is_usage_error(self, tmp_path, capsys):
        rc = main(["simulate", "--config", str(tmp_path / "nope.json"),
                   "--out", str(tmp_path / "out")])
        assert rc == 2
        assert "does not exist" in capsys.readouterr().err

    def test_malformed_json_is_usage_error(self, tmp_path, capsys):
        cfg = tmp_path / "bad.json"
        cfg.write_text("{not json")
        rc = main(["simulate", "--config", str(cfg),
                   "--out", str(tmp_path / "out")])
        assert rc == 2
        assert "not valid JSON" in capsys.readouterr().err

    def test_missing_key_reports_json_pointer(self, tmp_path, capsys):
        cfg = write_json(tmp_path / "sim.json",
                         {"model": GEGEN_MODEL, "seed": 1})
        rc = main(["simulate", "--config", cfg, "--out", str(tmp_path / "o")])
        assert rc == 2
        err = capsys.readouterr().err
        assert "/n_points" in err and "missing" in err

    def test_wrong_type_reports_json_pointer(self, tmp_path, capsys):
        cfg = simulate_config(tmp_path, n_points="many")
        rc = main(["simulate", "--config", cfg, "--out", str(tmp_path / "o")])
        assert rc == 2
        err = capsys.readouterr().err
        assert "/n_points" in err and "expected an integer" in err

    def test_unknown_model_family_reports_pointer(self, tmp_path, capsys):
        cfg = simulate_config(tmp_path, model={"family": "brownian"})
        rc = main(["simulate", "--config", cfg, "--out", str(tmp_path / "o")])
        assert rc == 2
        assert "/model/family" in capsys.readouterr().err

    def test_density_model_is_domain_error(self, tmp_path, capsys):
        cfg = simulate_config(tmp_path, model=INDICATOR_MODEL)
        rc = main(["simulate", "--config", cfg, "--out", str(tmp_path / "o")])
        assert rc == 1
        assert "sampling recipe" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# transform
# ---------------------------------------------------------------------------


def transform_config(tmp_path, **overrides):
    doc = {
        "model": GEGEN_MODEL,
        "filter": {"name": "mexican-hat", "sigma": 1.0},
        "schedule": {"rule": "linear", "j_max": 3, "kappa": 3.0},
        "seed": 11,
    }
    doc.update(overrides)
    return write_json(tmp_path / "tra.json", doc)


class TestTransform:
    def test_panel_matches_library_composition(self, tmp_path):
        cfg = transform_config(tmp_path)
        out = str(tmp_path / "out")
        assert main(["transform", "--config", cfg, "--out", out]) == 0
        arr = read_csv(os.path.join(out, "panel.csv"))

        filt = specpole.builtin_filter("mexican-hat")
        schedule = specpole.linear_schedule(3, kappa=3.0)
        t_lo, t_hi = specpole.lattice_window(filt, schedule)
        model = specpole.model_from_json(GEGEN_MODEL)
        path = specpole.gegenbauer_path(model, t_hi - t_lo + 1, float(t_lo), 1.0, 11)
        panel = specpole.panel_from_path(
            specpole.TransformRequest(path=path, filter=filt, schedule=schedule)
        )
        expect = np.concatenate([lv.coeffs for lv in panel.levels])
        np.testing.assert_array_equal(arr[:, 4], expect)

    def test_rerun_is_bit_identical(self, tmp_path):
        cfg = transform_config(tmp_path)
        out_a, out_b = str(tmp_path / "a"), str(tmp_path / "b")
        assert main(["transform", "--config", cfg, "--out", out_a]) == 0
        assert main(["transform", "--config", cfg, "--out", out_b]) == 0
        assert read_bytes(os.path.join(out_a, "panel.csv")) == read_bytes(
            os.path.join(out_b, "panel.csv")
        )

    def test_reads_simulated_path_from_csv(self, tmp_path):
        filt = specpole.builtin_filter("mexican-hat")
        schedule = specpole.linear_schedule(2, kappa=3.0)
        t_lo, t_hi = specpole.lattice_window(filt, schedule)
        sim_cfg = simulate_config(
            tmp_path, n_points=t_hi - t_lo + 1, t0=t_lo, seed=5
        )
        sim_out = str(tmp_path / "sim_out")
        assert main(["simulate", "--config", sim_cfg, "--out", sim_out]) == 0

        cfg = transform_config(
            tmp_path,
            schedule={"rule": "linear", "j_max": 2, "kappa": 3.0},
            path_csv=os.path.join(sim_out, "path.csv"),
            seed=5,
        )
        del_model = json.load(open(cfg))
        del del_model["model"]
        cfg = write_json(tmp_path / "tra2.json", del_model)
        out = str(tmp_path / "out")
        assert main(["transform", "--config", cfg, "--out", out]) == 0

        model = specpole.model_from_json(GEGEN_MODEL)
        path = specpole.gegenbauer_path(model, t_hi - t_lo + 1, float(t_lo), 1.0, 5)
        panel = specpole.panel_from_path(
            specpole.TransformRequest(path=path, filter=filt, schedule=schedule)
        )
        arr = read_csv(os.path.join(out, "panel.csv"))
        expect = np.concatenate([lv.coeffs for lv in panel.levels])
        np.testing.assert_allclose(arr[:, 4], expect, rtol=1e-12)

    def test_short_path_is_domain_error(self, tmp_path, capsys):
        sim_cfg = simulate_config(tmp_path, n_points=40, t0=0, seed=5)
        sim_out = str(tmp_path / "sim_out")
        assert main(["simulate", "--config", sim_cfg, "--out", sim_out]) == 0
        cfg = transform_config(tmp_path, path_csv=os.path.join(sim_out, "path.csv"))
        doc = json.load(open(cfg))
        del doc["model"]
        cfg = write_json(tmp_path / "tra2.json", doc)
        rc = main(["transform", "--config", cfg, "--out", str(tmp_path / "o")])
        assert rc == 1
        assert "covers" in capsys.readouterr().err

    def test_frequency_only_filter_is_domain_error(self, tmp_path, capsys):
        cfg = transform_config(tmp_path, filter={"name": "meyer-father"})
        rc = main(["transform", "--config", cfg, "--out", str(tmp_path / "o")])
        assert rc == 1
        assert "time-domain" in capsys.readouterr().err

    def test_bad_schedule_rule_reports_pointer(self, tmp_path, capsys):
        cfg = transform_config(tmp_path, schedule={"rule": "fibonacci"})
        rc = main(["transform", "--config", cfg, "--out", str(tmp_path / "o")])
        assert rc == 2
        assert "/schedule/rule" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# estimate
# ---------------------------------------------------------------------------


@pytest.fixture(scope="class")
def panel_dir(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("panel")
    cfg = transform_config(tmp)
    out = str(tmp / "out")
    assert main(["transform", "--config", cfg, "--out", out]) == 0
    return out


class TestEstimate:
    def test_estimates_from_config(self, panel_dir, tmp_path, capsys):
        cfg = write_json(tmp_path / "est.json", {
            "panel_csv": os.path.join(panel_dir, "panel.csv"),
            "filter": {"name": "mexican-hat", "sigma": 1.0},
        })
        out = str(tmp_path / "out")
        assert main(["estimate", "--config", cfg, "--out", out]) == 0
        stdout = capsys.readouterr().out
        assert stdout.count("s0_hat=") == 2
        with open(os.path.join(out, "estimates.csv")) as fh:
            header = fh.readline().strip()
        assert header.startswith("j,a_j,delta_bar")
        rows = read_table(os.path.join(out, "estimates.csv"))
        assert len(rows) == 2
        assert [float(r["s0_hat"]) for r in rows]

    def test_flag_form_matches_config_form(self, panel_dir, tmp_path):
        panel_csv = os.path.join(panel_dir, "panel.csv")
        cfg = write_json(tmp_path / "est.json", {
            "panel_csv": panel_csv,
            "filter": {"name": "mexican-hat", "sigma": 1.0},
        })
        out_a, out_b = str(tmp_path / "a"), str(tmp_path / "b")
        assert main(["estimate", "--config", cfg, "--out", out_a]) == 0
        assert main(["estimate", "--panel", panel_csv,
                     "--filter", "mexican-hat", "--out", out_b]) == 0
        assert read_bytes(os.path.join(out_a, "estimates.csv")) == read_bytes(
            os.path.join(out_b, "estimates.csv")
        )

    def test_needs_config_or_panel(self, tmp_path, capsys):
        rc = main(["estimate", "--out", str(tmp_path / "o")])
        assert rc == 2
        assert "estimate needs" in capsys.readouterr().err

    def test_bad_provenance_reports_pointer(self, panel_dir, tmp_path, capsys):
        cfg = write_json(tmp_path / "est.json", {
            "panel_csv": os.path.join(panel_dir, "panel.csv"),
            "filter": {"name": "mexican-hat"},
            "provenance": "oracle",
        })
        rc = main(["estimate", "--config", cfg, "--out", str(tmp_path / "o")])
        assert rc == 2
        assert "/provenance" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# montecarlo
# ---------------------------------------------------------------------------


def montecarlo_config(tmp_path, **overrides):
    doc = {
        "model": {"family": "indicator", "s0": 1.2661036727794992,
                  "alpha": 0.1, "M": 3.0},
        "filter": {"name": "shannon-father"},
        "schedule": {"rule": "geometric", "j_max": 2, "a0": 4.0,
                     "rho": 2.0, "kappa": 2.0, "m_cap": 32},
        "backend": "exact-gaussian",
        "replications": 3,
        "base_seed": 700,
    }
    doc.update(overrides)
    return write_json(tmp_path / "mc.json", doc)


MC_OUTPUTS = ("replications.csv", "mse_table.csv", "summary.json", "manifest.json")


class TestMontecarlo:
    def test_writes_tables_and_summary(self, tmp_path, capsys):
        cfg = montecarlo_config(tmp_path)
        out = str(tmp_path / "out")
        assert main(["montecarlo", "--config", cfg, "--out", out]) == 0
        for name in MC_OUTPUTS:
            assert os.path.exists(os.path.join(out, name)), name
        stdout = capsys.readouterr().out
        assert "replications: 3 (0 failed)" in stdout
        assert "mse" in stdout
        with open(os.path.join(out, "summary.json")) as fh:
            summary = json.load(fh)
        assert summary["replications"] == 3
        assert len(summary["per_j"]) == 2

    def test_manifest_config_reproduces_tables(self, tmp_path):
        cfg = montecarlo_config(tmp_path)
        out = str(tmp_path / "out")
        assert main(["montecarlo", "--config", cfg, "--out", out]) == 0
        first = {n: read_bytes(os.path.join(out, n)) for n in MC_OUTPUTS}
        with open(os.path.join(out, "manifest.json")) as fh:
            manifest = json.load(fh)
        replay = write_json(tmp_path / "replay.json", manifest["config"])
        assert main(["montecarlo", "--config", replay]) == 0
        for name in MC_OUTPUTS:
            assert read_bytes(os.path.join(out, name)) == first[name], name

    def test_worker_count_does_not_change_results(self, tmp_path):
        cfg = montecarlo_config(tmp_path)
        out_a, out_b = str(tmp_path / "a"), str(tmp_path / "b")
        assert main(["montecarlo", "--config", cfg, "--out", out_a,
                     "--workers", "1"]) == 0
        assert main(["montecarlo", "--config", cfg, "--out", out_b,
                     "--workers", "3"]) == 0
        assert read_bytes(os.path.join(out_a, "replications.csv")) == read_bytes(
            os.path.join(out_b, "replications.csv")
        )

    def test_seed_flag_overrides_base_seed(self, tmp_path):
        cfg = montecarlo_config(tmp_path)
        out = str(tmp_path / "out")
        assert main(["montecarlo", "--config", cfg, "--out", out,
                     "--seed", "12345"]) == 0
        with open(os.path.join(out, "manifest.json")) as fh:
            manifest = json.load(fh)
        assert manifest["config"]["base_seed"] == 12345
        assert manifest["seed"] == 12345
        rows = read_table(os.path.join(out, "replications.csv"))
        assert float(rows[0]["seed"]) == 12345.0

    def test_unknown_backend_reports_pointer(self, tmp_path, capsys):
        cfg = montecarlo_config(tmp_path, backend="bootstrap")
        rc = main(["montecarlo", "--config", cfg, "--out", str(tmp_path / "o")])
        assert rc == 2
        assert "/backend" in capsys.readouterr().err

    def test_missing_replications_reports_pointer(self, tmp_path, capsys):
        cfg = montecarlo_config(tmp_path)
        doc = json.load(open(cfg))
        del doc["replications"]
        cfg = write_json(tmp_path / "mc2.json", doc)
        rc = main(["montecarlo", "--config", cfg, "--out", str(tmp_path / "o")])
        assert rc == 2
        assert "/replications" in capsys.readouterr().err

    def test_output_directory_is_required_somewhere(self, tmp_path, capsys):
        cfg = montecarlo_config(tmp_path)
        rc = main(["montecarlo", "--config", cfg])
        assert rc == 2
        assert "output directory" in capsys.readouterr().err

    def test_out_of_range_parameter_is_domain_error(self, tmp_path, capsys):
        cfg = montecarlo_config(
            tmp_path,
            model={"family": "indicator", "s0": 1.2661036727794992,
                   "alpha": 0.6, "M": 3.0},
        )
        rc = main(["montecarlo", "--config", cfg, "--out", str(tmp_path / "o")])
        assert rc == 1
        assert capsys.readouterr().err.startswith("error:")
