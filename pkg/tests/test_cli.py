"""Command-line interface: construct, moments, preset, compare."""

import json
from math import exp

import pytest

from monoplex.cli import (
    PRESETS,
    build_scenario,
    main,
    new_experiment_spec,
    preset_spec,
    resolve_colors,
    run_compare,
    spec_from_obj,
    spec_to_obj,
)
from monoplex.core import ValidationError
from monoplex.serialize import load_structure, read_json, write_json


def run_cli(*argv):
    return main([str(a) for a in argv])


class TestConstruct:
    def test_ap_example(self, tmp_path, capsys):
        out = tmp_path / "ap.json"
        assert run_cli("construct", "ap", "--n", 10, "--r", 3, "--out", out) == 0
        H = load_structure(out)
        assert H.num_edges == 20
        assert "20 edges" in capsys.readouterr().out

    def test_star_example(self, tmp_path):
        out = tmp_path / "star.json"
        assert run_cli("construct", "appendix-a", "--n", 10, "--out", out) == 0
        assert load_structure(out).num_edges == 36

    def test_corr_er_reproducible(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        args = ("construct", "corr-er", "--n", 20, "--r", 2, "--p", 0.1, "--rho", 0.05, "--seed", 7)
        assert run_cli(*args, "--out", a) == 0
        assert run_cli(*args, "--out", b) == 0
        assert a.read_bytes() == b.read_bytes()
        M = load_structure(a)
        assert M.num_layers == 2

    def test_appendix_b_multiplex(self, tmp_path):
        out = tmp_path / "m.json"
        assert run_cli("construct", "appendix-b", "--n", 20, "--lam", 0.2, "--variant", "pairwise", "--out", out) == 0
        assert load_structure(out).num_layers == 3

    def test_unknown_exits_2(self, tmp_path, capsys):
        assert run_cli("construct", "moebius", "--n", 5) == 2
        assert "unknown construction" in capsys.readouterr().err


class TestMoments:
    def test_single_edge_mean(self, tmp_path, capsys):
        f = tmp_path / "h.json"
        write_json(f, {"kind": "uniform_hypergraph", "uniformity": 3, "num_vertices": 3, "edges": [[0, 1, 2]]})
        assert run_cli("moments", f, "--c", 2) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["mean"] == 0.25

    def test_fixture_variance_rational(self, tmp_path, capsys):
        f = tmp_path / "h.json"
        write_json(
            f,
            {
                "kind": "uniform_hypergraph",
                "uniformity": 3,
                "num_vertices": 5,
                "edges": [[0, 1, 2], [0, 1, 3], [2, 3, 4]],
            },
        )
        assert run_cli("moments", f, "--c", 2, "--rational") == 0
        report = json.loads(capsys.readouterr().out)
        assert report["variance"] == "11/16"
        assert report["r1_term"] == "9/16"
        assert report["r2_terms"]["2"] == "1/8"

    def test_multiplex_symmetric(self, tmp_path, capsys):
        layer = {"kind": "uniform_hypergraph", "uniformity": 2, "num_vertices": 4, "edges": [[0, 1], [2, 3]]}
        other = dict(layer, edges=[[0, 1], [1, 2]])
        f = tmp_path / "m.json"
        write_json(f, {"kind": "multiplex", "num_vertices": 4, "layers": [layer, other]})
        assert run_cli("moments", f, "--c", 3) == 0
        report = json.loads(capsys.readouterr().out)
        cov = report["covariance"]
        assert cov[0][1] == cov[1][0]

    def test_missing_file_exits_2(self, capsys):
        assert run_cli("moments", "/nonexistent.json", "--c", 2) == 2


class TestPreset:
    @pytest.mark.parametrize("name", PRESETS)
    def test_round_trip(self, name):
        spec = preset_spec(name)
        obj = spec_to_obj(spec)
        again = spec_to_obj(spec_from_obj(json.loads(json.dumps(obj))))
        assert again == obj

    def test_unknown_lists_presets(self, capsys):
        assert run_cli("preset", "party") == 2
        err = capsys.readouterr().err
        for name in PRESETS:
            assert name in err

    def test_writes_file(self, tmp_path):
        out = tmp_path / "spec.json"
        assert run_cli("preset", "ap", "--out", out) == 0
        spec = spec_from_obj(read_json(out))
        assert spec.scenario == "ap"
        assert spec.c_rule["kind"] == "power"


def make_spec(**kw):
    base = dict(
        scenario="ap",
        params={"r": 3},
        c_rule={"kind": "fixed", "value": 2},
        sizes=(3,),
        replicates=100,
        seed=1,
        shards=1,
        law="exact",
        targets=({"kind": "poisson", "rate": 0.25, "label": "pois-quarter"},),
    )
    base.update(kw)
    return new_experiment_spec(**base)


class TestCompare:
    def test_exact_single_edge_matches_hand_value(self, tmp_path):
        cfg = tmp_path / "spec.json"
        write_json(cfg, spec_to_obj(make_spec()))
        out = tmp_path / "run"
        assert run_cli("compare", "--config", cfg, "--out", out) == 0
        rows = (out / "results.csv").read_text().strip().splitlines()
        assert rows[0] == "n,c,label,tv,mean_gap,var_gap"
        tv = float(rows[1].split(",")[3])
        p0 = exp(-0.25)
        hand = 0.5 * (abs(0.75 - p0) + abs(0.25 - 0.25 * p0) + (1 - p0 - 0.25 * p0))
        assert abs(tv - hand) <= 1e-9

    def test_rerun_bytes_identical(self, tmp_path):
        spec = preset_spec("birthday")
        obj = spec_to_obj(spec)
        obj["sizes"] = [20, 40]
        obj["replicates"] = 3000
        cfg = tmp_path / "spec.json"
        write_json(cfg, obj)
        outs = []
        for name, shards in (("a", 1), ("b", 1), ("c", 3)):
            out = tmp_path / name
            assert run_cli("compare", "--config", cfg, "--shards", shards, "--out", out) == 0
            outs.append((out / "results.csv").read_bytes())
        assert outs[0] == outs[1] == outs[2]

    def test_manifest_reconstructs_run(self, tmp_path):
        cfg = tmp_path / "spec.json"
        write_json(cfg, spec_to_obj(make_spec()))
        out = tmp_path / "run"
        assert run_cli("compare", "--config", cfg, "--out", out) == 0
        manifest = read_json(out / "manifest.json")
        respec = tmp_path / "respec.json"
        write_json(respec, manifest["spec"])
        again = tmp_path / "again"
        assert run_cli("compare", "--config", respec, "--out", again) == 0
        assert (out / "results.csv").read_bytes() == (again / "results.csv").read_bytes()

    def test_dimension_mismatch_exits_2(self, tmp_path, capsys):
        spec_obj = spec_to_obj(
            make_spec(
                scenario="corr-er",
                params={"r": 2, "p": 0.2, "rho": 0.05},
                sizes=(12,),
                law="simulate",
            )
        )
        cfg = tmp_path / "spec.json"
        write_json(cfg, spec_obj)
        assert run_cli("compare", "--config", cfg, "--out", tmp_path / "run") == 2
        assert "dimension" in capsys.readouterr().err

    def test_degenerate_point_mass(self, tmp_path):
        spec_obj = spec_to_obj(
            make_spec(
                scenario="complete-graph",
                params={},
                c_rule={"kind": "fixed", "value": 1_000_000},
                sizes=(12,),
                law="simulate",
                replicates=2000,
                targets=({"kind": "poisson", "rate": 0.0, "label": "pois-0"},),
            )
        )
        cfg = tmp_path / "spec.json"
        write_json(cfg, spec_obj)
        out = tmp_path / "run"
        assert run_cli("compare", "--config", cfg, "--out", out) == 0
        tv = float((out / "results.csv").read_text().strip().splitlines()[1].split(",")[3])
        assert tv < 0.001

    def test_resource_bound_exits_3(self, tmp_path, capsys):
        spec_obj = spec_to_obj(
            make_spec(
                scenario="complete-graph",
                params={},
                c_rule={"kind": "fixed", "value": 50},
                sizes=(40,),
                law="exact",
            )
        )
        cfg = tmp_path / "spec.json"
        write_json(cfg, spec_obj)
        assert run_cli("compare", "--config", cfg, "--out", tmp_path / "run") == 3
        assert "resource bound" in capsys.readouterr().err

    def test_json_format(self, tmp_path):
        cfg = tmp_path / "spec.json"
        write_json(cfg, spec_to_obj(make_spec()))
        out = tmp_path / "run"
        assert run_cli("compare", "--config", cfg, "--out", out, "--format", "json") == 0
        rows = read_json(out / "results.json")["rows"]
        assert rows[0]["label"] == "pois-quarter"

    def test_appendix_b_rows(self, tmp_path):
        spec = preset_spec("appendix-b")
        obj = spec_to_obj(spec)
        obj["sizes"] = [60]
        obj["replicates"] = 2000
        cfg = tmp_path / "spec.json"
        write_json(cfg, obj)
        out = tmp_path / "run"
        assert run_cli("compare", "--config", cfg, "--out", out) == 0
        labels = [line.split(",")[2] for line in (out / "results.csv").read_text().strip().splitlines()[1:]]
        assert labels == ["nested", "pairwise", "cross"]

    def test_config_and_preset_mutually_exclusive(self, capsys):
        assert run_cli("compare", "--preset", "birthday", "--config", "x.json") == 2


class TestSpecValidation:
    def test_unknown_scenario(self):
        with pytest.raises(ValidationError):
            make_spec(scenario="galaxy")

    def test_empty_sizes(self):
        with pytest.raises(ValidationError):
            make_spec(sizes=())

    def test_bad_c_rule(self):
        with pytest.raises(ValidationError):
            make_spec(c_rule={"kind": "golden"})
        with pytest.raises(ValidationError):
            make_spec(c_rule={"kind": "mean", "lam": 0})

    def test_bad_target(self):
        with pytest.raises(ValidationError):
            make_spec(targets=({"kind": "cauchy", "label": "x"},))
        with pytest.raises(ValidationError):
            make_spec(targets=())

    def test_bad_law(self):
        with pytest.raises(ValidationError):
            make_spec(law="guess")


class TestScenarioPlumbing:
    def test_mean_rule_birthday(self):
        spec = preset_spec("birthday")
        built = build_scenario(spec, 50)
        assert resolve_colors(spec.c_rule, built) == 1225

    def test_power_rule(self):
        spec = preset_spec("appendix-b")
        built = build_scenario(spec, 200)
        assert resolve_colors(spec.c_rule, built) == 40000

    def test_weighted_blocks_classes(self):
        spec = preset_spec("weighted")
        built = build_scenario(spec, 20)
        weights = sorted(set(built.weighted.weights))
        assert weights == [1, 3]
        assert built.weighted.base.num_edges == 20

    def test_run_compare_rows_in_size_order(self):
        spec = make_spec(sizes=(4, 3))
        rows = run_compare(spec)
        assert [r["n"] for r in rows] == [4, 3]
        assert all("runtime_s" in r for r in rows)
