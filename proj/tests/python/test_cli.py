import json

import jsonschema
import pytest


def check_doc(path, kind, schema):
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, schema(kind))
    jsonschema.validate(doc["config"], schema("config"))
    assert doc["schema"] == kind
    return doc


def test_inputs_match_schemas(schema, data):
    for f in data.glob("*.json"):
        jsonschema.validate(json.loads(f.read_text()), schema("bandset"))
    defaults = data.parent / "config" / "defaults.json"
    jsonschema.validate(json.loads(defaults.read_text()), schema("config"))


def test_potential(cli, schema, data, tmp_path):
    out = tmp_path / "pot.json"
    r = cli("potential", "--bands", data / "two_bands.json", "--widom", "--green", 0.0, "--out", out)
    assert r.returncode == 0, r.stderr
    doc = check_doc(out, "potential_report", schema)
    hm = [h["value"] for h in doc["harmonic_measure"]]
    assert sum(hm) == pytest.approx(1.0, abs=1e-10)
    assert hm[0] == pytest.approx(0.5, abs=1e-10)
    assert len(doc["critical_points"]) == 1
    assert out.with_suffix(".csv").read_text().startswith("band,x,density\n")

    # pole in the gap: no density samples, no CSV
    out2 = tmp_path / "gap.json"
    r = cli("potential", "--bands", data / "two_bands.json", "--pole", 0.1, "--out", out2)
    assert r.returncode == 0, r.stderr
    doc = check_doc(out2, "potential_report", schema)
    assert doc["roots"] is None
    assert sum(h["value"] for h in doc["harmonic_measure"]) == pytest.approx(1.0, abs=1e-8)


def test_refl(cli, schema, data, tmp_path):
    for name in ("two_bands", "anchored"):
        out = tmp_path / f"{name}.json"
        r = cli("refl", "--bands", data / f"{name}.json", "--check-identity", "--classify",
                "--at", 0.2, "--complex", 0.2, 0.5, "--out", out)
        assert r.returncode == 0, r.stderr
        doc = check_doc(out, "refl_report", schema)
        assert doc["identity"]["passed"]
        assert doc["classification"]["weakly_reflectionless"]
        assert doc["total_mass"] == pytest.approx(1.0, abs=1e-8)
        assert (doc["anchor"] is None) == (name == "two_bands")


def test_homog(cli, schema, data, tmp_path):
    out = tmp_path / "h.json"
    r = cli("homog", "--bands", data / "two_bands.json", "--eta", 0.1, "--out", out)
    assert r.returncode == 0, r.stderr
    doc = check_doc(out, "homog_report", schema)
    assert doc["holds"]
    assert 0.1 < doc["worst_ratio"] < 1.0


def test_constructions(cli, schema, tmp_path):
    out = tmp_path / "pm.json"
    r = cli("build-pointmass", "--depth", 3, "--out", out)
    assert r.returncode == 0, r.stderr
    doc = check_doc(out, "pointmass_trace", schema)
    assert len(doc["steps"]) == 3
    for s in doc["steps"]:
        assert 0.5 <= s["omega"] <= 0.5 + 1e-3

    out = tmp_path / "sc.json"
    r = cli("build-sc", "--depth", 2, "--out", out)
    assert r.returncode == 0, r.stderr
    doc = check_doc(out, "sc_trace", schema)
    assert len(doc["segments"]) == 11
    assert doc["mass_checks_passed"]
    assert doc["total_mass"] == pytest.approx([1.0, 1.0], abs=1e-8)
    assert all(a["ok"] for a in doc["constraint_audit"])


def test_verify(cli, schema, tmp_path):
    out = tmp_path / "v.json"
    r = cli("verify", "--only", "AC1,AC2", "--out", out)
    assert r.returncode == 0, r.stdout + r.stderr
    doc = check_doc(out, "verify_report", schema)
    assert [c["id"] for c in doc["criteria"]] == ["AC1", "AC2"]
    assert doc["all_passed"]


def test_reruns_are_byte_identical(cli, data, tmp_path):
    runs = [
        ("build-sc", "--depth", 2),
        ("refl", "--bands", data / "anchored.json", "--check-identity"),
        ("potential", "--bands", data / "two_bands.json", "--widom"),
    ]
    for args in runs:
        outs = []
        for k in range(2):
            out = tmp_path / f"{args[0]}-{k}.json"
            r = cli(*args, "--out", out)
            assert r.returncode == 0, r.stderr
            outs.append((out.read_bytes(), out.with_suffix(".csv").read_bytes()))
        assert outs[0] == outs[1], args


def test_seed_changes_sampled_output(cli, data, tmp_path):
    docs = []
    for seed in (1, 2):
        out = tmp_path / f"s{seed}.json"
        assert cli("refl", "--bands", data / "two_bands.json", "--check-identity", "--seed", seed, "--out", out).returncode == 0
        docs.append(json.loads(out.read_text()))
    assert docs[0]["seed"] == 1 and docs[1]["seed"] == 2
    assert docs[0]["identity"]["max_rel_err"] != docs[1]["identity"]["max_rel_err"]


def test_config_file(cli, tmp_path, data):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 5, "output": {"csv": False}}))
    out = tmp_path / "c.json"
    r = cli("homog", "--bands", data / "two_bands.json", "--eta", 0.1, "--out", out, env={"WIDOMLAB_CONFIG": str(cfg)})
    assert r.returncode == 0, r.stderr
    assert json.loads(out.read_text())["seed"] == 5

    cfg.write_text(json.dumps({"sc": {"depht": 2}}))
    r = cli("build-sc", "--config", cfg, "--out", out)
    assert r.returncode == 1
    assert "sc.depht" in r.stderr


def test_exit_codes(cli, data, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"bands": [[0, 1],\n ]}')
    r = cli("homog", "--bands", bad, "--eta", 0.5)
    assert r.returncode == 1
    assert "bad.json:2:2" in r.stderr

    overlap = tmp_path / "overlap.json"
    overlap.write_text('{"bands": [[0, 1], [0.5, 2]]}')
    assert cli("homog", "--bands", overlap, "--eta", 0.5).returncode == 1

    assert cli("potential", "--bands", data / "two_bands.json", "--pole", 0.5, "--out", tmp_path / "p.json").returncode == 1
    assert cli("refl", "--bands", data / "two_bands.json", "--anchor", 0.0, "--out", tmp_path / "r.json").returncode == 1
    assert cli("build-pointmass", "--depth", 11, "--out", tmp_path / "pm.json").returncode == 1
    assert cli("build-sc", "--depth", 4, "--out", tmp_path / "sc.json").returncode == 2
    assert cli("potential").returncode == 1

    r = cli("verify", "--only", "AC7", "--out", tmp_path / "v.json")
    assert r.returncode == 3
    assert "AC7" in r.stderr
