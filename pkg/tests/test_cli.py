"""Tests for the command-line interface: output shape and exit codes."""

from __future__ import annotations

import json

import pytest

from nilform import cli


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, argv):
    code, out, err = run(capsys, argv + ["--format", "json"])
    assert code == 0, err
    return json.loads(out)


# -- preset catalog -------------------------------------------------------


def test_preset_list_table(capsys):
    code, out, _ = run(capsys, ["preset", "list"])
    assert code == 0
    for name in ("heisenberg", "heisenberg_type", "example_initial", "example_contr"):
        assert name in out


def test_preset_list_json(capsys):
    doc = run_json(capsys, ["preset", "list"])
    names = [e["name"] for e in doc["presets"]]
    assert names == sorted(names)
    assert "heisenberg" in names


# -- cohomology -----------------------------------------------------------


def test_cohomology_default_truncation(capsys):
    code, out, _ = run(capsys, ["cohomology", "--preset", "heisenberg:1"])
    assert code == 0
    assert "betti: 1,2,2,1" in out


def test_cohomology_requested_truncation(capsys):
    code, out, _ = run(
        capsys, ["cohomology", "--preset", "heisenberg:2", "--max-degree", "5"]
    )
    assert code == 0
    assert "betti: 1,4,5,5,4,1" in out


def test_cohomology_json_structure(capsys):
    doc = run_json(capsys, ["cohomology", "--preset", "heisenberg:1"])
    assert doc["tool"]["name"] == "nilform"
    assert doc["command"] == "cohomology"
    assert doc["cohomology"]["betti"] == [1, 2, 2, 1]
    assert doc["cohomology"]["classes"][1] == ["x1", "y1"]
    gens = [g["name"] for g in doc["input"]["generators"]]
    assert gens == ["x1", "y1", "z"]
    dz = doc["input"]["differential"][0]
    assert dz["generator"] == "z"
    assert dz["value"] == [{"coeff": "1", "monomial": ["x1", "y1"]}]


def test_cohomology_from_file(capsys, tmp_path):
    doc = {
        "generators": [
            {"name": "a", "degree": 1},
            {"name": "b", "degree": 1},
            {"name": "c", "degree": 1},
        ],
        "differential": [
            {"generator": "c", "value": [{"coeff": "2", "monomial": ["a", "b"]}]}
        ],
    }
    path = tmp_path / "model.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, ["cohomology", "--input", str(path)])
    assert code == 0
    assert "betti: 1,2,2,1" in out


# -- resonance ------------------------------------------------------------


def test_resonance_membership_point(capsys):
    doc = run_json(
        capsys,
        ["resonance", "--preset", "heisenberg:2", "--q", "2", "--point", "x1"],
    )
    assert doc["resonance"]["point"]["member"] is True
    assert doc["resonance"]["point"]["dimension"] == 2


def test_resonance_membership_zero_point(capsys):
    doc = run_json(
        capsys,
        ["resonance", "--preset", "heisenberg:2", "--q", "1", "--point", "x1"],
    )
    assert doc["resonance"]["point"]["member"] is False


def test_resonance_decide_trivial(capsys):
    code, out, _ = run(
        capsys, ["resonance", "--preset", "example_initial", "--q", "1", "--decide"]
    )
    assert code == 0
    assert "CertifiedTrivial" in out


def test_resonance_decide_witness(capsys):
    doc = run_json(
        capsys, ["resonance", "--preset", "heisenberg:1", "--q", "1", "--decide"]
    )
    decision = doc["resonance"]["decision"]
    assert decision["verdict"] == "Witness"
    assert "witness" in decision


def test_resonance_decide_higher_degree_is_sampling(capsys):
    code, out, _ = run(
        capsys, ["resonance", "--preset", "heisenberg:2", "--q", "2", "--decide"]
    )
    assert code == 0
    assert "sampling" in out
    assert "SampledWitness" in out or "Inconclusive" in out


def test_resonance_bad_point_expression(capsys):
    code, _, err = run(
        capsys,
        ["resonance", "--preset", "heisenberg:1", "--q", "1", "--point", "x1*y1"],
    )
    assert code == 2
    assert "error" in err


def test_resonance_negative_degree_rejected(capsys):
    code, _, _ = run(capsys, ["resonance", "--preset", "heisenberg:1", "--q", "-1"])
    assert code == 2


# -- formality ------------------------------------------------------------


def test_formality_heisenberg_thresholds(capsys):
    doc = run_json(
        capsys, ["formality", "--preset", "heisenberg:3", "--k-max", "4"]
    )
    verdicts = {v["k"]: v["verdict"] for v in doc["formality"]["verdicts"]}
    assert verdicts[2] == "CertifiedKFormal"
    assert verdicts[3] == "CertifiedNotKFormal"
    assert doc["formality"]["overall"] == "CertifiedNotFormal"


def test_formality_type_presets(capsys):
    doc = run_json(
        capsys, ["formality", "--preset", "heisenberg_type:2,5", "--k-max", "3"]
    )
    verdicts = {v["k"]: v["verdict"] for v in doc["formality"]["verdicts"]}
    assert verdicts[1] == "CertifiedKFormal"
    assert verdicts[2] == "CertifiedNotKFormal"


def test_formality_twisted_tower_evidence(capsys):
    doc = run_json(
        capsys,
        ["formality", "--preset", "example_contr:p=y1*y2", "--k-max", "1"],
    )
    verdicts = {v["k"]: v["verdict"] for v in doc["formality"]["verdicts"]}
    assert verdicts[1] == "CertifiedNotKFormal"
    rules = [e["rule"] for e in doc["formality"]["evidence"]]
    assert "morphism-solver" in rules


def test_formality_complement_flag(capsys):
    code, out, _ = run(
        capsys,
        ["formality", "--preset", "heisenberg:2", "--k-max", "1", "--complement", "z"],
    )
    assert code == 0
    assert "CertifiedKFormal" in out


def test_formality_bad_complement(capsys):
    code, _, err = run(
        capsys,
        ["formality", "--preset", "heisenberg:2", "--k-max", "1", "--complement", "x1"],
    )
    assert code == 2
    assert "error" in err


def test_formality_strict_without_bound_is_clean(capsys):
    code, _, _ = run(
        capsys,
        ["formality", "--preset", "heisenberg:2", "--k-max", "1", "--strict"],
    )
    assert code == 0


def test_formality_strict_exits_three_on_bound(capsys, monkeypatch):
    from nilform.formality import Evidence, FormalityReport

    def fake_report(c, k_max, *, seed=0, decomposition=None, **kw):
        rep = FormalityReport(k_max)
        rep.bound_exceeded = True
        rep.add_info(Evidence("morphism-solver", 1, "info", "search skipped"))
        return rep

    monkeypatch.setattr(cli, "formality_report", fake_report)
    code, out, _ = run(
        capsys,
        ["formality", "--preset", "heisenberg:2", "--k-max", "1", "--strict"],
    )
    assert code == 3
    assert "bound" in out
    code2, _, _ = run(
        capsys, ["formality", "--preset", "heisenberg:2", "--k-max", "1"]
    )
    assert code2 == 0


def test_formality_rejects_non_model_input(capsys, tmp_path):
    doc = {
        "generators": [{"name": "a", "degree": 1}, {"name": "u", "degree": 2}],
        "differential": [],
    }
    path = tmp_path / "m.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, ["formality", "--input", str(path), "--k-max", "1"])
    assert code == 2
    assert "degree 1" in err


# -- input validation -----------------------------------------------------


def bad_input_case(capsys, tmp_path, doc, fragment):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc) if isinstance(doc, dict) else doc)
    code, _, err = run(capsys, ["cohomology", "--input", str(path)])
    assert code == 2
    assert fragment in err


def test_input_malformed_rational(capsys, tmp_path):
    bad_input_case(
        capsys,
        tmp_path,
        {
            "generators": [{"name": "a", "degree": 1}],
            "differential": [
                {"generator": "a", "value": [{"coeff": "1/0", "monomial": []}]}
            ],
        },
        "bad rational",
    )


def test_input_unknown_generator_name(capsys, tmp_path):
    bad_input_case(
        capsys,
        tmp_path,
        {
            "generators": [{"name": "a", "degree": 1}],
            "differential": [
                {"generator": "b", "value": []}
            ],
        },
        "unknown generator",
    )


def test_input_duplicate_differential(capsys, tmp_path):
    bad_input_case(
        capsys,
        tmp_path,
        {
            "generators": [{"name": "a", "degree": 1}, {"name": "b", "degree": 1}],
            "differential": [
                {"generator": "a", "value": []},
                {"generator": "a", "value": []},
            ],
        },
        "duplicate",
    )


def test_input_bad_degree(capsys, tmp_path):
    bad_input_case(
        capsys,
        tmp_path,
        {"generators": [{"name": "a", "degree": 0}], "differential": []},
        "positive integer degree",
    )


def test_input_not_json(capsys, tmp_path):
    bad_input_case(capsys, tmp_path, "{not json", "error")


def test_input_not_object(capsys, tmp_path):
    bad_input_case(capsys, tmp_path, json.dumps([1, 2]), "JSON object")


def test_input_square_nonzero_rejected(capsys, tmp_path):
    # d(e) = c*f with d(c) = a*b and d(f) = u*v gives d(d(e)) != 0
    doc = {
        "generators": [
            {"name": "a", "degree": 1},
            {"name": "b", "degree": 1},
            {"name": "u", "degree": 1},
            {"name": "v", "degree": 1},
            {"name": "c", "degree": 1},
            {"name": "f", "degree": 1},
            {"name": "e", "degree": 1},
        ],
        "differential": [
            {"generator": "c", "value": [{"coeff": "1", "monomial": ["a", "b"]}]},
            {"generator": "f", "value": [{"coeff": "1", "monomial": ["u", "v"]}]},
            {"generator": "e", "value": [{"coeff": "1", "monomial": ["c", "f"]}]},
        ],
    }
    path = tmp_path / "sq.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, ["cohomology", "--input", str(path)])
    assert code == 2
    assert "d(d(" in err or "nonzero" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(
        capsys, ["cohomology", "--input", str(tmp_path / "missing.json")]
    )
    assert code == 2
    assert "error" in err


# -- usage errors ---------------------------------------------------------


def test_usage_no_subcommand():
    with pytest.raises(SystemExit) as info:
        cli.main([])
    assert info.value.code == 1


def test_usage_missing_input():
    with pytest.raises(SystemExit) as info:
        cli.main(["cohomology"])
    assert info.value.code == 1


def test_usage_both_inputs(tmp_path):
    with pytest.raises(SystemExit) as info:
        cli.main(
            ["cohomology", "--preset", "heisenberg:1", "--input", "x.json"]
        )
    assert info.value.code == 1


def test_usage_bad_format_choice():
    with pytest.raises(SystemExit) as info:
        cli.main(["cohomology", "--preset", "heisenberg:1", "--format", "xml"])
    assert info.value.code == 1


# -- determinism ----------------------------------------------------------


def test_json_output_is_reproducible(capsys):
    argv = ["resonance", "--preset", "heisenberg:1", "--q", "1", "--decide",
            "--seed", "3", "--format", "json"]
    code1, out1, _ = run(capsys, argv)
    code2, out2, _ = run(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_table_output_is_reproducible(capsys):
    argv = ["formality", "--preset", "heisenberg:2", "--k-max", "2", "--seed", "5"]
    _, out1, _ = run(capsys, argv)
    _, out2, _ = run(capsys, argv)
    assert out1 == out2
