"""Instance documents and the command-line surface."""

from __future__ import annotations

import copy
import dataclasses
import json
from fractions import Fraction

import pytest

from floersplit import catalog
from floersplit.cli import main
from floersplit.errors import DichotomyViolation, ParseError, UnknownEntry
from floersplit.gen import GenConfig, gen_chain_instance, gen_instance
from floersplit.instance import HOMOLOGY
from floersplit.serialize import (
    document_to_instance,
    dumps,
    export,
    instance_to_document,
    load,
    rational_from_json,
    rational_to_json,
)


# -- rationals ----------------------------------------------------------


def test_rational_json_round_trip():
    for x in (Fraction(0), Fraction(4), Fraction(-7), Fraction(1, 2), Fraction(-22, 7)):
        assert rational_from_json(rational_to_json(x)) == x
    assert rational_to_json(Fraction(4)) == 4
    assert rational_to_json(Fraction(1, 2)) == "1/2"


def test_rational_json_rejects_floats_and_bools():
    with pytest.raises(ParseError):
        rational_from_json(0.5)
    with pytest.raises(ParseError):
        rational_from_json(True)
    with pytest.raises(ParseError):
        rational_from_json("not-a-number")


# -- documents ------------------------------------------------------------


def test_catalog_round_trips(tmp_path):
    for name in catalog.names():
        inst = catalog.load_entry(name)
        path = tmp_path / f"{name}.json"
        export(inst, str(path))
        assert load(str(path)) == inst


def test_generated_round_trips():
    for seed in range(1, 11):
        inst = gen_instance(GenConfig(seed=seed))
        assert document_to_instance(instance_to_document(inst)) == inst
    for seed in range(1, 4):
        inst = gen_chain_instance(GenConfig(seed=seed, chain_level=True))
        assert document_to_instance(instance_to_document(inst)) == inst


def test_homology_convention_chain_round_trip():
    inst = gen_chain_instance(GenConfig(seed=2, chain_level=True))
    hom = dataclasses.replace(inst, convention=HOMOLOGY)
    again = document_to_instance(instance_to_document(hom))
    assert again == hom


def test_no_floats_anywhere_in_documents():
    def walk(x):
        if isinstance(x, float):
            raise AssertionError(f"float leaked into document: {x}")
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        if isinstance(x, list):
            for v in x:
                walk(v)

    for seed in range(1, 6):
        inst = gen_instance(GenConfig(seed=seed))
        doc = instance_to_document(inst)
        walk(doc)
        assert document_to_instance(json.loads(json.dumps(doc))) == inst


def test_parse_error_on_truncated_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(dumps(catalog.load_entry("akbulut_cork_mapping_torus"))[:40])
    with pytest.raises(ParseError):
        load(str(path))


def test_parse_error_on_bad_shape():
    doc = copy.deepcopy(catalog.get("sigma_2_7_13_mapping_torus").document)
    doc["special"]["deltas"][0] = [[1, 0, 0]]  # wrong width
    with pytest.raises(ParseError):
        document_to_instance(doc)


def test_parse_error_on_schema_version():
    doc = copy.deepcopy(catalog.get("akbulut_cork_mapping_torus").document)
    doc["schema_version"] = "99"
    with pytest.raises(ParseError):
        document_to_instance(doc)


def test_parse_error_on_misshapen_family_member():
    doc = copy.deepcopy(catalog.get("sigma_2_7_13_mapping_torus").document)
    # vector members live on zero-dimensional degrees in this fixture, so
    # a member with a row cannot parse
    doc["special"]["deltas_prime"] = [[[1]], [], [], []]
    with pytest.raises(ParseError):
        document_to_instance(doc)


def test_dichotomy_violation_on_load_clean():
    dims = [1, 1, 1, 1, 1, 1, 1, 1]
    doc = {
        "schema_version": "1",
        "level": "cohomology-level",
        "convention": "cohomology",
        "metadata": {"name": "conflict"},
        "spaces": {"hf": dims},
        "special": {
            "case": "delta_side",
            "n_max": 1,
            "deltas": [[[1]], [[0]]],
            "deltas_prime": [[[1]], [[0]]],
        },
        "cobordism": {"label": "W", "blocks": [[[1]] for _ in range(8)]},
    }
    with pytest.raises(DichotomyViolation):
        document_to_instance(doc)


def test_unknown_catalog_entry():
    with pytest.raises(UnknownEntry):
        catalog.get("nope")


def test_catalog_unique_prefix():
    assert catalog.get("sigma_2_7_13").name == "sigma_2_7_13_mapping_torus"
    with pytest.raises(UnknownEntry):
        catalog.get("")  # ambiguous prefix


# -- CLI -------------------------------------------------------------------


def test_cli_verify_pass(capsys):
    rc = main(["verify", "catalog:sigma_2_7_13_mapping_torus"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "Lef(W)      = -4" in out
    assert "PASS" in out


def test_cli_verify_json(capsys):
    rc = main(["--format", "json", "verify", "catalog:akbulut_cork_mapping_torus"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert out["schema_version"] == "1"
    assert out["verdict"]["lef_w"] == 4
    assert out["verdict"]["lambda_fo"] == 2
    assert out["verdict"]["pass"] is True


def test_cli_convention_view(capsys):
    rc = main(["--format", "json", "--convention", "cohomology",
               "verify", "catalog:sigma_2_7_13_mapping_torus"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert out["verdict"]["lef_w"] == 4  # sign flips relative to the homology view
    assert out["verdict"]["h_x"] == 2    # invariants do not


def test_cli_verify_validation_error(tmp_path, capsys):
    # the degree-zero relation fails: the map doubles the functional
    doc = {
        "schema_version": "1",
        "level": "cohomology-level",
        "convention": "cohomology",
        "metadata": {"name": "bad-relation"},
        "spaces": {"hf": [0, 0, 0, 0, 1, 0, 0, 0]},
        "special": {
            "case": "delta_side",
            "n_max": 1,
            "deltas": [[[1]], [[]]],
            "deltas_prime": [],
        },
        "cobordism": {"label": "W", "blocks": [[], [], [], [], [[2]], [], [], []]},
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    rc = main(["verify", str(path)])
    assert rc == 2
    assert "validation error" in capsys.readouterr().err


def test_cli_verify_parse_error(tmp_path, capsys):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    assert main(["verify", str(path)]) == 3
    assert main(["verify", "catalog:missing"]) == 3
    assert main(["verify", str(tmp_path / "absent.json")]) == 3


def test_cli_verify_identity_failure_exit_code(monkeypatch, capsys):
    import floersplit.cli as cli

    real = cli.verify_splitting

    def broken(instance, **kw):
        v = real(instance, **kw)
        return dataclasses.replace(v, identity_hx_equals_hy=False)

    monkeypatch.setattr(cli, "verify_splitting", broken)
    rc = main(["verify", "catalog:akbulut_cork_mapping_torus"])
    assert rc == 1
    assert "FAIL" in capsys.readouterr().out


def test_cli_trace_text(capsys):
    rc = main(["trace", "catalog:sigma_2_7_13_mapping_torus", "--tower", "0"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "tower degree 0" in out and "removed 2" in out


def test_cli_trace_both_zero_note(capsys):
    rc = main(["trace", "catalog:akbulut_cork_mapping_torus"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "reduced equals unreduced" in out


def test_cli_trace_generated_seed(capsys):
    rc = main(["trace", "gen:42"])
    out = capsys.readouterr().out
    assert rc == 0 and "tower degree" in out
    assert main(["verify", "gen:42"]) == 0
    capsys.readouterr()
    assert main(["verify", "gen:nope"]) == 3


def test_cli_trace_json(capsys):
    rc = main(["--format", "json", "trace", "catalog:sigma_2_7_13_mapping_torus"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    degrees = [t["degree"] for t in out["trace"]["towers"]]
    assert degrees == [0, 4]


def test_cli_sweep_small(capsys):
    rc = main(["sweep", "--seeds", "1..12"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "12/12 passed" in out


def test_cli_sweep_json_and_jobs(capsys):
    rc = main(["--format", "json", "sweep", "--seeds", "1..8", "--jobs", "2"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert out["total"] == 8 and out["passed"] == 8


def test_cli_sweep_bad_range(capsys):
    assert main(["sweep", "--seeds", "nope"]) == 3


def test_cli_sweep_empty_instances(capsys):
    rc = main(["sweep", "--seeds", "1..1", "--max-dim", "0"])
    out = capsys.readouterr().out
    assert rc == 0 and "1/1 passed" in out


def test_cli_catalog_list(capsys):
    rc = main(["catalog", "list"])
    out = capsys.readouterr().out
    assert rc == 0
    for name in (
        "sigma_2_7_13_mapping_torus",
        "akbulut_cork_mapping_torus",
        "product_cobordism_demo",
    ):
        assert name in out


def test_cli_catalog_show(capsys):
    rc = main(["catalog", "show", "sigma_2_7_13_mapping_torus"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert out["expected"]["h_y"]["value"] == 2
    assert out["document"]["spaces"]["hf"] == [0, 4, 0, 2, 0, 4, 0, 2]


def test_cli_catalog_export_then_load(tmp_path, capsys):
    path = tmp_path / "sigma.json"
    rc = main(["catalog", "export", "sigma_2_7_13_mapping_torus", str(path)])
    assert rc == 0
    inst = load(str(path))
    assert inst == catalog.load_entry("sigma_2_7_13_mapping_torus")


def test_cli_catalog_unknown(capsys):
    assert main(["catalog", "show", "missing"]) == 3


def test_report_color_toggle(capsys, monkeypatch):
    monkeypatch.setenv("REPORT_COLOR", "1")
    main(["verify", "catalog:akbulut_cork_mapping_torus"])
    assert "\x1b[32mPASS\x1b[0m" in capsys.readouterr().out


def test_cli_trace_wrong_tower_for_case(capsys):
    # the cork fixture has both families zero, so every tower applies;
    # use a vector-side instance and ask for a kernel tower
    doc = {
        "schema_version": "1",
        "level": "cohomology-level",
        "convention": "cohomology",
        "metadata": {"name": "prime-side"},
        "spaces": {"hf": [0, 1, 0, 0, 0, 0, 0, 0]},
        "special": {
            "case": "delta_prime_side",
            "n_max": 1,
            "deltas": [],
            "deltas_prime": [[[1]], []],
        },
        "cobordism": {"label": "W", "blocks": [[], [[1]], [], [], [], [], [], []]},
    }
    import tempfile, os

    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
        json.dump(doc, f)
        path = f.name
    try:
        assert main(["trace", path, "--tower", "0"]) == 2
        assert main(["trace", path, "--tower", "1"]) == 0
    finally:
        os.unlink(path)


def test_cli_sweep_failure_dump(tmp_path, capsys, monkeypatch):
    import floersplit.cli as cli
    from floersplit.errors import TheoremCounterexample

    real = cli.verify_splitting

    def sabotage(instance, **kw):
        if instance.metadata.get("seed") == 2:
            raise TheoremCounterexample("sabotaged for the test")
        return real(instance, **kw)

    monkeypatch.setattr(cli, "verify_splitting", sabotage)
    monkeypatch.chdir(tmp_path)
    rc = main(["sweep", "--seeds", "1..3"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "2/3 passed" in out and "FAIL seed 2" in out
    dump = tmp_path / "floersplit-failure-2.json"
    assert dump.exists()
    replay = document_to_instance(json.loads(dump.read_text()))
    assert replay.metadata["seed"] == 2
