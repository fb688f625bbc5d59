import json
import subprocess
import sys
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator

from pactkit import StructuralError, ValidationFailed, verify_globalization
from pactkit.cli import main
from pactkit.io import (
    action_document,
    canonical_json,
    fixtures_dir,
    groupoid_document,
    load,
    load_envelope,
    resolve_instance_path,
    save,
)

SCHEMA = json.loads(
    (Path(__file__).resolve().parents[1] / "src/pactkit/schemas/cli_output.schema.json").read_text()
)
VALIDATOR = Draft202012Validator(SCHEMA)

FIXTURES = ["z2", "pair2", "remark-g", "fix-b", "fix-c", "sierp-act"]


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_all_valid_fixtures_load():
    for name in FIXTURES:
        doc = load(str(resolve_instance_path(name)))
        assert doc.name == name


def test_save_load_round_trip_byte_identical(tmp_path):
    for name in FIXTURES:
        path = resolve_instance_path(name)
        doc = load(str(path))
        if doc.kind == "groupoid":
            out = groupoid_document(doc.payload, doc.name, doc.description, doc.groupoid_topology)
        else:
            out = action_document(
                doc.payload, doc.name, doc.description, doc.groupoid_topology, doc.carrier_topology
            )
        target = tmp_path / f"{name}.json"
        save(str(target), out)
        assert target.read_bytes() == Path(path).read_bytes()


def test_remark_x_load_fails_naming_condition_and_witness():
    with pytest.raises(ValidationFailed) as err:
        load(str(resolve_instance_path("remark-x")))
    assert "(i)" in str(err.value)
    assert "x2" in str(err.value)


def test_remark_x_bypass_is_tainted():
    doc = load(str(resolve_instance_path("remark-x")), bypass=True)
    assert doc.payload.tainted


def test_unknown_document_keys_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"kind": "groupoid", "payload": {}, "surprise": 1}')
    with pytest.raises(StructuralError):
        load(str(path))


def test_parse_error_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"kind": "groupoid",')
    with pytest.raises(StructuralError, match="line 1"):
        load(str(path))


def test_action_payload_can_reference_groupoid_by_name(tmp_path):
    doc = {
        "kind": "action",
        "meta": {"name": "by-ref", "description": ""},
        "payload": {
            "groupoid": "z2",
            "carrier": ["a", "b"],
            "anchor": [["a", "e"], ["b", "e"]],
            "domains": [["e", ["a", "b"]], ["s", ["a"]]],
            "maps": [["e", [["a", "a"], ["b", "b"]]], ["s", [["a", "a"]]]],
        },
    }
    path = tmp_path / "by-ref.json"
    path.write_text(json.dumps(doc))
    inst = load(str(path))
    assert inst.payload.groupoid.elements == ("e", "s")

    doc["payload"]["groupoid"] = "fix-b"  # an action, not a groupoid
    path.write_text(json.dumps(doc))
    with pytest.raises(StructuralError):
        load(str(path))


def test_fixture_dir_override(tmp_path, monkeypatch):
    src = resolve_instance_path("fix-b")
    (tmp_path / "mine.json").write_text(Path(src).read_text())
    monkeypatch.setenv("PACT_FIXTURES", str(tmp_path))
    assert resolve_instance_path("mine") == tmp_path / "mine.json"
    with pytest.raises(FileNotFoundError):
        resolve_instance_path("fix-b")


def test_envelope_document_reload(tmp_path, capsys):
    out_path = tmp_path / "env.json"
    code, _, _ = run_cli(["globalize", "fix-b", "-o", str(out_path)], capsys)
    assert code == 0
    base = load(str(resolve_instance_path("fix-b"))).payload
    E = load_envelope(str(out_path), base)
    assert verify_globalization(E).ok
    assert len(E.classes) == 3


def test_cli_classify_text_and_exit_codes(capsys):
    code, out, _ = run_cli(["classify", "fix-c"], capsys)
    assert code == 0
    assert out.strip() == "transitive: true, free: true"
    code, out, _ = run_cli(["classify", "fix-b"], capsys)
    assert code == 0
    assert out.strip() == "transitive: false, free: false"


def test_cli_validate_exit_codes(capsys):
    assert run_cli(["validate", "fix-c"], capsys)[0] == 0
    assert run_cli(["validate", "remark-x"], capsys)[0] == 1
    assert run_cli(["validate", "no-such-file"], capsys)[0] == 2


def test_cli_orbits_bypass_reports_witness(capsys):
    code, out, _ = run_cli(["orbits", "remark-x", "--bypass-validation"], capsys)
    assert code == 1
    assert "non-transitive: x1 ~ x2 ~ x3 but x1 !~ x3" in out
    assert "tainted: true" in out


def test_cli_orbits_json_tainted_marker(capsys):
    code, out, _ = run_cli(["orbits", "remark-x", "--bypass-validation", "--json"], capsys)
    payload = json.loads(out)
    assert payload["tainted"] is True
    assert payload["witness"] == ["x1", "x3"]


def test_cli_globalize_json_three_classes(capsys):
    code, out, _ = run_cli(["globalize", "fix-b", "--json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["classes"] == 3
    assert len(payload["document"]["classes"]) == 3


def test_cli_topology_report_sierp_act(capsys):
    code, out, _ = run_cli(["topology-report", "sierp-act"], capsys)
    assert code == 1
    lines = out.strip().splitlines()
    assert "graph_open: true" in lines
    assert "graph_closed: false" in lines
    assert "MG_hausdorff: false" in lines


def test_cli_topology_report_defaults_to_discrete(capsys):
    code, out, _ = run_cli(["topology-report", "fix-b"], capsys)
    assert code == 0
    assert "MG_hausdorff: true" in out


def test_cli_globalize_topology_flag_text_output(capsys):
    code, out, _ = run_cli(["globalize", "sierp-act", "--topology"], capsys)
    assert code == 0
    assert "MG_hausdorff: false" in out
    assert '"classes"' in out  # the envelope document itself is printed


def test_cli_isomorphic_exit_codes(capsys):
    code, out, _ = run_cli(["isomorphic", "fix-c", "fix-c"], capsys)
    assert code == 0
    assert "u -> u" in out
    code, out, _ = run_cli(["isomorphic", "fix-b", "fix-c"], capsys)
    assert code == 1
    assert out.strip() == "none"


def test_cli_coset_check(capsys):
    code, out, _ = run_cli(["coset-check", "fix-c", "--at", "u"], capsys)
    assert code == 0
    assert "[(1,1)] -> [(1,1),u]" in out
    code, out, err = run_cli(["coset-check", "fix-b", "--at", "a"], capsys)
    assert code == 1


def test_cli_repeated_invocations_byte_identical(capsys):
    first = run_cli(["topology-report", "sierp-act", "--json"], capsys)
    second = run_cli(["topology-report", "sierp-act", "--json"], capsys)
    assert first == second


def test_cli_unknown_command_exits_two():
    proc = subprocess.run(
        [sys.executable, "-m", "pactkit", "frobnicate"], capture_output=True, text=True
    )
    assert proc.returncode == 2
    assert "usage" in proc.stderr.lower()


def test_cli_json_outputs_validate_against_schema(capsys, tmp_path):
    invocations = [
        ["validate", "fix-c", "--json"],
        ["validate", "remark-x", "--json"],
        ["info", "z2", "--json"],
        ["info", "fix-b", "--json"],
        ["classify", "fix-c", "--json"],
        ["orbits", "fix-b", "--json"],
        ["orbits", "remark-x", "--bypass-validation", "--json"],
        ["globalize", "fix-b", "--json"],
        ["globalize", "sierp-act", "--topology", "--json"],
        ["isomorphic", "fix-c", "fix-c", "--json"],
        ["isomorphic", "fix-b", "fix-c", "--json"],
        ["coset-check", "fix-c", "--at", "u", "--json"],
        ["coset-check", "fix-b", "--at", "a", "--json"],
        ["topology-report", "sierp-act", "--json"],
        ["topology-report", "fix-c", "--json"],
    ]
    for argv in invocations:
        _, out, _ = run_cli(argv, capsys)
        payload = json.loads(out)
        errors = list(VALIDATOR.iter_errors(payload))
        assert not errors, (argv, [e.message for e in errors])


def test_canonical_json_stable_under_reparse():
    doc = load(str(resolve_instance_path("fix-c")))
    rendered = canonical_json(action_document(doc.payload, doc.name, doc.description))
    assert json.loads(rendered) == json.loads(rendered)


def test_packaged_fixture_directory_exists():
    assert (fixtures_dir() / "fix-b.json").exists()
