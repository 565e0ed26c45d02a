import dataclasses
import json

import pytest

from app import main
from cli.manifest import Manifest, kind_of
from cli.verify import PROPS, evaluate, fuzz_instance, instance_from_manifest, lookup, run_fuzzed
from homext.adjunct import VerificationReport
from homext.errors import MalformedInputError
from homext.extalg import Extension
from homext.modcat import Ring

NONSPLIT = {
    "ring": {"N": 4},
    "objects": {
        "C": [2],
        "E": [4],
        "a": {"from": "C", "to": "E", "matrix": [[2]]},
        "b": {"from": "E", "to": "C", "matrix": [[1]]},
        "S": {"kind": "extension", "maps": ["a", "b"]},
    },
}

DOUBLING = json.dumps({"lo": 0, "hi": 2, "modules": [[4], [4], [4]], "diffs": [[[2]], [[2]]]})


@pytest.fixture
def write_manifest(tmp_path):
    def write(o, name="manifest.json") -> str:
        path = tmp_path / name
        path.write_text(json.dumps(o))
        return str(path)
    return write


def run(capsys, *argv: str) -> tuple[int, list[str]]:
    code = main(list(argv))
    return code, capsys.readouterr().out.splitlines()


def trailer(lines: list[str]) -> dict:
    return json.loads(lines[-1])


def test_snf(capsys):
    code, out = run(capsys, "snf", "-M", "[[2, 4], [6, 8]]")
    assert code == 0
    assert out[0] == "diagonal [2, 4]"
    assert json.loads(out[-1])["diagonal"] == [2, 4]


def test_hom(capsys):
    code, out = run(capsys, "hom", "--ring", "8", "-A", "[2]", "-B", "[4]")
    assert code == 0
    assert out[0] == "Z/2"


def test_ext_and_resolution(capsys):
    code, out = run(capsys, "ext", "--ring", "4", "-C", "[2]", "-D", "[2]")
    assert (code, out[0]) == (0, "Z/2")
    assert json.loads(out[-1])["orders"] == [2]
    code, out = run(capsys, "ext", "--ring", "4", "-C", "[2]", "-D", "[2]", "--extra-rank", "1")
    assert (code, out[0]) == (0, "Z/2")
    code, out = run(capsys, "resolve", "--ring", "4", "-C", "[2]", "--depth", "2")
    assert out[0] == "Z/2 <- Z/4 <- Z/4 <- Z/4"


def test_baer_and_phi_on_a_manifest(capsys, write_manifest):
    path = write_manifest(NONSPLIT)
    code, out = run(capsys, "baer", "--manifest", path, "-S", "S", "-T", "S")
    assert code == 0
    assert out[0] == "split"
    code, out = run(capsys, "phi", "--manifest", path, "-S", "S")
    assert code == 0
    assert out[:2] == ["class [1] in Z/2", "nonsplit"]


def test_psi_realizes_coordinates(capsys):
    code, out = run(capsys, "psi", "--ring", "4", "-C", "[2]", "-D", "[2]", "--coords", "[1]")
    assert code == 0
    assert out[0] == "0 -> Z/2 -> Z/4 -> Z/2 -> 0"
    code, _ = run(capsys, "psi", "--ring", "4", "-C", "[2]", "-D", "[2]", "--coords", "[1, 0]")
    assert code == 1


def test_homology_and_membership(capsys):
    code, out = run(capsys, "homology", "--ring", "4", "-X", DOUBLING)
    assert code == 0
    assert out[:3] == ["H_0 = Z/2", "H_1 = 0", "H_2 = Z/2"]
    code, out = run(capsys, "membership", "--ring", "4", "-X", DOUBLING, "-F", '{"preset": "free"}',
                    "--kind", "dgF")
    assert (code, out[0]) == (0, "undecided")
    code, out = run(capsys, "membership", "--ring", "4", "-X", DOUBLING, "-F", '{"preset": "free"}')
    assert (code, out[0]) == (0, "member")


def test_kernel_pullback_relext(capsys):
    twice = json.dumps({"from": [4], "to": [4], "matrix": [[2]]})
    code, out = run(capsys, "kernel", "--ring", "4", "-f", twice)
    assert (code, out[0]) == (0, "Z/2")
    code, out = run(capsys, "pushout", "--ring", "4", "-f", twice, "-g", twice)
    assert code == 0
    code, out = run(capsys, "relext", "--ring", "4", "-C", "[2]", "-D", "[2]", "-F", '{"generators": [[2]]}')
    assert (code, out[0]) == (0, "0 in Z/2")


def test_malformed_inputs_exit_with_1(capsys, write_manifest):
    assert run(capsys, "hom", "--ring", "8", "-A", "[3]", "-B", "[2]")[0] == 1
    assert run(capsys, "hom", "-A", "[2]", "-B", "[2]")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "verify", "9.9", "--ring", "4", "--fuzz", "0", "1")[0] == 1
    assert run(capsys, "ext", "--manifest", "/nonexistent/manifest.json", "-C", "C", "-D", "C")[0] == 1
    dangling = {"ring": {"N": 4}, "objects": {"f": {"from": "A", "to": [4], "matrix": [[1]]}}}
    assert run(capsys, "ext", "--manifest", write_manifest(dangling), "-C", "[2]", "-D", "[2]")[0] == 1
    path = write_manifest(NONSPLIT)
    assert run(capsys, "ext", "--manifest", path, "--ring", "8", "-C", "C", "-D", "C")[0] == 1


def test_unmet_preconditions_exit_with_2(capsys, write_manifest):
    objects = dict(NONSPLIT["objects"])
    objects["b"] = {"from": "E", "to": "E", "matrix": [[1]]}
    path = write_manifest({"ring": {"N": 4}, "objects": objects})
    assert run(capsys, "phi", "--manifest", path, "-S", "S")[0] == 2
    sphere = json.dumps({"lo": 0, "hi": 0, "modules": [[2]], "diffs": []})
    assert run(capsys, "ext", "--ring", "4", "-C", sphere, "-D", sphere, "-i", "2")[0] == 2


def test_verify_manifest_with_unmet_hypothesis(capsys, write_manifest):
    path = write_manifest({"ring": {"N": 4}, "objects": {
        "X": {"lo": 0, "hi": 0, "modules": [[2]], "diffs": []},
        "C": [2], "m": 0, "F": {"preset": "free"}}})
    code, out = run(capsys, "verify", "5.iso.1", "--manifest", path)
    assert code == 0
    assert "partial" in out[0] and "hypothesis not met" in out[0]
    assert json.loads(out[1])["ok"] is True
    assert trailer(out)["partial"] == 1


def test_fuzzed_verify_is_deterministic(capsys, tmp_path):
    argv = ("verify", "1.1", "--fuzz", "42", "3", "--ring", "8", "--failures-dir", str(tmp_path / "failures"))
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    code, out = first
    assert code == 0
    assert [line.split()[0] for line in out[:3]] == ["[0]", "[1]", "[2]"]
    assert trailer(out) == {"prop": "1.1", "instances": 3, "pass": 3, "partial": 0, "flagged": 0,
                            "fail": 0, "ok": True}


def test_fuzzed_gext_and_csv(capsys, tmp_path):
    table = tmp_path / "gext.csv"
    code, out = run(capsys, "verify", "6.gext", "--fuzz", "1", "4", "--csv", str(table))
    assert code == 0
    assert trailer(out)["pass"] == 4
    rows = table.read_text().splitlines()
    assert rows[0].startswith("index,prop,N,status")
    assert len(rows) == 5


def test_thread_count_must_be_positive(capsys, monkeypatch):
    monkeypatch.setenv("HOMEXT_THREADS", "0")
    assert run(capsys, "verify", "6.gext", "--fuzz", "1", "2")[0] == 1
    monkeypatch.setenv("HOMEXT_THREADS", "two")
    assert run(capsys, "verify", "6.gext", "--fuzz", "1", "2")[0] == 1


FAILS_ALWAYS = "always_fails"


@pytest.fixture
def broken_gext(monkeypatch):
    """ Swaps the 6.gext verifier for one whose only check fails. """
    def run_instance(inst, ring):
        report = VerificationReport("6.gext", {"N": ring.N})
        report.record(FAILS_ALWAYS, False, {"M": inst["M"].to_json()})
        return report
    monkeypatch.setitem(PROPS, "6.gext", dataclasses.replace(PROPS["6.gext"], run=run_instance))


def test_failing_instances_are_written_for_replay(capsys, tmp_path, broken_gext):
    failures = tmp_path / "failures"
    code, out = run(capsys, "verify", "6.gext", "--fuzz", "3", "2", "--ring", "4", "--failures-dir", str(failures))
    assert code == 2
    assert trailer(out)["fail"] == 2 and trailer(out)["ok"] is False
    assert FAILS_ALWAYS in out[0]
    assert sorted(p.name for p in failures.iterdir()) == ["6.gext-3-0.json", "6.gext-3-1.json"]

    path = failures / "6.gext-3-1.json"
    manifest = Manifest.from_json(json.loads(path.read_text()))
    prop = lookup("6.gext")
    ring, inst = fuzz_instance(prop, 3, 1, Ring(4))
    assert manifest.ring == ring
    assert instance_from_manifest(prop, manifest) == inst

    code, out = run(capsys, "verify", "6.gext", "--manifest", str(path))
    assert code == 2
    assert trailer(out)["fail"] == 1


def test_unexpected_errors_become_failing_outcomes(monkeypatch):
    prop = lookup("6.gext")
    def crash(*_):
        raise IndexError("out of range")
    outcome = evaluate(dataclasses.replace(prop, run=crash), 0, Ring(4), {})
    assert outcome.status == "fail"
    assert "IndexError" in outcome.message

    monkeypatch.setitem(PROPS, "6.gext", dataclasses.replace(prop, generate=crash))
    outcome = run_fuzzed(lookup("6.gext"), 1, 5, Ring(4))
    assert (outcome.index, outcome.N, outcome.status) == (5, 4, "fail")
    assert outcome.message.startswith("instance generation failed: IndexError")


@pytest.mark.slow
def test_worker_pool_matches_inline_run(capsys, monkeypatch):
    argv = ("verify", "6.gext", "--fuzz", "5", "6", "--ring", "12")
    inline = run(capsys, *argv)
    monkeypatch.setenv("HOMEXT_THREADS", "2")
    pooled = run(capsys, *argv)
    assert inline == pooled


def test_manifest_round_trip():
    manifest = Manifest.from_json(NONSPLIT)
    assert isinstance(manifest["S"], Extension)
    again = Manifest.from_json(manifest.to_json())
    assert again.to_json() == manifest.to_json()


def test_manifest_rejects_cycles():
    with pytest.raises(MalformedInputError):
        Manifest.from_json({"ring": {"N": 4}, "objects": {
            "f": {"from": "g", "to": [4], "matrix": [[1]]},
            "g": {"from": "f", "to": [4], "matrix": [[1]]}}})


def test_kinds_are_inferred():
    assert kind_of(3) == "int"
    assert kind_of([2]) == "module"
    assert kind_of({"from": [2], "to": [4], "matrix": [[2]]}) == "morphism"
    assert kind_of({"lo": 0, "hi": 0, "modules": [[2]]}) == "complex"
    assert kind_of({"preset": "free"}) == "class"
    with pytest.raises(MalformedInputError):
        kind_of({"nothing": 1})
