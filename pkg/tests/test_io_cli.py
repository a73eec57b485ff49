import json
import subprocess
import sys
from pathlib import Path

import pytest

from dgq import io as dio
from dgq.cli import run
from dgq.cocycles import enumerate_cocycle_pairs
from dgq.errors import FormatError
from dgq.samples import s3_double, s3_matched_pair

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def corpus_files():
    return sorted(CORPUS.glob("*.json"))


def test_corpus_exists():
    assert len(corpus_files()) >= 8


def test_corpus_matches_builders():
    # shipped files are exactly the canonical emissions of the builders
    from dgq.groupoids import coarse_groupoid, one_object_group
    from dgq.samples import (build_Xrs, commuting_squares_z2, corpus_product,
                             corpus_union, cyclic_table, s3_matched_pair,
                             symmetric_table)
    expected = {
        "s3_matched_pair": dio.Document("matched_pair", s3_matched_pair()),
        "s3_double": dio.Document("double_groupoid", s3_double()),
        "x11": dio.Document("double_groupoid", build_Xrs(1, 1)),
        "x22": dio.Document("double_groupoid", build_Xrs(2, 2)),
        "x23": dio.Document("double_groupoid", build_Xrs(2, 3)),
        "commuting_squares_z2": dio.Document("double_groupoid",
                                             commuting_squares_z2()),
        "union_x22_s3": dio.Document("double_groupoid", corpus_union()),
        "product_s3_x21": dio.Document("double_groupoid", corpus_product()),
        "s3_group": dio.Document("groupoid",
                                 one_object_group(symmetric_table(3)[0])),
        "z2_group": dio.Document("groupoid", one_object_group(cyclic_table(2))),
        "coarse3_group": dio.Document("groupoid", coarse_groupoid(3)),
    }
    on_disk = {p.stem for p in corpus_files()}
    assert on_disk == set(expected)
    for name, doc in expected.items():
        assert (CORPUS / f"{name}.json").read_text() == dio.emit(doc), name


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_round_trip_idempotent(path):
    text = path.read_text()
    doc = dio.parse(text)
    emitted = dio.emit(doc)
    assert dio.emit(dio.parse(emitted)) == emitted
    # shipped files are already canonical
    assert emitted == text


def test_unknown_kind_rejected():
    with pytest.raises(FormatError, match="kind"):
        dio.parse('{"kind": "mystery", "version": "1"}')


def test_version_mismatch_rejected():
    doc = json.loads((CORPUS / "z2_group.json").read_text())
    doc["version"] = "2"
    with pytest.raises(FormatError, match="version"):
        dio.parse(json.dumps(doc))


def test_duplicate_json_key_rejected():
    text = '{"kind": "field_spec", "kind": "field_spec", "version": "1"}'
    with pytest.raises(FormatError, match="duplicate"):
        dio.parse(text)


def test_unknown_field_rejected():
    doc = json.loads((CORPUS / "z2_group.json").read_text())
    doc["extra"] = 1
    with pytest.raises(FormatError, match="unknown keys"):
        dio.parse(json.dumps(doc))


def test_out_of_range_source_rejected():
    doc = json.loads((CORPUS / "z2_group.json").read_text())
    doc["source"][0] = doc["n_objects"]
    with pytest.raises(FormatError, match="out of range"):
        dio.parse(json.dumps(doc))


def test_duplicate_composition_entry_rejected():
    doc = json.loads((CORPUS / "z2_group.json").read_text())
    doc["compose"].append(doc["compose"][0])
    with pytest.raises(FormatError, match="duplicate entry"):
        dio.parse(json.dumps(doc))


def test_tampered_inverse_table_rejected():
    doc = json.loads((CORPUS / "z2_group.json").read_text())
    doc["inverse"] = [1, 0]    # wrong for the cyclic group of order two
    with pytest.raises(FormatError, match="inverse"):
        dio.parse(json.dumps(doc))


def test_cocycle_document_binding():
    t = s3_double()
    cp = enumerate_cocycle_pairs(t, 2)[-1]
    doc = dio.Document("cocycle_pair", dio.cocycle_document(t, cp))
    text = dio.emit(doc)
    parsed = dio.parse(text)
    assert dio.cocycle_pair_for(t, parsed.payload) == cp


def test_cocycle_domain_mismatch_rejected():
    t = s3_double()
    cp = enumerate_cocycle_pairs(t, 2)[0]
    doc = dio.cocycle_document(t, cp)
    bad = dio.CocycleDocument(doc.modulus, doc.sigma[1:], doc.tau)
    with pytest.raises(FormatError, match="cover"):
        dio.cocycle_pair_for(t, bad)


# -- CLI ------------------------------------------------------------------------


def test_cli_validate_matched_pair(capsys):
    assert run(["validate", str(CORPUS / "s3_matched_pair.json")]) == 0
    assert "pass" in capsys.readouterr().out


def test_cli_vacant_control_fails(capsys):
    code = run(["vacant", str(CORPUS / "commuting_squares_z2.json")])
    assert code == 1
    out = capsys.readouterr().out
    assert "witness" in out


def test_cli_kac_s3(capsys):
    code = run(["kac", "--p", "2", str(CORPUS / "s3_matched_pair.json")])
    assert code == 0
    out = capsys.readouterr().out
    assert "exact" in out
    assert "H1(diagonal)" in out


def test_cli_malformed_file_exit2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["validate", str(bad)]) == 2
    missing = tmp_path / "missing.json"
    assert run(["validate", str(missing)]) == 2


def test_cli_wha_verify_corpus(capsys):
    assert run(["wha", "verify", str(CORPUS / "x22.json")]) == 0


def test_cli_wha_verify_twisted(capsys):
    assert run(["wha", "verify", str(CORPUS / "s3_matched_pair.json"),
                "--p", "3", "--m", "2"]) == 0


def test_cli_cocycles(capsys):
    assert run(["--format", "machine", "cocycles", "enumerate",
                str(CORPUS / "x22.json"), "--m", "2"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["count"] == 8
    assert run(["cocycles", "classes", str(CORPUS / "x22.json"), "--m", "2"]) == 0


def test_cli_cohomology(capsys):
    assert run(["cohomology", str(CORPUS / "z2_group.json"), "--p", "2",
                "--degree", "2"]) == 0
    out = capsys.readouterr().out
    assert "H^1: dimension 1" in out
    assert run(["cohomology", str(CORPUS / "coarse3_group.json"), "--p", "5",
                "--degree", "2"]) == 0


def test_cli_convert_round_trip(tmp_path, capsys):
    out_path = tmp_path / "converted.json"
    assert run(["convert", str(CORPUS / "s3_matched_pair.json"),
                "--to", "double_groupoid", "-o", str(out_path)]) == 0
    doc = dio.load_path(out_path)
    assert doc.kind == "double_groupoid"
    assert doc.payload == s3_double()
    back = tmp_path / "back.json"
    assert run(["convert", str(out_path), "--to", "matched_pair",
                "-o", str(back)]) == 0
    assert dio.load_path(back).payload == s3_matched_pair()


def test_machine_format_deterministic(capsys):
    args = ["--format", "machine", "kac", "--p", "3", str(CORPUS / "x22.json")]
    assert run(args) == 0
    first = capsys.readouterr().out
    assert run(args) == 0
    second = capsys.readouterr().out
    assert first == second
    assert run(["--threads", "4"] + args[:]) == 0
    third = capsys.readouterr().out
    assert third == first
    assert "time" not in first


def test_every_corpus_file_validates_and_verifies(capsys):
    # every shipped instance parses, validates, and (for vacant double
    # groupoids and matched pairs) passes the full axiom suite
    for path in corpus_files():
        doc = dio.parse(path.read_text())
        assert run(["validate", str(path)]) == 0, path.stem
        capsys.readouterr()
        if doc.kind == "matched_pair":
            assert run(["wha", "verify", str(path)]) == 0, path.stem
            capsys.readouterr()
        elif doc.kind == "double_groupoid":
            vacant = run(["vacant", str(path)]) == 0
            capsys.readouterr()
            if vacant:
                assert run(["wha", "verify", str(path)]) == 0, path.stem
                capsys.readouterr()


def test_cli_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "dgq.cli", "blocks", str(CORPUS / "x22.json")],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "matrix_size" in proc.stdout
