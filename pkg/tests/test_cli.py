import json

import pytest

from main import run


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_ghost(capsys):
    assert run(["ghost", "--S", "1,2,3", "--coords", "2,0,0"]) == 0
    assert capsys.readouterr().out == '{"ghost":["2","4","8"]}\n'


def test_product_of_verschiebungs(capsys):
    code, payload = invoke(capsys, "mul", "--S", "1,2,3,6", "--a", "V2", "--b", "V3")
    assert code == 0
    assert payload["coords"] == ["0", "0", "0", "1"]
    assert payload["ring"] == {"kind": "Integers"}


def test_arithmetic_mod_4(capsys):
    code, payload = invoke(capsys, "add", "--ring", "zmod:4", "--S", "1,2", "--a", "1,0", "--b", "1,0")
    assert code == 0
    assert payload["coords"] == [{"mod": "4", "val": "2"}, {"mod": "4", "val": "3"}]


def test_frobenius_and_verschiebung(capsys):
    code, payload = invoke(capsys, "frob", "--S", "1,2,3,6", "--n", "2", "--coords", "1,1,0,0")
    assert code == 0
    assert payload["S"] == [1, 3]
    code, payload = invoke(capsys, "ver", "--S", "1,2,3,6", "--n", "3", "--coords", "1,0")
    assert payload["coords"] == ["0", "0", "1", "0"]


def test_non_integral_ghost_vector(capsys):
    code, payload = invoke(capsys, "unghost", "--S", "1,2", "--ghost", "0,1")
    assert code == 2
    assert payload["error"] == "NotGhostIntegral"
    assert payload["index"] == "2"


def test_set_must_be_divisor_closed(capsys):
    code, payload = invoke(capsys, "ghost", "--S", "1,4", "--coords", "1,1")
    assert code == 2
    assert payload["error"] == "NotDivisorClosed"


@pytest.mark.parametrize("argv", [["frob", "--S", "1,2"], ["nosuchcommand"], ["phimod", "explode"]])
def test_usage_errors(capsys, argv):
    code, payload = invoke(capsys, *argv)
    assert code == 2
    assert payload["error"] == "UsageError"


def test_zbasis(capsys):
    code, payload = invoke(capsys, "zbasis", "--S", "1,2,3,4,5,6,7,8,9,10,11,12", "--product", "4,6")
    assert code == 0
    assert payload["product"] == {"coefficient": "2", "index": 12}


def test_eps(capsys):
    code, payload = invoke(capsys, "eps", "--ring", "zp:3", "--S", "1,2", "--p", "3")
    assert code == 0
    assert payload["idempotents"]["1"] == [{"num": "1", "den": "1"}, {"num": "-1", "den": "2"}]
    assert payload["check"]["sums_to_one"]


def test_decompose_then_reassemble(capsys, tmp_path):
    code, payload = invoke(capsys, "decompose", "--ring", "zp:2", "--S", "1,2,3,6", "--p", "2", "--coords", "1,2,3,4")
    assert code == 0
    assert sorted(payload["components"]) == ["1", "3"]
    path = tmp_path / "components.json"
    path.write_text(json.dumps(payload))
    code, payload = invoke(capsys, "reassemble", "--S", "1,2,3,6", "--p", "2", "--file", str(path))
    assert code == 0
    assert payload["coords"] == [{"num": str(c), "den": "1"} for c in (1, 2, 3, 4)]


def test_finite_lemmas(capsys):
    code, payload = invoke(capsys, "finite", "--ring", "zmod:3", "--S", "1,2")
    assert code == 0
    assert len(payload["maximal_ideals"]) == 2
    code, payload = invoke(capsys, "finite", "--S", "1,2", "--lemma", "maximal")
    assert code == 2
    code, payload = invoke(capsys, "finite", "--S", "1,2", "--lemma", "points")
    assert code == 2
    assert payload["error"] == "InvalidRing"


def test_phimod_validate(capsys):
    code, payload = invoke(capsys, "phimod", "validate", "--object", "tate:-1", "--samples", "2")
    assert code == 0
    assert payload["passed"]
    assert payload["failures"] == []


def test_phimod_build_file_round_trip(capsys, tmp_path):
    code, payload = invoke(capsys, "phimod", "build", "--Q", "1,2,3", "--object", "graded:1:2")
    assert code == 0
    assert payload["a"] == 3
    path = tmp_path / "object.json"
    path.write_text(json.dumps(payload))
    code, payload = invoke(capsys, "phimod", "validate", "--Q", "1,2,3", "--object", str(path), "--samples", "2")
    assert code == 0
    assert payload["passed"]


def test_phimod_object_count(capsys):
    code, payload = invoke(capsys, "phimod", "tensor", "--object", "unit")
    assert code == 2
    assert payload["error"] == "ParseError"


def test_phimod_harness(capsys):
    code, payload = invoke(capsys, "phimod", "harness", "--object", "tate:-1", "--morphism", "scalar:3")
    assert code == 0
    assert payload["hom_check"]["is_morphism"]
    assert payload["harness"]["faithful"] == "not applicable"


def test_phimod_hom_from_unit(capsys):
    code, payload = invoke(capsys, "phimod", "hom", "--object", "unit", "--object", "tate:-1")
    assert code == 0
    assert (payload["rank"], payload["a"], payload["twist"]) == (1, 2, 0)


def test_phimod_reduce_needs_local_ring(capsys):
    code, payload = invoke(capsys, "phimod", "reduce", "--object", "unit", "--ring", "z")
    assert code == 2
    assert payload["error"] == "WrongRing"


def test_verify_small(capsys):
    code, payload = invoke(capsys, "verify", "--suite", "ghost", "--max", "4", "--samples", "2")
    assert code == 0
    assert payload["passed"]
    assert payload["suites"][0]["suite"] == "ghost"


def test_output_is_deterministic(capsys):
    argv = ["phimod", "adjunction", "--object", "unit", "--object", "tate:-1", "--object", "tate:-2"]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    assert capsys.readouterr().out == first


def test_short_flag_spellings(capsys):
    code, payload = invoke(capsys, "frob", "-S", "1,2,3,6", "-n", "2", "--coords", "1,1,0,0")
    assert code == 0
    assert payload["S"] == [1, 3]
    code, payload = invoke(capsys, "ver", "-S", "1,2,3,6", "-n", "3", "--coords", "1,0")
    assert payload["coords"] == ["0", "0", "1", "0"]
    code, payload = invoke(capsys, "restrict", "-S", "1,2,3,6", "-T", "1,2", "--coords", "1,2,3,4")
    assert code == 0
    assert payload["coords"] == ["1", "2"]


def test_eps_defaults_to_local_ring(capsys):
    code, payload = invoke(capsys, "eps", "-p", "2", "-S", "1,3")
    assert code == 0
    assert sorted(payload["idempotents"]) == ["1", "3"]
    assert payload["check"]["sums_to_one"]
    code, payload = invoke(capsys, "decompose", "-p", "2", "-S", "1,2", "--coords", "1,1")
    assert code == 0
    assert payload["components"]["1"]["ring"] == {"kind": "LocalIntegersAtP", "p": 2}


def test_maximal_ideals_flag(capsys):
    code, payload = invoke(capsys, "finite", "--ring", "zmod:3", "--S", "1,2", "--maximal-ideals")
    assert code == 0
    assert len(payload["maximal_ideals"]) == 2


def test_zbasis_prints_both_forms(capsys):
    code, payload = invoke(capsys, "zbasis", "--S", "1,2", "--coords", "2,0")
    assert code == 0
    assert payload["coords"] == ["2", "0"]
    assert payload["coeffs"] == ["2", "1"]


def test_table_limit_is_a_domain_error(capsys):
    code, payload = invoke(capsys, "add", "--ring", "zmod:2", "--S", "1,61", "--a", "1,0", "--b", "1,0")
    assert code == 2
    assert payload["error"] == "TableLimitExceeded"
    assert payload["n"] == "61"


@pytest.mark.parametrize("command", ["frob", "ver", "exactseq"])
def test_n_must_be_positive(capsys, command):
    argv = [command, "--ring", "zmod:2", "--S", "1,2", "--n", "0"]
    if command != "exactseq":
        argv += ["--coords", ""]
    code, payload = invoke(capsys, *argv)
    assert code == 2
    assert payload["error"] == "ParseError"


def test_exactseq_reports_passed(capsys):
    code, payload = invoke(capsys, "exactseq", "--ring", "zmod:4", "--S", "1,2,4", "-n", "2")
    assert code == 0
    assert payload["exact"] and payload["passed"]


def test_bad_vector_json_is_a_parse_error(capsys, tmp_path):
    path = tmp_path / "components.json"
    path.write_text(json.dumps({"components": {"1": {
        "S": [1], "ring": {"kind": "Rationals"}, "coords": [{"num": "1", "den": "0"}],
    }}}))
    code, payload = invoke(capsys, "reassemble", "--S", "1", "--p", "2", "--file", str(path))
    assert code == 2
    assert payload["error"] == "ParseError"
