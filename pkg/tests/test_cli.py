import io
import json

import pytest

from mcgcover.cli import EXIT_BOUNDS, EXIT_FAILED, EXIT_OK, EXIT_PARSE, main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_model_dimension():
    code, text = run("model", "--r", "2", "--h", "2", "--k", "2", "--json")
    assert code == EXIT_OK
    rep = json.loads(text)
    assert rep["results"][0]["details"]["dimension"] == 13
    assert set(rep) == {"config", "results", "versions"}


def test_matrix_y():
    code, text = run("matrix", "--r", "2", "--h", "2", "--k", "2", "--alpha", "0", "--beta", "1", "--word", "Y", "--varrho", "--json")
    assert code == EXIT_OK
    d = json.loads(text)["results"][0]["details"]
    assert d["display"] == [["-1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
    assert d["basis"] == "varrho" and d["label"] == [0, 1]


def test_matrix_text_output():
    code, text = run("matrix", "--r", "2", "--h", "3", "--k", "3", "--alpha", "1", "--beta", "2", "--word", "R2")
    assert code == EXIT_OK and text.startswith("PASS  matrix")


def test_verify_formulas_r3():
    code, _ = run("verify", "--suite", "paper-formulas", "--r", "3", "--h", "2", "--k", "2")
    assert code == EXIT_OK


def test_verify_failure_sets_exit_code():
    # varrho(V) at r = 2 does not have the generic closed form
    code, text = run("verify", "--suite", "paper-formulas", "--r", "2", "--h", "2", "--k", "2")
    assert code == EXIT_FAILED and "FAIL  varrho(V)" in text


def test_deterministic_json():
    args = ("verify", "--suite", "random-functoriality", "--r", "2", "--h", "2", "--k", "2", "--count", "5", "--seed", "7", "--json")
    assert run(*args) == run(*args)
    assert json.loads(run(*args)[1])["config"]["seed"] == 7


@pytest.mark.parametrize(
    "argv,code",
    [
        (("matrix", "--word", "R2 *"), EXIT_PARSE),
        (("matrix", "--word", "Q1"), EXIT_PARSE),
        (("model", "--v", "z9=(1,0)"), EXIT_PARSE),
        (("model", "--r", "1"), EXIT_BOUNDS),
        (("model", "--h", "0"), EXIT_BOUNDS),
        (("certify", "--h", "2", "--k", "3"), EXIT_BOUNDS),
        (("matrix", "--word", "T1"), EXIT_BOUNDS),
    ],
)
def test_error_codes(argv, code):
    assert run(*argv)[0] == code


def test_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["verify", "--suite", "nope"])
    assert e.value.code == 2


def test_certify_roundtrip(tmp_path):
    path = tmp_path / "cert.json"
    code, _ = run("certify", "--r", "2", "--h", "2", "--k", "2", "--out", str(path))
    assert code == EXIT_OK and path.exists()
    code, text = run("certify", "--replay", str(path))
    assert code == EXIT_OK and "PASS  replay" in text


def test_orientation():
    code, text = run("orientation", "--r", "2", "--word", "S1", "--json")
    assert code == EXIT_OK
    names = [r["name"] for r in json.loads(text)["results"]]
    assert "rho^- is dual to rho^+" in names


def test_custom_table_model():
    code, text = run("model", "--r", "2", "--h", "2", "--k", "2", "--v", "a1=(1,0),b1=(0,1),c=(1,0)", "--json")
    assert code == EXIT_OK
    assert json.loads(text)["results"][0]["details"]["dimension"] == 13
