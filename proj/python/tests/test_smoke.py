import json
import pathlib

import qsi

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def test_solve_rank3():
    r = qsi.run("solve", input=str(DATA / "rank3_system.json"), json_out="")
    assert r["exit_code"] == qsi.PASS
    assert r["result"]["Y"] == "[[Q, (1/q)*Z*Q, X], [0, Q, 0], [0, 0, 1]]"


def test_galois_group_first_example():
    r = qsi.run("galois-group", input=str(DATA / "first_example.json"))
    assert r["status"] == "pass"
    assert r["result"]["generators"] == ["e", "e^-1", "g"]
    assert r["result"]["complete"] is True


def test_exit_codes():
    assert qsi.run("validate", input=str(DATA / "identity_invalid.json"))["exit_code"] == qsi.PROPERTY_FAIL
    assert qsi.run("validate", input=str(DATA / "truncated.json"))["exit_code"] == qsi.INPUT_ERROR
    r = qsi.run("galois-group", input=str(DATA / "first_example.json"), q="root_of_unity:3")
    assert r["exit_code"] == qsi.REFUSAL


def test_taft_and_normalize():
    r = qsi.run("taft", N=3, lambda_="2", check="torsor")
    assert r["result"]["galois_map_rank_checked"] == 81
    assert qsi.run("normalize", gamma="1/2")["result"]["g"] == "-1/2"


def test_text_rendering_and_seed():
    a = qsi.run("simplicity", count=10, q="2", seed=3)
    b = qsi.run("simplicity", count=10, q="2", seed=3)
    assert a == b
    assert "status: pass" in qsi.render_text(json.dumps(a))


def test_unknown_option():
    try:
        qsi.run("validate", bogus=1)
    except KeyError:
        return
    raise AssertionError("unknown option accepted")
