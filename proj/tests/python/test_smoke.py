import json
import os
from pathlib import Path

import pytest

import lambang

T0 = r"(\x.\y.x) (z (\w.w)) ((\w.w) (\w.w))"
DATA = Path(os.environ.get("LAMBANG_TEST_DATA", Path(__file__).resolve().parents[1] / "data"))


def test_parse_and_print():
    assert lambang.parse(r"\x.x") == r"\x.x"
    assert lambang.alpha_eq(r"\x.\y.x", r"\y.\x.y")
    assert lambang.free_vars("x[x := y]") == {"y"}
    with pytest.raises(lambang.ParseError):
        lambang.parse(r"(\x.x")
    with pytest.raises(ValueError):
        lambang.parse("!x")


def test_normalize_t0():
    r = lambang.normalize(T0, "dn")
    assert r["normal"]
    assert lambang.alpha_eq(r["nf"], r"z (\w.w)")
    assert (r["m"], r["e"], r["size"]) == (2, 2, 1)
    v = lambang.normalize(T0, "dv")
    assert (v["m"], v["e"], len(v["steps"])) == (3, 2, 5)
    f = lambang.normalize(lambang.translate(T0, "cbn"), "fdet")
    assert (f["m"], f["e"], f["size"]) == (2, 2, 1)


def test_fuel():
    r = lambang.normalize(r"(\x.x x) (\x.x x)", "dn", fuel=7)
    assert not r["normal"]
    assert r["size"] is None
    with pytest.raises(lambang.TightError):
        lambang.synthesize(r"(\x.x x) (\x.x x)", "N", fuel=7)


def test_synthesize_and_check():
    for system, k in [("N", (2, 2, 1)), ("V", (3, 2, 1))]:
        r = lambang.synthesize(T0, system)
        assert r["counters"] == k
        assert r["tight"]
        c = lambang.check(r["derivation"], system)
        assert c["ok"] and c["counters"] == k
        assert lambang.check(json.dumps(r["derivation"]), system)["ok"]
    bad = lambang.synthesize(T0, "N")["derivation"]
    bad["counters"][1] = 3
    c = lambang.check(bad, "N")
    assert not c["ok"] and c["path"] == "root"


def test_translations():
    assert lambang.translate("x y", "cbv") == "x !y"
    assert lambang.alpha_eq(lambang.translate(r"(\x.x) y", "cbv"), r"(\x.!x) !y", "bang")
    fig = json.loads((DATA / "t0_v.json").read_text())
    img = lambang.translate_derivation(fig, "cbv")
    assert tuple(img["counters"]) == (3, 4, 1)
    assert lambang.check(img, "B")["ok"]
    assert lambang.countvr(fig) == 2
    assert lambang.inversevr(img) == 2


def test_verify():
    assert "completeness-N" in lambang.theorem_ids()
    r = lambang.verify("completeness-N", max_size=4)
    assert r["pass"] and r["tested"] > 0 and r["failed"] == []
    with pytest.raises(ValueError):
        lambang.verify("nonsense")
