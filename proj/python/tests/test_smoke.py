import pytest

import tmcalc


def test_angle_form_lift_is_exact():
    lifted = tmcalc.evaluate("m=2; clift((-x2*dx1 + x1*dx2)/(x1^2+x2^2))")
    primitive = tmcalc.evaluate("m=2; d((x1*v2 - x2*v1)/(x1^2+x2^2))")
    assert lifted.kind == "form"
    assert lifted == primitive


def test_operators():
    assert tmcalc.db(tmcalc.evaluate("db(v1)", m=1)).is_zero()
    assert str(tmcalc.evaluate("m=1; db(v1)")) == "dx1"
    w = tmcalc.evaluate("x1*v2*dx1", m=2)
    assert tmcalc.d(tmcalc.d(w)).is_zero()
    xi = tmcalc.lift("xi", m=2)
    assert xi.kind == "field"
    lifted = tmcalc.lift("complete", tmcalc.evaluate("x1*dx2", m=2))
    assert tmcalc.lie(xi, lifted) == lifted
    assert tmcalc.evaluate("m=2; xi").render("latex") == r"v^{1}\partial_{v^{1}}+v^{2}\partial_{v^{2}}"
    j = tmcalc.evaluate("m=1; 3/2*dx1").json()
    assert j["kind"] == "form" and j["terms"][0]["value"] == "3/2"


def test_errors():
    with pytest.raises(tmcalc.TmcalcError, match="IndexOutOfRange"):
        tmcalc.evaluate("m=2; x3")
    with pytest.raises(tmcalc.TmcalcError, match="NotBaseOnly"):
        tmcalc.lift("pullback", tmcalc.evaluate("m=1; v1*dx1"))


def test_suite_and_transitions():
    report = tmcalc.run_suite(cases=2, filter="mirror")
    assert report["summary"]["failed"] == 0
    assert all(r["passed"] for r in report["suite"])
    ids = [r["id"] for r in tmcalc.suite_registry()]
    assert len(ids) == len(set(ids)) and "D-squared-nonconstant" in ids
    fwd, inv = ["x1 + x2^2", "x2"], ["x1 - x2^2", "x2"]
    for kind in ["pullback", "complete", "xi", "B"]:
        assert tmcalc.check_naturality(fwd, inv, kind, "x2*dx1" if kind in ("pullback", "complete") else None)
    assert tmcalc.check_naturality(fwd, inv, "vertical", "x1*px2")
    assert tmcalc.volume_factor(["2*x1", "x2"], ["x1/2", "x2"]) == "4"
