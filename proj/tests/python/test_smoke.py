"""Smoke tests for the python bindings."""

import tslab


def test_family_membership():
    assert tslab.family_member("S(1)", "3,4,5")
    assert not tslab.family_member("S(1)", "1,2")
    assert tslab.family_member("S(2)", "2,3,6,7,8")
    assert not tslab.family_maximal("S(2)", "2,3,6,7,8")


def test_family_enumerate_and_order():
    members = tslab.family_enumerate("S(1)", 2)
    assert members == ["{}", "{1}", "{2}"]
    assert tslab.family_order("S(1)|N=2", 2) == 1


def test_ordinals():
    assert tslab.ordinal_normalize("w^2*3+w*1+4") == "w^2*3+w*1+4"
    assert tslab.fundamental_sequence("w*1", 3) == "3"
    assert tslab.fundamental_sequence("w^2*1", 2) == "w*2"


def test_l2sum_and_lambda():
    assert tslab.l2sum_norm_sq([(2, "1"), (3, "1")]) == "4"
    assert tslab.lambda_class(8) == 4
    classes = {tslab.lambda_class(k) for k in range(1, 64)}
    assert 1 in classes and 2 in classes
    assert any(tslab.l_member(k) for k in range(1, 64))
    assert any(not tslab.l_member(k) for k in range(1, 64))


def test_workbench_norms():
    wb = tslab.Workbench(profile="micro", xi="1")
    r = wb.ground_norm([(5, "1")])
    assert r["lower"] == "1"
    assert r["upper"] == "1"
    assert r["provenance"] == "exhaustive"
    e = wb.extension_norm([(3, "1")], rules="K", depth=2)
    assert e["lower"] == "1"


def test_workbench_game():
    wb = tslab.Workbench(profile="game", xi="1")
    out = wb.play_xg_game(seed=3)
    assert out["verdict"] == "V-wins"
    assert out["equivalence"] == "1"


def test_attractor():
    wb = tslab.Workbench(profile="attr16", xi="1")
    out = wb.build_attractor(j=1, start=1, l_mode=False)
    assert out["built"]
    assert len(out["functionals"]) == 4
