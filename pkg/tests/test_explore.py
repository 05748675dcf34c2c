from linedelta import explore as X


def test_geometric_sum_theta_zero():
    ev = X.geometric_sum_si(6, 0.0, 1.0)
    assert ev.details["classification"] in ("si", "x_times_si")


def test_geometric_sum_reports_without_asserting():
    ev = X.geometric_sum_si(6, 0.7, 1.0)
    assert ev.details["classification"] in ("si", "x_times_si", "neither")
    assert ev.consistent + ev.violating == 1


def test_generic_simplicity_control():
    ev = X.generic_simplicity(trials=40, seed=1)
    assert ev.consistent + ev.violating == 40
    assert ev.violating == 0
    assert all(c["max_multiplicity"] >= 2 for c in ev.details["excluded_family"])


def test_stability_and_strip():
    ev = X.stability(trials=20, seed=2)
    assert ev.consistent + ev.violating == 20
    ev = X.strip_decrease(trials=15, seed=2)
    assert len(ev.details["mean_width"]) == 5
    assert len(ev.witnesses) <= X.MAX_WITNESSES


def test_json_round():
    import json
    ev = X.stability(trials=3, seed=0)
    assert json.loads(json.dumps(ev.to_json()))["experiment"] == "stability"
