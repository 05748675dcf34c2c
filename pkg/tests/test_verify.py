import json
import math

import numpy as np
import pytest

from linedelta import ensembles as E
from linedelta import verify as V
from linedelta.errors import InvalidOperator, NotUnitCircle
from linedelta.findiff import FiniteDifferenceOperator, delta_theta_operator
from linedelta.geometry import Line


@pytest.mark.parametrize("check", sorted(V.CHECKS))
def test_checks_pass(check):
    rep = V.verify_ensemble(check, 25, seed=3)
    assert rep.ok, rep.dumps()


def test_worker_count_does_not_change_report():
    a = V.verify_ensemble("mesh", 24, seed=5, workers=1)
    b = V.verify_ensemble("mesh", 24, seed=5, workers=2)
    assert a.dumps() == b.dumps()


def test_report_shape():
    rep = V.verify_ensemble("simplicity", 5, seed=1)
    obj = json.loads(rep.dumps())
    assert {"trials", "failures", "worst_deviation", "seed"} <= set(obj)
    assert obj["trials"] == 5 and obj["failures"] == []


def test_failures_carry_seed_and_witness():
    def always_bad(rng):
        p, _ = E.hyperbolic(rng)
        return V.TrialOutcome(1.0, p, {"why": "forced"})
    rep = V.run_trials("forced", always_bad, 3, 9, {})
    assert not rep.ok and len(rep.failures) == 3
    f = rep.failures[1]
    assert (f.seed, f.trial, f.witness) == (9, 1, {"why": "forced"})
    # the witness polynomial is reproducible from the seed and index
    p, _ = E.hyperbolic(E.trial_rng(9, 1))
    assert f.polynomial == p.to_json()


def test_trials_must_be_positive():
    with pytest.raises(ValueError):
        V.run_trials("x", V.trial_simplicity, 0, 0, {})


class TestLines:
    def test_delta_real_line(self):
        rep = V.verify_line_preservation(delta_theta_operator(0.0, 1.0), Line(0, 0), 30, seed=2)
        assert rep.ok and rep.tags["orientation_signed"] == 30

    def test_single_factor_offset_half_step(self):
        for theta, h in ((0.0, 1.0), (1.2, 2.5)):
            e = complex(math.cos(theta), math.sin(theta))
            T = FiniteDifferenceOperator(0, 1, (-e, 1), 1j * h)
            signed, flipped = V.predicted_lines(T, Line(0, 0))
            assert abs(signed.offset - h / 2) < 1e-15 and abs(flipped.offset + h / 2) < 1e-15
            rep = V.verify_line_preservation(T, Line(0, 0), 30, seed=4)
            assert rep.ok and rep.worst_deviation <= 1e-8

    def test_tilted_line(self):
        phi = 0.6
        T = FiniteDifferenceOperator(0, 1, (-1, 1), 1j * complex(math.cos(phi), math.sin(phi)))
        rep = V.verify_line_preservation(T, Line(phi, 0.3), 20, seed=1)
        assert rep.ok

    def test_off_circle(self):
        with pytest.raises(NotUnitCircle):
            V.verify_line_preservation(FiniteDifferenceOperator(0, 1, (-2, 1), 1j), Line(0, 0), 5)

    def test_step_must_be_normal(self):
        with pytest.raises(InvalidOperator):
            V.verify_line_preservation(FiniteDifferenceOperator(0, 1, (-1, 1), 1.0), Line(0, 0), 5)


class TestStrips:
    def test_narrow(self):
        rep = V.verify_strip_preservation(0.0, 1.0, 0.2, 50, seed=1)
        assert rep.ok and rep.tags["simplicity_asserted"] == 50

    def test_wide_containment_only(self):
        rep = V.verify_strip_preservation(0.3, 1.0, 5.0, 30, seed=1)
        assert rep.ok and rep.tags["simplicity_asserted"] == 0

    def test_zero_width(self):
        rep = V.verify_strip_preservation(0.0, 1.0, 0.0, 20, seed=1)
        assert rep.ok

    def test_bad_params(self):
        with pytest.raises(ValueError):
            V.verify_strip_preservation(0.0, -1.0, 0.2, 5)
