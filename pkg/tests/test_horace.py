import random

import pytest

from generators import random_horace_step
from secantcert.horace import (
    HoraceStep,
    check_minus_degrees,
    horace_goals,
    horace_step_verify,
    replay_theorem_i1,
    replay_theorem_i1_0,
    replay_theorem_minus,
)
from secantcert.schemes import SchemeDescriptor, degree
from secantcert.terracini import nondefectivity_scan
from secantcert.variety import DivisorHandle

from conftest import bun, fmt


def test_empty_step_splits_sections():
    # g = 0, E empty: h0 of L restricted to H plus h0 of L(-H)
    step = HoraceStep(fmt(1, 1, 1), bun(3, 3, 2), SchemeDescriptor(), DivisorHandle(2), 0, 0)
    rec = horace_step_verify(step)
    assert (rec.trace_goal.h0, rec.residual_goal.h0, rec.combined_direct.h0) == (16, 32, 48)
    assert rec.degrees_conserved and rec.sound
    assert not rec.subgoals_vanish


def test_step_h1_vanishing_transfers():
    step = HoraceStep(fmt(1, 1, 1), bun(3, 3, 2), SchemeDescriptor.double_points(4), DivisorHandle(2), 4, 1)
    rec = horace_step_verify(step)
    assert rec.subgoals_vanish and rec.direct_vanishes and rec.sound
    assert rec.degrees_conserved
    assert rec.to_json()["sound"] is True


def test_step_degrees_add_up():
    step = HoraceStep(fmt(2, 1), bun(3, 2), SchemeDescriptor.double_points(3), DivisorHandle(1), 2, 0)
    trace, resid, direct, _ = horace_goals(step)
    assert degree(direct[2], direct[0], direct[3]) == degree(trace[2], trace[0]) + degree(resid[2], resid[0], resid[3])


def test_twist_underflow_rejected():
    step = HoraceStep(fmt(1, 1, 1), bun(3, 3, 0), SchemeDescriptor(), DivisorHandle(2), 0, 0)
    with pytest.raises(ValueError, match="negative"):
        horace_step_verify(step)


@pytest.mark.parametrize("kw", [{"g": -1}, {"which_h": 2}])
def test_step_validation(kw):
    args = dict(format=fmt(1, 1), bundle=bun(2, 2), base=SchemeDescriptor(), divisor=DivisorHandle(1), g=0, which_h=0)
    args.update(kw)
    with pytest.raises(ValueError):
        HoraceStep(**args)


def test_divisor_must_sit_on_line_factor():
    with pytest.raises(ValueError):
        HoraceStep(fmt(1, 2), bun(2, 2), SchemeDescriptor(), DivisorHandle(1), 0, 0)


def test_random_steps_sound():
    rng = random.Random(7)
    for _ in range(25):
        rec = horace_step_verify(random_horace_step(rng))
        assert rec.degrees_conserved
        assert rec.sound, rec.to_json()


@pytest.mark.parametrize("t", [2, 3])
def test_i1_replay_verified_implies_scan(t):
    y, ly = fmt(1, 1), bun(3, 3)
    trace = replay_theorem_i1(y, ly, t)
    assert trace.verdict == "Verified"
    assert all(g.ok for g in trace.goals)
    scan = nondefectivity_scan(y.append_p1(), ly.append(t), mode="critical")
    assert scan.nondefective


def test_i1_replay_schedule_shape():
    trace = replay_theorem_i1(fmt(1, 1), bun(3, 3), 4)
    names = [g.description.split("(")[0] for g in trace.goals]
    assert names[0] == "B" and "C" in names
    assert [g.level for g in trace.goals] == sorted(g.level for g in trace.goals)


def test_i1_hypothesis_failed_on_small_y():
    trace = replay_theorem_i1(fmt(1), bun(4), 2)
    assert trace.verdict == "HypothesisFailed"
    assert trace.goals == []


def test_i1_rejects_small_t():
    with pytest.raises(ValueError):
        replay_theorem_i1(fmt(1, 1), bun(3, 3), 1)


def test_i1_0_replay():
    trace = replay_theorem_i1_0(fmt(1, 1), bun(4, 5), 2)
    assert trace.verdict == "Verified"
    assert trace.hypotheses["split"]["e1"] == 9


@pytest.mark.parametrize("n1,n2,degs", [(1, 1, (3, 3, 2)), (2, 1, (3, 3, 2))])
def test_minus_replay(n1, n2, degs):
    trace = replay_theorem_minus(n1, n2, degs)
    assert trace.verdict == "Verified"
    assert len(trace.stages) == len(degs) - 2
    assert trace.final_scan.nondefective
    js = trace.to_json()
    assert js["final_scan"]["overall"] == "NonDefective"


@pytest.mark.parametrize("n1,n2,degs", [(1, 1, (2, 3, 2)), (1, 1, (3, 3)), (0, 1, (3, 3, 2)), (1, 1, (3, 3, 1))])
def test_minus_degree_checks(n1, n2, degs):
    with pytest.raises(ValueError):
        check_minus_degrees(n1, n2, degs)
