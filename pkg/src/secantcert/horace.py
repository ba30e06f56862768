"""Differential Horace steps and replay of the inductive vanishing schedule.

A Horace step trades the goal ``h^i(I_{E ∪ 2S} ⊗ R) = 0`` (``S`` = ``g``
general points) for two smaller goals, one on the divisor ``H`` and one on
the residual bundle ``R(-H)``. :func:`horace_step_verify` evaluates all three
on concrete instances, which both discharges the subgoals and exercises the
implication.

The schedule replays build the chain of statements A/B/C level by level in
dependency order and discharge every goal numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .schemes import (
    Component,
    Location,
    SchemeDescriptor,
    degree,
    residual_split,
    restrict_to_divisor,
)
from .terracini import (
    CohomologyResult,
    Config,
    ScanReport,
    SecantResult,
    Status,
    cohomology,
    critical_z,
    inequality_oracles,
    nondefectivity_scan,
    parallel_map,
    product_with_line,
    secant_hypothesis,
    split_params,
    statement_A,
    statement_B,
    statement_C,
)
from .variety import BundleDegree, ConditionKind, DivisorHandle, MultiProjectiveFormat, basis_size


@dataclass(frozen=True)
class HoraceStep:
    format: MultiProjectiveFormat
    bundle: BundleDegree
    base: SchemeDescriptor
    divisor: DivisorHandle
    g: int
    which_h: int

    def __post_init__(self):
        if self.g < 0:
            raise ValueError("g must be >= 0")
        if self.which_h not in (0, 1):
            raise ValueError("which_h must be 0 or 1")
        self.divisor.check(self.format)

    def to_json(self) -> dict:
        return {
            "format": self.format.to_json(),
            "bundle": self.bundle.to_json(),
            "base": self.base.to_json(),
            "divisor": self.divisor.to_json(),
            "g": self.g,
            "which_h": self.which_h,
        }


@dataclass(frozen=True)
class HoraceRecord:
    step: HoraceStep
    trace_goal: CohomologyResult
    residual_goal: CohomologyResult
    combined_direct: CohomologyResult
    degrees_conserved: bool

    def _vanishes(self, res: CohomologyResult) -> bool:
        # a sampled h^i bounds the generic one from above, so 0 is a certificate
        return (res.h0 if self.step.which_h == 0 else res.h1) == 0

    @property
    def subgoals_vanish(self) -> bool:
        return self._vanishes(self.trace_goal) and self._vanishes(self.residual_goal)

    @property
    def direct_vanishes(self) -> bool:
        return self._vanishes(self.combined_direct)

    @property
    def sound(self) -> bool:
        return not self.subgoals_vanish or self.direct_vanishes

    def to_json(self) -> dict:
        return {
            "step": self.step.to_json(),
            "trace_goal": self.trace_goal.to_json(),
            "residual_goal": self.residual_goal.to_json(),
            "combined_direct": self.combined_direct.to_json(),
            "subgoals_vanish": self.subgoals_vanish,
            "direct_vanishes": self.direct_vanishes,
            "degrees_conserved": self.degrees_conserved,
            "sound": self.sound,
        }


def horace_goals(step: HoraceStep):
    """The three goals of a step as ``(format, bundle, scheme, divisor)`` tuples.

    Trace: ``(E ∩ H) ∪ F`` on ``H``; residual: ``Res_H(E) ∪ (2F, H)`` in the
    twisted bundle; direct: ``E ∪ 2S``. ``F`` and ``S`` have ``g`` points.
    """
    d = step.divisor
    fi = d.factor_index
    pair = residual_split(step.base, d, step.bundle)  # raises on twist underflow
    g = step.g
    trace_scheme = restrict_to_divisor(pair.trace, d) | SchemeDescriptor.of(
        Component(ConditionKind.REDUCED, Location.GENERAL_AMBIENT, g)
    )
    residual_scheme = pair.residual | SchemeDescriptor.of(
        Component(ConditionKind.DOUBLE_IN_DIVISOR, Location.GENERAL_ON_DIVISOR, g)
    )
    direct_scheme = step.base | SchemeDescriptor.double_points(g)
    return (
        (step.format.drop(fi), step.bundle.drop(fi), trace_scheme, None),
        (step.format, pair.residual_bundle, residual_scheme, d),
        (step.format, step.bundle, direct_scheme, d),
        pair,
    )


def horace_step_verify(step: HoraceStep, config: Config = Config()) -> HoraceRecord:
    trace, resid, direct, pair = horace_goals(step)
    fmt, d = step.format, step.divisor
    conserved = (
        degree(step.base, fmt, d) == degree(pair.residual, fmt, d) + degree(pair.trace, fmt, d)
        and degree(direct[2], fmt, d) == degree(trace[2], trace[0]) + degree(resid[2], fmt, d)
    )
    results = parallel_map(lambda goal: cohomology(goal[2], goal[0], goal[1], config, goal[3]),
                           (trace, resid, direct), config.workers)
    return HoraceRecord(step, *results, degrees_conserved=conserved)


# -- schedule replay --------------------------------------------------------

@dataclass
class Goal:
    description: str
    level: int
    status: str
    result: dict | None

    @property
    def ok(self) -> bool:
        return self.status in (Status.CERTIFIED_EXPECTED.value, Status.VACUOUS.value)

    def to_json(self) -> dict:
        return {"goal": self.description, "level": self.level, "status": self.status, "result": self.result}


@dataclass
class ScheduleTrace:
    theorem: str
    instance: dict
    hypotheses: dict
    goals: list[Goal] = field(default_factory=list)
    inequalities: list[dict] = field(default_factory=list)
    stages: list[ScheduleTrace] = field(default_factory=list)
    final_scan: ScanReport | None = None
    verdict: str = "Pending"

    @property
    def verified(self) -> bool:
        return self.verdict == "Verified"

    def to_json(self) -> dict:
        out = {
            "theorem": self.theorem,
            "instance": self.instance,
            "verdict": self.verdict,
            "hypotheses": self.hypotheses,
            "goals": [g.to_json() for g in self.goals],
            "inequalities": self.inequalities,
        }
        if self.stages:
            out["stages"] = [s.to_json() for s in self.stages]
        if self.final_scan is not None:
            out["final_scan"] = scan_to_json(self.final_scan)
        return out


def scan_to_json(report: ScanReport) -> dict:
    return {
        "format": report.format.to_json(),
        "bundle": report.bundle.to_json(),
        "mode": report.mode.value,
        "overall": report.overall,
        "label": report.label,
        "results": [r.to_json() for r in report.results],
    }


def _secant_json(res: SecantResult | None):
    return res.to_json() if res is not None else None


def _run_level(trace: ScheduleTrace, level: int, thunks, config: Config) -> None:
    for res in parallel_map(lambda th: th(), thunks, config.workers):
        trace.goals.append(Goal(res.label, level, res.status.value, res.to_json()))


def _i1_instance(y_format, y_bundle, t):
    return {"y_factors": y_format.to_json(), "y_degrees": y_bundle.to_json(), "t": t}


def replay_theorem_i1(
    y_format: MultiProjectiveFormat,
    y_bundle: BundleDegree,
    t: int,
    config: Config = Config(),
) -> ScheduleTrace:
    """Replay the vanishing schedule for ``(Y x P^1, L[t])`` level by level.

    Level 2 runs B(2,z) and A(2,z); level 3 runs C(3,z) and A(3,z); each
    level ``t' >= 4`` re-checks A(t'-2) and then runs C, B, A at ``t'``. All
    ``z`` are the two critical orders of the level.
    """
    if t < 2:
        raise ValueError("the schedule needs t >= 2")
    x, _, _ = product_with_line(y_format, y_bundle, t)
    n = x.ambient_dim
    alpha = basis_size(y_format, y_bundle)
    split = split_params(alpha, n)
    hyp_sec = secant_hypothesis(y_format, y_bundle, split.e1, config)
    hyp = {
        "n": n,
        "alpha": alpha,
        "split": split.to_json(),
        "n_at_least_3": n >= 3,
        "alpha_above_n_squared": alpha > n * n,
        "secant_e1_expected": hyp_sec is None or hyp_sec.defect == 0,
        "secant_e1": _secant_json(hyp_sec),
    }
    trace = ScheduleTrace("i1", _i1_instance(y_format, y_bundle, t), hyp)
    if not (hyp["n_at_least_3"] and hyp["alpha_above_n_squared"] and hyp["secant_e1_expected"]):
        trace.verdict = "HypothesisFailed"
        return trace

    def crit(level):
        return sorted(set(critical_z((level + 1) * alpha, n)))

    for level in range(2, t + 1):
        for z in crit(level):
            trace.inequalities.append(inequality_oracles(split, level, z).to_json())

    def A(level, z):
        return lambda: statement_A(y_format, y_bundle, level, z, config)

    def B(level, z):
        return lambda: statement_B(y_format, y_bundle, level, z, split, config)

    def C(level, z):
        return lambda: statement_C(y_format, y_bundle, level, z, split, config)

    _run_level(trace, 2, [B(2, z) for z in crit(2)], config)
    _run_level(trace, 2, [A(2, z) for z in crit(2)], config)
    if t >= 3:
        _run_level(trace, 3, [C(3, z) for z in crit(3)], config)
        _run_level(trace, 3, [A(3, z) for z in crit(3)], config)
    for level in range(4, t + 1):
        _run_level(trace, level, [A(level - 2, z) for z in crit(level - 2)], config)
        _run_level(trace, level, [C(level, z) for z in crit(level)], config)
        _run_level(trace, level, [B(level, z) for z in crit(level)], config)
        _run_level(trace, level, [A(level, z) for z in crit(level)], config)

    claims_ok = all(r["claim1_ok"] and r["claim2_ok"] for r in trace.inequalities)
    goals_ok = all(g.ok for g in trace.goals)
    trace.verdict = "Verified" if claims_ok and goals_ok else "Failed"
    return trace


def replay_theorem_i1_0(
    y_format: MultiProjectiveFormat,
    y_bundle: BundleDegree,
    t: int,
    config: Config = Config(),
) -> ScheduleTrace:
    """Instance check of the variant that only needs ``σ_{e1-1}(Y)`` to be non-defective.

    Hypotheses are ``n >= 3``, ``alpha >= 2n^2 + 4n`` and the ``(e1-1)``-secant
    check; the conclusion A(t, z) is verified at both critical ``z``.
    """
    if t < 2:
        raise ValueError("needs t >= 2")
    x, _, _ = product_with_line(y_format, y_bundle, t)
    n = x.ambient_dim
    alpha = basis_size(y_format, y_bundle)
    split = split_params(alpha, n).shifted()
    hyp_sec = secant_hypothesis(y_format, y_bundle, split.e1, config)
    hyp = {
        "n": n,
        "alpha": alpha,
        "split": split.to_json(),
        "n_at_least_3": n >= 3,
        "alpha_at_least_2n2_4n": alpha >= 2 * n * n + 4 * n,
        "secant_e1_minus_1_expected": hyp_sec is None or hyp_sec.defect == 0,
        "secant_e1_minus_1": _secant_json(hyp_sec),
    }
    trace = ScheduleTrace("i1.0", _i1_instance(y_format, y_bundle, t), hyp)
    if not (hyp["n_at_least_3"] and hyp["alpha_at_least_2n2_4n"] and hyp["secant_e1_minus_1_expected"]):
        trace.verdict = "HypothesisFailed"
        return trace
    zs = sorted(set(critical_z((t + 1) * alpha, n)))
    _run_level(trace, t, [(lambda z=z: statement_A(y_format, y_bundle, t, z, config)) for z in zs], config)
    trace.verdict = "Verified" if all(g.ok for g in trace.goals) else "Failed"
    return trace


def check_minus_degrees(n1: int, n2: int, degrees) -> None:
    degrees = list(degrees)
    if n1 < 1 or n2 < 1:
        raise ValueError("n1 and n2 must be >= 1")
    if len(degrees) < 3:
        raise ValueError("need k >= 3 degrees")
    if any(d < 2 for d in degrees):
        raise ValueError("every degree must be >= 2")
    if degrees[0] < 3 or degrees[1] < 3:
        raise ValueError("d1 >= 3 and d2 >= 3 are required")


def replay_theorem_minus(n1: int, n2: int, degrees, config: Config = Config()) -> ScheduleTrace:
    """Grow ``Y = P^{n1} x P^{n2}`` one P^1 at a time, replaying the schedule at each stage.

    Stage ``j`` treats ``Y_j x P^1`` with ``t = d_{j+3}``; the full product is
    then scanned at its critical orders.
    """
    check_minus_degrees(n1, n2, degrees)
    degrees = tuple(degrees)
    y_format = MultiProjectiveFormat((n1, n2))
    y_bundle = BundleDegree(degrees[:2])
    trace = ScheduleTrace(
        "minus",
        {"factors": [n1, n2], "extra_p1": len(degrees) - 2, "degrees": list(degrees)},
        {"degrees_ok": True},
    )
    for d in degrees[2:]:
        n = y_format.ambient_dim + 1
        alpha = basis_size(y_format, y_bundle)
        stage = replay_theorem_i1(y_format, y_bundle, d, config)
        stage.hypotheses["stage_alpha_above_n_squared"] = alpha > n * n
        trace.stages.append(stage)
        y_format, y_bundle = y_format.append_p1(), y_bundle.append(d)
    trace.final_scan = nondefectivity_scan(y_format, y_bundle, config, "critical")
    if any(s.verdict == "HypothesisFailed" for s in trace.stages):
        trace.verdict = "HypothesisFailed"
    elif all(s.verified for s in trace.stages) and trace.final_scan.nondefective:
        trace.verdict = "Verified"
    else:
        trace.verdict = "Failed"
    return trace
