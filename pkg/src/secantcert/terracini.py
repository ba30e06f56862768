"""Dimension engine built on Terracini's lemma.

For a scheme ``Z`` and a bundle with ``N`` sections, the stacked condition
rows of a sampled realization of ``Z`` have rank ``rank`` and
``h^0(I_Z ⊗ L) = N - rank``. A sampled configuration can only lose rank
compared to a general one, so a sampled ``h^0`` equal to the analytic
minimum ``max(0, N - deg Z)`` certifies the generic value. The converse is
not certified: a larger ``h^0`` after all trials is Monte-Carlo evidence of
defectivity only.
"""

from __future__ import annotations

import enum
import hashlib
import json
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import ceil

from .exact_linalg import DEFAULT_PRIMES, PrimeField, rank_mod_p
from .schemes import Component, Location, SchemeDescriptor, degree, realize
from .variety import (
    BundleDegree,
    ConditionKind,
    DivisorHandle,
    MultiProjectiveFormat,
    basis_size,
    condition_rows,
)

DEFAULT_SEED = 20240617
WORKERS_ENV = "SECANTCERT_WORKERS"


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class Config:
    """Randomness and retry policy.

    ``trials`` fresh seeds are tried for each prime in ``primes``, in order,
    until one realization attains the expected value.
    """

    primes: tuple[int, ...] = DEFAULT_PRIMES
    seed: int = DEFAULT_SEED
    trials: int = 3
    workers: int = field(default_factory=_default_workers)

    def __post_init__(self):
        if not self.primes:
            raise ValueError("at least one prime is required")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for p in self.primes:
            PrimeField(p)

    @property
    def max_trials(self) -> int:
        return self.trials * len(self.primes)


def derive_seed(master: int, *parts) -> int:
    """Deterministic 64-bit seed from a master seed and a task identity."""
    blob = json.dumps([master, *parts], sort_keys=True, separators=(",", ":"))
    return int.from_bytes(hashlib.sha256(blob.encode()).digest()[:8], "big")


def parallel_map(fn, items, workers: int):
    """Map preserving input order; the compiled rank kernel releases the GIL."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


class Verdict(str, enum.Enum):
    CERTIFIED_EXPECTED = "CertifiedExpected"
    EXCEEDS_EXPECTED = "ExceedsExpected"


@dataclass(frozen=True)
class CohomologyResult:
    h0: int
    h1: int
    rank: int
    expected_h0: int
    verdict: Verdict
    trials_used: int
    n_sections: int
    degree: int
    matrix_shape: tuple[int, int]
    prime: int

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED_EXPECTED

    def to_json(self) -> dict:
        return {
            "h0": self.h0,
            "h1": self.h1,
            "rank": self.rank,
            "expected_h0": self.expected_h0,
            "verdict": self.verdict.value,
            "trials_used": self.trials_used,
            "n_sections": self.n_sections,
            "degree": self.degree,
            "matrix_shape": list(self.matrix_shape),
            "prime": self.prime,
        }


def condition_matrix(s, fmt, bundle, field: PrimeField, rng, divisor=None) -> list[list[int]]:
    rows: list[list[int]] = []
    for pt, kind in realize(s, fmt, field, rng, divisor):
        rows.extend(condition_rows(pt, kind, fmt, bundle, field, divisor))
    return rows


def task_identity(s: SchemeDescriptor, fmt, bundle, divisor=None) -> list:
    return [
        fmt.to_json(),
        bundle.to_json(),
        s.to_json(),
        divisor.to_json() if divisor is not None else None,
    ]


def cohomology(
    s: SchemeDescriptor,
    fmt: MultiProjectiveFormat,
    bundle: BundleDegree,
    config: Config = Config(),
    divisor: DivisorHandle | None = None,
) -> CohomologyResult:
    """``h^0`` and ``h^1`` of ``I_s ⊗ bundle`` with retries over seeds and primes."""
    n_sections = basis_size(fmt, bundle)
    deg = degree(s, fmt, divisor)
    expected = max(0, n_sections - deg)
    task = task_identity(s, fmt, bundle, divisor)
    best = None
    used = 0
    for p in config.primes:
        fld = PrimeField(p)
        for k in range(config.trials):
            used += 1
            rng = random.Random(derive_seed(config.seed, task, p, k))
            rows = condition_matrix(s, fmt, bundle, fld, rng, divisor)
            rank = rank_mod_p(rows, fld)
            h0 = n_sections - rank
            if best is None or h0 < best[0]:
                best = (h0, rank, len(rows), p)
            if h0 == expected:
                break
        if best[0] == expected:
            break
    h0, rank, nrows, p = best
    return CohomologyResult(
        h0=h0,
        h1=deg - rank,
        rank=rank,
        expected_h0=expected,
        verdict=Verdict.CERTIFIED_EXPECTED if h0 == expected else Verdict.EXCEEDS_EXPECTED,
        trials_used=used,
        n_sections=n_sections,
        degree=deg,
        matrix_shape=(nrows, n_sections),
        prime=p,
    )


# -- secant dimensions ------------------------------------------------------

@dataclass(frozen=True)
class SplitParams:
    """``alpha = n*e1 + f1``; the canonical split has ``e1 = alpha // n``.

    Non-canonical pairs (for instance ``(e1 - 1, f1 + n)``) are allowed as long
    as the identity holds.
    """

    alpha: int
    n: int
    e1: int
    f1: int

    def __post_init__(self):
        if self.alpha != self.n * self.e1 + self.f1 or self.e1 < 0 or self.f1 < 0:
            raise ValueError(f"invalid split {self}")

    @property
    def canonical(self) -> bool:
        return self.f1 < self.n

    def shifted(self) -> SplitParams:
        """The split ``(e1 - 1, f1 + n)`` used when only ``σ_{e1-1}(Y)`` is known."""
        return SplitParams(self.alpha, self.n, self.e1 - 1, self.f1 + self.n)

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "n": self.n, "e1": self.e1, "f1": self.f1}


def split_params(alpha: int, n: int) -> SplitParams:
    if alpha < 1 or n < 1:
        raise ValueError("alpha and n must be positive")
    e1 = alpha // n
    return SplitParams(alpha, n, e1, alpha - n * e1)


def critical_z(n_sections: int, n: int) -> tuple[int, int]:
    """``(floor(N/(n+1)), ceil(N/(n+1)))``: the only secant orders worth testing."""
    if n_sections < 1 or n < 1:
        raise ValueError("N and n must be positive")
    return n_sections // (n + 1), -(-n_sections // (n + 1))


def admissible_z(n_sections: int, n: int) -> list[int]:
    """Every ``z >= 1`` with ``(n+1) z <= N + n``."""
    return list(range(1, (n_sections + n) // (n + 1) + 1))


@dataclass(frozen=True)
class SecantResult:
    z: int
    dim: int
    expected: int
    defect: int
    verdict: Verdict
    cohomology: CohomologyResult

    def to_json(self) -> dict:
        return {
            "z": self.z,
            "dim": self.dim,
            "expected": self.expected,
            "defect": self.defect,
            "verdict": self.verdict.value,
            "cohomology": self.cohomology.to_json(),
        }


def secant_dimension(
    fmt: MultiProjectiveFormat,
    bundle: BundleDegree,
    z: int,
    config: Config = Config(),
) -> SecantResult:
    if z < 1:
        raise ValueError("z must be >= 1")
    res = cohomology(SchemeDescriptor.double_points(z), fmt, bundle, config)
    N = res.n_sections
    dim = N - 1 - res.h0
    expected = min(N - 1, z * (fmt.ambient_dim + 1) - 1)
    return SecantResult(z, dim, expected, expected - dim, res.verdict, res)


class ScanMode(str, enum.Enum):
    CRITICAL = "critical"
    ALL = "all"


@dataclass(frozen=True)
class ScanReport:
    format: MultiProjectiveFormat
    bundle: BundleDegree
    mode: ScanMode
    results: tuple[SecantResult, ...]
    config: Config

    @property
    def nondefective(self) -> bool:
        return all(r.defect == 0 for r in self.results)

    @property
    def overall(self) -> str:
        return "NonDefective" if self.nondefective else "Defective"

    @property
    def label(self) -> str:
        if self.nondefective:
            return "non-defective (certified)"
        primes = ", ".join(str(p) for p in self.config.primes)
        return f"defective (Monte-Carlo, {self.config.max_trials} trials, primes {primes})"

    def defects(self) -> dict[int, int]:
        return {r.z: r.defect for r in self.results}


def scan_z_values(fmt, bundle, mode: ScanMode | str) -> list[int]:
    N = basis_size(fmt, bundle)
    n = fmt.ambient_dim
    if ScanMode(mode) is ScanMode.CRITICAL:
        return sorted(set(z for z in critical_z(N, n) if z >= 1))
    return admissible_z(N, n)


def nondefectivity_scan(
    fmt: MultiProjectiveFormat,
    bundle: BundleDegree,
    config: Config = Config(),
    mode: ScanMode | str = ScanMode.CRITICAL,
) -> ScanReport:
    mode = ScanMode(mode)
    zs = scan_z_values(fmt, bundle, mode)
    results = parallel_map(lambda z: secant_dimension(fmt, bundle, z, config), zs, config.workers)
    return ScanReport(fmt, bundle, mode, tuple(results), config)


# -- statements A, B, C -----------------------------------------------------

class Status(str, enum.Enum):
    CERTIFIED_EXPECTED = "CertifiedExpected"
    EXCEEDS_EXPECTED = "ExceedsExpected"
    VACUOUS = "Vacuous"


@dataclass(frozen=True)
class StatementResult:
    name: str
    t: int
    z: int
    holds: bool
    status: Status
    bound: int
    cohomology: CohomologyResult | None = None
    printed_bound: int | None = None

    @property
    def label(self) -> str:
        return f"{self.name}({self.t},{self.z})"

    def to_json(self) -> dict:
        out = {
            "statement": self.label,
            "holds": self.holds,
            "status": self.status.value,
            "bound": self.bound,
        }
        if self.printed_bound is not None:
            out["printed_bound"] = self.printed_bound
            out["printed_bound_holds"] = (
                self.cohomology is None or self.cohomology.h0 == self.printed_bound
            )
        out["cohomology"] = self.cohomology.to_json() if self.cohomology else None
        return out


def product_with_line(y_format: MultiProjectiveFormat, y_bundle: BundleDegree, t: int):
    """``(X, L[t], H)`` for ``X = Y x P^1`` and ``H = Y x {(1:0)}``."""
    if len(y_format.factor_dims) != len(y_bundle.degrees):
        raise ValueError("Y format and bundle lengths differ")
    x = y_format.append_p1()
    return x, y_bundle.append(t), DivisorHandle(x.k - 1)


def _check_split(split: SplitParams, alpha: int, n: int) -> None:
    if split.alpha != alpha or split.n != n:
        raise ValueError(f"split {split} does not match alpha={alpha}, n={n}")


def _statement(name, t, z, s, x, bundle, config, divisor, bound, printed=None):
    res = cohomology(s, x, bundle, config, divisor)
    holds = res.h0 <= bound
    status = Status.CERTIFIED_EXPECTED if res.h0 == res.expected_h0 else Status.EXCEEDS_EXPECTED
    return StatementResult(name, t, z, holds, status, bound, res, printed)


def statement_A(y_format, y_bundle, t: int, z: int, config: Config = Config()) -> StatementResult:
    """``h^0(I_{2S} ⊗ L[t]) = max(alpha (t+1) - (n+1) z, 0)`` for ``z`` general points."""
    if t < 0 or z < 1:
        raise ValueError("need t >= 0 and z >= 1")
    x, bundle, _ = product_with_line(y_format, y_bundle, t)
    alpha = basis_size(y_format, y_bundle)
    n = x.ambient_dim
    bound = max(alpha * (t + 1) - (n + 1) * z, 0)
    return _statement("A", t, z, SchemeDescriptor.double_points(z), x, bundle, config, None, bound)


def statement_B_scheme(z: int, split: SplitParams) -> SchemeDescriptor:
    e, f = split.e1, split.f1
    return SchemeDescriptor.of(
        Component(ConditionKind.DOUBLE_AMBIENT, Location.GENERAL_AMBIENT, z - e - f),
        Component(ConditionKind.DOUBLE_IN_DIVISOR, Location.GENERAL_ON_DIVISOR, f),
        Component(ConditionKind.REDUCED, Location.GENERAL_ON_DIVISOR, e),
    )


def statement_B(y_format, y_bundle, t: int, z: int, split: SplitParams, config: Config = Config()) -> StatementResult:
    """Vanishing for ``z-e1-f1`` double points, ``f1`` double points of H and ``e1`` points of H in ``L[t-1]``.

    The bound subtracts the scheme's own degree ``n f1 + e1`` on H. The
    alternative reading ``n e1 + f1`` is carried along as ``printed_bound``.
    """
    if t < 1:
        raise ValueError("B(t, z) needs t >= 1")
    x, bundle, div = product_with_line(y_format, y_bundle, t - 1)
    alpha = basis_size(y_format, y_bundle)
    n = x.ambient_dim
    _check_split(split, alpha, n)
    e, f = split.e1, split.f1
    if z < e + f:
        return StatementResult("B", t, z, True, Status.VACUOUS, 0)
    w = z - e - f
    bound = max(0, t * alpha - (n + 1) * w - n * f - e)
    printed = max(0, t * alpha - (n + 1) * w - n * e - f)
    return _statement("B", t, z, statement_B_scheme(z, split), x, bundle, config, div, bound, printed)


def statement_C(y_format, y_bundle, t: int, z: int, split: SplitParams, config: Config = Config()) -> StatementResult:
    """``h^0(I_W ⊗ L[t-2]) <= max(0, (t-1) alpha - deg W)`` for ``W`` = ``max(0, z-e1-f1)`` double points."""
    if t < 2:
        raise ValueError("C(t, z) needs t >= 2")
    x, bundle, _ = product_with_line(y_format, y_bundle, t - 2)
    alpha = basis_size(y_format, y_bundle)
    n = x.ambient_dim
    _check_split(split, alpha, n)
    w = max(0, z - split.e1 - split.f1)
    if w == 0:
        return StatementResult("C", t, z, True, Status.VACUOUS, (t - 1) * alpha)
    bound = max(0, (t - 1) * alpha - (n + 1) * w)
    return _statement("C", t, z, SchemeDescriptor.double_points(w), x, bundle, config, None, bound)


# -- arithmetic claims ------------------------------------------------------

@dataclass(frozen=True)
class InequalityRecord:
    t: int
    z: int
    delta: int
    w: int
    claim1_ok: bool
    claim2_ok: bool
    claim2_vacuous: bool
    fn_t: int
    fn2_closed_form: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def fn_value(split: SplitParams, t: int) -> int:
    n, e, f = split.n, split.e1, split.f1
    return (t + 1) * n * e + (t + 1) * f - (n + 1) * t * f - (n + 1) * e - n * (n + 2)


def fn2_closed_form(split: SplitParams) -> int:
    """The closed form ``(2n-1) n e1 + (1-2n) f1 - n(n+2)`` quoted for ``t = 2``.

    It differs from ``fn_value(split, 2)`` by ``(2n-1)(n-1) e1``; both are
    reported.
    """
    n, e, f = split.n, split.e1, split.f1
    return (2 * n - 1) * n * e + (1 - 2 * n) * f - n * (n + 2)


def inequality_oracles(split: SplitParams, t: int, z: int) -> InequalityRecord:
    n, e, f, alpha = split.n, split.e1, split.f1, split.alpha
    delta = (t + 1) * alpha + n - z * (n + 1)
    w = z - (t - 1) * e - f
    claim1 = delta + z >= t * f + e + n
    vacuous = w < e
    claim2 = vacuous or n * f + n * (w - e) + e <= alpha
    return InequalityRecord(t, z, delta, w, claim1, claim2, vacuous, fn_value(split, t), fn2_closed_form(split))


# -- one-step results -------------------------------------------------------

def secant_hypothesis(y_format, y_bundle, e: int, config: Config = Config()) -> SecantResult | None:
    """``σ_e(Y)`` with its expected dimension check; ``None`` when ``e == 0``."""
    if e <= 0:
        return None
    return secant_dimension(y_format, y_bundle, e, config)


@dataclass(frozen=True)
class PropU1Result:
    z: int
    status: str
    split: SplitParams
    hypothesis: SecantResult | None = None
    secant: SecantResult | None = None

    @property
    def verified(self) -> bool:
        return self.status == "Verified"

    def to_json(self) -> dict:
        return {
            "z": self.z,
            "status": self.status,
            "split": self.split.to_json(),
            "hypothesis": self.hypothesis.to_json() if self.hypothesis else None,
            "secant": self.secant.to_json() if self.secant else None,
        }


def prop_u1_check(y_format, y_bundle, z: int, config: Config = Config()) -> PropU1Result:
    """Check that ``σ_z(Y x P^1, L[1])`` has dimension ``z(n+1)-1`` when ``n(z-e1)+e1 <= alpha``."""
    if z < 1:
        raise ValueError("z must be >= 1")
    x, bundle, _ = product_with_line(y_format, y_bundle, 1)
    n = x.ambient_dim
    split = split_params(basis_size(y_format, y_bundle), n)
    if n * (z - split.e1) + split.e1 > split.alpha:
        return PropU1Result(z, "NotApplicable", split)
    hyp = secant_hypothesis(y_format, y_bundle, split.e1, config)
    if hyp is not None and hyp.defect != 0:
        return PropU1Result(z, "HypothesisFailed", split, hyp)
    sec = secant_dimension(x, bundle, z, config)
    ok = sec.dim == z * (n + 1) - 1
    return PropU1Result(z, "Verified" if ok else "Failed", split, hyp, sec)
