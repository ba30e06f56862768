"""Multiprojective formats, multihomogeneous monomial bases and condition rows.

A format ``P^{n_1} x ... x P^{n_k}`` together with a multidegree
``(d_1, ..., d_k)`` fixes the complete linear system ``|O(d_1, ..., d_k)|``.
Its basis is the tensor product of the degree-``d_i`` monomials of each
factor, ordered with the first factor varying slowest and graded-lex order
inside each factor (so the first basis element is ``x_0^{d_1} ... ``).

Conditions imposed by points are rows of evaluations and first derivatives
of the basis, taken in the affine chart ``x_0 != 0`` of every factor.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from math import comb, prod

from .exact_linalg import PrimeField


class ConditionKind(str, enum.Enum):
    REDUCED = "Reduced"
    DOUBLE_AMBIENT = "DoubleAmbient"
    DOUBLE_IN_DIVISOR = "DoubleInDivisor"


@dataclass(frozen=True)
class MultiProjectiveFormat:
    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.factor_dims)
        object.__setattr__(self, "factor_dims", dims)
        if not dims:
            raise ValueError("a format needs at least one factor")
        if any(n < 1 for n in dims):
            raise ValueError(f"factor dimensions must be >= 1, got {dims}")

    @property
    def k(self) -> int:
        return len(self.factor_dims)

    @property
    def ambient_dim(self) -> int:
        return sum(self.factor_dims)

    def drop(self, i: int) -> MultiProjectiveFormat:
        dims = self.factor_dims[:i] + self.factor_dims[i + 1:]
        return MultiProjectiveFormat(dims)

    def append_p1(self) -> MultiProjectiveFormat:
        return MultiProjectiveFormat(self.factor_dims + (1,))

    def to_json(self) -> list[int]:
        return list(self.factor_dims)


@dataclass(frozen=True)
class BundleDegree:
    degrees: tuple[int, ...]

    def __post_init__(self):
        degs = tuple(int(d) for d in self.degrees)
        object.__setattr__(self, "degrees", degs)
        if any(d < 0 for d in degs):
            raise ValueError(f"degrees must be >= 0, got {degs}")

    def twist(self, i: int, delta: int) -> BundleDegree:
        degs = list(self.degrees)
        if degs[i] + delta < 0:
            raise ValueError(f"twisting factor {i} of {self.degrees} by {delta} goes negative")
        degs[i] += delta
        return BundleDegree(tuple(degs))

    def drop(self, i: int) -> BundleDegree:
        return BundleDegree(self.degrees[:i] + self.degrees[i + 1:])

    def append(self, t: int) -> BundleDegree:
        return BundleDegree(self.degrees + (t,))

    def to_json(self) -> list[int]:
        return list(self.degrees)


def _check_lengths(fmt: MultiProjectiveFormat, bundle: BundleDegree) -> None:
    if len(fmt.factor_dims) != len(bundle.degrees):
        raise ValueError(
            f"format has {len(fmt.factor_dims)} factors but bundle has "
            f"{len(bundle.degrees)} degrees"
        )


def basis_size(fmt: MultiProjectiveFormat, bundle: BundleDegree) -> int:
    """``h^0`` of the bundle: the product of ``C(n_i + d_i, n_i)``."""
    _check_lengths(fmt, bundle)
    return prod(comb(n + d, n) for n, d in zip(fmt.factor_dims, bundle.degrees))


@lru_cache(maxsize=None)
def factor_monomials(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of length ``n+1`` summing to ``d``, in graded-lex order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(n + 1), d):
        e = [0] * (n + 1)
        for j in combo:
            e[j] += 1
        out.append(tuple(e))
    return tuple(out)


def monomial_basis(fmt: MultiProjectiveFormat, bundle: BundleDegree) -> list[tuple[tuple[int, ...], ...]]:
    _check_lengths(fmt, bundle)
    per_factor = [factor_monomials(n, d) for n, d in zip(fmt.factor_dims, bundle.degrees)]
    return list(itertools.product(*per_factor))


@dataclass(frozen=True)
class MPPoint:
    """A point of a multiprojective space: one coordinate vector per factor."""

    coords: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        coords = tuple(tuple(int(x) for x in v) for v in self.coords)
        object.__setattr__(self, "coords", coords)
        for v in coords:
            if not any(v):
                raise ValueError("a factor coordinate vector is zero")

    def fits(self, fmt: MultiProjectiveFormat) -> bool:
        return len(self.coords) == fmt.k and all(
            len(v) == n + 1 for v, n in zip(self.coords, fmt.factor_dims)
        )

    def drop(self, i: int) -> MPPoint:
        return MPPoint(self.coords[:i] + self.coords[i + 1:])

    def to_json(self) -> list[list[int]]:
        return [list(v) for v in self.coords]


@dataclass(frozen=True)
class DivisorHandle:
    """The divisor ``H = {o} x (other factors)`` cut by a point ``o`` of a P^1 factor.

    The residual twist lowers the degree on ``factor_index`` by one.
    """

    factor_index: int
    chart_value: tuple[int, int] = (1, 0)

    def __post_init__(self):
        cv = tuple(int(x) for x in self.chart_value)
        object.__setattr__(self, "chart_value", cv)
        if len(cv) != 2 or cv[0] == 0:
            raise ValueError("chart_value must be a point (a:b) of P^1 with a != 0")

    def check(self, fmt: MultiProjectiveFormat) -> None:
        if not 0 <= self.factor_index < fmt.k:
            raise ValueError(f"divisor factor {self.factor_index} out of range for {fmt}")
        if fmt.factor_dims[self.factor_index] != 1:
            raise ValueError("the divisor factor must be a projective line")
        if fmt.k < 2:
            raise ValueError("the divisor needs at least one other factor")

    def contains(self, p: MPPoint, field: PrimeField | None = None) -> bool:
        a, b = self.chart_value
        x0, x1 = p.coords[self.factor_index]
        det = a * x1 - b * x0
        return (det % field.modulus if field else det) == 0

    def to_json(self) -> dict:
        return {"factor_index": self.factor_index, "chart_value": list(self.chart_value)}


def sample_point(fmt: MultiProjectiveFormat, field: PrimeField, rng: random.Random) -> MPPoint:
    """Uniform point of the field's affine cones, chart coordinate forced nonzero."""
    p = field.modulus
    coords = []
    for n in fmt.factor_dims:
        c0 = 0
        while c0 == 0:
            c0 = rng.randrange(p)
        coords.append((c0,) + tuple(rng.randrange(p) for _ in range(n)))
    return MPPoint(tuple(coords))


def on_divisor(p: MPPoint, d: DivisorHandle) -> MPPoint:
    coords = list(p.coords)
    if len(coords[d.factor_index]) != 2:
        raise ValueError("divisor factor of the point is not a projective line")
    coords[d.factor_index] = d.chart_value
    return MPPoint(tuple(coords))


def _kron(vectors, p):
    out = [1]
    for v in vectors:
        if p is None:
            out = [a * b for a in out for b in v]
        else:
            out = [a * b % p for a in out for b in v]
    return out


def _factor_values(u, mons, p):
    """Monomial values and derivatives along each affine coordinate ``u_j``."""
    n = len(u)
    d = sum(mons[0]) if mons else 0
    powers = []
    for x in u:
        row = [1]
        for _ in range(d):
            row.append(row[-1] * x if p is None else row[-1] * x % p)
        powers.append(row)
    vals, derivs = [], [[] for _ in range(n)]
    for e in mons:
        terms = [powers[j][e[j + 1]] for j in range(n)]
        v = prod(terms)
        vals.append(v if p is None else v % p)
        for j in range(n):
            a = e[j + 1]
            if a == 0:
                derivs[j].append(0)
                continue
            rest = prod(terms[:j] + terms[j + 1:]) * a * powers[j][a - 1]
            derivs[j].append(rest if p is None else rest % p)
    return vals, derivs


def _affine(p: MPPoint, field: PrimeField | None):
    out = []
    for v in p.coords:
        if field is None:
            if v[0] != 1:
                raise ValueError("integer rows need chart coordinate 1 on every factor")
            out.append(v[1:])
        else:
            q = field.modulus
            if v[0] % q == 0:
                raise ValueError("chart coordinate vanishes")
            inv = field.inv(v[0])
            out.append(tuple(x * inv % q for x in v[1:]))
    return out


def condition_rows(
    p: MPPoint,
    kind: ConditionKind,
    fmt: MultiProjectiveFormat,
    bundle: BundleDegree,
    field: PrimeField | None = None,
    divisor: DivisorHandle | None = None,
) -> list[list[int]]:
    """Rows of conditions imposed on ``|bundle|`` by a point of the given kind.

    With ``field=None`` the rows are computed over the integers; every factor
    of ``p`` must then have chart coordinate 1.

    Reduced gives the value row; DoubleAmbient adds one derivative row per
    affine direction of every factor; DoubleInDivisor skips the directions of
    the divisor factor. Derivative rows of degree-0 factors are zero and kept.
    """
    _check_lengths(fmt, bundle)
    if not p.fits(fmt):
        raise ValueError("point does not match the format")
    kind = ConditionKind(kind)
    if kind is ConditionKind.DOUBLE_IN_DIVISOR:
        if divisor is None:
            raise ValueError("DoubleInDivisor needs a divisor")
        divisor.check(fmt)
        if not divisor.contains(p, field):
            raise ValueError("point is not on the divisor")
    q = None if field is None else field.modulus
    affine = _affine(p, field)
    per = [
        _factor_values(u, factor_monomials(n, d), q)
        for u, n, d in zip(affine, fmt.factor_dims, bundle.degrees)
    ]
    vals = [v for v, _ in per]
    rows = [_kron(vals, q)]
    if kind is ConditionKind.REDUCED:
        return rows
    for i, (_, derivs) in enumerate(per):
        if kind is ConditionKind.DOUBLE_IN_DIVISOR and i == divisor.factor_index:
            continue
        head = _kron(vals[:i], q)
        tail = _kron(vals[i + 1:], q)
        for dv in derivs:
            rows.append(_kron([head, dv, tail], q))
    return rows
