"""Symbolic zero-dimensional schemes and the residual/trace calculus.

A :class:`SchemeDescriptor` is a list of components ``(kind, location,
count)``. It stays symbolic until :func:`realize` samples concrete points, so
one descriptor can be realized many times with different seeds.

For the divisor ``H`` cut by a point of a P^1 factor, :func:`residual_split`
returns ``Res_H(Z)`` (living on the same format, bundle twisted by ``-H``)
and the trace ``Z ∩ H``. Degrees add up: ``deg Z = deg Res + deg trace``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field as dc_field

from .exact_linalg import PrimeField
from .variety import (
    BundleDegree,
    ConditionKind,
    DivisorHandle,
    MPPoint,
    MultiProjectiveFormat,
    on_divisor,
    sample_point,
)

REALIZE_RETRY_CAP = 100


class Location(str, enum.Enum):
    GENERAL_AMBIENT = "GeneralAmbient"
    GENERAL_ON_DIVISOR = "GeneralOnDivisor"
    FIXED = "Fixed"


_KIND_ORDER = {
    ConditionKind.DOUBLE_AMBIENT: 0,
    ConditionKind.DOUBLE_IN_DIVISOR: 1,
    ConditionKind.REDUCED: 2,
}
_LOC_ORDER = {Location.GENERAL_AMBIENT: 0, Location.GENERAL_ON_DIVISOR: 1, Location.FIXED: 2}


@dataclass(frozen=True)
class Component:
    kind: ConditionKind
    location: Location
    count: int = 1
    point: MPPoint | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ConditionKind(self.kind))
        object.__setattr__(self, "location", Location(self.location))
        if self.count < 0:
            raise ValueError("component count must be >= 0")
        if self.location is Location.FIXED:
            if self.point is None:
                raise ValueError("a Fixed component needs a point")
            if self.count > 1:
                raise ValueError("a Fixed component has count at most 1")
        elif self.point is not None:
            raise ValueError("only Fixed components carry a point")
        if self.kind is ConditionKind.DOUBLE_IN_DIVISOR and self.location is Location.GENERAL_AMBIENT:
            raise ValueError("DoubleInDivisor must be supported on the divisor")

    def sort_key(self):
        pt = self.point.coords if self.point is not None else ()
        return (_LOC_ORDER[self.location], _KIND_ORDER[self.kind], pt)

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "location": self.location.value, "count": self.count}
        if self.point is not None:
            out["point"] = self.point.to_json()
        return out


@dataclass(frozen=True)
class SchemeDescriptor:
    """A disjoint union of double points, divisor double points and reduced points.

    Components are normalized on construction: general components of the same
    (kind, location) are merged, empty ones dropped, and the list is sorted, so
    equal schemes have equal JSON and equal realizations.
    """

    components: tuple[Component, ...] = ()

    def __post_init__(self):
        merged: dict = {}
        fixed = []
        for c in self.components:
            if c.count == 0:
                continue
            if c.location is Location.FIXED:
                fixed.append(c)
            else:
                key = (c.kind, c.location)
                merged[key] = merged.get(key, 0) + c.count
        comps = [Component(k, loc, n) for (k, loc), n in merged.items()] + fixed
        comps.sort(key=Component.sort_key)
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def of(cls, *components: Component) -> SchemeDescriptor:
        return cls(tuple(components))

    @classmethod
    def double_points(cls, z: int) -> SchemeDescriptor:
        return cls.of(Component(ConditionKind.DOUBLE_AMBIENT, Location.GENERAL_AMBIENT, z))

    def __or__(self, other: SchemeDescriptor) -> SchemeDescriptor:
        return SchemeDescriptor(self.components + other.components)

    def __bool__(self) -> bool:
        return bool(self.components)

    def count(self, kind: ConditionKind, location: Location | None = None) -> int:
        return sum(
            c.count for c in self.components
            if c.kind is kind and (location is None or c.location is location)
        )

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.components]


def component_degree(kind: ConditionKind, fmt: MultiProjectiveFormat, divisor: DivisorHandle | None = None) -> int:
    n = fmt.ambient_dim
    if kind is ConditionKind.REDUCED:
        return 1
    if kind is ConditionKind.DOUBLE_AMBIENT:
        return n + 1
    fi = divisor.factor_index if divisor is not None else None
    # tangent directions of the divisor only
    return 1 + n - (fmt.factor_dims[fi] if fi is not None else 1)


def degree(s: SchemeDescriptor, fmt: MultiProjectiveFormat, divisor: DivisorHandle | None = None) -> int:
    return sum(c.count * component_degree(c.kind, fmt, divisor) for c in s.components)


@dataclass(frozen=True)
class ResidualPair:
    residual: SchemeDescriptor
    trace: SchemeDescriptor
    residual_bundle: BundleDegree | None = dc_field(default=None)


def _on_divisor(c: Component, d: DivisorHandle) -> bool:
    if c.location is Location.FIXED:
        return d.contains(c.point)
    return c.location is Location.GENERAL_ON_DIVISOR


def residual_split(
    s: SchemeDescriptor,
    d: DivisorHandle,
    bundle: BundleDegree | None = None,
) -> ResidualPair:
    """Split ``s`` into ``(Res_D(s), s ∩ D)``.

    A double point on ``D`` leaves its reduced point as residual and a divisor
    double point as trace; components off ``D`` are pure residual, components
    supported on ``D`` (reduced or divisor-double) are pure trace. ``Fixed``
    points are tested for membership in ``D`` exactly over the integers.
    When ``bundle`` is given, the residual bundle is it twisted by ``-D``.
    """
    residual, trace = [], []
    for c in s.components:
        if not _on_divisor(c, d):
            residual.append(c)
        elif c.kind is ConditionKind.DOUBLE_AMBIENT:
            residual.append(Component(ConditionKind.REDUCED, c.location, c.count, c.point))
            trace.append(Component(ConditionKind.DOUBLE_IN_DIVISOR, c.location, c.count, c.point))
        else:
            trace.append(c)
    res_bundle = bundle.twist(d.factor_index, -1) if bundle is not None else None
    return ResidualPair(SchemeDescriptor(tuple(residual)), SchemeDescriptor(tuple(trace)), res_bundle)


def restrict_to_divisor(
    trace: SchemeDescriptor, d: DivisorHandle
) -> SchemeDescriptor:
    """Re-express a scheme supported on ``D`` as a scheme of ``D``'s own format.

    ``D`` is isomorphic to the format with the divisor factor removed: divisor
    double points become ambient double points there, and points lose their
    divisor coordinate.
    """
    out = []
    for c in trace.components:
        if not _on_divisor(c, d):
            raise ValueError(f"component {c.to_json()} is not supported on the divisor")
        kind = ConditionKind.DOUBLE_AMBIENT if c.kind is not ConditionKind.REDUCED else ConditionKind.REDUCED
        if c.location is Location.FIXED:
            out.append(Component(kind, Location.FIXED, c.count, c.point.drop(d.factor_index)))
        else:
            out.append(Component(kind, Location.GENERAL_AMBIENT, c.count))
    return SchemeDescriptor(tuple(out))


def realize(
    s: SchemeDescriptor,
    fmt: MultiProjectiveFormat,
    field: PrimeField,
    rng: random.Random,
    divisor: DivisorHandle | None = None,
) -> list[tuple[MPPoint, ConditionKind]]:
    """Sample concrete points for every component; sampled points are pairwise distinct."""
    out: list[tuple[MPPoint, ConditionKind]] = []
    seen: set = set()

    def key(pt: MPPoint):
        # projective identity: normalize each factor by its chart coordinate
        q = field.modulus
        return tuple(tuple(x * field.inv(v[0]) % q for x in v) for v in pt.coords)

    for c in s.components:
        if c.location is Location.FIXED:
            if not c.point.fits(fmt):
                raise ValueError("fixed point does not match the format")
            out.append((c.point, c.kind))
            seen.add(key(c.point))
            continue
        if c.location is Location.GENERAL_ON_DIVISOR:
            if divisor is None:
                raise ValueError("scheme has divisor components but no divisor was given")
            divisor.check(fmt)
        for _ in range(c.count):
            for _attempt in range(REALIZE_RETRY_CAP):
                pt = sample_point(fmt, field, rng)
                if c.location is Location.GENERAL_ON_DIVISOR:
                    pt = on_divisor(pt, divisor)
                k = key(pt)
                if k not in seen:
                    break
            else:
                raise RuntimeError("could not sample distinct points")
            seen.add(k)
            out.append((pt, c.kind))
    return out
