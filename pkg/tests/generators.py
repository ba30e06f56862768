"""Random instance generators shared by the property and acceptance tests."""

import random

from secantcert.horace import HoraceStep
from secantcert.schemes import Component, Location, SchemeDescriptor
from secantcert.variety import BundleDegree, ConditionKind, DivisorHandle, MultiProjectiveFormat, basis_size

MAX_SECTIONS = 200


def random_horace_step(rng: random.Random) -> HoraceStep:
    """A step on at most 4 factors with at most 200 sections, cut by a P^1 factor."""
    while True:
        k = rng.randint(2, 4)
        dims = [rng.choice((1, 1, 2)) for _ in range(k)]
        fi = rng.randrange(k)
        dims[fi] = 1
        degs = [rng.randint(1, 4) for _ in range(k)]
        fmt, bundle = MultiProjectiveFormat(tuple(dims)), BundleDegree(tuple(degs))
        n_sec = basis_size(fmt, bundle)
        if n_sec <= MAX_SECTIONS:
            break
    n = fmt.ambient_dim
    budget = n_sec // (n + 1) + 1
    base = SchemeDescriptor.of(
        Component(ConditionKind.DOUBLE_AMBIENT, Location.GENERAL_AMBIENT, rng.randint(0, budget)),
        Component(ConditionKind.DOUBLE_AMBIENT, Location.GENERAL_ON_DIVISOR, rng.randint(0, 2)),
        Component(ConditionKind.DOUBLE_IN_DIVISOR, Location.GENERAL_ON_DIVISOR, rng.randint(0, 2)),
        Component(ConditionKind.REDUCED, Location.GENERAL_AMBIENT, rng.randint(0, 3)),
        Component(ConditionKind.REDUCED, Location.GENERAL_ON_DIVISOR, rng.randint(0, 2)),
    )
    return HoraceStep(fmt, bundle, base, DivisorHandle(fi), rng.randint(0, budget), rng.randint(0, 1))
