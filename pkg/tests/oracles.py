"""Independent oracles: hand-rolled Fraction elimination and sympy-built
Terracini matrices. Nothing here imports the package."""

from fractions import Fraction
from itertools import product

import sympy


def rank_fraction(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    r = 0
    for c in range(len(m[0])):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def sympy_terracini_rank(dims, degs, points):
    """Rank over Q of value + affine-gradient rows at integer affine points.

    ``points`` lists, per point, one tuple of affine coordinates per factor.
    """
    variables = [sympy.symbols(f"u{i}_1:{n + 1}") for i, n in enumerate(dims)]
    factor_monos = []
    for vs, d in zip(variables, degs):
        monos = [sympy.Integer(1)]
        for _ in range(d):
            monos = list({m * v for m in monos for v in (1, *vs)})
        factor_monos.append(sorted(set(monos), key=sympy.default_sort_key))
    basis = [sympy.Mul(*ms) for ms in product(*factor_monos)]
    flat = [v for vs in variables for v in vs]
    rows = []
    for pt in points:
        subs = {v: x for vs, xs in zip(variables, pt) for v, x in zip(vs, xs)}
        rows.append([b.subs(subs) for b in basis])
        for v in flat:
            rows.append([sympy.diff(b, v).subs(subs) for b in basis])
    return rank_fraction([[int(x) for x in r] for r in rows]), len(basis)
