import random
from math import comb, prod

import pytest
from hypothesis import given, strategies as st

from secantcert.exact_linalg import PrimeField, rank_mod_p
from secantcert.variety import (
    BundleDegree,
    ConditionKind,
    DivisorHandle,
    MPPoint,
    MultiProjectiveFormat,
    basis_size,
    condition_rows,
    monomial_basis,
    on_divisor,
    sample_point,
)
from conftest import bun, fmt
from oracles import sympy_terracini_rank

F = PrimeField()
formats = st.lists(st.tuples(st.integers(1, 3), st.integers(0, 3)), min_size=1, max_size=4)


@pytest.mark.parametrize("dims,degs,size", [
    ((1, 1, 1), (3, 3, 2), 48),
    ((2,), (2,), 6),
    ((2, 1), (3, 2), 30),
])
def test_basis_size_examples(dims, degs, size):
    assert basis_size(fmt(*dims), bun(*degs)) == size


def test_basis_size_length_mismatch():
    with pytest.raises(ValueError):
        basis_size(fmt(1), bun(2, 2))


def test_format_invariants():
    with pytest.raises(ValueError):
        MultiProjectiveFormat(())
    with pytest.raises(ValueError):
        MultiProjectiveFormat((0, 1))
    with pytest.raises(ValueError):
        BundleDegree((-1,))
    assert fmt(2, 1, 1).ambient_dim == 4


@given(formats, st.randoms(use_true_random=False))
def test_basis_size_multiplicative_and_symmetric(pairs, rnd):
    dims, degs = zip(*pairs)
    n = basis_size(MultiProjectiveFormat(dims), BundleDegree(degs))
    assert n == prod(comb(a + d, a) for a, d in pairs)
    shuffled = list(pairs)
    rnd.shuffle(shuffled)
    d2, g2 = zip(*shuffled)
    assert basis_size(MultiProjectiveFormat(d2), BundleDegree(g2)) == n
    assert len(monomial_basis(MultiProjectiveFormat(dims), BundleDegree(degs))) == n


def test_monomial_basis_order():
    assert monomial_basis(fmt(1), bun(2)) == [((2, 0),), ((1, 1),), ((0, 2),)]
    seg = monomial_basis(fmt(1, 1), bun(1, 1))
    assert seg == [((1, 0), (1, 0)), ((1, 0), (0, 1)), ((0, 1), (1, 0)), ((0, 1), (0, 1))]
    big = monomial_basis(fmt(1, 1, 1), bun(3, 3, 2))
    assert len(big) == 48 and big[0] == ((3, 0), (3, 0), (2, 0))
    assert all(sum(e) == d for mono in big for e, d in zip(mono, (3, 3, 2)))
    assert len(set(big)) == 48


def test_sample_point_determinism():
    f = fmt(2, 1)
    p1 = sample_point(f, F, random.Random(5))
    assert p1 == sample_point(f, F, random.Random(5))
    assert p1 != sample_point(f, F, random.Random(6))
    assert all(v[0] != 0 for v in p1.coords)
    # tiny field: chart coordinate resampled until nonzero
    tiny = PrimeField(2)
    for s in range(20):
        assert all(v[0] == 1 for v in sample_point(f, tiny, random.Random(s)).coords)


def test_on_divisor_idempotent():
    f = fmt(1, 1, 1)
    d = DivisorHandle(2)
    p = sample_point(f, F, random.Random(1))
    q = on_divisor(p, d)
    assert q.coords[2] == (1, 0) and d.contains(q)
    assert on_divisor(q, d) == q
    assert q.coords[:2] == p.coords[:2]


def test_divisor_requires_line():
    with pytest.raises(ValueError):
        DivisorHandle(0).check(fmt(2, 1))
    with pytest.raises(ValueError):
        DivisorHandle(0, (0, 1))


def test_row_counts():
    f, b = fmt(1, 1, 1), bun(3, 3, 2)
    p = sample_point(f, F, random.Random(2))
    d = DivisorHandle(2)
    assert len(condition_rows(p, ConditionKind.REDUCED, f, b, F)) == 1
    assert len(condition_rows(p, ConditionKind.DOUBLE_AMBIENT, f, b, F)) == 4
    assert len(condition_rows(on_divisor(p, d), ConditionKind.DOUBLE_IN_DIVISOR, f, b, F, d)) == 3
    with pytest.raises(ValueError):
        condition_rows(p, ConditionKind.DOUBLE_IN_DIVISOR, f, b, F, d)


def test_degree_zero_factor_gives_zero_rows():
    f, b = fmt(2, 1), bun(2, 0)
    p = sample_point(f, F, random.Random(4))
    rows = condition_rows(p, ConditionKind.DOUBLE_AMBIENT, f, b, F)
    assert len(rows) == 4
    assert rows[3] == [0] * len(rows[0])
    assert any(rows[1]) and any(rows[2])


def test_rows_are_pure():
    f, b = fmt(2, 1), bun(2, 3)
    p = sample_point(f, F, random.Random(9))
    assert condition_rows(p, "DoubleAmbient", f, b, F) == condition_rows(p, "DoubleAmbient", f, b, F)


@given(formats.filter(lambda ps: all(d >= 1 for _, d in ps)), st.integers(0, 2**32))
def test_single_double_point_has_full_rank(pairs, seed):
    dims, degs = zip(*pairs)
    f, b = MultiProjectiveFormat(dims), BundleDegree(degs)
    p = sample_point(f, F, random.Random(seed))
    rows = condition_rows(p, ConditionKind.DOUBLE_AMBIENT, f, b, F)
    assert rank_mod_p(rows, F) == f.ambient_dim + 1


def test_divisor_double_point_rank_is_n():
    f, b = fmt(2, 1, 1), bun(2, 2, 2)
    d = DivisorHandle(1)
    p = on_divisor(sample_point(f, F, random.Random(3)), d)
    rows = condition_rows(p, ConditionKind.DOUBLE_IN_DIVISOR, f, b, F, d)
    assert len(rows) == f.ambient_dim == rank_mod_p(rows, F)


def test_projective_rescaling_preserves_row_space():
    f, b = fmt(2, 1), bun(2, 2)
    p = sample_point(f, F, random.Random(8))
    q = MPPoint(tuple(tuple(x * 7 % F.modulus for x in v) for v in p.coords))
    rp = condition_rows(p, "DoubleAmbient", f, b, F)
    rq = condition_rows(q, "DoubleAmbient", f, b, F)
    assert rp == rq  # rows depend only on the affine chart values


def test_integer_rows_match_sympy_oracle():
    dims, degs = (2, 1), (2, 2)
    pts = [((3, -2), (5,)), ((1, 4), (-3,)), ((-2, 7), (2,))]
    rows = []
    for pt in pts:
        p = MPPoint(tuple((1,) + tuple(c) for c in pt))
        rows += condition_rows(p, "DoubleAmbient", fmt(*dims), bun(*degs))
    expected_rank, n = sympy_terracini_rank(dims, degs, pts)
    from secantcert.exact_linalg import rank_rational
    assert len(rows[0]) == n
    assert rank_rational(rows) == expected_rank


def test_integer_rows_need_unit_chart():
    with pytest.raises(ValueError):
        condition_rows(MPPoint(((2, 1),)), "Reduced", fmt(1), bun(2))
