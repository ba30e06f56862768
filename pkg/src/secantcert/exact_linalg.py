"""Exact linear algebra: prime fields, dense matrices and rank.

The mod-p rank is the hot path of every dimension computation. A compiled
kernel (``_rank_ext``) is used when available; otherwise the pure-Python
kernel in ``_rank_py`` runs the same elimination. Set the environment
variable ``SECANTCERT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from . import _rank_py

try:
    if os.environ.get("SECANTCERT_PURE_PYTHON"):
        raise ImportError("pure-python kernel requested")
    from . import _rank_ext
except ImportError:  # pragma: no cover - depends on the build
    _rank_ext = None

#: Name of the kernel selected at import time ("cython" or "python").
BACKEND = "cython" if _rank_ext is not None else "python"

MERSENNE_61 = (1 << 61) - 1
SECOND_PRIME_61 = (1 << 61) - 31
DEFAULT_PRIMES = (MERSENNE_61, SECOND_PRIME_61)

#: Default column cap for the rational oracle.
RATIONAL_COLUMN_CAP = 512

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for ``n < 3.3e24``."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field of integers modulo a prime ``modulus`` (below 2**63)."""

    modulus: int = MERSENNE_61

    def __post_init__(self):
        if not 2 <= self.modulus < (1 << 63):
            raise ValueError(f"modulus {self.modulus} outside [2, 2**63)")
        if not is_prime(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")

    def reduce(self, x: int) -> int:
        return x % self.modulus

    def inv(self, x: int) -> int:
        x %= self.modulus
        if x == 0:
            raise ZeroDivisionError("inverse of zero in prime field")
        return pow(x, self.modulus - 2, self.modulus)

    def random_element(self, rng) -> int:
        return rng.randrange(self.modulus)


@dataclass(frozen=True)
class DenseMatrix:
    """Row-major dense matrix of integers (field elements or plain integers)."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"entries length {len(self.entries)} != {self.rows}x{self.cols}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> DenseMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def row_list(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def reduce(self, field: PrimeField) -> DenseMatrix:
        p = field.modulus
        return DenseMatrix(self.rows, self.cols, tuple(x % p for x in self.entries))

    def vstack(self, other: DenseMatrix) -> DenseMatrix:
        if self.cols != other.cols:
            raise ValueError("column mismatch in vstack")
        return DenseMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)


def _as_rows(m) -> tuple[list[list[int]], int]:
    if isinstance(m, DenseMatrix):
        return m.row_list(), m.cols
    rows = [list(r) for r in m]
    return rows, (len(rows[0]) if rows else 0)


def rank_mod_p(m: DenseMatrix | Sequence[Sequence[int]], field: PrimeField = PrimeField()) -> int:
    """Rank of ``m`` over ``field``.

    Entries may be arbitrary integers; they are reduced first. Elimination
    pivots on the first nonzero entry in column order.
    """
    rows, cols = _as_rows(m)
    if not rows or cols == 0:
        return 0
    p = field.modulus
    if _rank_ext is not None:
        arr = np.array([[x % p for x in r] for r in rows], dtype=np.uint64)
        return int(_rank_ext.rank_mod_p(np.ascontiguousarray(arr), p))
    return _rank_py.rank_mod_p([[x % p for x in r] for r in rows], p)


def rank_mod_p_python(m, field: PrimeField = PrimeField()) -> int:
    """Same as :func:`rank_mod_p` but always on the pure-Python kernel."""
    rows, cols = _as_rows(m)
    if not rows or cols == 0:
        return 0
    p = field.modulus
    return _rank_py.rank_mod_p([[x % p for x in r] for r in rows], p)


def rank_rational(m: DenseMatrix | Sequence[Sequence[int]], column_cap: int = RATIONAL_COLUMN_CAP) -> int:
    """Exact rank over Q of an integer matrix by Bareiss fraction-free elimination.

    Python integers are unbounded, so intermediates never overflow. Raises
    ``ValueError`` past ``column_cap`` columns: this is a cross-check oracle,
    not the production path.
    """
    rows, cols = _as_rows(m)
    if cols > column_cap:
        raise ValueError(f"rational rank limited to {column_cap} columns, got {cols}")
    for r in rows:
        for x in r:
            if not isinstance(x, (int, np.integer)):
                raise TypeError("rank_rational needs integer entries")
    a = [[int(x) for x in r] for r in rows]
    nrows = len(a)
    rank = 0
    prev = 1
    for c in range(cols):
        if rank == nrows:
            break
        piv = next((i for i in range(rank, nrows) if a[i][c]), -1)
        if piv < 0:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pr = a[rank]
        pv = pr[c]
        for i in range(rank + 1, nrows):
            row = a[i]
            f = row[c]
            # exact division is the Bareiss invariant
            a[i] = [(pv * row[j] - f * pr[j]) // prev if j >= c else 0 for j in range(cols)]
        prev = pv
        rank += 1
    return rank
