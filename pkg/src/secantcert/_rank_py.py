"""Pure-Python row-echelon rank over a prime field.

Same algorithm as the compiled kernel; used when the extension is not built
or when ``SECANTCERT_PURE_PYTHON`` is set.
"""

from __future__ import annotations


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    m = [list(r) for r in rows]
    nrows = len(m)
    if nrows == 0:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), -1)
        if piv < 0:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        prow = [x * inv % p for x in m[r][c:]]
        for i in range(r + 1, nrows):
            f = m[i][c]
            if f:
                row = m[i]
                m[i] = row[:c] + [(a - f * b) % p for a, b in zip(row[c:], prow)]
        r += 1
    return r
