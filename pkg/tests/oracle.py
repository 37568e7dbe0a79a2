"""Independent reference: whole-sample symmetric extension of the input plus
exact rational division, evaluated sample by sample."""

import math
from fractions import Fraction


def _div(v, q, corrected):
    f = Fraction(v, q)
    return math.trunc(f) if corrected and v < 0 else math.floor(f)


def _reflect(i, n):
    # ... x2 x1 | x0 x1 ... x(n-1) | x(n-2) ...
    period = 2 * (n - 1)
    i %= period
    return i if i < n else period - i


def forward(x, corrected=False):
    n = len(x)
    ext = lambda i: x[_reflect(i, n)]

    def d(k):  # detail centred on odd position 2k+1, any k
        return ext(2 * k + 1) - _div(ext(2 * k) + ext(2 * k + 2), 2, corrected)

    approx = [x[2 * k] + _div(d(k) + d(k - 1), 4, corrected) for k in range((n + 1) // 2)]
    detail = [d(k) for k in range(n // 2)]
    return approx, detail


def forward_2d_level(rows, corrected=False):
    """One separable level: every row, then every column; quadrant layout."""
    rows = [sum(forward(r, corrected), []) for r in rows]
    cols = [sum(forward([r[c] for r in rows], corrected), []) for c in range(len(rows[0]))]
    return [[cols[c][r] for c in range(len(cols))] for r in range(len(rows))]
