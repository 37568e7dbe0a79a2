"""Pure-Python kernels. Same signatures and results as the compiled ``_lift``."""


def _div(v, k, corrected):
    if corrected and v < 0:
        return (v + (1 << k) - 1) >> k
    return v >> k


def forward(xs, corrected):
    even = xs[0::2]
    odd = xs[1::2]
    ne = len(even)
    no = len(odd)
    detail = [0] * no
    for i in range(no):
        right = even[i + 1] if i + 1 < ne else even[ne - 1]
        detail[i] = odd[i] - _div(even[i] + right, 1, corrected)
    approx = [0] * ne
    prev = detail[0]
    for i in range(ne):
        cur = detail[i] if i < no else detail[no - 1]
        approx[i] = even[i] + _div(cur + prev, 2, corrected)
        prev = cur
    return approx, detail


def inverse(approx, detail, corrected):
    ne = len(approx)
    no = len(detail)
    even = [0] * ne
    prev = detail[0]
    for i in range(ne):
        cur = detail[i] if i < no else detail[no - 1]
        even[i] = approx[i] - _div(cur + prev, 2, corrected)
        prev = cur
    out = [0] * (ne + no)
    out[0::2] = even
    for i in range(no):
        right = even[i + 1] if i + 1 < ne else even[ne - 1]
        out[2 * i + 1] = detail[i] + _div(even[i] + right, 1, corrected)
    return out


def detail_extrema(bits, corrected):
    # every (left even, odd, right even) window of unsigned samples
    top = 1 << bits
    lo = hi = 0
    first = True
    for a in range(top):
        for c in range(top):
            p = _div(a + c, 1, corrected)
            for b in range(top):
                d = b - p
                if first:
                    lo = hi = d
                    first = False
                elif d < lo:
                    lo = d
                elif d > hi:
                    hi = d
    return lo, hi


def approx_extrema(bits, corrected):
    # For a fixed even sample e the two neighbouring details are drawn from the
    # same reachable set independently; the update is monotone in their sum.
    top = 1 << bits
    lo = hi = None
    for e in range(top):
        dmin = dmax = None
        for a in range(top):
            p = _div(a + e, 1, corrected)
            for o in range(top):
                d = o - p
                if dmin is None or d < dmin:
                    dmin = d
                if dmax is None or d > dmax:
                    dmax = d
        s_lo = e + _div(2 * dmin, 2, corrected)
        s_hi = e + _div(2 * dmax, 2, corrected)
        if lo is None or s_lo < lo:
            lo = s_lo
        if hi is None or s_hi > hi:
            hi = s_hi
    return lo, hi
