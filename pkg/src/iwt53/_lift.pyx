# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lifting kernels. Mirrors ``iwt53._purelift`` exactly."""

from libc.stdlib cimport malloc, free

ctypedef long long i64

# inputs beyond this magnitude go to the pure-Python kernel, which never overflows
cdef i64 LIMIT = 1LL << 60


cdef inline i64 _div(i64 v, int k, bint corrected) nogil:
    if corrected and v < 0:
        return (v + (1LL << k) - 1) >> k
    return v >> k


cdef i64* _load(object seq, Py_ssize_t n) except NULL:
    cdef i64* buf = <i64*>malloc((n if n > 0 else 1) * sizeof(i64))
    cdef Py_ssize_t i
    cdef i64 v
    cdef object item
    if buf == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            item = seq[i]
            if not isinstance(item, int):
                raise TypeError(f"an integer is required, got {type(item).__name__}")
            v = item
            if v >= LIMIT or v <= -LIMIT:
                raise OverflowError("sample magnitude too large for compiled kernel")
            buf[i] = v
    except BaseException:
        free(buf)
        raise
    return buf


cdef list _dump(const i64* buf, Py_ssize_t n):
    cdef list out = [None] * n
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = buf[i]
    return out


def forward(object xs, bint corrected):
    cdef Py_ssize_t n = len(xs)
    cdef Py_ssize_t ne = (n + 1) // 2, no = n // 2, i
    cdef i64* x = _load(xs, n)
    cdef i64* s = <i64*>malloc(ne * sizeof(i64))
    cdef i64* d = <i64*>malloc((no if no > 0 else 1) * sizeof(i64))
    cdef i64 right, prev, cur
    try:
        if s == NULL or d == NULL:
            raise MemoryError()
        with nogil:
            for i in range(no):
                right = x[2 * i + 2] if i + 1 < ne else x[2 * ne - 2]
                d[i] = x[2 * i + 1] - _div(x[2 * i] + right, 1, corrected)
            prev = d[0]
            for i in range(ne):
                cur = d[i] if i < no else d[no - 1]
                s[i] = x[2 * i] + _div(cur + prev, 2, corrected)
                prev = cur
        return _dump(s, ne), _dump(d, no)
    finally:
        free(x)
        free(s)
        free(d)


def inverse(object approx, object detail, bint corrected):
    cdef Py_ssize_t ne = len(approx), no = len(detail), i
    cdef i64* s = _load(approx, ne)
    cdef i64* d = NULL
    cdef i64* x = NULL
    cdef i64 right, prev, cur
    try:
        d = _load(detail, no)
        x = <i64*>malloc((ne + no) * sizeof(i64))
        if x == NULL:
            raise MemoryError()
        with nogil:
            prev = d[0]
            for i in range(ne):
                cur = d[i] if i < no else d[no - 1]
                x[2 * i] = s[i] - _div(cur + prev, 2, corrected)
                prev = cur
            for i in range(no):
                right = x[2 * i + 2] if i + 1 < ne else x[2 * ne - 2]
                x[2 * i + 1] = d[i] + _div(x[2 * i] + right, 1, corrected)
        return _dump(x, ne + no)
    finally:
        free(s)
        free(d)
        free(x)


def detail_extrema(int bits, bint corrected):
    cdef i64 top = 1LL << bits
    cdef i64 a, b, c, p, dv, lo = 0, hi = 0
    cdef bint first = True
    with nogil:
        for a in range(top):
            for c in range(top):
                p = _div(a + c, 1, corrected)
                for b in range(top):
                    dv = b - p
                    if first:
                        lo = dv
                        hi = dv
                        first = False
                    elif dv < lo:
                        lo = dv
                    elif dv > hi:
                        hi = dv
    return lo, hi


def approx_extrema(int bits, bint corrected):
    cdef i64 top = 1LL << bits
    cdef i64 e, a, o, p, dv, dmin = 0, dmax = 0, s_lo, s_hi, lo = 0, hi = 0
    cdef bint first_e = True, first_d
    with nogil:
        for e in range(top):
            first_d = True
            for a in range(top):
                p = _div(a + e, 1, corrected)
                for o in range(top):
                    dv = o - p
                    if first_d:
                        dmin = dv
                        dmax = dv
                        first_d = False
                    elif dv < dmin:
                        dmin = dv
                    elif dv > dmax:
                        dmax = dv
            s_lo = e + _div(2 * dmin, 2, corrected)
            s_hi = e + _div(2 * dmax, 2, corrected)
            if first_e or s_lo < lo:
                lo = s_lo
            if first_e or s_hi > hi:
                hi = s_hi
            first_e = False
    return lo, hi
