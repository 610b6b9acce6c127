# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring ``_pykernels``.

Two tiers: checked 128-bit arithmetic for the common case, and GMP
(``_gmpcore.c``) whenever a product overflows or an input is too wide.
Results never depend on which tier ran.
"""
from libc.stdlib cimport malloc, free

from . import _pykernels

cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct mpz_t[1]
    void mpz_init(mpz_t)
    void mpz_clear(mpz_t)
    int mpz_set_str(mpz_t, const char *, int)
    char *mpz_get_str(char *, int, const mpz_t)
    void mpz_set_si(mpz_t, long)
    long mpz_get_si(const mpz_t)
    int mpz_fits_slong_p(const mpz_t)
    size_t mpz_sizeinbase(const mpz_t, int)

cdef extern from "_gmpcore.h":
    int sg_decompose(const mpz_t p, const mpz_t q, int max_steps,
                     mpz_t **pb, mpz_t **pc, int *cap, int *nb, int *nc)
    void sg_free_digits(mpz_t *b, mpz_t *c, int cap)
    long long sg_audit(const mpz_t p, const mpz_t q, mpz_t *b, mpz_t *c, int N, int terminated)

cdef extern from *:
    """
    typedef __int128 i128;
    static inline int i128_mul(i128 a, i128 b, i128 *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int i128_add(i128 a, i128 b, i128 *r) { return __builtin_add_overflow(a, b, r); }
    static inline int i128_sub(i128 a, i128 b, i128 *r) { return __builtin_sub_overflow(a, b, r); }
    """
    ctypedef long long i128
    int i128_mul(i128 a, i128 b, i128 *r) nogil
    int i128_add(i128 a, i128 b, i128 *r) nogil
    int i128_sub(i128 a, i128 b, i128 *r) nogil

cdef enum:
    MAXN = 512


cdef i128 DIGIT_LIMIT = (<i128>1) << 62


cdef long long _gcd(long long a, long long b):
    while b:
        a, b = b, a % b
    return a if a >= 0 else -a


cdef inline i128 mul(i128 a, i128 b) except? -1:
    cdef i128 r
    if i128_mul(a, b, &r):
        raise OverflowError
    return r

cdef inline i128 add(i128 a, i128 b) except? -1:
    cdef i128 r
    if i128_add(a, b, &r):
        raise OverflowError
    return r

cdef inline i128 sub(i128 a, i128 b) except? -1:
    cdef i128 r
    if i128_sub(a, b, &r):
        raise OverflowError
    return r

cdef inline i128 fdiv(i128 a, i128 b):
    # floor division for b > 0
    cdef i128 d = a / b
    if (a % b != 0) and (a < 0):
        d -= 1
    return d

cdef inline i128 fmod(i128 a, i128 b):
    cdef i128 m = a % b
    if m < 0:
        m += b
    return m


cdef i128 nth_quotient(i128 num, i128 den, int n):
    cdef i128 a, r
    cdef int k
    if num == den:
        return 1 if n == 1 else 0
    r = fmod(num, den)
    num = den
    den = r
    for k in range(n - 1):
        if den == 0:
            return 0
        r = num % den
        num = den
        den = r
    if den == 0:
        return 0
    return num / den


cdef bint digits_match(i128 num, i128 den, i128 *digits, int m):
    cdef i128 r
    cdef int k
    if num == den:
        return m == 1 and digits[0] == 1
    r = fmod(num, den)
    num = den
    den = r
    for k in range(m):
        if den == 0:
            return False
        if num / den != digits[k]:
            return False
        r = num % den
        num = den
        den = r
    return True


cdef int _decompose(i128 p, i128 q, int max_steps, i128 *b, i128 *c, int *nb, int *nc) except -1:
    cdef i128 bp0 = 1, bq0 = 0, bp1 = 0, bq1 = 1
    cdef i128 s0 = 1, t0 = 0, s1 = 0, t1 = 1
    cdef i128 a, bn, cn, x, y
    cdef int n = 0
    nb[0] = 0
    nc[0] = 0
    while True:
        if mul(mul(p, bq1), t1) == mul(q, add(mul(bp1, t1), mul(s1, bq1))):
            return 0
        if n >= max_steps:
            return 1
        if n >= MAXN:
            raise OverflowError
        a = nth_quotient(sub(mul(p, t1), mul(q, s1)), mul(q, t1), n + 1)
        if a == 0:
            return 2
        bn = a + 1
        if bn > DIGIT_LIMIT:
            raise OverflowError
        x = add(mul(bn, bp1), bp0)
        y = add(mul(bn, bq1), bq0)
        bp0 = bp1
        bq0 = bq1
        bp1 = x
        bq1 = y
        b[n] = bn
        nb[0] = n + 1
        cn = nth_quotient(sub(mul(p, bq1), mul(q, bp1)), mul(q, bq1), n + 1)
        if cn == 0:
            return 2
        if cn > DIGIT_LIMIT:
            raise OverflowError
        x = add(mul(cn, s1), s0)
        y = add(mul(cn, t1), t0)
        s0 = s1
        t0 = t1
        s1 = x
        t1 = y
        c[n] = cn
        n += 1
        nc[0] = n


cdef bint in_half_open(i128 u, i128 v, i128 in_n, i128 in_d, i128 ex_n, i128 ex_d) except -1:
    cdef i128 lo = sub(mul(u, in_d), mul(in_n, v))
    cdef i128 hi = sub(mul(u, ex_d), mul(ex_n, v))
    if mul(in_n, ex_d) < mul(ex_n, in_d):
        return lo >= 0 and hi < 0
    return lo <= 0 and hi > 0


cdef long long _audit(i128 p, i128 q, i128 *b, i128 *c, int N, bint terminated) except -1:
    cdef i128 P[MAXN + 2]
    cdef i128 Q[MAXN + 2]
    cdef i128 S[MAXN + 2]
    cdef i128 T[MAXN + 2]
    cdef i128 qn, qm1, tn, tm1, width_c, bmin, q1, u, v
    cdef int k, m, n, i
    cdef long long mask = 0
    cdef bint inside
    if N > MAXN:
        raise OverflowError
    P[0] = 1; P[1] = 0; Q[0] = 0; Q[1] = 1
    S[0] = 1; S[1] = 0; T[0] = 0; T[1] = 1
    for k in range(N):
        P[k + 2] = add(mul(b[k], P[k + 1]), P[k])
        Q[k + 2] = add(mul(b[k], Q[k + 1]), Q[k])
        S[k + 2] = add(mul(c[k], S[k + 1]), S[k])
        T[k + 2] = add(mul(c[k], T[k + 1]), T[k])
    if terminated and mul(mul(p, Q[N + 1]), T[N + 1]) != mul(q, add(mul(P[N + 1], T[N + 1]), mul(S[N + 1], Q[N + 1]))):
        mask |= 1 << 0
    for m in range(1, N + 1):
        if not (digits_match(sub(mul(p, T[m + 1]), mul(q, S[m + 1])), mul(q, T[m + 1]), b, m)
                and digits_match(sub(mul(p, Q[m + 1]), mul(q, P[m + 1])), mul(q, Q[m + 1]), c, m)):
            mask |= 1 << 1
            break
    if N >= 1 and c[0] < b[0]:
        mask |= 1 << 3
    for n in range(1, N + 1):
        i = n - 1
        if n >= 2 and c[i] <= b[i]:
            mask |= 1 << 2
        if n < N and b[i + 1] < b[i]:
            mask |= 1 << 4
        if n + 1 < N and b[i + 2] < b[i] + 1:
            mask |= 1 << 5
        if b[i] < n:
            mask |= 1 << 6
        qn = Q[n + 1]; qm1 = Q[n]; tn = T[n + 1]; tm1 = T[n]
        if n >= 2 and mul(tn, qm1) <= mul(tm1, qn):
            mask |= 1 << 7
        if tn > mul(q, qn):
            mask |= 1 << 8
        width_c = mul(tn, add(tn, tm1))
        if mul(qn, add(qn, qm1)) > width_c:
            mask |= 1 << 9
        else:
            bmin = fdiv(sub(width_c, mul(qm1, qn)), mul(qn, qn)) + 1
            if bmin < 2:
                bmin = 2
            q1 = add(mul(bmin, qn), qm1)
            if width_c >= mul(q1, sub(q1, qn)):
                mask |= 1 << 9
        u = sub(mul(p, tm1), mul(q, S[n]))
        v = mul(q, tm1)
        inside = in_half_open(u, v, P[n + 1] - P[n], qn - qm1, P[n + 1], qn)
        if inside:
            u = sub(mul(p, qn), mul(q, P[n + 1]))
            v = mul(q, qn)
            inside = in_half_open(u, v, S[n + 1], tn, add(S[n + 1], S[n]), add(tn, tm1))
        if not inside:
            mask |= 1 << 10
        if n < N:
            if mul(mul(b[i + 1], qn), qn) <= sub(mul(tn, tn), mul(qn, qn)):
                mask |= 1 << 11
            if b[i] >= 8 and b[i + 1] < c[i] and 2 * c[i + 1] <= 3 * b[i]:
                mask |= 1 << 12
    return mask


cdef inline bint _fits(object x):
    return -(1 << 62) < x < (1 << 62)


cdef void _to_mpz(mpz_t z, object x):
    if -(1 << 62) < x < (1 << 62):
        mpz_set_si(z, <long>x)
    else:
        mpz_set_str(z, format(x, "x").encode(), 16)


cdef object _from_mpz(mpz_t z):
    cdef char *buf
    if mpz_fits_slong_p(z):
        return mpz_get_si(z)
    buf = <char *>malloc(mpz_sizeinbase(z, 16) + 2)
    try:
        mpz_get_str(buf, 16, z)
        return int(buf.decode(), 16)
    finally:
        free(buf)


cdef mpz_t *_mpz_array(int n):
    cdef mpz_t *arr = <mpz_t *>malloc(sizeof(mpz_t) * n)
    cdef int k
    for k in range(n):
        mpz_init(arr[k])
    return arr


cdef void _mpz_free(mpz_t *arr, int n):
    cdef int k
    for k in range(n):
        mpz_clear(arr[k])
    free(arr)


def _gmp_decompose(p, q, int max_steps):
    cdef mpz_t zp, zq
    cdef mpz_t *b = NULL
    cdef mpz_t *c = NULL
    cdef int cap = 0, nb = 0, nc = 0, status, k
    mpz_init(zp)
    mpz_init(zq)
    try:
        _to_mpz(zp, p)
        _to_mpz(zq, q)
        status = sg_decompose(zp, zq, max_steps, &b, &c, &cap, &nb, &nc)
        if status < 0:
            raise MemoryError
        return [_from_mpz(b[k]) for k in range(nb)], [_from_mpz(c[k]) for k in range(nc)], status
    finally:
        mpz_clear(zp)
        mpz_clear(zq)
        sg_free_digits(b, c, cap)


def _gmp_audit(p, q, b, c, terminated):
    cdef int N = len(c), k
    cdef mpz_t zp, zq
    cdef mpz_t *bb = _mpz_array(N + 2)
    cdef mpz_t *cc = _mpz_array(N + 2)
    mpz_init(zp)
    mpz_init(zq)
    try:
        _to_mpz(zp, p)
        _to_mpz(zq, q)
        for k in range(N):
            _to_mpz(bb[k], b[k])
            _to_mpz(cc[k], c[k])
        return sg_audit(zp, zq, bb, cc, N, 1 if terminated else 0)
    finally:
        mpz_clear(zp)
        mpz_clear(zq)
        _mpz_free(bb, N + 2)
        _mpz_free(cc, N + 2)


def _gmp_scan_one(p, q, int max_steps):
    b, c, status = _gmp_decompose(p, q, max_steps)
    mask = _gmp_audit(p, q, b, c, status == 0) if status != 2 else -1
    drop = next((k + 1 for k in range(1, len(c)) if c[k] < c[k - 1]), 0)
    below = next((k + 1 for k in range(1, len(c)) if c[k] < c[0]), 0)
    return (p, q, len(c), status, max(b, default=0), max(c, default=0), drop, below, mask)


def decompose_pq(p, q, int max_steps):
    cdef i128 b[MAXN]
    cdef i128 c[MAXN]
    cdef int nb, nc, status, k
    if not (_fits(p) and _fits(q)):
        return _gmp_decompose(p, q, max_steps)
    try:
        status = _decompose(<long long>p, <long long>q, max_steps, b, c, &nb, &nc)
    except OverflowError:
        return _gmp_decompose(p, q, max_steps)
    return [<long long>b[k] for k in range(nb)], [<long long>c[k] for k in range(nc)], status


def audit_pq(p, q, b, c, terminated):
    cdef i128 bb[MAXN]
    cdef i128 cc[MAXN]
    cdef int N = len(c), k
    if N > MAXN or len(b) < N or not (_fits(p) and _fits(q)):
        return _gmp_audit(p, q, b, c, terminated)
    for k in range(N):
        if not (_fits(b[k]) and _fits(c[k])):
            return _gmp_audit(p, q, b, c, terminated)
        bb[k] = <long long>b[k]
        cc[k] = <long long>c[k]
    try:
        return _audit(<long long>p, <long long>q, bb, cc, N, terminated)
    except OverflowError:
        return _gmp_audit(p, q, b, c, terminated)


def scan_q(long long q, int max_steps):
    cdef i128 b[MAXN]
    cdef i128 c[MAXN]
    cdef int nb, nc, status, k, drop, below
    cdef long long p, mask, mb, mc
    out = []
    for p in range(0, q + 1):
        if _gcd(p, q) != 1:
            continue
        try:
            status = _decompose(p, q, max_steps, b, c, &nb, &nc)
            if status == 2:
                mask = -1
            else:
                mask = _audit(p, q, b, c, nc, status == 0)
        except OverflowError:
            out.append(_gmp_scan_one(p, q, max_steps))
            continue
        mb = 0
        mc = 0
        drop = 0
        below = 0
        for k in range(nb):
            if b[k] > mb:
                mb = <long long>b[k]
        for k in range(nc):
            if c[k] > mc:
                mc = <long long>c[k]
            if drop == 0 and k > 0 and c[k] < c[k - 1]:
                drop = k + 1
            if below == 0 and k > 0 and c[k] < c[0]:
                below = k + 1
        out.append((p, q, nc, status, mb, mc, drop, below, mask))
    return out
