"""Pure-Python kernels; the reference for ``_kernels.pyx``.

Both modules expose the same three functions over plain integers:

``decompose_pq(p, q, max_steps) -> (b, c, status)``
    The staggered digit recursion for ``alpha = p/q``.  ``status`` is
    ``DONE`` (terminated), ``CAPPED`` (step cap hit) or ``UNDEFINED`` (a
    partial quotient needed to continue does not exist).
``audit_pq(p, q, b, c, terminated) -> mask``
    Bit ``i`` is set when check ``CHECKS[i]`` fails.
``scan_q(q, max_steps) -> list of records``
    One record per reduced ``p/q`` in ``[0, 1]``; see ``SCAN_FIELDS``.
"""
from math import gcd

DONE, CAPPED, UNDEFINED = 0, 1, 2

CHECKS = (
    "sum_exact",
    "digit_consistency",
    "strict_c_gt_b",
    "c1_ge_b1",
    "b_monotone",
    "b_skip_growth",
    "b_linear",
    "ratio_strictly_increasing",
    "ratio_le_q",
    "partition_ok",
    "region_membership",
    "b_ratio_bound",
    "three_halves",
)

# first_c_decrease: first l with c_l < c_{l-1}; first_c_drop: first l with c_l < c_1
SCAN_FIELDS = ("p", "q", "steps", "status", "max_b", "max_c", "first_c_decrease", "first_c_drop", "mask")


def nth_quotient(num, den, n):
    """``a_n(num/den)`` for ``den > 0``, or 0 when the expansion is shorter."""
    if num == den:
        return 1 if n == 1 else 0
    num, den = den, num % den
    for _ in range(n - 1):
        if not den:
            return 0
        num, den = den, num % den
    if not den:
        return 0
    return num // den


def _digits_match(num, den, digits, m):
    # first m digits of num/den equal digits[:m]
    if num == den:
        return m == 1 and digits[0] == 1
    num, den = den, num % den
    for k in range(m):
        if not den:
            return False
        a, r = divmod(num, den)
        if a != digits[k]:
            return False
        num, den = den, r
    return True


def decompose_pq(p, q, max_steps):
    b, c = [], []
    bp0, bq0, bp1, bq1 = 1, 0, 0, 1  # p_{n-1}, q_{n-1}, p_n, q_n
    s0, t0, s1, t1 = 1, 0, 0, 1
    n = 0
    while True:
        if p * bq1 * t1 == q * (bp1 * t1 + s1 * bq1):
            return b, c, DONE
        if n >= max_steps:
            return b, c, CAPPED
        a = nth_quotient(p * t1 - q * s1, q * t1, n + 1)
        if not a:
            return b, c, UNDEFINED
        bn = a + 1
        bp0, bq0, bp1, bq1 = bp1, bq1, bn * bp1 + bp0, bn * bq1 + bq0
        cn = nth_quotient(p * bq1 - q * bp1, q * bq1, n + 1)
        if not cn:
            b.append(bn)
            return b, c, UNDEFINED
        s0, t0, s1, t1 = s1, t1, cn * s1 + s0, cn * t1 + t0
        b.append(bn)
        c.append(cn)
        n += 1


def _in_half_open(u, v, in_n, in_d, ex_n, ex_d):
    # u/v in the interval including in_n/in_d and excluding ex_n/ex_d
    lo = u * in_d - in_n * v
    hi = u * ex_d - ex_n * v
    if in_n * ex_d < ex_n * in_d:
        return lo >= 0 and hi < 0
    return lo <= 0 and hi > 0


def audit_pq(p, q, b, c, terminated):
    N = len(c)
    P, Q, S, T = [1, 0], [0, 1], [1, 0], [0, 1]  # index k + 1 holds row k
    for k in range(N):
        P.append(b[k] * P[-1] + P[-2])
        Q.append(b[k] * Q[-1] + Q[-2])
        S.append(c[k] * S[-1] + S[-2])
        T.append(c[k] * T[-1] + T[-2])
    mask = 0
    if terminated and p * Q[N + 1] * T[N + 1] != q * (P[N + 1] * T[N + 1] + S[N + 1] * Q[N + 1]):
        mask |= 1 << 0
    for m in range(1, N + 1):
        sm, tm, pm, qm = S[m + 1], T[m + 1], P[m + 1], Q[m + 1]
        if not (_digits_match(p * tm - q * sm, q * tm, b, m)
                and _digits_match(p * qm - q * pm, q * qm, c, m)):
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
        qn, qm1, tn, tm1 = Q[n + 1], Q[n], T[n + 1], T[n]
        if n >= 2 and tn * qm1 <= tm1 * qn:
            mask |= 1 << 7
        if tn > q * qn:
            mask |= 1 << 8
        width_c = tn * (tn + tm1)
        if qn * (qn + qm1) > width_c:
            mask |= 1 << 9
        else:
            bmin = max(2, (width_c - qm1 * qn) // (qn * qn) + 1)
            q1 = bmin * qn + qm1
            if width_c >= q1 * (q1 - qn):
                mask |= 1 << 9
        # alpha in B_n: alpha - gamma_{n-1} against the b-cylinder step
        u, v = p * tm1 - q * S[n], q * tm1
        inside = _in_half_open(u, v, P[n + 1] - P[n], qn - qm1, P[n + 1], qn)
        # alpha in C_n: alpha - beta_n against the c-cylinder
        u, v = p * qn - q * P[n + 1], q * qn
        inside = inside and _in_half_open(u, v, S[n + 1], tn, S[n + 1] + S[n], tn + tm1)
        if not inside:
            mask |= 1 << 10
        if n < N:
            if b[i + 1] * qn * qn <= tn * tn - qn * qn:
                mask |= 1 << 11
            if b[i] >= 8 and b[i + 1] < c[i] and 2 * c[i + 1] <= 3 * b[i]:
                mask |= 1 << 12
    return mask


def scan_one(p, q, max_steps):
    b, c, status = decompose_pq(p, q, max_steps)
    mask = audit_pq(p, q, b, c, status == DONE) if status != UNDEFINED else -1
    drop = next((k + 1 for k in range(1, len(c)) if c[k] < c[k - 1]), 0)
    below = next((k + 1 for k in range(1, len(c)) if c[k] < c[0]), 0)
    return (p, q, len(c), status, max(b, default=0), max(c, default=0), drop, below, mask)


def scan_q(q, max_steps):
    return [scan_one(p, q, max_steps) for p in range(0, q + 1) if gcd(p, q) == 1]
