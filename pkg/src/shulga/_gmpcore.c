/* Arbitrary-precision tier of the compiled kernels (GMP).
 *
 * Same semantics as _pykernels.decompose_pq / audit_pq; used by _kernels.pyx
 * when the checked 128-bit path overflows.
 */
#include <stdlib.h>
#include <gmp.h>
#include "_gmpcore.h"

/* first m digits of num/den (den > 0) equal digits[0..m) */
static int digits_match(const mpz_t num0, const mpz_t den0, mpz_t *digits, int m,
                        mpz_t num, mpz_t den, mpz_t a, mpz_t r)
{
    int k;
    if (mpz_cmp(num0, den0) == 0)
        return m == 1 && mpz_cmp_ui(digits[0], 1) == 0;
    mpz_set(num, den0);
    mpz_fdiv_r(den, num0, den0);
    for (k = 0; k < m; k++) {
        if (mpz_sgn(den) == 0)
            return 0;
        mpz_fdiv_qr(a, r, num, den);
        if (mpz_cmp(a, digits[k]) != 0)
            return 0;
        mpz_swap(num, den);
        mpz_swap(den, r);
    }
    return 1;
}

/* out = a_n(num/den) or 0 when undefined; num, den are clobbered */
static void nth_quotient(mpz_t out, mpz_t num, mpz_t den, int n, mpz_t r)
{
    int k;
    if (mpz_cmp(num, den) == 0) {
        mpz_set_ui(out, n == 1 ? 1 : 0);
        return;
    }
    mpz_fdiv_r(r, num, den);
    mpz_swap(num, den);
    mpz_swap(den, r);
    for (k = 0; k < n - 1; k++) {
        if (mpz_sgn(den) == 0) {
            mpz_set_ui(out, 0);
            return;
        }
        mpz_fdiv_r(r, num, den);
        mpz_swap(num, den);
        mpz_swap(den, r);
    }
    if (mpz_sgn(den) == 0) {
        mpz_set_ui(out, 0);
        return;
    }
    mpz_fdiv_q(out, num, den);
}

static int grow(mpz_t **b, mpz_t **c, int *cap)
{
    int k, ncap = *cap ? 2 * *cap : 16;
    mpz_t *nb = realloc(*b, sizeof(mpz_t) * ncap);
    if (!nb)
        return -1;
    *b = nb;
    mpz_t *nc = realloc(*c, sizeof(mpz_t) * ncap);
    if (!nc)
        return -1;
    *c = nc;
    for (k = *cap; k < ncap; k++) {
        mpz_init((*b)[k]);
        mpz_init((*c)[k]);
    }
    *cap = ncap;
    return 0;
}

void sg_free_digits(mpz_t *b, mpz_t *c, int cap)
{
    int k;
    for (k = 0; k < cap; k++) {
        mpz_clear(b[k]);
        mpz_clear(c[k]);
    }
    free(b);
    free(c);
}

int sg_decompose(const mpz_t p, const mpz_t q, int max_steps,
                 mpz_t **pb, mpz_t **pc, int *cap, int *nb, int *nc)
{
    mpz_t bp0, bq0, bp1, bq1, s0, t0, s1, t1, x, y, z, r, d;
    mpz_t *b, *c;
    int n = 0, status;
    mpz_inits(bp0, bq0, bp1, bq1, s0, t0, s1, t1, x, y, z, r, d, NULL);
    mpz_set_ui(bp0, 1); mpz_set_ui(bq0, 0); mpz_set_ui(bp1, 0); mpz_set_ui(bq1, 1);
    mpz_set_ui(s0, 1); mpz_set_ui(t0, 0); mpz_set_ui(s1, 0); mpz_set_ui(t1, 1);
    *nb = 0;
    *nc = 0;
    for (;;) {
        /* p*q_n*t_n == q*(p_n*t_n + s_n*q_n) */
        mpz_mul(x, p, bq1); mpz_mul(x, x, t1);
        mpz_mul(y, bp1, t1); mpz_addmul(y, s1, bq1); mpz_mul(y, y, q);
        if (mpz_cmp(x, y) == 0) { status = 0; break; }
        if (n >= max_steps) { status = 1; break; }
        if (n >= *cap && grow(pb, pc, cap)) { status = -1; break; }
        b = *pb;
        c = *pc;
        mpz_mul(x, p, t1); mpz_submul(x, q, s1);
        mpz_mul(y, q, t1);
        nth_quotient(d, x, y, n + 1, r);
        if (mpz_sgn(d) == 0) { status = 2; break; }
        mpz_add_ui(b[n], d, 1);
        mpz_set(z, bp1); mpz_mul(bp1, bp1, b[n]); mpz_add(bp1, bp1, bp0); mpz_set(bp0, z);
        mpz_set(z, bq1); mpz_mul(bq1, bq1, b[n]); mpz_add(bq1, bq1, bq0); mpz_set(bq0, z);
        *nb = n + 1;
        mpz_mul(x, p, bq1); mpz_submul(x, q, bp1);
        mpz_mul(y, q, bq1);
        nth_quotient(c[n], x, y, n + 1, r);
        if (mpz_sgn(c[n]) == 0) { status = 2; break; }
        mpz_set(z, s1); mpz_mul(s1, s1, c[n]); mpz_add(s1, s1, s0); mpz_set(s0, z);
        mpz_set(z, t1); mpz_mul(t1, t1, c[n]); mpz_add(t1, t1, t0); mpz_set(t0, z);
        n++;
        *nc = n;
    }
    mpz_clears(bp0, bq0, bp1, bq1, s0, t0, s1, t1, x, y, z, r, d, NULL);
    return status;
}

/* u/v inside the half-open interval including in_n/in_d, excluding ex_n/ex_d */
static int in_half_open(const mpz_t u, const mpz_t v, const mpz_t in_n, const mpz_t in_d,
                        const mpz_t ex_n, const mpz_t ex_d, mpz_t w1, mpz_t w2, mpz_t w3)
{
    int lo, hi, inc_first;
    mpz_mul(w1, u, in_d); mpz_submul(w1, in_n, v); lo = mpz_sgn(w1);
    mpz_mul(w2, u, ex_d); mpz_submul(w2, ex_n, v); hi = mpz_sgn(w2);
    mpz_mul(w1, in_n, ex_d); mpz_mul(w3, ex_n, in_d);
    inc_first = mpz_cmp(w1, w3) < 0;
    if (inc_first)
        return lo >= 0 && hi < 0;
    return lo <= 0 && hi > 0;
}

long long sg_audit(const mpz_t p, const mpz_t q, mpz_t *b, mpz_t *c, int N, int terminated)
{
    mpz_t *P, *Q, *S, *T;
    mpz_t u, v, w1, w2, w3, num, den, a, r, width, bmin, q1;
    long long mask = 0;
    int k, m, n, i, inside;

    P = malloc(sizeof(mpz_t) * (N + 2));
    Q = malloc(sizeof(mpz_t) * (N + 2));
    S = malloc(sizeof(mpz_t) * (N + 2));
    T = malloc(sizeof(mpz_t) * (N + 2));
    for (k = 0; k < N + 2; k++) {
        mpz_init(P[k]); mpz_init(Q[k]); mpz_init(S[k]); mpz_init(T[k]);
    }
    mpz_inits(u, v, w1, w2, w3, num, den, a, r, width, bmin, q1, NULL);
    mpz_set_ui(P[0], 1); mpz_set_ui(Q[1], 1); mpz_set_ui(S[0], 1); mpz_set_ui(T[1], 1);
    for (k = 0; k < N; k++) {
        mpz_mul(P[k + 2], b[k], P[k + 1]); mpz_add(P[k + 2], P[k + 2], P[k]);
        mpz_mul(Q[k + 2], b[k], Q[k + 1]); mpz_add(Q[k + 2], Q[k + 2], Q[k]);
        mpz_mul(S[k + 2], c[k], S[k + 1]); mpz_add(S[k + 2], S[k + 2], S[k]);
        mpz_mul(T[k + 2], c[k], T[k + 1]); mpz_add(T[k + 2], T[k + 2], T[k]);
    }
    if (terminated) {
        mpz_mul(u, p, Q[N + 1]); mpz_mul(u, u, T[N + 1]);
        mpz_mul(v, P[N + 1], T[N + 1]); mpz_addmul(v, S[N + 1], Q[N + 1]); mpz_mul(v, v, q);
        if (mpz_cmp(u, v) != 0)
            mask |= 1LL << 0;
    }
    for (m = 1; m <= N; m++) {
        mpz_mul(u, p, T[m + 1]); mpz_submul(u, q, S[m + 1]); mpz_mul(v, q, T[m + 1]);
        if (!digits_match(u, v, b, m, num, den, a, r)) { mask |= 1LL << 1; break; }
        mpz_mul(u, p, Q[m + 1]); mpz_submul(u, q, P[m + 1]); mpz_mul(v, q, Q[m + 1]);
        if (!digits_match(u, v, c, m, num, den, a, r)) { mask |= 1LL << 1; break; }
    }
    if (N >= 1 && mpz_cmp(c[0], b[0]) < 0)
        mask |= 1LL << 3;
    for (n = 1; n <= N; n++) {
        i = n - 1;
        if (n >= 2 && mpz_cmp(c[i], b[i]) <= 0)
            mask |= 1LL << 2;
        if (n < N && mpz_cmp(b[i + 1], b[i]) < 0)
            mask |= 1LL << 4;
        if (n + 1 < N) {
            mpz_add_ui(u, b[i], 1);
            if (mpz_cmp(b[i + 2], u) < 0)
                mask |= 1LL << 5;
        }
        if (mpz_cmp_si(b[i], n) < 0)
            mask |= 1LL << 6;
        /* qn = Q[n+1], qm1 = Q[n], tn = T[n+1], tm1 = T[n] */
        if (n >= 2) {
            mpz_mul(u, T[n + 1], Q[n]); mpz_mul(v, T[n], Q[n + 1]);
            if (mpz_cmp(u, v) <= 0)
                mask |= 1LL << 7;
        }
        mpz_mul(u, q, Q[n + 1]);
        if (mpz_cmp(T[n + 1], u) > 0)
            mask |= 1LL << 8;
        mpz_add(width, T[n + 1], T[n]); mpz_mul(width, width, T[n + 1]);
        mpz_add(u, Q[n + 1], Q[n]); mpz_mul(u, u, Q[n + 1]);
        if (mpz_cmp(u, width) > 0) {
            mask |= 1LL << 9;
        } else {
            mpz_set(u, width); mpz_submul(u, Q[n], Q[n + 1]);
            mpz_mul(v, Q[n + 1], Q[n + 1]);
            mpz_fdiv_q(bmin, u, v); mpz_add_ui(bmin, bmin, 1);
            if (mpz_cmp_ui(bmin, 2) < 0)
                mpz_set_ui(bmin, 2);
            mpz_mul(q1, bmin, Q[n + 1]); mpz_add(q1, q1, Q[n]);
            mpz_sub(u, q1, Q[n + 1]); mpz_mul(u, u, q1);
            if (mpz_cmp(width, u) >= 0)
                mask |= 1LL << 9;
        }
        /* alpha in B_n */
        mpz_mul(u, p, T[n]); mpz_submul(u, q, S[n]); mpz_mul(v, q, T[n]);
        mpz_sub(num, P[n + 1], P[n]); mpz_sub(den, Q[n + 1], Q[n]);
        inside = in_half_open(u, v, num, den, P[n + 1], Q[n + 1], w1, w2, w3);
        if (inside) {
            /* alpha in C_n */
            mpz_mul(u, p, Q[n + 1]); mpz_submul(u, q, P[n + 1]); mpz_mul(v, q, Q[n + 1]);
            mpz_add(num, S[n + 1], S[n]); mpz_add(den, T[n + 1], T[n]);
            inside = in_half_open(u, v, S[n + 1], T[n + 1], num, den, w1, w2, w3);
        }
        if (!inside)
            mask |= 1LL << 10;
        if (n < N) {
            mpz_mul(u, Q[n + 1], Q[n + 1]); mpz_mul(v, u, b[i + 1]);
            mpz_mul(w1, T[n + 1], T[n + 1]); mpz_sub(w1, w1, u);
            if (mpz_cmp(v, w1) <= 0)
                mask |= 1LL << 11;
            if (mpz_cmp_ui(b[i], 8) >= 0 && mpz_cmp(b[i + 1], c[i]) < 0) {
                mpz_mul_ui(u, c[i + 1], 2); mpz_mul_ui(v, b[i], 3);
                if (mpz_cmp(u, v) <= 0)
                    mask |= 1LL << 12;
            }
        }
    }
    mpz_clears(u, v, w1, w2, w3, num, den, a, r, width, bmin, q1, NULL);
    for (k = 0; k < N + 2; k++) {
        mpz_clear(P[k]); mpz_clear(Q[k]); mpz_clear(S[k]); mpz_clear(T[k]);
    }
    free(P); free(Q); free(S); free(T);
    return mask;
}
