#ifndef SHULGA_GMPCORE_H
#define SHULGA_GMPCORE_H
#include <gmp.h>

/* status: 0 terminated, 1 step cap, 2 undefined digit, -1 out of memory.
 * *pb and *pc are grown with realloc; release them with sg_free_digits. */
int sg_decompose(const mpz_t p, const mpz_t q, int max_steps,
                 mpz_t **pb, mpz_t **pc, int *cap, int *nb, int *nc);
void sg_free_digits(mpz_t *b, mpz_t *c, int cap);
long long sg_audit(const mpz_t p, const mpz_t q, mpz_t *b, mpz_t *c, int N, int terminated);

#endif
