#ifndef BPQ_ARITH_HPP
#define BPQ_ARITH_HPP

#include <cstdint>
#include <stdexcept>

namespace bpq::arith {

/* 2-adic valuation of a nonzero integer */
int nu2(long long k);

bool is_prime(long long n);

/* Odd prime, checked at construction (trial division; everything in play is tiny). */
struct OddPrime {
    long long value;
    explicit OddPrime(long long p);
};

/* eps(p) = nu2(p-1), lambda(p) = nu2(p^2-1) = eps(p) + nu2(p+1) */
int epsilon(OddPrime p);
int lambda(OddPrime p);

/* Legendre symbol (a/p): +1, -1, or 0 when p | a */
int legendre(long long a, OddPrime p);

/* Nonzero rational as numerator/denominator; symbols only depend on the
 * square class, so (num, den) is used through num*den. */
struct Rational {
    long long num;
    long long den = 1;
};

/* Hilbert symbol at an odd place l:
 *   a = l^alpha u, b = l^beta v, l not dividing u, v:
 *   (a,b)_l = (-1)^{alpha beta (l-1)/2} (u/l)^beta (v/l)^alpha        */
int hilbert_odd(Rational a, Rational b, OddPrime l);

/* Hilbert symbol at 2:
 *   a = 2^alpha u, b = 2^beta v, u, v odd:
 *   (a,b)_2 = (-1)^{ (u-1)/2 (v-1)/2 + alpha (v^2-1)/8 + beta (u^2-1)/8 } */
int hilbert_two(Rational a, Rational b);

/* Real place: -1 iff both arguments negative. */
int hilbert_real(Rational a, Rational b);

}  // namespace bpq::arith

#endif
