#include "bpq/arith.hpp"

#include <cstdlib>
#include <numeric>

namespace bpq::arith {

int nu2(long long k)
{
    if (k == 0)
        throw std::domain_error("nu2: argument must be nonzero");
    unsigned long long u = (unsigned long long)std::llabs(k);
    return __builtin_ctzll(u);
}

bool is_prime(long long n)
{
    if (n < 2)
        return false;
    if (n % 2 == 0)
        return n == 2;
    if (n > 1000000LL * 1000000LL)
        throw std::domain_error("is_prime: out of trial-division range");
    for (long long d = 3; d * d <= n; d += 2)
        if (n % d == 0)
            return false;
    return true;
}

OddPrime::OddPrime(long long p) : value(p)
{
    if (p < 3 || p % 2 == 0 || !is_prime(p))
        throw std::domain_error("OddPrime: value must be an odd prime");
}

int epsilon(OddPrime p)
{
    return nu2(p.value - 1);
}

int lambda(OddPrime p)
{
    return nu2(p.value * p.value - 1);
}

int legendre(long long a, OddPrime p)
{
    long long m = a % p.value;
    if (m < 0)
        m += p.value;
    if (m == 0)
        return 0;
    // Euler's criterion: a^{(p-1)/2} mod p
    long long e = (p.value - 1) / 2, base = m, r = 1;
    while (e) {
        if (e & 1)
            r = (r * base) % p.value;
        base = (base * base) % p.value;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

namespace {

long long square_free_core(Rational r)
{
    if (r.num == 0 || r.den == 0)
        throw std::domain_error("hilbert symbol: arguments must be nonzero");
    long long g = std::gcd(std::llabs(r.num), std::llabs(r.den));
    return (r.num / g) * (r.den / g);
}

}  // namespace

int hilbert_odd(Rational a, Rational b, OddPrime l)
{
    long long A = square_free_core(a), B = square_free_core(b);
    int alpha = 0, beta = 0;
    while (A % l.value == 0) {
        A /= l.value;
        ++alpha;
    }
    while (B % l.value == 0) {
        B /= l.value;
        ++beta;
    }
    int e = (alpha & 1) * (beta & 1) * int(((l.value - 1) / 2) & 1);
    int s = (e & 1) ? -1 : 1;
    if (beta & 1)
        s *= legendre(A, l);
    if (alpha & 1)
        s *= legendre(B, l);
    return s;
}

int hilbert_two(Rational a, Rational b)
{
    long long A = square_free_core(a), B = square_free_core(b);
    int alpha = nu2(A), beta = nu2(B);
    long long u = A >> alpha, v = B >> beta;  // odd, sign kept
    long long e = ((u - 1) / 2) * ((v - 1) / 2);
    if (alpha & 1)
        e += (v * v - 1) / 8;
    if (beta & 1)
        e += (u * u - 1) / 8;
    return (e & 1) ? -1 : 1;
}

int hilbert_real(Rational a, Rational b)
{
    long long A = square_free_core(a), B = square_free_core(b);
    return (A < 0 && B < 0) ? -1 : 1;
}

}  // namespace bpq::arith
