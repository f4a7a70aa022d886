#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qiw {

using Int = mpz_class;
using Rat = mpq_class;

inline constexpr long kInfiniteValuation = std::numeric_limits<long>::max();

inline std::string to_string(Int const& x) { return x.get_str(); }

inline std::string to_string(Rat const& x) { return x.get_str(); }

// Non-negative residue of x modulo n (n > 0).
inline Int mod(Int const& x, Int const& n)
{
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline Int floor_div(Int const& a, Int const& b)
{
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int abs_int(Int const& x) { return abs(x); }

inline Int gcd_int(Int const& a, Int const& b)
{
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm_int(Int const& a, Int const& b)
{
    Int g;
    mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

// g = u*a + v*b
inline Int gcdext(Int const& a, Int const& b, Int& u, Int& v)
{
    Int g;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int isqrt(Int const& x)
{
    Int r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

inline bool is_square(Int const& x) { return x >= 0 && mpz_perfect_square_p(x.get_mpz_t()) != 0; }

inline Int pow_int(Int const& b, unsigned long e)
{
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Int powmod(Int const& b, Int const& e, Int const& n)
{
    Int r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), n.get_mpz_t());
    return r;
}

// Inverse of a modulo n; the caller guarantees gcd(a, n) = 1.
inline Int invmod(Int const& a, Int const& n)
{
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t()) == 0)
        throw std::domain_error("invmod: " + a.get_str() + " is not invertible mod " + n.get_str());
    return r;
}

inline bool is_prime(Int const& n) { return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 30) != 0; }

inline bool is_prime(long n) { return is_prime(Int(n)); }

inline long next_prime(long n)
{
    Int r;
    mpz_nextprime(r.get_mpz_t(), Int(n).get_mpz_t());
    return r.get_si();
}

inline int kronecker(Int const& a, Int const& b) { return mpz_kronecker(a.get_mpz_t(), b.get_mpz_t()); }

// v_p(x) for x != 0; kInfiniteValuation for x == 0.
inline long valuation(Int const& x, Int const& p)
{
    if (x == 0)
        return kInfiniteValuation;
    Int t = x;
    long v = 0;
    while (mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

inline bool divides(Int const& d, Int const& x) { return mpz_divisible_p(x.get_mpz_t(), d.get_mpz_t()) != 0; }

inline bool fits_long(Int const& x) { return x.fits_slong_p(); }

inline std::vector<long> small_primes_up_to(long n)
{
    std::vector<bool> sieve(static_cast<size_t>(n + 1), true);
    std::vector<long> out;
    for (long i = 2; i <= n; ++i) {
        if (!sieve[static_cast<size_t>(i)])
            continue;
        out.push_back(i);
        for (long j = i * i; j <= n; j += i)
            sieve[static_cast<size_t>(j)] = false;
    }
    return out;
}

} // namespace qiw
