#pragma once

// Brute-force reference computations used to check the library. None of these
// call into the code they check; each one recomputes its quantity the slow way.

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>
#include <utility>
#include <vector>

namespace oracle {

// Seeded generator with the few draws the tests need.
class Rng
{
    std::mt19937_64 g;

  public:
    explicit Rng(std::uint64_t seed) : g(seed) {}

    long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(g); }
    bool coin() { return uniform(0, 1) == 1; }

    template <class T>
    T const& pick(std::vector<T> const& v)
    {
        return v[static_cast<std::size_t>(uniform(0, static_cast<long>(v.size()) - 1))];
    }
};

inline long gcd(long a, long b) { return std::gcd(a, b); }

inline long pmod(long a, long n)
{
    long r = a % n;
    return r < 0 ? r + n : r;
}

inline long mulmod(long a, long b, long n) { return static_cast<long>((__int128)pmod(a, n) * pmod(b, n) % n); }

inline long powmod(long b, long e, long n)
{
    long r = 1 % n;
    b = pmod(b, n);
    for (; e > 0; e >>= 1, b = mulmod(b, b, n))
        if (e & 1)
            r = mulmod(r, b, n);
    return r;
}

inline bool is_prime(long n)
{
    if (n < 2)
        return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

inline long isqrt(long n)
{
    if (n < 0)
        return -1;
    long r = static_cast<long>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

// ---------------------------------------------------------------------------
// Finite abelian groups as explicit sets.

using Vec = std::vector<long>;

// Histogram order -> number of elements of Z/d_1 + ... + Z/d_k. Two finite
// abelian groups are isomorphic iff these histograms agree.
inline std::map<long, long> order_histogram(Vec const& d)
{
    std::map<long, long> h;
    Vec x(d.size(), 0);
    while (true) {
        long o = 1;
        for (std::size_t i = 0; i < d.size(); ++i)
            o = std::lcm(o, d[i] / gcd(d[i], x[i]));
        ++h[o];
        std::size_t i = 0;
        while (i < d.size() && ++x[i] == d[i])
            x[i++] = 0;
        if (i == d.size())
            break;
    }
    return h;
}

// Mixed-radix encoding of vectors modulo `mods`.
struct Codec
{
    Vec mods;

    long encode(Vec const& x) const
    {
        long c = 0;
        for (std::size_t i = mods.size(); i-- > 0;)
            c = c * mods[i] + pmod(x[i], mods[i]);
        return c;
    }
    Vec decode(long c) const
    {
        Vec x(mods.size());
        for (std::size_t i = 0; i < mods.size(); ++i) {
            x[i] = c % mods[i];
            c /= mods[i];
        }
        return x;
    }
    long size() const
    {
        long s = 1;
        for (long m : mods)
            s *= m;
        return s;
    }
    Vec add(Vec const& a, Vec const& b) const
    {
        Vec c(mods.size());
        for (std::size_t i = 0; i < mods.size(); ++i)
            c[i] = pmod(a[i] + b[i], mods[i]);
        return c;
    }
};

// The subgroup generated by `gens`, as a set of codes.
inline std::unordered_set<long> span(Codec const& c, std::vector<Vec> const& gens)
{
    std::unordered_set<long> s{0};
    for (auto const& g : gens) {
        if (s.count(c.encode(g)))
            continue;
        std::vector<long> base(s.begin(), s.end());
        Vec mult = g;
        while (!s.count(c.encode(mult))) {
            for (long b : base)
                s.insert(c.encode(c.add(c.decode(b), mult)));
            mult = c.add(mult, g);
        }
    }
    return s;
}

// (G ^ G) / sum_v <x ^ y : x, y in H_v> for G = sum Z/d_i, H_v generated by
// the given image vectors. Lambda^2 G is listed as coefficient vectors on
// e_i ^ e_j (i < j) modulo gcd(d_i, d_j). Returns the order histogram of the
// quotient.
inline std::map<long, long> knot_group_histogram(Vec const& d, std::vector<std::vector<Vec>> const& subgroups)
{
    std::size_t const k = d.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    Codec alt;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            pairs.emplace_back(i, j);
            alt.mods.push_back(gcd(d[i], d[j]));
        }
    auto wedge = [&](Vec const& x, Vec const& y) {
        Vec w(pairs.size());
        for (std::size_t t = 0; t < pairs.size(); ++t) {
            auto [i, j] = pairs[t];
            w[t] = pmod(x[i] * y[j] - x[j] * y[i], alt.mods[t]);
        }
        return w;
    };

    Codec g{d};
    std::vector<Vec> rel;
    for (auto const& gens : subgroups) {
        auto h = span(g, gens);
        std::vector<Vec> elems;
        if (h.size() <= 81) {
            for (long c : h)
                elems.push_back(g.decode(c));
        } else {
            elems = gens;
        }
        for (auto const& x : elems)
            for (auto const& y : elems)
                rel.push_back(wedge(x, y));
    }
    auto s = span(alt, rel);

    std::map<long, long> hist;
    long const n = alt.size();
    for (long c = 0; c < n; ++c) {
        Vec x = alt.decode(c);
        Vec acc = x;
        long o = 1;
        while (!s.count(alt.encode(acc))) {
            acc = alt.add(acc, x);
            ++o;
        }
        ++hist[o];
    }
    long const ss = static_cast<long>(s.size());
    for (auto& [o, cnt] : hist)
        cnt /= ss;
    return hist;
}

// ---------------------------------------------------------------------------
// Binary quadratic forms.

// Reduced primitive positive definite forms of discriminant D < 0.
inline long imaginary_form_count(long disc)
{
    long count = 0;
    for (long a = 1; 3 * a * a <= -disc; ++a)
        for (long b = -a + 1; b <= a; ++b) {
            long num = b * b - disc;
            if (num % (4 * a))
                continue;
            long c = num / (4 * a);
            if (c < a)
                continue;
            if (c == a && b < 0)
                continue;
            if (std::gcd(std::gcd(a, std::abs(b)), c) != 1)
                continue;
            ++count;
        }
    return count;
}

struct Form
{
    long a, b, c;
    auto operator<=>(Form const&) const = default;
};

struct IndefiniteClasses
{
    long narrow = 0; // number of cycles of reduced forms
    long wide = 0;
    bool minus_one_norm = false; // principal and negated principal form share a cycle
};

// Reduced indefinite forms: 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b.
// Each proper equivalence class is one cycle under the right neighbour map.
inline IndefiniteClasses indefinite_classes(long disc)
{
    long const s = isqrt(disc);
    auto reduced = [&](long a, long b) {
        long aa = std::abs(a);
        if (b <= 0 || b > s)
            return false;
        long lo = 2 * aa + b; // sqrt D < 2|a| + b
        long hi = 2 * aa - b; // 2|a| - b < sqrt D
        return lo * lo > disc && (hi < 0 || hi * hi < disc);
    };
    std::set<Form> all;
    for (long b = 1; b <= s; ++b) {
        if (pmod(b - disc, 2))
            continue;
        long ac = (b * b - disc) / 4; // negative
        for (long a = 1; a <= -ac; ++a) {
            if (ac % a)
                continue;
            for (long sa : {a, -a}) {
                long c = ac / sa;
                if (std::gcd(std::gcd(a, b), std::abs(c)) != 1)
                    continue;
                if (reduced(sa, b))
                    all.insert({sa, b, c});
            }
        }
    }
    // right neighbour: (a, b, c) -> (c, b', *), b' = -b mod 2|c| with
    // s - 2|c| < b' <= s
    auto next = [&](Form const& f) {
        long m = 2 * std::abs(f.c);
        long bp = s - pmod(s + f.b, m);
        long cp = (bp * bp - disc) / (4 * f.c);
        return Form{f.c, bp, cp};
    };
    IndefiniteClasses out;
    std::set<Form> seen;
    std::map<Form, long> cycle_of;
    for (auto const& f : all) {
        if (seen.count(f))
            continue;
        Form g = f;
        do {
            seen.insert(g);
            cycle_of[g] = out.narrow;
            g = next(g);
        } while (!(g == f));
        ++out.narrow;
    }
    long b0 = s;
    if (pmod(b0 - disc, 2))
        --b0;
    Form principal{1, b0, (b0 * b0 - disc) / 4};
    Form negated{-1, b0, -(b0 * b0 - disc) / 4};
    out.minus_one_norm = cycle_of.at(principal) == cycle_of.at(negated);
    out.wide = out.minus_one_norm ? out.narrow : out.narrow / 2;
    return out;
}

// Number of distinct primes dividing the fundamental discriminant.
inline long ramified_prime_count(long disc)
{
    long n = std::abs(disc), t = 0;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            ++t;
            while (n % p == 0)
                n /= p;
        }
    return t + (n > 1);
}

// -1 is a norm from Q(sqrt D) iff every odd prime dividing D is 1 mod 4
// (local conditions at odd ramified primes; the one at 2 follows from the
// product formula).
inline bool minus_one_is_field_norm(long disc)
{
    if (disc < 0)
        return false;
    long n = disc;
    while (n % 2 == 0)
        n /= 2;
    for (long p = 3; p * p <= n; p += 2)
        if (n % p == 0) {
            if (p % 4 != 1)
                return false;
            while (n % p == 0)
                n /= p;
        }
    return n == 1 || n % 4 == 1;
}

// ---------------------------------------------------------------------------
// l-adic arithmetic by search.

// All x in [0, n) with x^2 = a mod n.
inline std::vector<long> square_roots(long a, long n)
{
    std::vector<long> out;
    for (long x = 0; x < n; ++x)
        if (mulmod(x, x, n) == pmod(a, n))
            out.push_back(x);
    return out;
}

// Smallest prime q != l with q^(l-1) = 1 mod l^2.
inline long first_wieferich_base(long ell)
{
    for (long q = 2;; ++q)
        if (q != ell && is_prime(q) && powmod(q, ell - 1, ell * ell) == 1)
            return q;
}

// l-part of the ray class group of Q(sqrt 5) modulo l^2 for a split l, via
// (O/l^2)^x = (Z/l^2)^x x (Z/l^2)^x modulo the units {+-eps^k}; h = 1.
// Returns the order of that l-part.
inline long ray_order_sqrt5(long ell)
{
    long const n = ell * ell;
    long r = -1;
    for (long x = 0; x < n; ++x)
        if (mulmod(x, x, n) == 5 % n) {
            r = x;
            break;
        }
    long const half = (n + 1) / 2; // inverse of 2
    auto eps = [&](long root) { return mulmod(pmod(1 + root, n), half, n); };
    long e1 = eps(r), e2 = eps(n - r);
    std::set<std::pair<long, long>> units;
    long a = 1, b = 1;
    do {
        units.insert({a, b});
        units.insert({n - a, n - b});
        a = mulmod(a, e1, n);
        b = mulmod(b, e2, n);
    } while (!(a == 1 && b == 1));
    long const phi = n - ell;
    long q = phi * phi / static_cast<long>(units.size());
    long lpart = 1;
    while (q % ell == 0) {
        q /= ell;
        lpart *= ell;
    }
    return lpart;
}

} // namespace oracle
