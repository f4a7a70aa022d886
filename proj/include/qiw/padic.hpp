#pragma once

// l-adic integers at fixed precision (l odd): Iwasawa logarithm, Hensel
// square roots, Fermat quotients and discrete logs in 1 + lZ_l.

#include <optional>
#include <ostream>
#include <string>

#include "qiw/bigint.hpp"
#include "qiw/errors.hpp"

namespace qiw {

inline void require_odd_prime(Int const& ell)
{
    if (ell == 2)
        throw invalid_input("ell odd", "ell must be an odd prime (got 2)");
    if (!is_prime(ell))
        throw invalid_input("ell prime", "ell must be an odd prime (got " + ell.get_str() + ")");
}

// An element of Z_l known modulo l^m.
class PadicInt
{
    Int p;
    long m = 1;
    Int r;

  public:
    PadicInt(Int ell, long precision, Int const& residue) : p(std::move(ell)), m(precision)
    {
        if (m < 1)
            throw invalid_input("PadicInt: precision must be >= 1");
        r = mod(residue, modulus());
    }

    // x must be l-integral.
    static PadicInt from_rational(Rat const& x, Int const& ell, long precision)
    {
        if (divides(ell, x.get_den()))
            throw invalid_input("PadicInt::from_rational: " + x.get_str() + " is not " + ell.get_str() + "-integral");
        Int mod_n = pow_int(ell, static_cast<unsigned long>(precision));
        return PadicInt(ell, precision, mod(Int(x.get_num()), mod_n) * invmod(Int(x.get_den()), mod_n));
    }

    Int const& prime() const { return p; }
    long precision() const { return m; }
    Int const& residue() const { return r; }
    Int modulus() const { return pow_int(p, static_cast<unsigned long>(m)); }

    // v_l of the residue, capped at the precision.
    long valuation() const { return r == 0 ? m : valuation_of_nonzero(); }
    bool is_unit() const { return !divides(p, r); }

    PadicInt truncate(long precision) const
    {
        if (precision > m)
            throw precision_error(precision, "PadicInt::truncate: cannot raise precision " + std::to_string(m) +
                                                 " to " + std::to_string(precision));
        return PadicInt(p, precision, r);
    }

    PadicInt operator-() const { return PadicInt(p, m, -r); }

    PadicInt inverse() const
    {
        if (!is_unit())
            throw invalid_input("PadicInt::inverse: not a unit");
        return PadicInt(p, m, invmod(r, modulus()));
    }

    PadicInt pow(Int const& e) const
    {
        if (e < 0)
            return inverse().pow(-e);
        return PadicInt(p, m, powmod(r, e, modulus()));
    }

    friend PadicInt operator+(PadicInt const& a, PadicInt const& b) { return combine(a, b, a.r + b.r); }
    friend PadicInt operator-(PadicInt const& a, PadicInt const& b) { return combine(a, b, a.r - b.r); }
    friend PadicInt operator*(PadicInt const& a, PadicInt const& b) { return combine(a, b, a.r * b.r); }

    friend bool operator==(PadicInt const& a, PadicInt const& b)
    {
        return a.p == b.p && a.m == b.m && a.r == b.r;
    }

    friend std::ostream& operator<<(std::ostream& os, PadicInt const& x)
    {
        return os << x.r << " mod " << x.p << '^' << x.m;
    }

  private:
    long valuation_of_nonzero() const { return qiw::valuation(r, p); }

    static PadicInt combine(PadicInt const& a, PadicInt const& b, Int const& value)
    {
        if (a.p != b.p)
            throw invalid_input("PadicInt: mixing primes " + a.p.get_str() + " and " + b.p.get_str());
        return PadicInt(a.p, std::min(a.m, b.m), value);
    }
};

// A value with a valuation certificate. Division by powers of l goes
// through here so precision loss is always explicit.
class PadicVal
{
    std::optional<PadicInt> v;
    long declared = kInfiniteValuation;

  public:
    static PadicVal exactly_zero() { return PadicVal{}; }

    static PadicVal of(PadicInt x)
    {
        PadicVal out;
        out.declared = x.valuation();
        out.v = std::move(x);
        return out;
    }

    bool is_exact_zero() const { return !v.has_value(); }
    long declared_valuation() const { return declared; }
    PadicInt const& value() const
    {
        if (!v)
            throw invalid_input("PadicVal: exact zero has no residue");
        return *v;
    }

    // x / l^k, known modulo l^(m-k).
    PadicInt divide_by_ell_power(long k) const
    {
        if (!v)
            throw invalid_input("PadicVal: cannot shift the exact zero to a finite precision");
        if (k < 0 || k > declared)
            throw invalid_input("PadicVal: valuation " + std::to_string(declared) + " does not certify division by l^" +
                                std::to_string(k));
        long const m = v->precision();
        if (k >= m)
            throw precision_error(k + 1, "PadicVal: dividing by l^" + std::to_string(k) + " leaves no digits at precision " +
                                             std::to_string(m));
        Int q = v->residue() / pow_int(v->prime(), static_cast<unsigned long>(k));
        return PadicInt(v->prime(), m - k, q);
    }
};

// v_l(x); kInfiniteValuation for x == 0.
inline long padic_val(Rat const& x, Int const& ell)
{
    if (x == 0)
        return kInfiniteValuation;
    return valuation(Int(x.get_num()), ell) - valuation(Int(x.get_den()), ell);
}

inline long floor_log(Int const& ell, long k)
{
    long e = 0;
    Int p = ell;
    while (p <= k) {
        ++e;
        p *= ell;
    }
    return e;
}

// Number of series terms for log(1 + t), v(t) >= 1, to be exact mod l^m:
// every k with k - floor(log_l k) < m. Returns (k_max, padding).
inline std::pair<long, long> log_series_terms(Int const& ell, long m)
{
    long k = 1;
    while ((k + 1) - floor_log(ell, k + 1) < m)
        ++k;
    if (k - floor_log(ell, k) >= m)
        k = 0;
    return {k, k ? floor_log(ell, k) : 0};
}

namespace detail {

// Log of a unit given by a residue modulo l^N with N >= m + padding.
inline PadicInt log_unit_residue(Int const& u, Int const& ell, long m)
{
    auto [k_max, pad] = log_series_terms(ell, m);
    long const n = m + pad;
    Int const mod_n = pow_int(ell, static_cast<unsigned long>(n));
    Int const mod_m = pow_int(ell, static_cast<unsigned long>(m));
    Int const w = powmod(u, ell - 1, mod_n);
    Int const t = mod(w - 1, mod_n);
    Int sum = 0;
    Int tk = 1;
    for (long k = 1; k <= k_max; ++k) {
        tk = mod(tk * t, mod_n);
        long vk = valuation(Int(k), ell);
        PadicInt term = PadicVal::of(PadicInt(ell, n, tk)).divide_by_ell_power(vk).truncate(m);
        Int unit_part = Int(k) / pow_int(ell, static_cast<unsigned long>(vk));
        Int contrib = term.residue() * invmod(unit_part, mod_m);
        if (k % 2 == 1)
            sum += contrib;
        else
            sum -= contrib;
    }
    sum = mod(sum * invmod(ell - 1, mod_m), mod_m);
    return PadicInt(ell, m, sum);
}

} // namespace detail

// Iwasawa logarithm of a unit of Z_l known mod l^m; exact mod l^m.
inline PadicInt iwasawa_log(PadicInt const& x)
{
    require_odd_prime(x.prime());
    if (!x.is_unit())
        throw invalid_input("iwasawa_log: argument is not an l-adic unit; remove its l-power first");
    return detail::log_unit_residue(x.residue(), x.prime(), x.precision());
}

// Iwasawa logarithm of a nonzero rational, with Log(l) = 0 and roots of
// unity in the kernel.
inline PadicInt iwasawa_log(Rat const& x, Int const& ell, long m)
{
    require_odd_prime(ell);
    if (x == 0)
        throw invalid_input("iwasawa_log: Log(0) is undefined");
    if (m < 1)
        throw invalid_input("iwasawa_log: precision must be >= 1");
    Int num = x.get_num();
    Int den = x.get_den();
    while (divides(ell, num))
        num /= ell;
    while (divides(ell, den))
        den /= ell;
    long pad = log_series_terms(ell, m).second;
    Int mod_n = pow_int(ell, static_cast<unsigned long>(m + pad));
    Int u = mod(num, mod_n) * invmod(den, mod_n);
    return detail::log_unit_residue(mod(u, mod_n), ell, m);
}

// ((q^(l-1) - 1) / l) mod l
inline Int fermat_quotient(Int const& q, Int const& ell)
{
    require_odd_prime(ell);
    if (divides(ell, q))
        throw invalid_input("fermat_quotient: " + ell.get_str() + " divides " + q.get_str());
    Int l2 = ell * ell;
    Int w = powmod(mod(q, l2), ell - 1, l2);
    return mod((w - 1) / ell, ell);
}

// Tonelli-Shanks; a must be a nonzero square mod the odd prime p.
inline Int sqrt_mod_prime(Int const& a, Int const& p)
{
    Int x = mod(a, p);
    if (kronecker(x, p) != 1)
        throw invalid_input("sqrt_mod_prime: " + a.get_str() + " is not a nonzero square mod " + p.get_str());
    Int q = p - 1;
    long s = 0;
    while (divides(Int(2), q)) {
        q /= 2;
        ++s;
    }
    Int z = 2;
    while (kronecker(z, p) != -1)
        ++z;
    Int c = powmod(z, q, p);
    Int r = powmod(x, (q + 1) / 2, p);
    Int t = powmod(x, q, p);
    long mm = s;
    while (t != 1) {
        long i = 0;
        Int tt = t;
        while (tt != 1) {
            tt = mod(tt * tt, p);
            ++i;
        }
        Int b = c;
        for (long j = 0; j < mm - i - 1; ++j)
            b = mod(b * b, p);
        r = mod(r * b, p);
        c = mod(b * b, p);
        t = mod(t * c, p);
        mm = i;
    }
    return r;
}

// Root r of r^2 = a mod l^m. The root returned is the one whose reduction
// mod l lies in [1, (l-1)/2]; the other root is -r.
inline PadicInt hensel_sqrt(Int const& a, Int const& ell, long m)
{
    require_odd_prime(ell);
    if (m < 1)
        throw invalid_input("hensel_sqrt: precision must be >= 1");
    if (kronecker(a, ell) != 1)
        throw invalid_input("hensel_sqrt: " + a.get_str() + " is not a nonzero square mod " + ell.get_str());
    Int r = sqrt_mod_prime(a, ell);
    if (r > (ell - 1) / 2)
        r = ell - r;
    long k = 1;
    while (k < m) {
        k = std::min(2 * k, m);
        Int mk = pow_int(ell, static_cast<unsigned long>(k));
        r = mod(r - (r * r - a) * invmod(2 * r, mk), mk);
    }
    return PadicInt(ell, m, r);
}

// Log(u) / l for a unit u known mod l^m; the result is known mod l^(m-1).
inline PadicInt log_over_ell(PadicInt const& u)
{
    if (u.precision() < 2)
        throw precision_error(2, "log_over_ell: need precision >= 2");
    return PadicVal::of(iwasawa_log(u)).divide_by_ell_power(1);
}

// e with (1 + l)^e = u mod l^m, returned as a residue mod l^(m-1).
inline Int principal_unit_dlog(PadicInt const& u)
{
    require_odd_prime(u.prime());
    if (mod(u.residue() - 1, u.prime()) != 0)
        throw invalid_input("principal_unit_dlog: argument is not congruent to 1 mod l");
    long const m = u.precision();
    if (m == 1)
        return Int(0);
    Int const& ell = u.prime();
    PadicInt num = log_over_ell(u);
    PadicInt den = log_over_ell(PadicInt(ell, m, ell + 1));
    return (num * den.inverse()).residue();
}

} // namespace qiw
