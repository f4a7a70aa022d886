#pragma once

// The split prime l: the two primes above it, the embeddings of K into Q_l
// they induce, and the l-part of (O / l^m)^x.

#include <array>
#include <string>
#include <utility>

#include "qiw/abelian.hpp"
#include "qiw/bigint.hpp"
#include "qiw/errors.hpp"
#include "qiw/field.hpp"
#include "qiw/ideal.hpp"
#include "qiw/padic.hpp"

namespace qiw {

inline bool is_totally_ell_adic(Int const& disc, Int const& ell)
{
    require_odd_prime(ell);
    return kronecker(disc, ell) == 1;
}

inline void require_split(FieldDesc const& f, Int const& ell)
{
    require_odd_prime(ell);
    if (kronecker(f.disc, ell) != 1)
        throw invalid_input("totally ell-adic",
                            ell.get_str() + " does not split in Q(sqrt(" + f.disc.get_str() + ")): Kronecker symbol is " +
                                std::to_string(kronecker(f.disc, ell)));
}

// x = l^valuation * unit in Q_l.
struct LocalValue
{
    long valuation = 0;
    PadicInt unit;
};

// One of the two embeddings K -> Q_l. The principal embedding sends sqrt(D)
// to the Hensel root r of D with r mod l in [1, (l-1)/2]; the conjugate one
// sends it to -r.
class Embedding
{
    Int d;
    Int p;
    bool conjugate = false;

  public:
    Embedding(Int disc, Int ell, bool conj) : d(std::move(disc)), p(std::move(ell)), conjugate(conj) {}

    Int const& disc() const { return d; }
    Int const& prime() const { return p; }
    bool is_conjugate() const { return conjugate; }
    Embedding swapped() const { return Embedding(d, p, !conjugate); }

    // image of w modulo l^n
    PadicInt omega_image(long n) const
    {
        PadicInt s = hensel_sqrt(d, p, n);
        Int root = conjugate ? -s.residue() : s.residue();
        return PadicInt(p, n, (d + root) * invmod(Int(2), s.modulus()));
    }

    // iota(x) with its unit part known modulo l^m.
    LocalValue apply(QuadElem const& x, long m) const
    {
        if (x.disc() != d)
            throw invalid_input("Embedding::apply: element of another field");
        if (x.is_zero())
            throw invalid_input("Embedding::apply: zero has no unit part");
        Int den = x.denominator();
        Int a = Int(x.a() * Rat(den));
        Int b = Int(x.b() * Rat(den));
        // v(a + b w) <= v(N(a + b w)) under either embedding
        Rat nrm = QuadElem(d, a, b).norm();
        long vn = valuation(Int(nrm), p);
        long n = m + vn + 1;
        PadicInt w = omega_image(n);
        PadicInt t(p, n, a + b * w.residue());
        long vt = t.valuation();
        if (vt >= n)
            throw consistency_error("Embedding::apply: valuation exceeds the norm bound");
        PadicInt num = PadicVal::of(t).divide_by_ell_power(vt).truncate(m);
        long vd = valuation(den, p);
        Int den_unit = den / pow_int(p, static_cast<unsigned long>(vd));
        return {vt - vd, num * PadicInt(p, m, den_unit).inverse()};
    }

    // iota(x) mod l^m for an l-integral x.
    PadicInt image(QuadElem const& x, long m) const
    {
        auto v = apply(x, m);
        if (v.valuation < 0)
            throw invalid_input("Embedding::image: element is not integral at this prime");
        Int scale = pow_int(p, static_cast<unsigned long>(v.valuation));
        return PadicInt(p, m, scale * v.unit.residue());
    }
};

struct PrimesAboveEll
{
    QuadIdeal l;
    QuadIdeal l_conj;
    Embedding iota_l;
    Embedding iota_l_conj;
};

// (l) = l * l'; l = [l, b + w] is the kernel of iota_l reduced mod l.
inline PrimesAboveEll primes_above_ell(FieldDesc const& f, Int const& ell)
{
    require_split(f, ell);
    Embedding e(f.disc, ell, false);
    Int r = e.omega_image(1).residue();
    QuadIdeal l(f.disc, ell, mod(-r, ell));
    QuadIdeal lc(f.disc, ell, mod(-(f.disc - r), ell));
    if (l == lc)
        throw consistency_error("primes_above_ell: conjugate primes coincide");
    return {l, lc, e, e.swapped()};
}

// l-part of (O / l^m)^x = (Z/l^m)^x x (Z/l^m)^x via (iota_l, iota_l'),
// each factor's l-part being 1 + lZ_l mod l^m, cyclic of order l^(m-1)
// generated by 1 + l.
class ResidueUnits
{
    Int p;
    long m;
    Embedding e1, e2;

  public:
    ResidueUnits(PrimesAboveEll const& pr, long precision)
        : p(pr.iota_l.prime()), m(precision), e1(pr.iota_l), e2(pr.iota_l_conj)
    {
        if (m < 1)
            throw invalid_input("ResidueUnits: precision must be >= 1");
    }

    long precision() const { return m; }
    Int component_order() const { return pow_int(p, static_cast<unsigned long>(m - 1)); }

    FinAbGroup group() const
    {
        if (m == 1)
            return FinAbGroup::trivial();
        Int o = component_order();
        return FinAbGroup({o, o});
    }

    // Discrete log of the l-part projection of a unit of Z_l.
    static Int unit_dlog(PadicInt const& u)
    {
        Int const& ell = u.prime();
        long const mm = u.precision();
        if (mm == 1)
            return 0;
        Int e = principal_unit_dlog(u.pow(ell - 1));
        Int mod_e = pow_int(ell, static_cast<unsigned long>(mm - 1));
        return mod(e * invmod(ell - 1, mod_e), mod_e);
    }

    // Coordinates of x (prime to l) in the two cyclic factors.
    std::array<Int, 2> dlog(QuadElem const& x) const
    {
        auto a = e1.apply(x, m);
        auto b = e2.apply(x, m);
        if (a.valuation != 0 || b.valuation != 0)
            throw invalid_input("ResidueUnits::dlog: element is not prime to l");
        return {unit_dlog(a.unit), unit_dlog(b.unit)};
    }
};

} // namespace qiw
