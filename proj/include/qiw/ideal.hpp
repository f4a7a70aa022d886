#pragma once

// Fractional ideals s * [a, b + w] of a quadratic order of fundamental
// discriminant D, with multiplication through the HNF of the product lattice
// and reduction (Gauss for D < 0, continued-fraction cycles for D > 0) that
// records the element relating input and output.

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qiw/bigint.hpp"
#include "qiw/errors.hpp"
#include "qiw/field.hpp"

namespace qiw {

class QuadIdeal
{
    Int d;
    Int a_ = 1;
    Int b_ = 0;
    Rat s = 1;

  public:
    // s * [a, b + w]; a | N(b + w) is checked.
    QuadIdeal(Int disc, Int a, Int b, Rat scale = 1) : d(std::move(disc)), a_(std::move(a)), s(std::move(scale))
    {
        if (a_ <= 0)
            throw invalid_input("QuadIdeal: a must be positive");
        if (s <= 0)
            throw invalid_input("QuadIdeal: scale must be positive");
        b_ = mod(b, a_);
        Int nb = b_ * b_ + b_ * d + (d * d - d) / 4;
        if (!divides(a_, nb))
            throw invalid_input("QuadIdeal: [" + a_.get_str() + ", " + b_.get_str() + " + w] is not an ideal");
        s.canonicalize();
    }

    static QuadIdeal unit(Int const& disc) { return QuadIdeal(disc, 1, 0); }

    // [a, (B + sqrt(D)) / 2] with B = D mod 2.
    static QuadIdeal from_form(Int const& disc, Int const& a, Int const& big_b, Rat scale = 1)
    {
        Int t = big_b - disc;
        if (!divides(Int(2), t))
            throw invalid_input("QuadIdeal::from_form: B has the wrong parity");
        return QuadIdeal(disc, a, t / 2, std::move(scale));
    }

    Int const& disc() const { return d; }
    Int const& a() const { return a_; }
    Int const& b() const { return b_; }
    Rat const& scale() const { return s; }
    // Representative B of the form (a, B, c) attached to the primitive part.
    Int form_b() const { return 2 * b_ + d; }

    bool is_primitive() const { return s == 1; }
    bool is_integral() const { return s.get_den() == 1; }
    bool is_unit_ideal() const { return a_ == 1 && s == 1; }
    Rat norm() const { return s * s * Rat(a_); }

    QuadIdeal primitive_part() const { return QuadIdeal(d, a_, b_); }
    QuadIdeal scaled(Rat const& t) const { return QuadIdeal(d, a_, b_, s * t); }
    QuadIdeal conj() const { return QuadIdeal(d, a_, -b_ - d, s); }

    // Z-basis of the ideal.
    std::pair<QuadElem, QuadElem> basis() const
    {
        return {QuadElem(d, s * Rat(a_)), QuadElem(d, s * Rat(b_), s)};
    }

    bool contains(QuadElem const& x) const
    {
        if (x.disc() != d)
            return false;
        Rat u = x.a() / s, v = x.b() / s;
        if (v.get_den() != 1)
            return false;
        Rat r = u - v * Rat(b_);
        if (r.get_den() != 1)
            return false;
        return divides(a_, Int(r));
    }

    bool operator==(QuadIdeal const& o) const { return d == o.d && a_ == o.a_ && b_ == o.b_ && s == o.s; }

    std::string to_string() const
    {
        std::string core = "[" + a_.get_str() + ", " + b_.get_str() + "+w]";
        return s == 1 ? core : s.get_str() + "*" + core;
    }

    friend std::ostream& operator<<(std::ostream& os, QuadIdeal const& i) { return os << i.to_string(); }
};

// Ideal spanned over Z by the given elements (which must span an O-module of
// rank 2).
inline QuadIdeal ideal_from_generators(Int const& disc, std::vector<QuadElem> const& gens)
{
    Int den = 1;
    for (auto const& g : gens)
        den = lcm_int(den, g.denominator());
    Int pu = 0, pv = 0, zero_gcd = 0;
    for (auto const& g : gens) {
        Int u = Int(g.a() * Rat(den)), v = Int(g.b() * Rat(den));
        if (v == 0) {
            zero_gcd = gcd_int(zero_gcd, u);
            continue;
        }
        if (pv == 0) {
            pu = u;
            pv = v;
            continue;
        }
        Int x, y;
        Int g2 = gcdext(pv, v, x, y);
        Int nu = x * pu + y * u;
        Int other_u = (v / g2) * pu - (pv / g2) * u;
        zero_gcd = gcd_int(zero_gcd, other_u);
        pu = nu;
        pv = g2;
    }
    if (pv < 0) {
        pv = -pv;
        pu = -pu;
    }
    if (pv == 0 || zero_gcd == 0)
        throw invalid_input("ideal_from_generators: elements do not span a lattice of rank 2");
    if (!divides(pv, zero_gcd) || !divides(pv, pu))
        throw invalid_input("ideal_from_generators: lattice is not an ideal");
    Int a = zero_gcd / pv;
    return QuadIdeal(disc, a, pu / pv, Rat(pv, den));
}

inline QuadIdeal operator*(QuadIdeal const& i, QuadIdeal const& j)
{
    if (i.disc() != j.disc())
        throw invalid_input("QuadIdeal product: different fields");
    auto [x1, y1] = i.basis();
    auto [x2, y2] = j.basis();
    return ideal_from_generators(i.disc(), {x1 * x2, x1 * y2, y1 * x2, y1 * y2});
}

inline QuadIdeal operator*(QuadElem const& mu, QuadIdeal const& j)
{
    if (mu.is_zero())
        throw invalid_input("QuadIdeal: multiplying by zero");
    auto [x, y] = j.basis();
    return ideal_from_generators(j.disc(), {mu * x, mu * y});
}

inline QuadIdeal principal_ideal(QuadElem const& mu)
{
    return mu * QuadIdeal::unit(mu.disc());
}

// I^-1 = conj(I) / N(I)
inline QuadIdeal inverse(QuadIdeal const& i)
{
    QuadIdeal c = i.conj();
    return c.scaled(1 / i.norm());
}

// I = mu * J with J primitive and reduced.
struct Reduction
{
    QuadIdeal ideal;
    QuadElem mu;
};

namespace detail {

// Representative of B mod 2a in the canonical window for this a.
inline Int normalize_form_b(Int const& disc, Int const& a, Int const& big_b, Int const& sqrt_floor)
{
    Int two_a = 2 * a;
    if (disc > 0 && a <= sqrt_floor) {
        // largest B <= floor(sqrt D) in the class; lies in (sqrt D - 2a, sqrt D)
        return sqrt_floor - mod(sqrt_floor - big_b, two_a);
    }
    Int r = mod(big_b, two_a);
    return r > a ? r - two_a : r;
}

inline bool is_reduced_form(Int const& disc, Int const& a, Int const& big_b, Int const& sqrt_floor)
{
    if (disc < 0) {
        Int c = (big_b * big_b - disc) / (4 * a);
        if (big_b <= -a || big_b > a || a > c)
            return false;
        return !(a == c && big_b < 0);
    }
    // |sqrt D - 2a| < B < sqrt D
    return big_b <= sqrt_floor && sqrt_floor < big_b + 2 * a && 2 * a - big_b <= sqrt_floor;
}

// One step (a, B) -> (|c|, -B): I = (theta / c) * J with theta = (B + sqrt D)/2.
inline std::pair<QuadIdeal, QuadElem> adjacent(QuadIdeal const& i, Int const& sqrt_floor)
{
    Int const& disc = i.disc();
    Int big_b = detail::normalize_form_b(disc, i.a(), i.form_b(), sqrt_floor);
    Int c = (big_b * big_b - disc) / (4 * i.a());
    QuadElem theta(disc, Rat((big_b - disc) / 2), 1);
    Int ac = abs(c);
    Int nb = detail::normalize_form_b(disc, ac, -big_b, sqrt_floor);
    return {QuadIdeal::from_form(disc, ac, nb), Rat(1, 1) / Rat(c) * theta};
}

} // namespace detail

inline Int disc_sqrt_floor(Int const& disc) { return disc > 0 ? isqrt(disc) : Int(0); }

inline bool is_reduced(QuadIdeal const& i)
{
    if (!i.is_primitive())
        return false;
    Int sf = disc_sqrt_floor(i.disc());
    Int big_b = detail::normalize_form_b(i.disc(), i.a(), i.form_b(), sf);
    return detail::is_reduced_form(i.disc(), i.a(), big_b, sf);
}

inline Reduction reduce(QuadIdeal const& i)
{
    Int const& disc = i.disc();
    Int sf = disc_sqrt_floor(disc);
    QuadIdeal cur = i.primitive_part();
    QuadElem mu(disc, i.scale());
    for (;;) {
        Int big_b = detail::normalize_form_b(disc, cur.a(), cur.form_b(), sf);
        if (detail::is_reduced_form(disc, cur.a(), big_b, sf))
            return {cur, mu};
        auto [next, step] = detail::adjacent(cur, sf);
        cur = next;
        mu = mu * step;
    }
}

// Reduced neighbour in the cycle of a reduced ideal of a real field:
// J = mu * rho(J).
inline std::pair<QuadIdeal, QuadElem> rho(QuadIdeal const& j)
{
    if (j.disc() < 0)
        throw invalid_input("rho: field is imaginary");
    if (!is_reduced(j))
        throw invalid_input("rho: ideal is not reduced");
    return detail::adjacent(j, disc_sqrt_floor(j.disc()));
}

// The cycle of reduced ideals containing j, starting at j.
inline std::vector<QuadIdeal> reduced_cycle(QuadIdeal const& j, std::size_t max_length = 10'000'000)
{
    std::vector<QuadIdeal> out{j};
    QuadIdeal cur = rho(j).first;
    while (!(cur == j)) {
        out.push_back(cur);
        if (out.size() > max_length)
            throw resource_error("reduced_cycle: cycle longer than " + std::to_string(max_length));
        cur = rho(cur).first;
    }
    return out;
}

// Element nu with from = nu * to, for reduced ideals of the same class.
// Real fields walk the cycle of `from`; throws if `to` is not on it.
inline QuadElem cycle_distance(QuadIdeal const& from, QuadIdeal const& to, std::size_t max_length = 10'000'000)
{
    QuadElem nu = QuadElem::one(from.disc());
    if (from == to)
        return nu;
    if (from.disc() < 0)
        throw invalid_input("cycle_distance: distinct reduced ideals are inequivalent");
    QuadIdeal cur = from;
    for (std::size_t k = 0; k < max_length; ++k) {
        auto [next, step] = rho(cur);
        nu = nu * step;
        if (next == to)
            return nu;
        if (next == from)
            throw invalid_input("cycle_distance: ideals lie on different cycles");
        cur = next;
    }
    throw resource_error("cycle_distance: cycle walk exceeded bound");
}

} // namespace qiw
