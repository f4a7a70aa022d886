#pragma once

// Class groups of quadratic fields from reduced ideals (equivalently reduced
// binary quadratic forms), fundamental units by continued fractions, and
// principal generators.
//
// Classes are enumerated exactly: every reduced ideal is listed, real fields
// group them into rho-cycles, and the group structure is built by adjoining
// small prime ideals one at a time until the subgroup they generate has the
// full class number. Narrow classes of real fields are cycles of oriented
// ideals (I, sign); each rho step flips the orientation.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qiw/abelian.hpp"
#include "qiw/bigint.hpp"
#include "qiw/errors.hpp"
#include "qiw/field.hpp"
#include "qiw/ideal.hpp"
#include "qiw/padic.hpp"

namespace qiw {

inline Int const kMaxClassGroupDisc = Int(100'000'000);

struct FundamentalUnit
{
    QuadElem eps;
    int norm = 1;
};

// Continued fraction of (D mod 2 + sqrt D)/2; the product of the complete
// quotients over one period is the fundamental unit (> 1).
inline FundamentalUnit fundamental_unit(FieldDesc const& f, std::size_t max_period = 10'000'000)
{
    Int const& disc = f.disc;
    if (disc <= 0)
        throw invalid_input("real field", "fundamental_unit: discriminant must be positive");
    Int s = isqrt(disc);
    Int p = mod(disc, Int(2)), q = 2;
    auto step = [&] {
        Int a = floor_div(p + s, q);
        Int np = a * q - p;
        q = (disc - np * np) / q;
        p = np;
    };
    auto quotient = [&] { return QuadElem(disc, Rat(p - disc, q), Rat(2, q)); };
    step();
    Int const p1 = p, q1 = q;
    QuadElem eps = QuadElem::one(disc);
    std::size_t n = 0;
    do {
        eps = eps * quotient();
        step();
        if (++n > max_period)
            throw resource_error("fundamental_unit: period exceeds " + std::to_string(max_period));
    } while (p != p1 || q != q1);
    Rat nm = eps.norm();
    if (!eps.is_integral() || (nm != 1 && nm != -1))
        throw consistency_error("fundamental_unit: period product " + eps.to_string() + " is not a unit");
    return {eps, nm == 1 ? 1 : -1};
}

// x * eps^k with k chosen to balance the two archimedean absolute values.
inline QuadElem balance_by_unit(QuadElem const& x, FundamentalUnit const& u)
{
    auto lx = log_abs_embeddings(x);
    double le = log_abs_embeddings(u.eps)[0];
    double k = std::round((lx[1] - lx[0]) / (2 * le));
    if (k == 0)
        return x;
    return x * u.eps.pow(Int(static_cast<long>(k)));
}

// A prime ideal of norm q (q split or ramified). Of the two primes above a
// split q, the one with the smaller b in [q, b + w] is returned, or the other
// one if `other` is set.
inline QuadIdeal prime_ideal_above(Int const& disc, Int const& q, bool other = false)
{
    if (!is_prime(q))
        throw invalid_input("prime_ideal_above: " + q.get_str() + " is not prime");
    if (kronecker(disc, q) == -1)
        throw invalid_input("prime_ideal_above: " + q.get_str() + " is inert");
    Int c0 = (disc * disc - disc) / 4;
    std::vector<Int> roots;
    if (q == 2) {
        for (long b = 0; b < 2; ++b)
            if (divides(q, Int(b * b) + Int(b) * disc + c0))
                roots.emplace_back(b);
    } else {
        Int r = divides(q, disc) ? Int(0) : sqrt_mod_prime(disc, q);
        for (Int rr : {r, mod(-r, q)}) {
            // B = rr mod q, B = D mod 2
            Int big_b = mod(rr - disc, Int(2)) == 0 ? rr : rr + q;
            Int b = mod((big_b - disc) / 2, q);
            if (std::find(roots.begin(), roots.end(), b) == roots.end())
                roots.push_back(b);
        }
        std::sort(roots.begin(), roots.end());
    }
    std::size_t idx = (other && roots.size() > 1) ? 1 : 0;
    return QuadIdeal(disc, q, roots.at(idx));
}

// I^e = mu * J, J reduced, computed by square-and-multiply with a reduction
// after every product.
inline Reduction power_reduced(QuadIdeal const& i, Int e)
{
    if (e < 0)
        return power_reduced(inverse(i), -e);
    Int const& disc = i.disc();
    Reduction acc = reduce(QuadIdeal::unit(disc));
    Reduction base = reduce(i);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) {
            auto r = reduce(acc.ideal * base.ideal);
            acc = {r.ideal, acc.mu * base.mu * r.mu};
        }
        e >>= 1;
        if (e > 0) {
            auto r = reduce(base.ideal * base.ideal);
            base = {r.ideal, base.mu * base.mu * r.mu};
        }
    }
    return acc;
}

// prod I_j^{e_j} = mu * J, J reduced.
inline Reduction product_reduced(Int const& disc, std::vector<std::pair<QuadIdeal, Int>> const& factors)
{
    Reduction acc = reduce(QuadIdeal::unit(disc));
    for (auto const& [ideal, e] : factors) {
        if (e == 0)
            continue;
        auto p = power_reduced(ideal, e);
        auto r = reduce(acc.ideal * p.ideal);
        acc = {r.ideal, acc.mu * p.mu * r.mu};
    }
    return acc;
}

// Reduced ideals of a field, grouped into classes of the wide class group.
// For D < 0 every class holds exactly one reduced ideal; for D > 0 a class is
// a rho-cycle.
class ReducedIdealIndex
{
    FieldDesc f;
    std::vector<std::vector<QuadIdeal>> cyc;
    std::map<std::pair<Int, Int>, std::pair<std::size_t, std::size_t>> where;

  public:
    explicit ReducedIdealIndex(FieldDesc field, Int const& bound = kMaxClassGroupDisc) : f(std::move(field))
    {
        Int const& disc = f.disc;
        if (abs(disc) > bound)
            throw resource_error("class group: |D| = " + Int(abs(disc)).get_str() + " exceeds the configured bound " +
                                 bound.get_str());
        std::vector<QuadIdeal> reduced;
        if (disc < 0) {
            Int ad = -disc;
            for (Int a = 1; 3 * a * a <= ad; ++a)
                for (Int big_b = -a + 1; big_b <= a; ++big_b) {
                    if (!divides(Int(2), big_b - disc) || !divides(4 * a, big_b * big_b - disc))
                        continue;
                    if (detail::is_reduced_form(disc, a, big_b, 0))
                        reduced.push_back(QuadIdeal::from_form(disc, a, big_b));
                }
            for (auto const& r : reduced) {
                where[{r.a(), r.b()}] = {cyc.size(), 0};
                cyc.push_back({r});
            }
            return;
        }
        Int s = isqrt(disc);
        for (Int a = 1; a <= s; ++a) {
            Int lo = abs(s - 2 * a);
            for (Int big_b = std::max(Int(1), Int(lo - 1)); big_b <= s; ++big_b) {
                if (!divides(Int(2), big_b - disc) || !divides(4 * a, big_b * big_b - disc))
                    continue;
                if (detail::is_reduced_form(disc, a, big_b, s))
                    reduced.push_back(QuadIdeal::from_form(disc, a, big_b));
            }
        }
        for (auto const& r : reduced) {
            if (where.count({r.a(), r.b()}))
                continue;
            auto cycle = reduced_cycle(r);
            for (std::size_t k = 0; k < cycle.size(); ++k)
                where[{cycle[k].a(), cycle[k].b()}] = {cyc.size(), k};
            cyc.push_back(std::move(cycle));
        }
        if (where.size() != reduced.size())
            throw consistency_error("ReducedIdealIndex: rho left the set of reduced ideals");
    }

    FieldDesc const& field() const { return f; }
    std::size_t class_count() const { return cyc.size(); }
    std::vector<std::vector<QuadIdeal>> const& cycles() const { return cyc; }

    // (cycle, position) of a reduced ideal.
    std::pair<std::size_t, std::size_t> locate(QuadIdeal const& j) const
    {
        auto it = where.find({j.a(), j.b()});
        if (it == where.end() || !j.is_primitive())
            throw invalid_input("ReducedIdealIndex::locate: " + j.to_string() + " is not a reduced ideal");
        return it->second;
    }

    // Real fields: N(eps) = -1 iff all cycles have odd length.
    bool narrow_equals_wide() const
    {
        if (f.disc < 0)
            return true;
        return cyc.front().size() % 2 == 1;
    }

    std::size_t narrow_class_count() const
    {
        return narrow_equals_wide() ? cyc.size() : 2 * cyc.size();
    }
};

// An ideal with an orientation, standing for a narrow class when sign
// matters. Imaginary and wide computations ignore the sign.
struct OrientedIdeal
{
    QuadIdeal ideal;
    int sign = 1;
};

struct ClassGroupOptions
{
    bool narrow = false;
    Int avoid = 0;                 // never use the primes above this rational prime as generators
    bool relation_elements = true; // compute gamma_i with (gamma_i) = prod p_j^{R_ij} (wide only)
    Int bound = kMaxClassGroupDisc;
    long max_generator_prime = 1'000'000;
};

class ClassGroup
{
  public:
    FieldDesc field;
    bool narrow = false;
    Int h;                            // order of the group
    FinAbGroup group;                 // invariant factors
    std::vector<QuadIdeal> generators; // p_1..p_k (enumeration generators)
    std::vector<int> generator_signs;  // orientation of each generator (narrow only)
    IntMatrix relations;              // row i: prod_j p_j^{R_ij} is (narrowly) principal
    Quotient quotient;                // Z^k / rows of `relations`
    std::vector<QuadElem> relation_elements;
    std::optional<FundamentalUnit> unit;

    std::size_t generator_count() const { return generators.size(); }

    // Coordinates in Z^k: [I] = sum_j e_j [p_j] (wide classes).
    std::vector<Int> class_coords(QuadIdeal const& i) const
    {
        auto r = reduce(i);
        return table_vec(key_of(r.ideal, 1));
    }

    // Coordinates of an oriented ideal in the narrow group.
    std::vector<Int> narrow_class_coords(QuadIdeal const& i, int sign) const
    {
        auto r = reduce(i);
        int s = sign * (r.mu.norm() < 0 ? -1 : 1);
        return table_vec(key_of(r.ideal, s));
    }

    bool is_principal(QuadIdeal const& i) const { return quotient.is_zero(class_coords(i)); }

    // beta with I = beta * prod p_j^{e_j}; e are the class coordinates of I.
    std::pair<QuadElem, std::vector<Int>> factor(QuadIdeal const& i) const
    {
        auto e = class_coords(i);
        std::vector<std::pair<QuadIdeal, Int>> denom;
        for (std::size_t j = 0; j < e.size(); ++j)
            denom.emplace_back(generators[j], e[j]);
        return {relation_element({{i, Int(1)}}, denom), e};
    }

    // gamma with (gamma) = prod num / prod den; rejects non-principal input.
    QuadElem relation_element(std::vector<std::pair<QuadIdeal, Int>> const& num,
                              std::vector<std::pair<QuadIdeal, Int>> const& den) const
    {
        Int const& disc = field.disc;
        auto a = product_reduced(disc, num);
        auto b = product_reduced(disc, den);
        auto ka = index->locate(a.ideal);
        auto kb = index->locate(b.ideal);
        if (ka.first != kb.first)
            throw invalid_input("principal_generator: ideal is not principal");
        // a.ideal = nu * b.ideal
        QuadElem nu = cycle_distance(a.ideal, b.ideal);
        QuadElem g = a.mu * nu / b.mu;
        if (unit)
            g = balance_by_unit(g, *unit);
        return g;
    }

    ReducedIdealIndex const& reduced_index() const { return *index; }

    friend ClassGroup compute_class_group(FieldDesc const& f, ClassGroupOptions const& opt);

  private:
    std::shared_ptr<ReducedIdealIndex const> index;
    std::vector<long> key_to_entry; // 2 * cycle + (orientation < 0)
    std::vector<std::vector<Int>> entry_vecs;

    std::size_t key_of(QuadIdeal const& reduced, int sign) const
    {
        auto [c, pos] = index->locate(reduced);
        if (!narrow || index->narrow_equals_wide())
            return 2 * c;
        int o = sign * (pos % 2 ? -1 : 1);
        return 2 * c + (o < 0 ? 1 : 0);
    }

    std::vector<Int> table_vec(std::size_t key) const
    {
        long e = key_to_entry.at(key);
        if (e < 0)
            throw consistency_error("ClassGroup: class missing from the enumeration table");
        auto v = entry_vecs[static_cast<std::size_t>(e)];
        v.resize(generators.size(), Int(0));
        return v;
    }
};

inline ClassGroup compute_class_group(FieldDesc const& f, ClassGroupOptions const& opt = {})
{
    ClassGroup cg;
    cg.field = f;
    cg.narrow = opt.narrow && f.disc > 0;
    cg.index = std::make_shared<ReducedIdealIndex const>(f, opt.bound);
    if (f.disc > 0)
        cg.unit = fundamental_unit(f);
    Int const& disc = f.disc;
    auto const& idx = *cg.index;
    std::size_t const total = cg.narrow ? idx.narrow_class_count() : idx.class_count();
    cg.h = Int(static_cast<unsigned long>(total));
    cg.key_to_entry.assign(2 * idx.class_count(), -1);

    struct Entry
    {
        QuadIdeal rep;
        int sign;
    };
    std::vector<Entry> entries;
    auto key_of = [&](QuadIdeal const& i, int sign) -> std::pair<std::size_t, Entry> {
        auto r = reduce(i);
        int s = sign * (r.mu.norm() < 0 ? -1 : 1);
        return {cg.key_of(r.ideal, s), Entry{r.ideal, s}};
    };
    auto insert = [&](std::size_t key, Entry e, std::vector<Int> vec) {
        cg.key_to_entry[key] = static_cast<long>(entries.size());
        entries.push_back(std::move(e));
        cg.entry_vecs.push_back(std::move(vec));
    };
    {
        auto [k, e] = key_of(QuadIdeal::unit(disc), 1);
        insert(k, e, {});
    }

    std::vector<std::vector<Int>> rel_rows;
    auto try_generator = [&](QuadIdeal const& p, int sign) {
        // smallest n with (p, sign)^n in the current subgroup
        QuadIdeal pw = p;
        int pw_sign = sign;
        long n = 1;
        auto [key, ent] = key_of(pw, pw_sign);
        while (cg.key_to_entry[key] < 0) {
            auto prod = reduce(ent.rep * p);
            pw = prod.ideal;
            pw_sign = ent.sign * sign * (prod.mu.norm() < 0 ? -1 : 1);
            ++n;
            std::tie(key, ent) = key_of(pw, pw_sign);
        }
        if (n == 1)
            return;
        std::size_t const k = cg.generators.size();
        cg.generators.push_back(p);
        cg.generator_signs.push_back(sign);
        std::vector<Int> row = cg.entry_vecs[static_cast<std::size_t>(cg.key_to_entry[key])];
        row.resize(k + 1, Int(0));
        for (auto& x : row)
            x = -x;
        row[k] += n;
        rel_rows.push_back(row);
        std::size_t const old = entries.size();
        Entry step{p, sign};
        for (long t = 1; t < n; ++t) {
            for (std::size_t j = 0; j < old; ++j) {
                std::size_t src = static_cast<std::size_t>(t - 1) * old + j;
                auto prod = reduce(entries[src].rep * step.rep);
                int s = entries[src].sign * step.sign * (prod.mu.norm() < 0 ? -1 : 1);
                auto [nk, ne] = key_of(prod.ideal, s);
                auto vec = cg.entry_vecs[src];
                vec.resize(k + 1, Int(0));
                vec[k] += 1;
                if (cg.key_to_entry[nk] >= 0)
                    throw consistency_error("class group enumeration: coset collision");
                insert(nk, ne, std::move(vec));
            }
        }
    };

    if (cg.narrow && !idx.narrow_equals_wide())
        try_generator(QuadIdeal::unit(disc), -1);
    for (long q = 2; entries.size() < total; q = next_prime(q)) {
        if (q > opt.max_generator_prime)
            throw resource_error("class group: no generating set among primes below " +
                                 std::to_string(opt.max_generator_prime));
        if (opt.avoid != 0 && Int(q) == opt.avoid)
            continue;
        if (kronecker(disc, Int(q)) == -1)
            continue;
        try_generator(prime_ideal_above(disc, Int(q)), 1);
    }
    if (entries.size() != total)
        throw consistency_error("class group enumeration overshot the class number");

    std::size_t const k = cg.generators.size();
    cg.relations = IntMatrix(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < rel_rows[i].size(); ++j)
            cg.relations(i, j) = rel_rows[i][j];
    cg.quotient = cokernel_with_maps(cg.relations.transpose());
    cg.group = cg.quotient.group;
    if (cg.group.order() != cg.h || cg.quotient.free_rank != 0)
        throw consistency_error("class group: presentation order " + cg.group.order().get_str() +
                                " differs from class count " + cg.h.get_str());

    if (opt.relation_elements && !cg.narrow) {
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<std::pair<QuadIdeal, Int>> num, den;
            for (std::size_t j = 0; j < k; ++j) {
                Int r = cg.relations(i, j);
                if (r > 0)
                    num.emplace_back(cg.generators[j], r);
                else if (r < 0)
                    den.emplace_back(cg.generators[j], -r);
            }
            QuadElem g = cg.relation_element(num, den);
            cg.relation_elements.push_back(g);
        }
    }
    return cg;
}

inline Int class_number(Int const& disc) { return Int(static_cast<unsigned long>(ReducedIdealIndex(make_field(disc)).class_count())); }

inline Int narrow_class_number(Int const& disc)
{
    return Int(static_cast<unsigned long>(ReducedIdealIndex(make_field(disc)).narrow_class_count()));
}

// The form class group: narrow for D > 0.
inline FinAbGroup class_group(Int const& disc)
{
    ClassGroupOptions opt;
    opt.narrow = true;
    opt.relation_elements = false;
    return compute_class_group(make_field(disc), opt).group;
}

inline FinAbGroup wide_class_group(Int const& disc)
{
    ClassGroupOptions opt;
    opt.relation_elements = false;
    return compute_class_group(make_field(disc), opt).group;
}

// Class group whose generators avoid the primes above ell.
inline ClassGroup class_group_prime_to(FieldDesc const& f, Int const& ell)
{
    ClassGroupOptions opt;
    opt.avoid = ell;
    return compute_class_group(f, opt);
}

// gamma with (gamma) = I; real fields return a representative balanced
// modulo powers of the fundamental unit.
inline QuadElem principal_generator(ClassGroup const& cg, QuadIdeal const& i)
{
    return cg.relation_element({{i, Int(1)}}, {});
}

inline QuadElem principal_generator(QuadIdeal const& i)
{
    ClassGroupOptions opt;
    opt.relation_elements = false;
    return principal_generator(compute_class_group(make_field(i.disc()), opt), i);
}

} // namespace qiw
