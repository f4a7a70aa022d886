#pragma once

// Logarithmic class group of a quadratic field in which l splits, computed
// modulo l^m from a divisor-class presentation.
//
// Places: l, l' (the primes above l) and p_1..p_k (class-group generators
// prime to l). A principal logarithmic divisor of x has coordinates
//   (v~_l(x), v~_l'(x), v_p1(x), ..., v_pk(x)),  v~ = Log(iota(x)) / l.
// Degrees: deg l = deg l' = 1 and deg p = -Log(N p) / l, which makes every
// principal divisor have degree 0 (Log N x = Log iota_l x + Log iota_l' x).
// The l-units with support in {l, l', p_j} are generated by eps (real), l,
// the relation elements gamma_i and beta with (beta) = l * prod p_j^{-s_j},
// where [l] = sum s_j [p_j]; l itself has the zero divisor. The group is the
// degree-0 part modulo these rows.

#include <string>
#include <vector>

#include "qiw/abelian.hpp"
#include "qiw/bigint.hpp"
#include "qiw/classgroup.hpp"
#include "qiw/errors.hpp"
#include "qiw/local.hpp"
#include "qiw/padic.hpp"

namespace qiw {

// v~(x) = Log(iota(x)) / l modulo l^m.
inline PadicInt log_valuation(QuadElem const& x, Embedding const& place, long m)
{
    if (m < 1)
        throw invalid_input("log_valuation: precision must be >= 1");
    auto v = place.apply(x, m + 1);
    return PadicVal::of(iwasawa_log(v.unit)).divide_by_ell_power(1);
}

// Rational arguments embed identically at both places.
inline PadicInt log_valuation(Rat const& x, Int const& ell, long m)
{
    if (m < 1)
        throw invalid_input("log_valuation: precision must be >= 1");
    return PadicVal::of(iwasawa_log(x, ell, m + 1)).divide_by_ell_power(1);
}

// Variations of the presentation that must not change the group.
struct WclOptions
{
    bool swap_embeddings = false; // exchange the roles of l and l'
    Int beta_unit_power = 0;      // beta -> beta * eps^k (real fields)
    bool beta_negate = false;     // beta -> -beta
    long beta_ell_power = 0;      // beta -> beta * l^t
    Int degree_unit = 1;          // deg l = deg l' = u, v~ scaled by u^-1

    bool is_default() const
    {
        return !swap_embeddings && beta_unit_power == 0 && !beta_negate && beta_ell_power == 0 && degree_unit == 1;
    }
};

struct LogClassGroup
{
    FinAbGroup group;
    long m = 0;
    bool stabilized = false;
    std::string normalization;
    std::vector<FinAbGroup> levels; // groups at m, m+1, m+2
};

struct WclPresentation
{
    std::vector<Int> degrees;              // on (l, l', p_1..p_k)
    std::vector<std::vector<Int>> rows;    // principal divisors
    std::vector<std::string> row_names;
};

inline WclPresentation wcl_presentation(ClassGroup const& cg, PrimesAboveEll const& pr, long m,
                                        WclOptions const& opt = {})
{
    Int const& ell = pr.iota_l.prime();
    Int const mod_m = pow_int(ell, static_cast<unsigned long>(m));
    Int const& disc = cg.field.disc;
    std::size_t const k = cg.generator_count();

    Embedding const& e1 = opt.swap_embeddings ? pr.iota_l_conj : pr.iota_l;
    Embedding const& e2 = opt.swap_embeddings ? pr.iota_l : pr.iota_l_conj;
    QuadIdeal const& l = opt.swap_embeddings ? pr.l_conj : pr.l;
    if (divides(ell, opt.degree_unit))
        throw invalid_input("wcl: degree normalization must be an l-adic unit");
    Int const u = mod(opt.degree_unit, mod_m);
    Int const u_inv = invmod(u, mod_m);

    WclPresentation p;
    p.degrees.assign(k + 2, Int(0));
    p.degrees[0] = u;
    p.degrees[1] = u;
    for (std::size_t j = 0; j < k; ++j) {
        Int lg = log_valuation(Rat(cg.generators[j].a()), ell, m).residue();
        p.degrees[2 + j] = mod(-lg, mod_m);
    }

    auto row_of = [&](QuadElem const& x, std::vector<Int> const& tail) {
        std::vector<Int> r(k + 2, Int(0));
        r[0] = mod(u_inv * log_valuation(x, e1, m).residue(), mod_m);
        r[1] = mod(u_inv * log_valuation(x, e2, m).residue(), mod_m);
        for (std::size_t j = 0; j < tail.size(); ++j)
            r[2 + j] = tail[j];
        return r;
    };

    if (cg.unit) {
        p.rows.push_back(row_of(cg.unit->eps, {}));
        p.row_names.push_back("eps");
    }

    auto [beta, s] = cg.factor(l);
    if (opt.beta_unit_power != 0) {
        if (!cg.unit)
            throw invalid_input("wcl: unit rescaling needs a fundamental unit");
        beta = beta * cg.unit->eps.pow(opt.beta_unit_power);
    }
    if (opt.beta_negate)
        beta = Rat(-1) * beta;
    if (opt.beta_ell_power != 0)
        beta = beta * QuadElem(disc, Rat(ell)).pow(Int(opt.beta_ell_power));
    std::vector<Int> neg_s(s.size());
    for (std::size_t j = 0; j < s.size(); ++j)
        neg_s[j] = -s[j];
    p.rows.push_back(row_of(beta, neg_s));
    p.row_names.push_back("beta");

    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Int> tail(k);
        for (std::size_t j = 0; j < k; ++j)
            tail[j] = cg.relations(i, j);
        p.rows.push_back(row_of(cg.relation_elements.at(i), tail));
        p.row_names.push_back("gamma" + std::to_string(i + 1));
    }

    for (std::size_t r = 0; r < p.rows.size(); ++r) {
        Int deg = 0;
        for (std::size_t j = 0; j < k + 2; ++j)
            deg += p.rows[r][j] * p.degrees[j];
        if (!divides(mod_m, deg))
            throw consistency_error("wcl: principal divisor of " + p.row_names[r] + " has nonzero degree " +
                                    mod(deg, mod_m).get_str() + " mod " + mod_m.get_str());
    }
    return p;
}

// The group at a single precision.
inline FinAbGroup wcl_at(ClassGroup const& cg, PrimesAboveEll const& pr, long m, WclOptions const& opt = {})
{
    if (m < 2)
        throw invalid_input("wcl: precision m must be >= 2");
    Int const& ell = pr.iota_l.prime();
    Int const mod_m = pow_int(ell, static_cast<unsigned long>(m));
    auto p = wcl_presentation(cg, pr, m, opt);
    std::size_t const n = cg.generator_count() + 1; // kernel coordinates (l', p_1..p_k)
    IntMatrix rel(n, p.rows.size() + n);
    for (std::size_t c = 0; c < p.rows.size(); ++c)
        for (std::size_t i = 0; i < n; ++i)
            rel(i, c) = p.rows[c][i + 1];
    for (std::size_t i = 0; i < n; ++i)
        rel(i, p.rows.size() + i) = mod_m;
    return ell_sylow(cokernel(rel).torsion, ell);
}

inline LogClassGroup log_class_group(ClassGroup const& cg, PrimesAboveEll const& pr, long m = 8,
                                     WclOptions const& opt = {})
{
    LogClassGroup out;
    out.m = m;
    for (long t = 0; t < 3; ++t)
        out.levels.push_back(wcl_at(cg, pr, m + t, opt));
    out.group = out.levels.front();
    out.stabilized = out.levels[0] == out.levels[1] && out.levels[1] == out.levels[2];
    out.normalization = "v=Log/l, deg(l)=deg(l')=" + opt.degree_unit.get_str();
    return out;
}

inline LogClassGroup wcl(Int const& disc, Int const& ell, long m = 8, WclOptions const& opt = {})
{
    FieldDesc f = make_field(disc);
    auto pr = primes_above_ell(f, ell);
    return log_class_group(class_group_prime_to(f, ell), pr, m, opt);
}

// l-class group modulo the classes of the primes above l.
inline FinAbGroup cl_prime(ClassGroup const& cg, PrimesAboveEll const& pr)
{
    Int const& ell = pr.iota_l.prime();
    std::size_t const k = cg.generator_count();
    auto s = cg.class_coords(pr.l);
    IntMatrix rel(k, k + 1);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j)
            rel(j, i) = cg.relations(i, j);
        rel(i, k) = s[i];
    }
    return ell_sylow(cokernel(rel).torsion, ell);
}

inline FinAbGroup cl_prime(Int const& disc, Int const& ell)
{
    FieldDesc f = make_field(disc);
    auto pr = primes_above_ell(f, ell);
    return cl_prime(class_group_prime_to(f, ell), pr);
}

} // namespace qiw
