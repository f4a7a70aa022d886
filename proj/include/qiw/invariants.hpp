#pragma once

// l-rationality by stabilization of ray class groups, Gras logarithms over Q,
// and Chevalley's ambiguous class number formula.

#include <algorithm>
#include <string>
#include <vector>

#include "qiw/abelian.hpp"
#include "qiw/bigint.hpp"
#include "qiw/classgroup.hpp"
#include "qiw/errors.hpp"
#include "qiw/local.hpp"
#include "qiw/padic.hpp"
#include "qiw/ray.hpp"

namespace qiw {

inline constexpr long kStabilizationWindow = 3;
inline constexpr long kDefaultMMax = 12;

struct RationalityReport
{
    std::size_t rank = 0;
    FinAbGroup torsion;
    bool is_rational = false;
    bool stabilized = false;
    long window_first = 0; // levels window_first .. window_last
    long window_last = 0;
    std::vector<FinAbGroup> levels; // R_1, R_2, ... as computed
};

namespace detail {

// Exponents a_i with G = sum Z/l^{a_i}, largest first, padded to `len`.
inline std::vector<long> exponents_desc(FinAbGroup const& g, Int const& ell, std::size_t len)
{
    std::vector<long> e;
    for (auto const& d : g.invariant_factors())
        e.push_back(valuation(d, ell));
    std::sort(e.rbegin(), e.rend());
    e.resize(std::max(len, e.size()), 0);
    return e;
}

// Does R_{m-2}, R_{m-1}, R_m show `grow` exponents rising by one per step
// with the rest fixed?
inline bool window_stable(std::vector<FinAbGroup> const& w, Int const& ell, std::size_t grow)
{
    std::size_t len = 0;
    for (auto const& g : w)
        len = std::max(len, g.rank());
    len = std::max(len, grow);
    std::vector<std::vector<long>> e;
    for (auto const& g : w)
        e.push_back(exponents_desc(g, ell, len));
    for (std::size_t t = 1; t < e.size(); ++t)
        for (std::size_t i = 0; i < len; ++i) {
            long expect = i < grow ? 1 : 0;
            if (e[t][i] - e[t - 1][i] != expect)
                return false;
        }
    return true;
}

} // namespace detail

inline RationalityReport ell_rationality(ClassGroup const& cg, PrimesAboveEll const& pr, long m_max = kDefaultMMax)
{
    if (m_max < kStabilizationWindow)
        throw invalid_input("ell_rationality: m_max must be at least the window length " +
                            std::to_string(kStabilizationWindow));
    Int const& ell = pr.iota_l.prime();
    std::size_t const grow = static_cast<std::size_t>(cg.field.c + 1);
    RationalityReport rep;
    for (long m = 1; m <= m_max; ++m) {
        rep.levels.push_back(ray_class_group_ellpart(cg, pr, m).group);
        if (m < kStabilizationWindow)
            continue;
        std::vector<FinAbGroup> w(rep.levels.end() - kStabilizationWindow, rep.levels.end());
        if (!detail::window_stable(w, ell, grow))
            continue;
        auto e = detail::exponents_desc(w.back(), ell, grow);
        std::vector<Int> tors;
        for (std::size_t i = grow; i < e.size(); ++i)
            if (e[i] > 0)
                tors.push_back(pow_int(ell, static_cast<unsigned long>(e[i])));
        std::reverse(tors.begin(), tors.end());
        rep.rank = grow;
        rep.torsion = FinAbGroup(tors);
        rep.is_rational = rep.torsion.is_trivial();
        rep.stabilized = true;
        rep.window_first = m - kStabilizationWindow + 1;
        rep.window_last = m;
        return rep;
    }
    rep.window_first = m_max - kStabilizationWindow + 1;
    rep.window_last = m_max;
    return rep;
}

inline RationalityReport ell_rationality(Int const& disc, Int const& ell, long m_max = kDefaultMMax)
{
    FieldDesc f = make_field(disc);
    auto pr = primes_above_ell(f, ell);
    return ell_rationality(class_group_prime_to(f, ell), pr, m_max);
}

// Log(q) / l modulo l^m.
inline PadicInt gras_log_Q(Int const& q, Int const& ell, long m)
{
    require_odd_prime(ell);
    if (!is_prime(q))
        throw invalid_input("gras_log_Q: " + q.get_str() + " is not prime");
    if (q == ell)
        throw invalid_input("q prime to ell", "gras_log_Q: q must differ from ell");
    return PadicVal::of(iwasawa_log(Rat(q), ell, m + 1)).divide_by_ell_power(1);
}

inline bool is_primitively_ramified_over_Q(std::vector<Int> const& ramified_tame_primes, Int const& ell, long m = 2)
{
    for (std::size_t i = 0; i < ramified_tame_primes.size(); ++i)
        for (std::size_t j = i + 1; j < ramified_tame_primes.size(); ++j)
            if (ramified_tame_primes[i] == ramified_tame_primes[j])
                throw invalid_input("is_primitively_ramified_over_Q: primes must be distinct");
    for (auto const& q : ramified_tame_primes)
        if (gras_log_Q(q, ell, m).is_unit())
            return true;
    return false;
}

struct ChevalleyInput
{
    Int h_k;
    Int degree;
    std::vector<Int> ramification; // e_v over the ramified places (finite and infinite)
    Int unit_norm_index = 1;       // [E_K : E_K cap N(L^x)]
};

// h_K * prod e_v / (n * [E_K : E_K cap N L^x])
inline Int chevalley_ambiguous(ChevalleyInput const& in)
{
    if (in.h_k < 1 || in.degree < 1 || in.unit_norm_index < 1)
        throw invalid_input("chevalley_ambiguous: h_K, n and the unit index must be positive");
    Int num = in.h_k;
    for (auto const& e : in.ramification) {
        if (e < 1)
            throw invalid_input("chevalley_ambiguous: ramification indices must be positive");
        num *= e;
    }
    Int den = in.degree * in.unit_norm_index;
    if (!divides(den, num))
        throw invalid_input("integral ambiguous class number",
                            "chevalley_ambiguous: " + num.get_str() + "/" + den.get_str() +
                                " is not an integer; the input cannot come from a genuine extension");
    return num / den;
}

} // namespace qiw
