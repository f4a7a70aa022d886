#pragma once

// l-part of the ray class group modulo l^m of a quadratic field in which l
// splits, from the exact sequence
//   O^x -> (O / l^m)^x -> Cl_{l^m} -> Cl -> 1.
// Presentation on Z^{k+2}: the class-group generators p_1..p_k followed by the
// two residue coordinates. Relations: each class relation prod p_j^{R_ij} =
// (gamma_i) becomes R_i - dlog(gamma_i); global units map to zero; the
// residue coordinates have order l^(m-1).

#include <string>
#include <vector>

#include "qiw/abelian.hpp"
#include "qiw/bigint.hpp"
#include "qiw/classgroup.hpp"
#include "qiw/errors.hpp"
#include "qiw/local.hpp"

namespace qiw {

struct RayClassData
{
    long m = 1;
    FinAbGroup group;                          // l-part
    Quotient quotient;                         // l-part coordinates on Z^{k+2}
    std::vector<QuadIdeal> generator_ideals;   // p_1..p_k, prime to l
    IntMatrix presentation;                    // columns are relations
};

inline RayClassData ray_class_group_ellpart(ClassGroup const& cg, PrimesAboveEll const& pr, long m)
{
    if (m < 1)
        throw invalid_input("ray_class_group_ellpart: m must be >= 1");
    Int const& ell = pr.iota_l.prime();
    Int const& disc = cg.field.disc;
    if ((disc == -3 && ell == 3) || (disc == -4 && ell == 2))
        throw invalid_input("ell odd and prime to the roots of unity", "roots of unity of K have order divisible by l");
    for (auto const& p : cg.generators)
        if (divides(ell, p.a()))
            throw invalid_input("ray_class_group_ellpart: class-group generator above l");

    ResidueUnits ru(pr, m);
    std::size_t const k = cg.generator_count();
    std::size_t const n = k + 2;
    std::vector<std::vector<Int>> cols;
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Int> c(n, Int(0));
        for (std::size_t j = 0; j < k; ++j)
            c[j] = cg.relations(i, j);
        auto dl = ru.dlog(cg.relation_elements.at(i));
        c[k] = -dl[0];
        c[k + 1] = -dl[1];
        cols.push_back(std::move(c));
    }
    if (cg.unit) {
        std::vector<Int> c(n, Int(0));
        auto dl = ru.dlog(cg.unit->eps);
        c[k] = dl[0];
        c[k + 1] = dl[1];
        cols.push_back(std::move(c));
    }
    Int o = ru.component_order();
    for (std::size_t t = 0; t < 2; ++t) {
        std::vector<Int> c(n, Int(0));
        c[k + t] = o;
        cols.push_back(std::move(c));
    }
    IntMatrix rel(n, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < n; ++i)
            rel(i, j) = cols[j][i];

    RayClassData out;
    out.m = m;
    out.presentation = rel;
    out.generator_ideals = cg.generators;
    auto full = cokernel_with_maps(rel);
    if (full.free_rank != 0)
        throw consistency_error("ray_class_group_ellpart: presentation has a free part");
    out.quotient = ell_part(full, ell);
    out.group = out.quotient.group;
    return out;
}

inline RayClassData ray_class_group_ellpart(Int const& disc, Int const& ell, long m)
{
    FieldDesc f = make_field(disc);
    auto pr = primes_above_ell(f, ell);
    return ray_class_group_ellpart(class_group_prime_to(f, ell), pr, m);
}

// The reduction map from level m to level m-1 (identity on the presentation
// lattice) is onto: generator images together with the target's own
// relations span the target.
inline bool surjects_onto(RayClassData const& hi, RayClassData const& lo)
{
    if (hi.m != lo.m + 1 || hi.generator_ideals.size() != lo.generator_ideals.size())
        throw invalid_input("surjects_onto: levels are not consecutive presentations of one field");
    std::size_t const r = lo.group.rank();
    std::size_t const g = hi.group.rank();
    IntMatrix m(r, g + r);
    auto const& d = lo.group.invariant_factors();
    for (std::size_t j = 0; j < g; ++j) {
        auto img = lo.quotient.coords(hi.quotient.lifts.column(j));
        for (std::size_t i = 0; i < r; ++i)
            m(i, j) = img[i];
    }
    for (std::size_t i = 0; i < r; ++i)
        m(i, g + i) = d[i];
    return cokernel(m).torsion.is_trivial();
}

} // namespace qiw
