#pragma once

// Full invariant set and verdicts for one pair (D, l).

#include <chrono>
#include <optional>
#include <string>

#include "qiw/classgroup.hpp"
#include "qiw/invariants.hpp"
#include "qiw/local.hpp"
#include "qiw/logclass.hpp"
#include "qiw/verdicts.hpp"

namespace qiw {

struct AnalysisOptions
{
    long m = 8;                   // precision of the logarithmic class group
    long m_max = kDefaultMMax;    // last ray level for the rationality test
};

struct FieldAnalysis
{
    FieldReports reports;
    FinAbGroup class_group;       // wide class group
    std::optional<FundamentalUnit> unit;
    std::vector<QuadIdeal> generators;
    Verdict c_infty;
    Verdict c_prime_infty;
    std::optional<Verdict> c_z;   // empty when the real routes conflict
    std::string c_z_conflict;
    RealRoutes routes;
    double ms = 0;
};

inline FieldAnalysis analyze_field(Int const& disc, Int const& ell, AnalysisOptions const& opt = {})
{
    auto t0 = std::chrono::steady_clock::now();
    require_odd_prime(ell);
    FieldDesc f = make_field(disc);
    auto pr = primes_above_ell(f, ell);
    ClassGroup cg = class_group_prime_to(f, ell);

    FieldAnalysis a;
    a.class_group = cg.group;
    a.unit = cg.unit;
    a.generators = cg.generators;
    FieldReports& r = a.reports;
    r.field = f;
    r.ell = ell;
    r.cl_ell = ell_sylow(cg.group, ell);
    r.cl_prime = cl_prime(cg, pr);
    r.wcl = log_class_group(cg, pr, opt.m);
    r.rationality = ell_rationality(cg, pr, opt.m_max);

    a.c_infty = verdict_C_infty(r);
    a.c_prime_infty = verdict_C_prime_infty(r);
    if (f.real())
        a.routes = real_routes(r);
    try {
        a.c_z = verdict_C_Z(r);
    } catch (consistency_error const& e) {
        a.c_z_conflict = e.what();
    }
    a.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return a;
}

} // namespace qiw
