#pragma once

// Triviality verdicts for the Iwasawa modules C_infty (cyclotomic tower),
// C'_infty (l-classes along the cyclotomic tower) and C_Z (compositum of all
// Z_l-extensions) of a totally l-adic quadratic field, derived from finite
// invariants through the known equivalences. Every verdict records the rule
// that fired and the named inputs it read.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qiw/abelian.hpp"
#include "qiw/bigint.hpp"
#include "qiw/classgroup.hpp"
#include "qiw/errors.hpp"
#include "qiw/invariants.hpp"
#include "qiw/local.hpp"
#include "qiw/logclass.hpp"

namespace qiw {

enum class Target { C_infty, C_prime_infty, C_Z };
enum class Status { Trivial, Nontrivial, Undetermined };

inline std::string to_string(Target t)
{
    switch (t) {
    case Target::C_infty: return "C_infty";
    case Target::C_prime_infty: return "C_prime_infty";
    case Target::C_Z: return "C_Z";
    }
    return "?";
}

inline std::string to_string(Status s)
{
    switch (s) {
    case Status::Trivial: return "Trivial";
    case Status::Nontrivial: return "Nontrivial";
    case Status::Undetermined: return "Undetermined";
    }
    return "?";
}

inline Status status_from_string(std::string const& s)
{
    if (s == "Trivial")
        return Status::Trivial;
    if (s == "Nontrivial")
        return Status::Nontrivial;
    if (s == "Undetermined")
        return Status::Undetermined;
    throw invalid_input("unknown verdict status '" + s + "'");
}

struct Citation
{
    std::string tag;
    std::string rule;
    std::vector<std::string> uses; // keys of Verdict::inputs
};

struct Verdict
{
    Target target = Target::C_Z;
    Status status = Status::Undetermined;
    std::vector<Citation> justification;
    std::vector<std::string> preconditions_checked;
    std::map<std::string, std::string> inputs;

    bool well_formed() const
    {
        if (status != Status::Undetermined && justification.empty())
            return false;
        for (auto const& c : justification)
            for (auto const& u : c.uses)
                if (!inputs.count(u))
                    return false;
        return true;
    }
};

namespace rules {

inline Citation const cyclotomic{
    "cyclotomic-rationality",
    "totally l-adic K, l odd: C_infty = 1 <=> K is l-rational and totally real",
    {}};
inline Citation const logarithmic{
    "cyclotomic-log-principality",
    "totally l-adic K, l odd: C'_infty = 1 <=> the logarithmic class group of K is trivial",
    {}};
inline Citation const real_rational{
    "real-quadratic-rationality",
    "real quadratic totally l-adic K: C_Z = 1 <=> T_K = 1 (K l-rational)",
    {}};
inline Citation const real_classes{
    "real-quadratic-classes",
    "real quadratic totally l-adic K: C_Z = 1 <=> Cl_K[l] = 1 and wCl_K = 1",
    {}};
inline Citation const imaginary{
    "imaginary-quadratic-log-principality",
    "imaginary quadratic totally l-adic K: C_Z = 1 <=> wCl_K = 1",
    {}};
inline Citation const cm_necessary{
    "cm-necessary-conditions",
    "totally l-adic CM field K: C_Z = 1 requires K+ l-rational of degree <= 3 and wCl_K = 1 (no converse)",
    {}};

inline Citation use(Citation c, std::vector<std::string> keys)
{
    c.uses = std::move(keys);
    return c;
}

} // namespace rules

// Finite invariants of one pair (D, l) consumed by the verdict engine.
struct FieldReports
{
    FieldDesc field;
    Int ell;
    FinAbGroup cl_ell;
    FinAbGroup cl_prime;
    LogClassGroup wcl;
    std::optional<RationalityReport> rationality;
};

namespace detail {

inline std::vector<std::string> check_hypotheses(FieldReports const& r)
{
    require_odd_prime(r.ell);
    require_split(r.field, r.ell);
    if (!is_fundamental_discriminant(r.field.disc))
        throw invalid_input("fundamental discriminant", r.field.disc.get_str() + " is not fundamental");
    return {"ell odd prime", "ell totally split (totally l-adic)", "ell unramified, so every l-extension is tame away from l"};
}

inline std::map<std::string, std::string> snapshot(FieldReports const& r)
{
    std::map<std::string, std::string> m;
    m["delta"] = r.field.disc.get_str();
    m["ell"] = r.ell.get_str();
    m["totally_real"] = r.field.real() ? "true" : "false";
    m["cl_ell"] = r.cl_ell.to_string();
    m["cl_prime"] = r.cl_prime.to_string();
    m["wcl"] = r.wcl.group.to_string();
    m["wcl_m"] = std::to_string(r.wcl.m);
    m["wcl_stabilized"] = r.wcl.stabilized ? "true" : "false";
    if (r.rationality) {
        m["rational"] = r.rationality->is_rational ? "true" : "false";
        m["torsion"] = r.rationality->torsion.to_string();
        m["rank"] = std::to_string(r.rationality->rank);
        m["rationality_stabilized"] = r.rationality->stabilized ? "true" : "false";
    }
    return m;
}

inline Verdict start(Target t, FieldReports const& r)
{
    Verdict v;
    v.target = t;
    v.preconditions_checked = check_hypotheses(r);
    v.inputs = snapshot(r);
    return v;
}

} // namespace detail

inline Verdict verdict_C_infty(FieldReports const& r)
{
    Verdict v = detail::start(Target::C_infty, r);
    if (!r.field.real()) {
        v.status = Status::Nontrivial;
        v.justification.push_back(rules::use(rules::cyclotomic, {"totally_real"}));
        return v;
    }
    if (!r.rationality || !r.rationality->stabilized) {
        v.status = Status::Undetermined;
        return v;
    }
    v.status = r.rationality->is_rational ? Status::Trivial : Status::Nontrivial;
    v.justification.push_back(
        rules::use(rules::cyclotomic, {"totally_real", "rational", "torsion", "rationality_stabilized"}));
    return v;
}

inline Verdict verdict_C_prime_infty(FieldReports const& r)
{
    Verdict v = detail::start(Target::C_prime_infty, r);
    if (!r.wcl.stabilized) {
        v.status = Status::Undetermined;
        return v;
    }
    v.status = r.wcl.group.is_trivial() ? Status::Trivial : Status::Nontrivial;
    v.justification.push_back(rules::use(rules::logarithmic, {"wcl", "wcl_stabilized"}));
    return v;
}

// The two computable routes to C_Z for a real field.
struct RealRoutes
{
    Status via_rationality = Status::Undetermined;
    Status via_classes = Status::Undetermined;

    bool conflict() const
    {
        return via_rationality != Status::Undetermined && via_classes != Status::Undetermined &&
               via_rationality != via_classes;
    }
};

inline RealRoutes real_routes(FieldReports const& r)
{
    RealRoutes out;
    if (r.rationality && r.rationality->stabilized)
        out.via_rationality = r.rationality->is_rational ? Status::Trivial : Status::Nontrivial;
    if (!r.cl_ell.is_trivial())
        out.via_classes = Status::Nontrivial;
    else if (r.wcl.stabilized)
        out.via_classes = r.wcl.group.is_trivial() ? Status::Trivial : Status::Nontrivial;
    return out;
}

// Throws consistency_error when the two real routes disagree.
inline Verdict verdict_C_Z(FieldReports const& r)
{
    Verdict v = detail::start(Target::C_Z, r);
    if (!r.field.real()) {
        if (!r.wcl.stabilized) {
            v.status = Status::Undetermined;
            return v;
        }
        v.status = r.wcl.group.is_trivial() ? Status::Trivial : Status::Nontrivial;
        v.justification.push_back(rules::use(rules::imaginary, {"wcl", "wcl_stabilized"}));
        return v;
    }
    auto routes = real_routes(r);
    if (routes.conflict())
        throw consistency_error("C_Z routes disagree for (" + r.field.disc.get_str() + ", " + r.ell.get_str() +
                                "): T_K = " + r.rationality->torsion.to_string() + " gives " +
                                to_string(routes.via_rationality) + ", Cl[l] = " + r.cl_ell.to_string() +
                                " and wCl = " + r.wcl.group.to_string() + " give " + to_string(routes.via_classes));
    if (routes.via_rationality != Status::Undetermined) {
        v.status = routes.via_rationality;
        v.justification.push_back(
            rules::use(rules::real_rational, {"rational", "torsion", "rationality_stabilized"}));
    }
    if (routes.via_classes != Status::Undetermined) {
        v.status = routes.via_classes;
        std::vector<std::string> keys{"cl_ell"};
        if (r.cl_ell.is_trivial()) {
            keys.push_back("wcl");
            keys.push_back("wcl_stabilized");
        }
        v.justification.push_back(rules::use(rules::real_classes, keys));
    }
    return v;
}

// Descriptor of a general CM field for the necessary-conditions rule.
struct CmDescriptor
{
    long real_subfield_degree = 1;
    std::optional<bool> real_subfield_rational;
    std::optional<bool> wcl_trivial;
};

inline Verdict verdict_C_Z_cm(CmDescriptor const& d)
{
    Verdict v;
    v.target = Target::C_Z;
    v.preconditions_checked = {"ell odd prime", "K totally l-adic CM field (caller certified)"};
    v.inputs["real_subfield_degree"] = std::to_string(d.real_subfield_degree);
    if (d.real_subfield_rational)
        v.inputs["real_subfield_rational"] = *d.real_subfield_rational ? "true" : "false";
    if (d.wcl_trivial)
        v.inputs["wcl_trivial"] = *d.wcl_trivial ? "true" : "false";
    std::vector<std::string> violated;
    if (d.real_subfield_degree > 3)
        violated.push_back("real_subfield_degree");
    if (d.real_subfield_rational && !*d.real_subfield_rational)
        violated.push_back("real_subfield_rational");
    if (d.wcl_trivial && !*d.wcl_trivial)
        violated.push_back("wcl_trivial");
    if (!violated.empty()) {
        v.status = Status::Nontrivial;
        v.justification.push_back(rules::use(rules::cm_necessary, violated));
    }
    return v;
}

} // namespace qiw
