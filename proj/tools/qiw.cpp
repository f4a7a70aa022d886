// qiw: quadratic-field invariants at an odd prime l and triviality verdicts
// for the associated Iwasawa modules.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qiw/qiw.hpp"
#include "support/acceptance_suite.hpp"

namespace {

using qiw::Int;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUndetermined = 2;

json verdict_json(qiw::Verdict const& v)
{
    json cites = json::array();
    for (auto const& c : v.justification)
        cites.push_back({{"tag", c.tag}, {"rule", c.rule}, {"uses", c.uses}});
    json inputs = json::object();
    for (auto const& [k, val] : v.inputs)
        inputs[k] = val;
    return {{"target", qiw::to_string(v.target)},
            {"status", qiw::to_string(v.status)},
            {"justification", cites},
            {"preconditions_checked", v.preconditions_checked},
            {"inputs", inputs}};
}

std::vector<std::string> factor_strings(qiw::FinAbGroup const& g)
{
    std::vector<std::string> out;
    for (auto const& d : g.invariant_factors())
        out.push_back(d.get_str());
    return out;
}

json field_json(qiw::FieldAnalysis const& a, qiw::AnalysisOptions const& opt)
{
    auto const& r = a.reports;
    std::vector<std::string> gens;
    for (auto const& p : a.generators)
        gens.push_back(p.to_string());
    json j{{"delta", r.field.disc.get_str()},
           {"ell", r.ell.get_str()},
           {"signature", {r.field.r, r.field.c}},
           {"split", true},
           {"class_group", factor_strings(a.class_group)},
           {"class_group_generators", gens},
           {"h_ell", r.cl_ell.order().get_str()},
           {"cl_ell", factor_strings(r.cl_ell)},
           {"cl_prime", factor_strings(r.cl_prime)},
           {"wcl", factor_strings(r.wcl.group)},
           {"wcl_stabilized", r.wcl.stabilized},
           {"wcl_normalization", r.wcl.normalization},
           {"rank", r.rationality->rank},
           {"torsion", factor_strings(r.rationality->torsion)},
           {"rational", r.rationality->is_rational},
           {"rationality_stabilized", r.rationality->stabilized},
           {"rationality_window", {r.rationality->window_first, r.rationality->window_last}},
           {"m", opt.m},
           {"m_max", opt.m_max},
           {"ms", a.ms}};
    if (a.unit)
        j["fundamental_unit"] = {{"eps", a.unit->eps.to_string()}, {"norm", a.unit->norm}};
    json verdicts = json::array({verdict_json(a.c_infty), verdict_json(a.c_prime_infty)});
    if (a.c_z)
        verdicts.push_back(verdict_json(*a.c_z));
    else
        verdicts.push_back({{"target", "C_Z"}, {"status", qiw::kConflictStatus}, {"error", a.c_z_conflict}});
    j["verdicts"] = verdicts;
    return j;
}

void print_verdict(std::ostream& os, qiw::Verdict const& v)
{
    os << "  " << qiw::to_string(v.target) << ": " << qiw::to_string(v.status) << '\n';
    for (auto const& c : v.justification) {
        os << "    by " << c.tag << " [" << c.rule << "]\n      using";
        for (auto const& u : c.uses)
            os << ' ' << u << '=' << v.inputs.at(u);
        os << '\n';
    }
}

void print_field(std::ostream& os, qiw::FieldAnalysis const& a)
{
    auto const& r = a.reports;
    os << "field        Q(sqrt(" << r.field.disc << ")), D = " << r.field.disc << ", (r, c) = (" << r.field.r << ", "
       << r.field.c << ")\n";
    os << "ell          " << r.ell << " (split)\n";
    os << "Cl           " << a.class_group;
    if (!a.generators.empty()) {
        os << "  generators";
        for (auto const& p : a.generators)
            os << ' ' << p.to_string();
    }
    os << '\n';
    if (a.unit)
        os << "unit         " << a.unit->eps.to_string() << ", norm " << a.unit->norm << '\n';
    os << "Cl[l]        " << r.cl_ell << '\n';
    os << "Cl'          " << r.cl_prime << '\n';
    os << "wCl          " << r.wcl.group << (r.wcl.stabilized ? "" : " (not stabilized)") << "  at m = " << r.wcl.m
       << '\n';
    auto const& ra = *r.rationality;
    os << "ray l-part   rank " << ra.rank << ", T_K = " << ra.torsion << ", "
       << (ra.stabilized ? "stabilized over levels " + std::to_string(ra.window_first) + ".." +
                               std::to_string(ra.window_last)
                         : std::string("not stabilized by m_max"))
       << '\n';
    os << "l-rational   " << (ra.stabilized ? (ra.is_rational ? "yes" : "no") : "unknown") << '\n';
    os << "verdicts\n";
    print_verdict(os, a.c_infty);
    print_verdict(os, a.c_prime_infty);
    if (a.c_z)
        print_verdict(os, *a.c_z);
    else
        os << "  C_Z: " << qiw::kConflictStatus << "\n    " << a.c_z_conflict << '\n';
}

int report_error(std::exception const& e)
{
    if (auto const* ii = dynamic_cast<qiw::invalid_input const*>(&e); ii && !ii->hypothesis().empty())
        std::cerr << "error: hypothesis '" << ii->hypothesis() << "' fails: " << e.what() << '\n';
    else
        std::cerr << "error: " << e.what() << '\n';
    return kExitError;
}

std::vector<long> parse_ell_set(std::string const& s)
{
    std::vector<long> out;
    auto dots = s.find("..");
    if (dots != std::string::npos) {
        long lo = std::stol(s.substr(0, dots)), hi = std::stol(s.substr(dots + 2));
        if (lo > hi)
            throw qiw::invalid_input("--ell-set: empty range " + s);
        for (long p : qiw::small_primes_up_to(hi))
            if (p >= lo && p != 2)
                out.push_back(p);
        if (out.empty())
            throw qiw::invalid_input("--ell-set: no odd primes in " + s);
        return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(std::stol(item));
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Invariants of quadratic fields at an odd prime l and Iwasawa-module verdicts"};
    app.require_subcommand(1);

    long delta = 0, ell = 0;
    qiw::AnalysisOptions aopt;

    auto* field = app.add_subcommand("field", "invariants and verdicts for one pair (D, l)");
    std::string field_format = "text";
    field->add_option("-d,--discriminant", delta, "fundamental discriminant D")->required()->allow_extra_args(false);
    field->add_option("-l,--ell", ell, "odd prime l, split in Q(sqrt D)")->required();
    field->add_option("-m,--precision", aopt.m, "wCl precision (checked at m, m+1, m+2)")->capture_default_str();
    field->add_option("--m-max", aopt.m_max, "last ray level for the rationality test")->capture_default_str();
    field->add_option("--format", field_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* scan = app.add_subcommand("scan", "sweep fundamental discriminants and primes");
    qiw::ScanConfig cfg;
    std::string ell_set = "3,5,7", scan_format = "csv";
    cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
    scan->add_option("--d-min", cfg.d_min, "smallest discriminant")->required();
    scan->add_option("--d-max", cfg.d_max, "largest discriminant")->required();
    scan->add_option("--ell-set", ell_set, "primes as 3,5,7 or a range 3..13")->capture_default_str();
    scan->add_option("-m,--precision", cfg.analysis.m, "wCl precision")->capture_default_str();
    scan->add_option("--m-max", cfg.analysis.m_max, "last ray level")->capture_default_str();
    scan->add_option("--format", scan_format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    scan->add_option("--cache", cfg.cache_path, "append-only JSONL cache");
    scan->add_option("--jobs", cfg.jobs, "worker threads");
    scan->add_flag("--sort", cfg.sort, "emit in enumeration order");

    auto* stats = app.add_subcommand("stats", "frequency table from scan output (CSV or JSONL)");
    std::vector<std::string> stats_files;
    stats->add_option("files", stats_files, "record files; '-' or none for stdin");

    auto* knot = app.add_subcommand("knot", "knot group (G ^ G) / sum of decomposition images");
    std::string knot_file;
    knot->add_option("file", knot_file, "input file")->required();

    auto* chev = app.add_subcommand("chevalley", "Chevalley's ambiguous class number");
    chev->set_help_flag("--help", "print this help");
    qiw::ChevalleyInput chev_in;
    std::string h_str, n_str, idx_str = "1";
    std::vector<std::string> ram;
    chev->add_option("-h,--class-number", h_str, "class number h_K")->required();
    chev->add_option("-n,--degree", n_str, "degree [L:K]")->required();
    chev->add_option("-e,--ramification", ram, "ramification indices e_v")->delimiter(',');
    chev->add_option("-u,--unit-index", idx_str, "[E_K : E_K cap N L^x]")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "run the acceptance checks");
    bool quick = false, all = false;
    std::vector<int> only;
    std::string verify_cache;
    verify->add_flag("--quick", quick, "reduced sweep sizes");
    verify->add_flag("--all", all, "criteria 1-8 (default 1-6)");
    verify->add_option("--criterion", only, "run only these criteria");
    verify->add_option("--cache", verify_cache, "also recompute and check every record of a cache file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*field) {
            auto a = qiw::analyze_field(Int(delta), Int(ell), aopt);
            if (field_format == "json")
                std::cout << field_json(a, aopt).dump(2) << '\n';
            else
                print_field(std::cout, a);
            if (!a.c_z) {
                std::cerr << "error: " << a.c_z_conflict << '\n';
                return kExitError;
            }
            for (auto const* v : {&a.c_infty, &a.c_prime_infty, &*a.c_z})
                if (v->status == qiw::Status::Undetermined)
                    return kExitUndetermined;
            return kExitOk;
        }

        if (*scan) {
            cfg.ells = parse_ell_set(ell_set);
            bool csv = scan_format == "csv";
            if (csv)
                std::cout << qiw::kCsvHeader << '\n';
            std::size_t conflicts = 0;
            qiw::run_scan(cfg, [&](qiw::ResultRecord const& r) {
                std::cout << (csv ? qiw::to_csv(r) : qiw::to_json(r).dump()) << '\n';
                conflicts += r.v_c_z == qiw::kConflictStatus;
            });
            std::cout.flush();
            if (conflicts) {
                std::cerr << "error: " << conflicts << " record(s) with disagreeing C_Z routes\n";
                return kExitError;
            }
            return kExitOk;
        }

        if (*stats) {
            std::vector<qiw::ResultRecord> recs;
            if (stats_files.empty())
                stats_files.push_back("-");
            for (auto const& f : stats_files) {
                std::vector<qiw::ResultRecord> part;
                if (f == "-") {
                    part = qiw::read_records(std::cin);
                } else {
                    std::ifstream in(f);
                    if (!in)
                        throw qiw::invalid_input("stats: cannot open " + f);
                    part = qiw::read_records(in);
                }
                recs.insert(recs.end(), part.begin(), part.end());
            }
            auto rows = qiw::compute_stats(recs);
            std::cout << std::left << std::setw(6) << "ell" << std::right << std::setw(8) << "pairs" << std::setw(12)
                      << "rational" << std::setw(12) << "wCl=1" << std::setw(12) << "C_Z=1" << std::setw(14)
                      << "undetermined" << std::setw(11) << "conflicts" << '\n';
            for (auto const& r : rows)
                std::cout << std::left << std::setw(6) << r.label << std::right << std::setw(8) << r.count
                          << std::fixed << std::setprecision(4) << std::setw(12) << r.frac(r.rational)
                          << std::setw(12) << r.frac(r.wcl_trivial) << std::setw(12) << r.frac(r.cz_trivial)
                          << std::setw(14) << r.undetermined << std::setw(11) << r.conflicts << '\n';
            return kExitOk;
        }

        if (*knot) {
            std::ifstream in(knot_file);
            if (!in)
                throw qiw::invalid_input("knot: cannot open " + knot_file);
            auto k = qiw::parse_knot_input(in);
            std::cout << qiw::knot_group(k.g, k.decomposition) << '\n';
            return kExitOk;
        }

        if (*chev) {
            auto to_int = [](std::string const& s, char const* what) {
                Int v;
                if (v.set_str(s, 10) != 0)
                    throw qiw::invalid_input(std::string("chevalley: ") + what + " '" + s + "' is not an integer");
                return v;
            };
            chev_in.h_k = to_int(h_str, "class number");
            chev_in.degree = to_int(n_str, "degree");
            chev_in.unit_norm_index = to_int(idx_str, "unit index");
            for (auto const& e : ram)
                chev_in.ramification.push_back(to_int(e, "ramification index"));
            std::cout << qiw::chevalley_ambiguous(chev_in) << '\n';
            return kExitOk;
        }

        if (*verify) {
            acceptance::Options o;
            o.quick = quick;
            acceptance::Suite suite(o);
            if (only.empty())
                for (int i = 1; i <= (all ? 8 : 6); ++i)
                    only.push_back(i);
            bool ok = true;
            for (int id : only) {
                if (id < 1 || id > acceptance::Suite::kCount)
                    throw qiw::invalid_input("verify: no criterion " + std::to_string(id));
                auto out = suite.run(id);
                std::cout << acceptance::format(out) << std::endl;
                ok = ok && out.pass;
            }
            if (!verify_cache.empty()) {
                std::size_t n = 0, bad = 0;
                std::ifstream in(verify_cache);
                if (!in)
                    throw qiw::invalid_input("verify: cannot open cache " + verify_cache);
                qiw::ResultCache cache(verify_cache);
                for (auto const& r : qiw::read_records(in)) {
                    ++n;
                    qiw::AnalysisOptions ao{r.m, r.m_max};
                    auto fresh = qiw::make_record(qiw::analyze_field(Int(static_cast<long>(r.delta)),
                                                                     Int(static_cast<long>(r.ell)), ao),
                                                  ao);
                    if (!fresh.same_values(r)) {
                        ++bad;
                        std::cout << "[FAIL] cache record (" << r.delta << ", " << r.ell << ", " << r.m
                                  << ") differs from a fresh computation\n";
                    }
                }
                std::cout << (bad ? "[FAIL] " : "[PASS] ") << "cache " << verify_cache << ": " << n << " records, "
                          << bad << " mismatches\n";
                ok = ok && bad == 0;
            }
            return ok ? kExitOk : kExitError;
        }
    } catch (std::exception const& e) {
        return report_error(e);
    }
    return kExitOk;
}
