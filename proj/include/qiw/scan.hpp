#pragma once

// Result records for (D, l) sweeps: CSV and JSONL encodings, an append-only
// JSONL cache keyed by (D, l, m), discriminant enumeration, a parallel sweep
// driver and frequency statistics.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "qiw/analysis.hpp"
#include "qiw/bigint.hpp"
#include "qiw/errors.hpp"
#include "qiw/field.hpp"

namespace qiw {

inline std::string const kConflictStatus = "Conflict";

struct ResultRecord
{
    long long delta = 0;
    long long ell = 0;
    bool split = true;
    std::string h_ell = "1";
    std::vector<long long> wcl;
    long long rank = 0;
    std::vector<long long> torsion;
    bool rational = false;
    std::string v_c_infty;
    std::string v_cprime;
    std::string v_c_z;
    bool rationality_stabilized = false;
    bool wcl_stabilized = false;
    double ms = 0;
    long m = 8;
    long m_max = kDefaultMMax;

    std::tuple<long long, long long, long> key() const { return {delta, ell, m}; }

    // Equality of everything except timing.
    bool same_values(ResultRecord const& o) const
    {
        auto tie = [](ResultRecord const& r) {
            return std::tie(r.delta, r.ell, r.split, r.h_ell, r.wcl, r.rank, r.torsion, r.rational, r.v_c_infty,
                            r.v_cprime, r.v_c_z, r.rationality_stabilized, r.wcl_stabilized, r.m, r.m_max);
        };
        return tie(*this) == tie(o);
    }
};

namespace detail {

inline std::vector<long long> factors_ll(FinAbGroup const& g)
{
    std::vector<long long> out;
    for (auto const& d : g.invariant_factors()) {
        if (!d.fits_slong_p())
            throw resource_error("record: invariant factor " + d.get_str() + " does not fit in 64 bits");
        out.push_back(d.get_si());
    }
    return out;
}

inline std::string join(std::vector<long long> const& v, char sep)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

inline std::vector<long long> split_ll(std::string const& s, char sep)
{
    std::vector<long long> out;
    if (s.empty())
        return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        out.push_back(std::stoll(item));
    return out;
}

inline std::vector<std::string> split_str(std::string const& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace detail

inline ResultRecord make_record(FieldAnalysis const& a, AnalysisOptions const& opt)
{
    auto const& r = a.reports;
    ResultRecord rec;
    rec.delta = r.field.disc.get_si();
    rec.ell = r.ell.get_si();
    rec.split = true;
    rec.h_ell = r.cl_ell.order().get_str();
    rec.wcl = detail::factors_ll(r.wcl.group);
    rec.rank = static_cast<long long>(r.rationality->rank);
    rec.torsion = detail::factors_ll(r.rationality->torsion);
    rec.rational = r.rationality->is_rational;
    rec.v_c_infty = to_string(a.c_infty.status);
    rec.v_cprime = to_string(a.c_prime_infty.status);
    rec.v_c_z = a.c_z ? to_string(a.c_z->status) : kConflictStatus;
    rec.rationality_stabilized = r.rationality->stabilized;
    rec.wcl_stabilized = r.wcl.stabilized;
    rec.ms = a.ms;
    rec.m = opt.m;
    rec.m_max = opt.m_max;
    return rec;
}

inline nlohmann::json to_json(ResultRecord const& r)
{
    return nlohmann::json{{"delta", r.delta},
                          {"ell", r.ell},
                          {"m", r.m},
                          {"m_max", r.m_max},
                          {"split", r.split},
                          {"h_ell", r.h_ell},
                          {"wcl", r.wcl},
                          {"rank", r.rank},
                          {"torsion", r.torsion},
                          {"rational", r.rational},
                          {"v_C_infty", r.v_c_infty},
                          {"v_Cprime", r.v_cprime},
                          {"v_C_Z", r.v_c_z},
                          {"stabilized", {{"rationality", r.rationality_stabilized}, {"wcl", r.wcl_stabilized}}},
                          {"ms", r.ms}};
}

inline ResultRecord record_from_json(nlohmann::json const& j)
{
    ResultRecord r;
    r.delta = j.at("delta").get<long long>();
    r.ell = j.at("ell").get<long long>();
    r.m = j.at("m").get<long>();
    r.m_max = j.at("m_max").get<long>();
    r.split = j.at("split").get<bool>();
    r.h_ell = j.at("h_ell").get<std::string>();
    r.wcl = j.at("wcl").get<std::vector<long long>>();
    r.rank = j.at("rank").get<long long>();
    r.torsion = j.at("torsion").get<std::vector<long long>>();
    r.rational = j.at("rational").get<bool>();
    r.v_c_infty = j.at("v_C_infty").get<std::string>();
    r.v_cprime = j.at("v_Cprime").get<std::string>();
    r.v_c_z = j.at("v_C_Z").get<std::string>();
    r.rationality_stabilized = j.at("stabilized").at("rationality").get<bool>();
    r.wcl_stabilized = j.at("stabilized").at("wcl").get<bool>();
    r.ms = j.at("ms").get<double>();
    return r;
}

inline std::string const kCsvHeader =
    "delta,ell,split,h_ell,wcl,rank,torsion,rational,v_C_infty,v_Cprime,v_C_Z,stabilized,ms,m,m_max";

inline std::string to_csv(ResultRecord const& r)
{
    std::ostringstream os;
    os << r.delta << ',' << r.ell << ',' << (r.split ? "true" : "false") << ',' << r.h_ell << ','
       << detail::join(r.wcl, ';') << ',' << r.rank << ',' << detail::join(r.torsion, ';') << ','
       << (r.rational ? "true" : "false") << ',' << r.v_c_infty << ',' << r.v_cprime << ',' << r.v_c_z << ','
       << (r.rationality_stabilized ? "true" : "false") << ';' << (r.wcl_stabilized ? "true" : "false") << ','
       << std::fixed << std::setprecision(3) << r.ms << ',' << r.m << ',' << r.m_max;
    return os.str();
}

inline ResultRecord record_from_csv(std::string const& line)
{
    auto f = detail::split_str(line, ',');
    if (f.size() != 15)
        throw invalid_input("CSV record: expected 15 fields, got " + std::to_string(f.size()));
    auto boolean = [](std::string const& s) {
        if (s == "true")
            return true;
        if (s == "false")
            return false;
        throw invalid_input("CSV record: bad boolean '" + s + "'");
    };
    ResultRecord r;
    r.delta = std::stoll(f[0]);
    r.ell = std::stoll(f[1]);
    r.split = boolean(f[2]);
    r.h_ell = f[3];
    r.wcl = detail::split_ll(f[4], ';');
    r.rank = std::stoll(f[5]);
    r.torsion = detail::split_ll(f[6], ';');
    r.rational = boolean(f[7]);
    r.v_c_infty = f[8];
    r.v_cprime = f[9];
    r.v_c_z = f[10];
    auto st = detail::split_str(f[11], ';');
    if (st.size() != 2)
        throw invalid_input("CSV record: stabilized field must be 'rationality;wcl'");
    r.rationality_stabilized = boolean(st[0]);
    r.wcl_stabilized = boolean(st[1]);
    r.ms = std::stod(f[12]);
    r.m = std::stol(f[13]);
    r.m_max = std::stol(f[14]);
    return r;
}

// Append-only JSONL store. Reading rejects malformed lines and conflicting
// duplicates; appending an existing key with different values is an error.
class ResultCache
{
    std::string file;
    std::map<std::tuple<long long, long long, long>, ResultRecord> recs;
    std::mutex mu;

  public:
    explicit ResultCache(std::string path) : file(std::move(path))
    {
        std::ifstream in(file);
        if (!in)
            return;
        std::string line;
        long lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty())
                continue;
            ResultRecord r;
            try {
                r = record_from_json(nlohmann::json::parse(line));
            } catch (std::exception const& e) {
                throw invalid_input("cache " + file + ":" + std::to_string(lineno) + ": corrupt record (" + e.what() + ")");
            }
            insert_checked(r);
        }
    }

    std::optional<ResultRecord> find(long long delta, long long ell, long m)
    {
        std::lock_guard<std::mutex> g(mu);
        auto it = recs.find({delta, ell, m});
        if (it == recs.end())
            return std::nullopt;
        return it->second;
    }

    void append(ResultRecord const& r)
    {
        std::lock_guard<std::mutex> g(mu);
        if (!insert_checked(r))
            return;
        std::ofstream out(file, std::ios::app);
        if (!out)
            throw resource_error("cache: cannot open " + file + " for appending");
        out << to_json(r).dump() << '\n';
    }

    std::size_t size() const { return recs.size(); }

  private:
    // true when the key is new
    bool insert_checked(ResultRecord const& r)
    {
        auto [it, fresh] = recs.emplace(r.key(), r);
        if (!fresh && !it->second.same_values(r))
            throw consistency_error("cache conflict at key (delta=" + std::to_string(r.delta) +
                                    ", ell=" + std::to_string(r.ell) + ", m=" + std::to_string(r.m) + ")");
        return fresh;
    }
};

// Fundamental discriminants in [lo, hi] by increasing |D|, negative first on
// ties.
inline std::vector<long long> fundamental_discriminants(long long lo, long long hi)
{
    std::vector<long long> out;
    for (long long d = lo; d <= hi; ++d)
        if (is_fundamental_discriminant(Int(static_cast<long>(d))))
            out.push_back(d);
    std::sort(out.begin(), out.end(), [](long long a, long long b) {
        long long aa = a < 0 ? -a : a, bb = b < 0 ? -b : b;
        return aa != bb ? aa < bb : a < b;
    });
    return out;
}

struct ScanConfig
{
    long long d_min = 0;
    long long d_max = 0;
    std::vector<long> ells;
    AnalysisOptions analysis;
    unsigned jobs = 1;
    bool sort = false;
    std::string cache_path;
};

struct ScanTask
{
    long long delta;
    long ell;
};

inline std::vector<ScanTask> scan_tasks(ScanConfig const& cfg)
{
    if (cfg.d_min > cfg.d_max)
        throw invalid_input("scan: empty discriminant range");
    if (cfg.ells.empty())
        throw invalid_input("scan: empty ell set");
    if (cfg.analysis.m < 2)
        throw invalid_input("scan: precision must be >= 2");
    auto ells = cfg.ells;
    std::sort(ells.begin(), ells.end());
    for (long l : ells)
        require_odd_prime(Int(l));
    std::vector<ScanTask> tasks;
    for (long long d : fundamental_discriminants(cfg.d_min, cfg.d_max))
        for (long l : ells)
            if (kronecker(Int(static_cast<long>(d)), Int(l)) == 1)
                tasks.push_back({d, l});
    return tasks;
}

// Runs the sweep; `emit` is called under a lock, in completion order unless
// cfg.sort is set (then in task order once everything is done).
inline std::vector<ResultRecord> run_scan(ScanConfig const& cfg, std::function<void(ResultRecord const&)> const& emit)
{
    auto tasks = scan_tasks(cfg);
    std::optional<ResultCache> cache;
    if (!cfg.cache_path.empty())
        cache.emplace(cfg.cache_path);
    std::vector<std::optional<ResultRecord>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex out_mu;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            std::size_t i = next++;
            if (i >= tasks.size())
                return;
            {
                std::lock_guard<std::mutex> g(out_mu);
                if (failure)
                    return;
            }
            try {
                auto const& t = tasks[i];
                std::optional<ResultRecord> rec;
                if (cache)
                    rec = cache->find(t.delta, t.ell, cfg.analysis.m);
                if (rec && rec->m_max != cfg.analysis.m_max)
                    throw invalid_input("cache holds (delta=" + std::to_string(t.delta) + ", ell=" +
                                        std::to_string(t.ell) + ", m=" + std::to_string(cfg.analysis.m) +
                                        ") computed with m_max=" + std::to_string(rec->m_max) +
                                        "; rerun with that --m-max or use another cache");
                if (!rec) {
                    auto a = analyze_field(Int(static_cast<long>(t.delta)), Int(t.ell), cfg.analysis);
                    rec = make_record(a, cfg.analysis);
                    if (cache)
                        cache->append(*rec);
                }
                std::lock_guard<std::mutex> g(out_mu);
                results[i] = rec;
                if (!cfg.sort)
                    emit(*rec);
            } catch (...) {
                std::lock_guard<std::mutex> g(out_mu);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    unsigned n = std::max(1u, cfg.jobs);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
    std::vector<ResultRecord> out;
    for (auto& r : results)
        out.push_back(*r);
    if (cfg.sort)
        for (auto const& r : out)
            emit(r);
    return out;
}

struct StatsRow
{
    std::string label; // "3", "5", ..., "all"
    std::size_t count = 0;
    std::size_t rational = 0;
    std::size_t wcl_trivial = 0;
    std::size_t cz_trivial = 0;
    std::size_t undetermined = 0; // records with at least one Undetermined verdict
    std::size_t conflicts = 0;

    double frac(std::size_t k) const { return count ? static_cast<double>(k) / static_cast<double>(count) : 0.0; }
};

inline std::vector<StatsRow> compute_stats(std::vector<ResultRecord> const& recs)
{
    if (recs.empty())
        throw invalid_input("stats: no records");
    std::map<long long, StatsRow> per;
    StatsRow all{"all"};
    for (auto const& r : recs) {
        for (StatsRow* row : {&per[r.ell], &all}) {
            ++row->count;
            row->rational += r.rational && r.rationality_stabilized;
            row->wcl_trivial += r.wcl.empty() && r.wcl_stabilized;
            row->cz_trivial += r.v_c_z == "Trivial";
            row->undetermined += r.v_c_infty == "Undetermined" || r.v_cprime == "Undetermined" ||
                                 r.v_c_z == "Undetermined";
            row->conflicts += r.v_c_z == kConflictStatus;
        }
    }
    std::vector<StatsRow> out;
    for (auto& [ell, row] : per) {
        row.label = std::to_string(ell);
        out.push_back(row);
    }
    out.push_back(all);
    return out;
}

// Reads JSONL or CSV (detected by the header line).
inline std::vector<ResultRecord> read_records(std::istream& in)
{
    std::vector<ResultRecord> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == kCsvHeader)
            continue;
        try {
            out.push_back(line.front() == '{' ? record_from_json(nlohmann::json::parse(line)) : record_from_csv(line));
        } catch (std::exception const& e) {
            throw invalid_input("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

} // namespace qiw
