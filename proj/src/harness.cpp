#include "embb/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "embb/channel.hpp"

#ifdef EMBB_HAVE_OPENMP
#include <omp.h>
#endif

namespace embb {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

std::uint64_t parse_u64(const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (!s.empty() && s[0] == '-') throw std::invalid_argument(s);
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad seed '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("bad seed '" + s + "'");
    return v;
}

std::string opt_int(const std::optional<int>& v) { return v ? std::to_string(*v) : "NA"; }
std::string opt_num(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

// Quote only when needed so plain messages stay readable.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c == '\n' ? ' ' : c;
    }
    return q + "\"";
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "NA";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    for (const auto& part : split(text, ',')) {
        if (part.empty()) throw std::invalid_argument("empty entry in seed list '" + text + "'");
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            seeds.push_back(parse_u64(part));
            continue;
        }
        const auto lo = parse_u64(trim(part.substr(0, dots)));
        const auto hi = parse_u64(trim(part.substr(dots + 2)));
        if (hi < lo) throw std::invalid_argument("descending seed range '" + part + "'");
        if (hi - lo > 1'000'000) throw std::invalid_argument("seed range too long '" + part + "'");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    if (seeds.empty()) throw std::invalid_argument("no seeds given");
    return seeds;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    for (const auto& part : split(text, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad grid value '" + part + "'");
        }
        if (used != part.size() || !std::isfinite(v)) throw std::invalid_argument("bad grid value '" + part + "'");
        grid.push_back(v);
    }
    if (grid.empty()) throw std::invalid_argument("empty grid");
    return grid;
}

SystemConfig apply_case(SystemConfig config, int case_id) {
    switch (case_id) {
        case 1: config.split = FixedSplit{0.75}; break;
        case 2: config.split = FixedSplit{0.5}; break;
        default: throw std::invalid_argument("case must be 1 or 2, got " + std::to_string(case_id));
    }
    return config;
}

std::string case_label(const SystemConfig& config) {
    if (!config.fixed_split()) return "free";
    const double f = std::get<FixedSplit>(config.split).embb_fraction;
    if (f == 0.75) return "case1";
    if (f == 0.5) return "case2";
    return "fixed:" + format_number(f);
}

std::string mode_label(const SystemConfig& config) {
    if (!config.fixed_split()) return "free";
    return config.uniform_urllc_bandwidth ? "fixed-uniform" : "fixed";
}

void parallel_for_jobs(int n, int workers, const std::function<void(int)>& fn) {
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
#ifdef EMBB_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int i = 0; i < n; ++i) fn(i);
#else
    for (int i = 0; i < n; ++i) fn(i);
#endif
}

RunOutcome run_seed(const SystemConfig& config, std::uint64_t seed) {
    RunOutcome out;
    out.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Scenario sc = generate_scenario(config, seed);
        out.result = run_admission(sc, config);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    out.runtime_ms = elapsed_ms(t0);
    return out;
}

void write_trace_csv(std::ostream& os, const SystemConfig& config, const RunOutcome& run) {
    os << "schema,seed,case,mode,iter,objective,admitted_count,max_violation\n";
    const std::string prefix =
        std::string(kTraceSchema) + ',' + std::to_string(run.seed) + ',' + case_label(config) + ',' + mode_label(config);
    for (const auto& t : run.result.trace)
        os << prefix << ',' << t.iteration << ',' << format_number(t.objective) << ',' << t.admitted_count << ','
           << format_number(t.max_violation) << '\n';
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "rtarget") return SweepAxis::RTarget;
    if (name == "btotal") return SweepAxis::BTotal;
    if (name == "jcount") return SweepAxis::JCount;
    throw std::invalid_argument("axis must be rtarget, btotal or jcount, got '" + name + "'");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::RTarget: return "rtarget";
        case SweepAxis::BTotal: return "btotal";
        case SweepAxis::JCount: return "jcount";
    }
    return "unknown";
}

SystemConfig apply_axis(SystemConfig config, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::RTarget: config.target_rate_bps = value * 1e6; break;
        case SweepAxis::BTotal: config.total_bandwidth_hz = value * 1e6; break;
        case SweepAxis::JCount:
            if (value < 0 || value != std::floor(value))
                throw std::invalid_argument("jcount grid values must be non-negative integers");
            config.num_urllc = static_cast<int>(value);
            break;
    }
    require_valid(config);
    return config;
}

namespace {

struct OracleOutcome {
    std::optional<int> admitted;
    std::string status;
    double runtime_ms = 0.0;
};

OracleOutcome run_oracle(const SystemConfig& config, std::uint64_t seed, OracleOptions options) {
    OracleOutcome out;
    if (!config.fixed_split()) {
        out.status = "unsupported";
        return out;
    }
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const auto res = exhaustive_max_admitted(generate_scenario(config, seed), config, options);
        if (res.urllc_infeasible) {
            out.status = "urllc_infeasible";
            out.admitted = 0;
        } else {
            out.status = res.indeterminate > 0 ? "indeterminate" : "ok";
            out.admitted = res.size;
        }
    } catch (const std::exception& e) {
        out.status = "error";
    }
    out.runtime_ms = elapsed_ms(t0);
    return out;
}

std::optional<int> admitted_count(const RunOutcome& run) {
    if (!run.error.empty()) return std::nullopt;
    const auto s = run.result.status;
    if (s == AdmissionStatus::UrllcInfeasible) return 0;
    if (s == AdmissionStatus::SolverTrouble && run.result.trace.empty()) return std::nullopt;
    return static_cast<int>(run.result.admitted.size());
}

}  // namespace

SweepTable run_sweep(const SystemConfig& config, const SweepSpec& spec) {
    require_valid(config);
    std::vector<SystemConfig> configs;
    for (double v : spec.grid) configs.push_back(apply_axis(config, spec.axis, v));

    SweepTable table;
    const int n_seeds = static_cast<int>(spec.seeds.size());
    const int n = static_cast<int>(spec.grid.size()) * n_seeds;
    table.rows.resize(n);
    OracleOptions oopt;
    oopt.parallel = spec.workers <= 1;

    parallel_for_jobs(n, spec.workers, [&](int i) {
        const int g = i / n_seeds;
        const auto seed = spec.seeds[i % n_seeds];
        const SystemConfig& cfg = configs[g];
        SweepRow& row = table.rows[i];
        row.value = spec.grid[g];
        row.seed = seed;
        const RunOutcome run = run_seed(cfg, seed);
        row.runtime_ms = run.runtime_ms;
        row.error = run.error.empty() ? run.result.message : run.error;
        row.status = run.error.empty() ? to_string(run.result.status) : "error";
        row.admitted_algo = admitted_count(run);
        row.iterations = run.result.outer_iterations;
        if (run.error.empty() && !run.result.trace.empty()) row.final_objective = run.result.final_objective();
        if (spec.with_oracle) {
            const auto o = run_oracle(cfg, seed, oopt);
            row.admitted_oracle = o.admitted;
            row.oracle_status = o.status;
        }
    });

    for (std::size_t g = 0; g < spec.grid.size(); ++g) {
        SweepMean m;
        m.value = spec.grid[g];
        double sa = 0, so = 0, si = 0;
        int na = 0, no = 0;
        for (int s = 0; s < n_seeds; ++s) {
            const auto& row = table.rows[g * n_seeds + s];
            if (row.admitted_algo) {
                sa += *row.admitted_algo;
                si += row.iterations;
                ++na;
            }
            if (row.admitted_oracle) {
                so += *row.admitted_oracle;
                ++no;
            }
        }
        m.runs = na;
        if (na) {
            m.admitted_algo = sa / na;
            m.iterations = si / na;
        }
        if (no) m.admitted_oracle = so / no;
        table.means.push_back(m);
    }
    return table;
}

void write_sweep_csv(std::ostream& os, const SystemConfig& config, const SweepSpec& spec, const SweepTable& table) {
    os << "schema,seed,case,mode,axis,value,status,admitted_algo,admitted_oracle,oracle_status,iterations,"
          "final_objective,runtime_ms,note\n";
    const std::string cm = case_label(config) + ',' + mode_label(config) + ',' + to_string(spec.axis);
    for (const auto& r : table.rows)
        os << kSweepSchema << ',' << r.seed << ',' << cm << ',' << format_number(r.value) << ',' << r.status << ','
           << opt_int(r.admitted_algo) << ',' << opt_int(r.admitted_oracle) << ',' << r.oracle_status << ','
           << r.iterations << ',' << opt_num(r.final_objective) << ','
           << (spec.timing ? format_number(r.runtime_ms) : "NA") << ',' << csv_field(r.error) << '\n';
    for (const auto& m : table.means)
        os << kSweepSchema << ",mean," << cm << ',' << format_number(m.value) << ",runs=" << m.runs << ','
           << opt_num(m.admitted_algo) << ',' << opt_num(m.admitted_oracle) << ','
           << (spec.with_oracle ? "mean" : "disabled") << ',' << opt_num(m.iterations) << ",NA,NA,\n";
}

std::optional<int> CompareRow::diff() const {
    if (!admitted_algo || !admitted_oracle) return std::nullopt;
    return *admitted_algo - *admitted_oracle;
}

std::vector<CompareRow> run_oracle_compare(const SystemConfig& config, const CompareSpec& spec) {
    require_valid(config);
    if (!config.fixed_split()) throw std::invalid_argument("oracle comparison needs a fixed eMBB/URLLC split");
    if (config.num_embb > spec.oracle.max_users)
        throw std::invalid_argument("oracle comparison limited to " + std::to_string(spec.oracle.max_users) +
                                    " eMBB users");
    std::vector<CompareRow> rows(spec.seeds.size());
    OracleOptions oopt = spec.oracle;
    if (spec.workers > 1) oopt.parallel = false;
    parallel_for_jobs(static_cast<int>(rows.size()), spec.workers, [&](int i) {
        CompareRow& row = rows[i];
        row.seed = spec.seeds[i];
        const RunOutcome run = run_seed(config, row.seed);
        row.algo_status = run.error.empty() ? to_string(run.result.status) : "error";
        row.admitted_algo = admitted_count(run);
        row.runtime_algo_ms = run.runtime_ms;
        row.error = run.error.empty() ? run.result.message : run.error;
        if (spec.with_oracle) {
            const auto o = run_oracle(config, row.seed, oopt);
            row.admitted_oracle = o.admitted;
            row.oracle_status = o.status;
            row.runtime_oracle_ms = o.runtime_ms;
        } else {
            row.oracle_status = "disabled";
        }
    });
    return rows;
}

CompareSummary summarize(const std::vector<CompareRow>& rows) {
    CompareSummary s;
    s.seeds = static_cast<int>(rows.size());
    double abs_sum = 0.0;
    int within = 0;
    for (const auto& r : rows) {
        const auto d = r.diff();
        if (!d) continue;
        ++s.compared;
        abs_sum += std::abs(*d);
        if (std::abs(*d) <= 1) ++within;
    }
    if (s.compared) {
        s.mean_abs_diff = abs_sum / s.compared;
        s.fraction_within_one = static_cast<double>(within) / s.compared;
    }
    return s;
}

void write_compare_csv(std::ostream& os, const SystemConfig& config, const CompareSpec& spec,
                       const std::vector<CompareRow>& rows) {
    os << "schema,seed,case,mode,algo_status,admitted_algo,admitted_oracle,oracle_status,diff,"
          "runtime_algo_ms,runtime_oracle_ms,mean_abs_diff,fraction_within_1,note\n";
    const std::string cm = case_label(config) + ',' + mode_label(config);
    for (const auto& r : rows) {
        const auto d = r.diff();
        os << kCompareSchema << ',' << r.seed << ',' << cm << ',' << r.algo_status << ',' << opt_int(r.admitted_algo)
           << ',' << opt_int(r.admitted_oracle) << ',' << r.oracle_status << ',' << opt_int(d) << ','
           << (spec.timing ? format_number(r.runtime_algo_ms) : "NA") << ','
           << (spec.timing && spec.with_oracle ? format_number(r.runtime_oracle_ms) : "NA") << ",NA,NA,"
           << csv_field(r.error) << '\n';
    }
    const auto s = summarize(rows);
    os << kCompareSchema << ",summary," << cm << ",seeds=" << s.seeds << ",NA,NA,"
       << (spec.with_oracle ? "compared=" + std::to_string(s.compared) : std::string("disabled"))
       << ",NA,NA,NA," << opt_num(s.mean_abs_diff) << ',' << opt_num(s.fraction_within_one) << ",\n";
}

}  // namespace embb
