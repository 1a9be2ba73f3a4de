#pragma once

// Experiment engine behind the embbadm CLI. Every writer produces CSV with a
// schema tag in the first column and (seed, case, mode) provenance on every row.
// Column layouts are listed in README.md.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "embb/admission.hpp"
#include "embb/model.hpp"
#include "embb/oracle.hpp"

namespace embb {

inline constexpr const char* kTraceSchema = "trace/1";
inline constexpr const char* kSweepSchema = "sweep/1";
inline constexpr const char* kCompareSchema = "compare/1";

/// "7", "1..20", "3,5,9" or a mix such as "1..4,10".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);
std::vector<double> parse_grid(const std::string& text);

/// Bandwidth cases: 1 -> 3/4 of the band to eMBB, 2 -> 1/2.
SystemConfig apply_case(SystemConfig config, int case_id);
/// "case1", "case2", "free" or "fixed:<fraction>".
std::string case_label(const SystemConfig& config);
/// "fixed", "fixed-uniform" or "free".
std::string mode_label(const SystemConfig& config);

/// Runs fn(0..n-1), spreading over `workers` threads when built with OpenMP.
/// workers <= 1 is a plain loop. fn must only touch its own index.
void parallel_for_jobs(int n, int workers, const std::function<void(int)>& fn);

struct RunOutcome {
    std::uint64_t seed = 0;
    AdmissionResult result;
    double runtime_ms = 0.0;
    std::string error;  // set when the run threw
};

RunOutcome run_seed(const SystemConfig& config, std::uint64_t seed);

void write_trace_csv(std::ostream& os, const SystemConfig& config, const RunOutcome& run);

enum class SweepAxis { RTarget, BTotal, JCount };

/// "rtarget" (Mbps), "btotal" (MHz) or "jcount".
SweepAxis parse_axis(const std::string& name);
std::string to_string(SweepAxis axis);
SystemConfig apply_axis(SystemConfig config, SweepAxis axis, double value);

struct SweepSpec {
    SweepAxis axis = SweepAxis::RTarget;
    std::vector<double> grid;
    std::vector<std::uint64_t> seeds;
    bool with_oracle = false;
    bool timing = false;  // wall-clock columns; off keeps output byte-reproducible
    int workers = 1;
};

struct SweepRow {
    double value = 0.0;
    std::uint64_t seed = 0;
    std::string status;
    std::optional<int> admitted_algo;
    std::optional<int> admitted_oracle;
    std::string oracle_status = "disabled";
    int iterations = 0;
    std::optional<double> final_objective;
    double runtime_ms = 0.0;
    std::string error;
};

struct SweepMean {
    double value = 0.0;
    std::optional<double> admitted_algo;
    std::optional<double> admitted_oracle;
    std::optional<double> iterations;
    int runs = 0;
};

struct SweepTable {
    std::vector<SweepRow> rows;  // grid-major, seeds ascending
    std::vector<SweepMean> means;
};

SweepTable run_sweep(const SystemConfig& config, const SweepSpec& spec);
void write_sweep_csv(std::ostream& os, const SystemConfig& config, const SweepSpec& spec, const SweepTable& table);

struct CompareRow {
    std::uint64_t seed = 0;
    std::string algo_status;
    std::optional<int> admitted_algo;
    std::optional<int> admitted_oracle;
    std::string oracle_status;  // ok, indeterminate, urllc_infeasible, disabled, error
    double runtime_algo_ms = 0.0;
    double runtime_oracle_ms = 0.0;
    std::string error;

    std::optional<int> diff() const;
};

struct CompareSummary {
    int seeds = 0;
    int compared = 0;  // rows with both counts
    std::optional<double> mean_abs_diff;
    std::optional<double> fraction_within_one;
};

struct CompareSpec {
    std::vector<std::uint64_t> seeds;
    bool with_oracle = true;
    bool timing = false;
    int workers = 1;
    OracleOptions oracle;
};

std::vector<CompareRow> run_oracle_compare(const SystemConfig& config, const CompareSpec& spec);
CompareSummary summarize(const std::vector<CompareRow>& rows);
void write_compare_csv(std::ostream& os, const SystemConfig& config, const CompareSpec& spec,
                       const std::vector<CompareRow>& rows);

/// Ten significant digits ("%.10g").
std::string format_number(double v);

}  // namespace embb
