#pragma once

// Reweighted-l1 admission control: repeatedly solve the convex subproblem
// around the previous solution until sum_k log(s_k + delta) settles.

#include <string>
#include <vector>

#include "embb/linearize.hpp"
#include "embb/model.hpp"
#include "embb/subsolver.hpp"

namespace embb {

/// Maximum-ratio beamformers with equal power over all K+J users, even URLLC
/// bandwidth split, interference and slack evaluated at that point.
ExpansionPoint initialize(const Scenario& scenario, const SystemConfig& config);

/// Indices k with s_k <= tolerance.
std::vector<int> count_admitted(const std::vector<double>& s, double tolerance);

enum class AdmissionStatus { Converged, MaxIters, UrllcInfeasible, SolverTrouble };

std::string to_string(AdmissionStatus s);

struct TraceRecord {
    int iteration = 0;  // 1-based
    double objective = 0.0;  // sum_k log(s_k + delta) after the solve
    int admitted_count = 0;
    double max_violation = 0.0;  // worst constraint violation at the iterate (scaled)
};

struct AdmissionResult {
    AdmissionStatus status = AdmissionStatus::SolverTrouble;
    std::vector<int> admitted;
    std::vector<TraceRecord> trace;
    SolutionPoint final_point;
    std::vector<double> per_user_sinr;  // recomputed from the channels
    std::vector<double> per_user_snr;
    int outer_iterations = 0;
    double initial_objective = 0.0;  // f at the initialization point
    std::string message;             // diagnostic for non-converged runs

    double final_objective() const { return trace.empty() ? initial_objective : trace.back().objective; }
};

struct AdmissionOptions {
    SubproblemOptions subproblem;
};

AdmissionResult run_admission(const Scenario& scenario, const SystemConfig& config,
                              const AdmissionOptions& options = {});

}  // namespace embb
