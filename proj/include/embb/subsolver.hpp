#pragma once

// Convex inner problem of one SCP iteration:
//
//   minimize   sum_k s_k / (ŝ_k + delta)
//   subject to γ^e(b^e) - s_k - ĝ_k(m_k, beta_k) <= 0                 (eMBB SINR, linearized)
//              sum_{i != k} |h_k^H m_i|^2 + N0 b^e <= beta_k            (interference epigraph)
//              γ^u(b_j) - ẑ_j(m_j, b_j) <= 0                            (URLLC SNR, linearized)
//              b^e + sum_j b_j <= B,  sum ||m||^2 <= P,  s >= 0, b >= b_min
//
// Among (near-)optimal points the one with least transmit power is returned.

#include <iosfwd>
#include <string>
#include <vector>

#include "embb/barrier.hpp"
#include "embb/linearize.hpp"
#include "embb/model.hpp"

namespace embb {

enum class SubproblemStatus { Optimal, Infeasible, MaxIters, NumericalTrouble };

std::string to_string(SubproblemStatus s);

struct SubproblemOptions {
    double feasibility_tol = 1e-6;
    double kkt_tol = 1e-6;
    double gap_tol = 1e-10;           // target gap, absolute, on the weighted slack objective
    double accept_gap_rel = 1e-6;     // gap still reported Optimal when the last stage cannot center
    double mu = 10.0;
    int max_newton = 200;             // per centering stage
    double min_bandwidth_hz = 1e3;
    bool min_power_selection = true;  // second pass: least power among optimal points
    double selection_slack = 3e-10;   // objective allowance for that pass
};

struct SubproblemReport {
    SolutionPoint solution;
    double objective = 0.0;  // sum_k s_k / (ŝ_k + delta)
    double max_constraint_violation = 0.0;
    double kkt_residual = 0.0;
    double duality_gap = 0.0;
    int inner_iterations = 0;  // Newton steps over all passes
    SubproblemStatus status = SubproblemStatus::NumericalTrouble;
    double phase1_sigma = 0.0;  // best max-constraint value seen by phase 1 (scaled)
    std::vector<BarrierStageLog> log;
};

SubproblemReport solve_subproblem(const Scenario& scenario, const SystemConfig& config, const ExpansionPoint& anchor,
                                  const SubproblemOptions& options = {});

/// Named constraint with its signed slack in scaled units (>= 0 means satisfied).
struct ConstraintSlack {
    std::string name;
    int index = -1;  // user index where applicable
    double slack = 0.0;
};

struct FeasibilityReport {
    std::vector<ConstraintSlack> entries;

    double min_slack() const;
    /// Entries with slack < -tol.
    std::vector<ConstraintSlack> violated(double tol = 1e-6) const;
    /// Largest violation among entries whose name starts with `prefix`.
    double worst(const std::string& prefix) const;
};

// Constraint names used in the report:
//   surrogate_sinr[k], surrogate_snr[j]   linearized forms at `anchor`
//   relaxed_sinr[k], urllc_snr[j]          original nonconvex forms
//   interference[k], bandwidth, power, slack_nonneg[k], embb_bandwidth_nonneg, urllc_bandwidth_nonneg[j]
// Scaling: SINR/SNR constraints in SINR units, interference by N0 B, power by P, bandwidth by B.
FeasibilityReport check_feasibility(const SolutionPoint& point, const Scenario& scenario, const SystemConfig& config,
                                    const ExpansionPoint& anchor);

/// Structured dump of the constraint system and solver log for triage.
void write_debug_dump(std::ostream& os, const Scenario& scenario, const SystemConfig& config,
                      const ExpansionPoint& anchor, const SubproblemReport& report);

}  // namespace embb
