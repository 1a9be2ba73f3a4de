#pragma once

// Exhaustive-search baseline. URLLC users get an even share of the URLLC band
// and their minimum maximum-ratio power; an eMBB subset is admissible when the
// least power meeting every member's SINR target fits in what remains.

#include <cstdint>
#include <string>
#include <vector>

#include "embb/model.hpp"

namespace embb {

enum class SubsetVerdict { Feasible, Infeasible, Indeterminate };

std::string to_string(SubsetVerdict v);

struct SubsetCheck {
    SubsetVerdict verdict = SubsetVerdict::Indeterminate;
    SolutionPoint witness;        // filled when Feasible
    double embb_power_w = 0.0;    // least eMBB power for the subset (inf if unbounded)
    double urllc_power_w = 0.0;
    int fixed_point_iterations = 0;
};

/// Least total power serving every k in `targets_k` at its SINR target with the
/// given channels and noise power. Returns false when the targets are not jointly
/// achievable at any power (or the iteration exceeds `power_cap`).
struct MinPowerBeamforming {
    bool converged = false;
    bool exceeded_cap = false;
    double total_power = 0.0;
    std::vector<ComplexVector> beamformers;
    int iterations = 0;
};
MinPowerBeamforming min_power_beamforming(const std::vector<ComplexVector>& channels, double sinr_target,
                                          double noise_power_w, double power_cap_w, int max_iterations = 20000);

/// `subset` lists eMBB indices. Requires FixedSplit.
SubsetCheck subset_feasible(const std::vector<int>& subset, const Scenario& scenario, const SystemConfig& config);

struct SubsetRecord {
    std::uint32_t mask = 0;  // bit k set when eMBB user k is in the subset
    SubsetVerdict verdict = SubsetVerdict::Indeterminate;
    double power_w = 0.0;    // witness total power, NaN unless Feasible
};

struct OracleOptions {
    bool prune = true;     // skip supersets of infeasible singletons
    bool parallel = true;  // OpenMP over subsets of one size
    int max_users = 12;
};

struct OracleResult {
    int size = 0;
    std::vector<int> subset;
    double witness_power_w = 0.0;
    SolutionPoint witness;
    bool urllc_infeasible = false;   // no subset works because URLLC alone exceeds the budget
    int indeterminate = 0;           // subsets of size >= `size` left undecided
    std::vector<SubsetRecord> records;
};

/// Largest admissible subset, scanning sizes downward. Ties go to the lowest
/// witness power, then the lowest mask. Throws std::invalid_argument if K > max_users
/// or the split is not fixed.
OracleResult exhaustive_max_admitted(const Scenario& scenario, const SystemConfig& config,
                                     const OracleOptions& options = {});

}  // namespace embb
