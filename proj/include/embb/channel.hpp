#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>

#include "embb/model.hpp"

namespace embb {

/// (r/r0)^(-alpha). Throws std::domain_error if r < r0 or r0 <= 0.
double path_loss_gain(double distance_m, double reference_m, double exponent);

/// Independent draw groups, each with its own generator keyed off the scenario seed.
enum class DrawStream : std::uint64_t { EmbbDistance = 0, UrllcDistance = 1, EmbbFading = 2, UrllcFading = 3 };

/// Deterministic, implementation-independent draws on top of mt19937_64.
class ChannelRng {
public:
    ChannelRng(std::uint64_t seed, DrawStream stream);

    /// Uniform on [0,1) with 53 random bits.
    double uniform();
    /// Circularly-symmetric complex normal with unit variance (re, im each N(0, 1/2)).
    std::complex<double> complex_normal();

private:
    std::mt19937_64 engine_;
};

/// Places K+J users uniformly in [r_min, r_max] and draws MISO channels
/// h = a(r) c with c ~ CN(0, I). Bit-identical for identical (config, seed).
Scenario generate_scenario(const SystemConfig& config, std::uint64_t seed);

// Text fixture format:
//   scenario v1 <T> <K> <J> <seed>
//   one row per user (eMBB first): <e|u> <distance> <re_1..re_T> <im_1..im_T>
void write_scenario(std::ostream& os, const Scenario& scenario);
Scenario read_scenario(std::istream& is);

}  // namespace embb
