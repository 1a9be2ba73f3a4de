#pragma once

#include <cmath>
#include <random>

#include "embb/channel.hpp"
#include "embb/model.hpp"

namespace testing_support {

inline embb::SystemConfig small_config(int K, int J, int T = 4) {
    embb::SystemConfig c;
    c.num_embb = K;
    c.num_urllc = J;
    c.num_antennas = T;
    return c;
}

inline embb::ComplexVector random_cvec(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> N(0.0, scale);
    embb::ComplexVector v(n);
    for (int i = 0; i < n; ++i) v[i] = {N(rng), N(rng)};
    return v;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing_support
