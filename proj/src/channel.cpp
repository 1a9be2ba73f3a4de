#include "embb/channel.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace embb {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

double path_loss_gain(double distance_m, double reference_m, double exponent) {
    if (!(reference_m > 0.0)) throw std::domain_error("path_loss_gain: reference distance must be > 0");
    if (!(distance_m >= reference_m)) throw std::domain_error("path_loss_gain: distance below reference distance");
    if (!(exponent >= 0.0)) throw std::domain_error("path_loss_gain: exponent must be >= 0");
    return std::pow(distance_m / reference_m, -exponent);
}

ChannelRng::ChannelRng(std::uint64_t seed, DrawStream stream)
    : engine_(splitmix64(splitmix64(seed) ^ (static_cast<std::uint64_t>(stream) + 1) * 0xD1B54A32D192ED03ull)) {}

double ChannelRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::complex<double> ChannelRng::complex_normal() {
    // Box-Muller: one pair of uniforms -> one complex sample with E|c|^2 = 1.
    const double u1 = 1.0 - uniform();  // (0,1]
    const double u2 = uniform();
    const double radius = std::sqrt(-std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

Scenario generate_scenario(const SystemConfig& config, std::uint64_t seed) {
    require_valid(config);
    const int T = config.num_antennas;
    const int K = config.num_embb;
    const int J = config.num_urllc;

    Scenario s;
    s.num_antennas = T;
    s.seed = seed;
    s.distances_m.resize(K + J);

    const double span = config.max_distance_m - config.min_distance_m;
    ChannelRng embb_dist(seed, DrawStream::EmbbDistance);
    for (int k = 0; k < K; ++k) s.distances_m[k] = config.min_distance_m + span * embb_dist.uniform();
    ChannelRng urllc_dist(seed, DrawStream::UrllcDistance);
    for (int j = 0; j < J; ++j) s.distances_m[K + j] = config.min_distance_m + span * urllc_dist.uniform();

    auto amplitude = [&](double r) {
        const double g = path_loss_gain(r, config.reference_distance_m, config.pathloss_exponent);
        return config.gain_model == ChannelGainModel::Power ? std::sqrt(g) : g;
    };
    auto draw = [&](ChannelRng& rng, double r) {
        ComplexVector h(T);
        for (int t = 0; t < T; ++t) h[t] = rng.complex_normal();
        return ComplexVector(h * amplitude(r));
    };

    ChannelRng embb_fade(seed, DrawStream::EmbbFading);
    for (int k = 0; k < K; ++k) s.embb_channels.push_back(draw(embb_fade, s.distances_m[k]));
    ChannelRng urllc_fade(seed, DrawStream::UrllcFading);
    for (int j = 0; j < J; ++j) s.urllc_channels.push_back(draw(urllc_fade, s.distances_m[K + j]));
    return s;
}

void write_scenario(std::ostream& os, const Scenario& s) {
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << std::setprecision(17);
    os << "scenario v1 " << s.num_antennas << ' ' << s.num_embb() << ' ' << s.num_urllc() << ' ' << s.seed << '\n';
    auto row = [&](char kind, double r, const ComplexVector& h) {
        os << kind << ' ' << r;
        for (int t = 0; t < h.size(); ++t) os << ' ' << h[t].real();
        for (int t = 0; t < h.size(); ++t) os << ' ' << h[t].imag();
        os << '\n';
    };
    for (int k = 0; k < s.num_embb(); ++k) row('e', s.distances_m.at(k), s.embb_channels[k]);
    for (int j = 0; j < s.num_urllc(); ++j) row('u', s.distances_m.at(s.num_embb() + j), s.urllc_channels[j]);
    os.flags(flags);
    os.precision(prec);
}

Scenario read_scenario(std::istream& is) {
    std::string magic, version;
    int T = 0, K = 0, J = 0;
    Scenario s;
    if (!(is >> magic >> version >> T >> K >> J >> s.seed) || magic != "scenario" || version != "v1")
        throw std::runtime_error("read_scenario: bad header");
    if (T < 1 || K < 0 || J < 0) throw std::runtime_error("read_scenario: bad dimensions");
    s.num_antennas = T;
    for (int u = 0; u < K + J; ++u) {
        char kind = 0;
        double r = 0.0;
        if (!(is >> kind >> r)) throw std::runtime_error("read_scenario: truncated user row");
        const char expected = u < K ? 'e' : 'u';
        if (kind != expected) throw std::runtime_error("read_scenario: unexpected user kind");
        Eigen::VectorXd re(T), im(T);
        for (int t = 0; t < T; ++t)
            if (!(is >> re[t])) throw std::runtime_error("read_scenario: truncated channel");
        for (int t = 0; t < T; ++t)
            if (!(is >> im[t])) throw std::runtime_error("read_scenario: truncated channel");
        ComplexVector h(T);
        h.real() = re;
        h.imag() = im;
        s.distances_m.push_back(r);
        (u < K ? s.embb_channels : s.urllc_channels).push_back(h);
    }
    return s;
}

}  // namespace embb
