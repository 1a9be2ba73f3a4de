#include <doctest.h>

#include <stdexcept>

#include "embb/config_io.hpp"
#include "embb/model.hpp"

using namespace embb;

TEST_CASE("defaults follow the parameter table") {
    SystemConfig c;
    CHECK(validate_config(c).empty());
    CHECK(c.total_power_w == doctest::Approx(1.99526).epsilon(1e-5));
    CHECK(c.noise_psd_w_per_hz == doctest::Approx(3.999447e-12).epsilon(1e-6));
    CHECK(c.queueing_delay_s() == doctest::Approx(0.8e-3));
    CHECK(*c.fixed_embb_bandwidth_hz() == doctest::Approx(100e6));
    CHECK(watts_to_dbm(dbm_to_watts(-12.5)) == doctest::Approx(-12.5));
}

TEST_CASE("validation reports every broken field") {
    SystemConfig c;
    c.packet_loss_c = 1e-6;  // no longer sums to packet_loss
    c.tx_duration_s = 2e-4;  // longer than the frame
    c.split = FixedSplit{1.0};
    const auto v = validate_config(c);
    REQUIRE(v.size() == 3);
    CHECK(v[0].field == "tx_duration_s");
    CHECK(v[1].field == "packet_loss");
    CHECK(v[2].field == "embb_bandwidth_fraction");
    CHECK_THROWS_AS(require_valid(c), std::invalid_argument);
}

TEST_CASE("uniform URLLC bandwidth needs a fixed split") {
    SystemConfig c;
    c.split = FreeAllocation{};
    c.uniform_urllc_bandwidth = true;
    REQUIRE(validate_config(c).size() == 1);
    CHECK(validate_config(c)[0].field == "uniform_urllc_bandwidth");
    CHECK_FALSE(c.fixed_embb_bandwidth_hz().has_value());
}

TEST_CASE("queueing delay must stay positive") {
    SystemConfig c;
    c.max_delay_s = 0.2e-3;
    CHECK_FALSE(validate_config(c).empty());
}

TEST_CASE("solution totals") {
    SolutionPoint p;
    p.embb_beamformers = {ComplexVector::Constant(2, {1.0, 1.0})};
    p.urllc_beamformers = {ComplexVector::Constant(2, {0.0, 2.0})};
    p.embb_bandwidth_hz = 5.0;
    p.urllc_bandwidths_hz = {1.0, 2.0};
    CHECK(p.total_power_w() == doctest::Approx(4.0 + 8.0));
    CHECK(p.total_bandwidth_hz() == doctest::Approx(8.0));
}

TEST_CASE("scenario consistency") {
    SystemConfig c;
    c.num_embb = 1;
    c.num_urllc = 0;
    c.num_antennas = 2;
    Scenario s;
    s.num_antennas = 2;
    s.embb_channels = {ComplexVector::Ones(2)};
    CHECK_NOTHROW(require_consistent(s, c));
    s.embb_channels[0] = ComplexVector::Zero(2);
    CHECK_THROWS_AS(require_consistent(s, c), std::invalid_argument);
    s.embb_channels[0] = ComplexVector::Ones(3);
    CHECK_THROWS_AS(require_consistent(s, c), std::invalid_argument);
}

TEST_CASE("config JSON round trip") {
    SystemConfig c;
    c.num_embb = 5;
    c.split = FixedSplit{0.75};
    c.uniform_urllc_bandwidth = true;
    c.gain_model = ChannelGainModel::Amplitude;
    c.target_rate_bps = 123e6;
    const SystemConfig d = config_from_json_text(config_to_json_text(c));
    CHECK(d.num_embb == 5);
    CHECK(std::get<FixedSplit>(d.split).embb_fraction == 0.75);
    CHECK(d.uniform_urllc_bandwidth);
    CHECK(d.gain_model == ChannelGainModel::Amplitude);
    CHECK(d.target_rate_bps == 123e6);
    CHECK(d.total_power_w == doctest::Approx(c.total_power_w).epsilon(1e-12));
    CHECK(config_to_json_text(d) == config_to_json_text(c));
}

TEST_CASE("config JSON rejects junk") {
    CHECK_THROWS_AS(config_from_json_text(R"({"num_embbb": 3})"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json_text(R"({"split_mode": "half"})"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json_text(R"({"num_embb": "three"})"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json_text("[1,2]"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json_text(R"({"packet_loss_c": 1e-6})"), std::invalid_argument);
}

TEST_CASE("config JSON partial files keep defaults") {
    const SystemConfig c = config_from_json_text(R"({"packet_loss": 2e-5, "split_mode": "free"})");
    CHECK(c.packet_loss_c == doctest::Approx(1e-5));
    CHECK(c.packet_loss_q == doctest::Approx(1e-5));
    CHECK_FALSE(c.fixed_split());
    CHECK(c.num_antennas == 4);
}
