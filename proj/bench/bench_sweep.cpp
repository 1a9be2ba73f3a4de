// Wall-clock comparison of the serial and OpenMP paths: seed-parallel sweeps
// and subset-parallel exhaustive search.

#include <chrono>
#include <cstdio>
#include <string>

#include <omp.h>

#include "embb/channel.hpp"
#include "embb/harness.hpp"
#include "embb/oracle.hpp"

using namespace embb;

namespace {

template <class F>
double time_ms(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const int threads = argc > 1 ? std::stoi(argv[1]) : omp_get_max_threads();
    const std::string seeds = argc > 2 ? argv[2] : "1..8";

    SystemConfig cfg = apply_case(SystemConfig{}, 2);
    SweepSpec spec;
    spec.axis = SweepAxis::RTarget;
    spec.grid = {150, 250};
    spec.seeds = parse_seed_list(seeds);

    SweepTable serial, parallel;
    spec.workers = 1;
    const double ts = time_ms([&] { serial = run_sweep(cfg, spec); });
    spec.workers = threads;
    const double tp = time_ms([&] { parallel = run_sweep(cfg, spec); });
    bool same = serial.rows.size() == parallel.rows.size();
    for (std::size_t i = 0; same && i < serial.rows.size(); ++i)
        same = serial.rows[i].admitted_algo == parallel.rows[i].admitted_algo &&
               serial.rows[i].final_objective == parallel.rows[i].final_objective;
    std::printf("sweep   %zu runs  serial %9.1f ms  %d threads %9.1f ms  speedup %.2f  identical %s\n",
                serial.rows.size(), ts, threads, tp, ts / tp, same ? "yes" : "no");

    SystemConfig ocfg;
    ocfg.num_embb = 10;
    ocfg.num_urllc = 3;
    ocfg.uniform_urllc_bandwidth = true;
    const Scenario sc = generate_scenario(ocfg, 1);
    OracleResult a, b;
    const double os = time_ms([&] { a = exhaustive_max_admitted(sc, ocfg, {false, false, 12}); });
    omp_set_num_threads(threads);
    const double op = time_ms([&] { b = exhaustive_max_admitted(sc, ocfg, {false, true, 12}); });
    std::printf("oracle  K=%d      serial %9.1f ms  %d threads %9.1f ms  speedup %.2f  identical %s\n",
                ocfg.num_embb, os, threads, op, os / op, a.subset == b.subset ? "yes" : "no");
    return same && a.subset == b.subset ? 0 : 1;
}
