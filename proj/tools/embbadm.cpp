// embbadm: admission-control experiments from the command line.
//
//   embbadm run            --config cfg.json --seed 7 [--out trace.csv]
//   embbadm sweep          --config cfg.json --axis rtarget --grid 100,150,200 --case 2 --seeds 1..20
//   embbadm oracle-compare --config cfg.json --seeds 1..50
//   embbadm print-config   [--config cfg.json]

#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "embb/config_io.hpp"
#include "embb/harness.hpp"

using namespace embb;

namespace {

SystemConfig load_or_default(const std::string& path) { return path.empty() ? SystemConfig{} : load_config(path); }

// Writes to --out when given, stdout otherwise.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eMBB admission control with URLLC coexistence"};
    app.require_subcommand(1);

    std::string config_path, out_path, seeds_text = "1..20", grid_text, axis_text = "rtarget";
    std::uint64_t seed = 1;
    int case_id = 0, workers = 1;
    bool with_oracle = false, no_oracle = false, timing = false;

    auto* run = app.add_subcommand("run", "single scenario, per-iteration trace");
    run->add_option("--config", config_path, "JSON config (defaults when omitted)");
    run->add_option("--seed", seed, "scenario seed");
    run->add_option("--case", case_id, "bandwidth case: 1 = 3/4 eMBB, 2 = 1/2 eMBB")->check(CLI::Range(1, 2));
    run->add_option("--out", out_path, "CSV path (stdout when omitted)");

    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over one axis");
    sweep->add_option("--config", config_path, "JSON config (defaults when omitted)");
    sweep->add_option("--axis", axis_text, "rtarget (Mbps) | btotal (MHz) | jcount");
    sweep->add_option("--grid", grid_text, "comma-separated axis values")->required();
    sweep->add_option("--case", case_id, "bandwidth case: 1 = 3/4 eMBB, 2 = 1/2 eMBB")->check(CLI::Range(1, 2));
    sweep->add_option("--seeds", seeds_text, "seed list, e.g. 1..20 or 3,5,8");
    sweep->add_flag("--oracle", with_oracle, "also run exhaustive search");
    sweep->add_flag("--timing", timing, "fill runtime columns (output is then not reproducible)");
    sweep->add_option("--workers", workers, "parallel seeds")->check(CLI::PositiveNumber);
    sweep->add_option("--out", out_path, "CSV path (stdout when omitted)");

    auto* compare = app.add_subcommand("oracle-compare", "algorithm vs exhaustive search per seed");
    compare->add_option("--config", config_path, "JSON config (defaults when omitted)");
    compare->add_option("--case", case_id, "bandwidth case: 1 = 3/4 eMBB, 2 = 1/2 eMBB")->check(CLI::Range(1, 2));
    compare->add_option("--seeds", seeds_text, "seed list, e.g. 1..50");
    compare->add_flag("--no-oracle", no_oracle, "skip exhaustive search (columns become NA)");
    compare->add_flag("--timing", timing, "fill runtime columns (output is then not reproducible)");
    compare->add_option("--workers", workers, "parallel seeds")->check(CLI::PositiveNumber);
    compare->add_option("--out", out_path, "CSV path (stdout when omitted)");

    auto* print = app.add_subcommand("print-config", "print the effective config as JSON");
    print->add_option("--config", config_path, "JSON config");

    CLI11_PARSE(app, argc, argv);

    try {
        SystemConfig config = load_or_default(config_path);
        if (case_id) config = apply_case(config, case_id);

        if (*print) {
            std::cout << config_to_json_text(config) << '\n';
            return 0;
        }
        if (*run) {
            const RunOutcome outcome = run_seed(config, seed);
            if (!outcome.error.empty()) throw std::runtime_error(outcome.error);
            Output out(out_path);
            write_trace_csv(out.stream(), config, outcome);
            const auto& r = outcome.result;
            if (r.status == AdmissionStatus::UrllcInfeasible) {
                std::cerr << "embbadm: seed " << seed << ": " << r.message << '\n';
                return 3;
            }
            std::cerr << "status=" << to_string(r.status) << " iterations=" << r.outer_iterations
                      << " admitted=" << r.admitted.size() << " objective=" << format_number(r.final_objective())
                      << '\n';
            return r.status == AdmissionStatus::SolverTrouble ? 4 : 0;
        }
        if (*sweep) {
            SweepSpec spec;
            spec.axis = parse_axis(axis_text);
            spec.grid = parse_grid(grid_text);
            spec.seeds = parse_seed_list(seeds_text);
            spec.with_oracle = with_oracle;
            spec.timing = timing;
            spec.workers = workers;
            const auto table = run_sweep(config, spec);
            Output out(out_path);
            write_sweep_csv(out.stream(), config, spec, table);
            return 0;
        }
        if (*compare) {
            CompareSpec spec;
            spec.seeds = parse_seed_list(seeds_text);
            spec.with_oracle = !no_oracle;
            spec.timing = timing;
            spec.workers = workers;
            const auto rows = run_oracle_compare(config, spec);
            Output out(out_path);
            write_compare_csv(out.stream(), config, spec, rows);
            const auto s = summarize(rows);
            if (s.fraction_within_one)
                std::cerr << "compared=" << s.compared << " mean_abs_diff=" << format_number(*s.mean_abs_diff)
                          << " fraction_within_1=" << format_number(*s.fraction_within_one) << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "embbadm: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
