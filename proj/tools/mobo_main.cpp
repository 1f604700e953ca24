#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mobo/bench.hpp"
#include "mobo/loop.hpp"
#include "mobo/regret.hpp"

namespace {

// Exit codes: 0 success, 2 configuration error, 3 objective or numeric
// failure, 4 unsupported input (no true-function oracle / missing logs).
constexpr int kOk = 0;
constexpr int kConfigErrorExit = 2;
constexpr int kRuntimeErrorExit = 3;
constexpr int kUnsupportedExit = 4;

int cmd_run(const std::string& config_path) {
    mobo::ExperimentConfig config = mobo::ExperimentConfig::load(config_path);
    if (const char* seed_override = std::getenv("MOBO_SEED_OVERRIDE")) {
        config.seed = std::strtoull(seed_override, nullptr, 10);
    }
    const mobo::ExperimentState state = mobo::run(config);
    std::cerr << "run complete: " << state.records.size() << " records -> "
              << config.output_path << "\n";
    return kOk;
}

int cmd_resume(const std::string& log_path) {
    const mobo::ExperimentState state = mobo::resume(log_path);
    std::cerr << "resume complete: " << state.records.size() << "/" << state.total_records()
              << " records in " << log_path << "\n";
    return kOk;
}

int cmd_regret(const std::vector<std::string>& log_paths, const std::string& weights_json,
               int mc_count, const std::string& out_csv) {
    if (log_paths.empty()) {
        throw mobo::ConfigError("regret: need at least one log file");
    }
    std::vector<mobo::ExperimentState> states;
    for (const auto& path : log_paths) {
        states.push_back(mobo::read_log(path));
    }
    const std::string reference_hash = [&] {
        auto canonical = states.front().config;
        canonical.seed = 0;
        canonical.output_path.clear();
        return canonical.hash();
    }();
    for (const auto& state : states) {
        auto canonical = state.config;
        canonical.seed = 0;
        canonical.output_path.clear();
        if (canonical.hash() != reference_hash) {
            throw mobo::ConfigError("regret: logs differ in more than seed/output_path");
        }
        if (!state.complete()) {
            throw mobo::ConfigError("regret: incomplete log (resume it first)");
        }
    }

    const mobo::ObjectiveSet objective = states.front().config.objective.build();
    if (!objective.supports_oracle) {
        std::cerr << "error: regret needs the true objective; subprocess logs are unsupported\n";
        return kUnsupportedExit;
    }
    mobo::WeightDistribution dist = weights_json.empty()
                                        ? states.front().config.weight_dist
                                        : mobo::weight_dist_from_json(
                                              nlohmann::json::parse(weights_json));

    const mobo::ObjectiveNormalizer normalizer = mobo::ObjectiveNormalizer::for_objective(objective);
    const mobo::ObjectiveProbe probe = mobo::ObjectiveProbe::build(objective);
    std::vector<mobo::RegretReport> reports;
    for (const auto& state : states) {
        mobo::RngStream proxy_rng(0x1234abcdu, "sr-proxy");
        reports.push_back(
            mobo::evaluate_log(state, objective, normalizer, probe, dist, mc_count, proxy_rng));
    }
    mobo::write_regret_csv(mobo::bayes_regret_estimate(reports), out_csv);
    std::cerr << "regret CSV written to " << out_csv << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-objective Bayesian optimization with random scalarizations"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Run one experiment from a JSON config");
    run_cmd->add_option("config", config_path, "Path to the experiment config")->required();

    std::string resume_path;
    auto* resume_cmd = app.add_subcommand("resume", "Continue an interrupted experiment log");
    resume_cmd->add_option("log", resume_path, "Path to the JSON-lines log")->required();

    std::vector<std::string> regret_logs;
    std::string weights_json;
    int mc_count = 1000;
    std::string out_csv;
    auto* regret_cmd = app.add_subcommand("regret", "Compute regret metrics from finished logs");
    regret_cmd->add_option("logs", regret_logs, "Completed log files (same config, distinct seeds)")
        ->required();
    regret_cmd->add_option("--weights", weights_json,
                           "Weight distribution JSON for the proxy (default: the config's)");
    regret_cmd->add_option("--mc", mc_count, "Monte-Carlo weight draws for the proxy");
    regret_cmd->add_option("--out", out_csv, "Output CSV path")->required();

    std::string suite;
    std::string bench_out;
    int jobs = 1;
    int budget = 0;
    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite with baselines");
    bench_cmd->add_option("suite", suite, "Suite name: circle, branin_currin, rand6x6")->required();
    bench_cmd->add_option("--out", bench_out, "Output directory")->required();
    bench_cmd->add_option("--jobs", jobs, "Concurrent runs");
    bench_cmd->add_option("--budget", budget, "Override the suite's evaluation budget T");

    std::string plot_bench_dir;
    std::string plot_out;
    auto* plot_cmd = app.add_subcommand("plotdata", "Emit plot-ready CSVs from a bench directory");
    plot_cmd->add_option("dir", plot_bench_dir, "Completed bench directory")->required();
    plot_cmd->add_option("--out", plot_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(config_path);
        if (resume_cmd->parsed()) return cmd_resume(resume_path);
        if (regret_cmd->parsed()) return cmd_regret(regret_logs, weights_json, mc_count, out_csv);
        if (bench_cmd->parsed()) {
            mobo::BenchOptions options;
            options.jobs = jobs;
            options.budget_override = budget;
            mobo::run_bench(suite, bench_out, options);
            return kOk;
        }
        if (plot_cmd->parsed()) {
            mobo::write_plot_data(plot_bench_dir, plot_out);
            return kOk;
        }
    } catch (const mobo::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigErrorExit;
    } catch (const mobo::ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigErrorExit;
    } catch (const mobo::EvaluationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return suite.empty() && plot_bench_dir.empty() ? kRuntimeErrorExit
               : plot_cmd->parsed()                    ? kUnsupportedExit
                                                       : kRuntimeErrorExit;
    } catch (const mobo::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeErrorExit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeErrorExit;
    }
    return kOk;
}
