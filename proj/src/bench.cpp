#include "mobo/bench.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "mobo/regret.hpp"

namespace mobo {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kBenchSeeds[] = {101, 102, 103, 104, 105};
constexpr std::uint64_t kProxySeed = 0x6d6f626f62656e63ull;

struct Region {
    std::string name;
    WeightDistribution dist;
    Eigen::VectorXd center_lambda;  // for the fixed-weight baseline
};

struct Suite {
    std::string name;
    ObjectiveSpec objective;
    int default_budget = 100;
    std::vector<Region> regions;
};

Eigen::VectorXd normalized_center(const std::vector<std::pair<double, double>>& boxes) {
    Eigen::VectorXd center(boxes.size());
    for (size_t k = 0; k < boxes.size(); ++k) {
        center[static_cast<Eigen::Index>(k)] = 0.5 * (boxes[k].first + boxes[k].second);
    }
    return (center / center.sum()).eval();
}

Suite make_suite(const std::string& name) {
    Suite suite;
    suite.name = name;
    if (name == "circle") {
        suite.objective.kind = "circle_pair";
        suite.default_budget = 100;
        // The steering law from the quarter-circle example: lambda_1 small,
        // so the high-f2 end of the front is preferred.
        Eigen::VectorXd center(2);
        center << 0.15 / 1.15, 1.0 / 1.15;
        suite.regions.push_back({"pref", WeightDistribution::ratio_uniform(0.0, 0.3, 0), center});
        return suite;
    }
    if (name == "branin_currin") {
        suite.objective.kind = "branin_currin_4d";
        suite.default_budget = 150;
        // Boxes in normalized objective units, placed on the empirical front:
        // "high" hugs the high-f2 end, "mid" the middle, "full" is the flat
        // sphere distribution.
        std::vector<std::pair<double, double>> high{{0.70, 0.78}, {0.95, 1.00}};
        std::vector<std::pair<double, double>> mid{{0.86, 0.94}, {0.86, 0.94}};
        suite.regions.push_back(
            {"high", WeightDistribution::bounding_box(high), normalized_center(high)});
        suite.regions.push_back(
            {"mid", WeightDistribution::bounding_box(mid), normalized_center(mid)});
        Eigen::VectorXd flat_center = Eigen::VectorXd::Constant(2, 0.5);
        suite.regions.push_back({"full", WeightDistribution::sphere_uniform(2), flat_center});
        return suite;
    }
    if (name == "rand6x6") {
        suite.objective.kind = "random_gp";
        suite.objective.num_objectives = 6;
        suite.objective.dim = 6;
        suite.objective.gp_seed = 66;
        suite.default_budget = 100;
        std::vector<std::pair<double, double>> mid(6, {2.0 / 3.0, 1.0});
        suite.regions.push_back(
            {"mid", WeightDistribution::bounding_box(mid), normalized_center(mid)});
        return suite;
    }
    throw ConfigError("unknown suite \"" + name + "\"; valid suites: circle, branin_currin, rand6x6");
}

struct MethodSpec {
    std::string name;
    Method method;
    Scalarization scalarization;
    bool fixed_center = false;
};

const std::vector<MethodSpec>& method_specs() {
    static const std::vector<MethodSpec> specs = {
        {"ts-linear", Method::kThompson, Scalarization::kLinear, false},
        {"ts-tch", Method::kThompson, Scalarization::kTchebychev, false},
        {"ucb-linear", Method::kUcb, Scalarization::kLinear, false},
        {"ucb-tch", Method::kUcb, Scalarization::kTchebychev, false},
        {"uniform-random", Method::kRandomSearch, Scalarization::kLinear, false},
        {"fixed-center-weight", Method::kUcb, Scalarization::kLinear, true},
    };
    return specs;
}

ExperimentConfig job_config(const Suite& suite, const Region& region, const MethodSpec& method,
                            std::uint64_t seed, int budget, const std::string& out_dir) {
    ExperimentConfig config;
    config.objective = suite.objective;
    config.budget = budget;
    config.n_init = 10;
    config.acquisition.method = method.method;
    config.acquisition.scalarization = method.scalarization;
    config.weight_dist = method.fixed_center ? WeightDistribution::fixed(region.center_lambda)
                                             : region.dist;
    config.seed = seed;
    config.output_path = (fs::path(out_dir) / region.name / method.name /
                          ("seed" + std::to_string(seed) + ".jsonl"))
                             .string();
    return config;
}

// Run jobs through a fixed-width async pool; each job owns its files.
void run_jobs(std::vector<ExperimentConfig> configs, int jobs) {
    const size_t width = static_cast<size_t>(std::max(1, jobs));
    for (size_t base = 0; base < configs.size(); base += width) {
        std::vector<std::future<void>> batch;
        for (size_t i = base; i < std::min(configs.size(), base + width); ++i) {
            batch.push_back(std::async(std::launch::async, [&configs, i] { run(configs[i]); }));
        }
        for (auto& f : batch) f.get();
    }
}

std::string format_double(double value) {
    char buffer[32];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

} // namespace

std::vector<std::string> bench_suite_names() { return {"circle", "branin_currin", "rand6x6"}; }

void run_bench(const std::string& suite_name, const std::string& out_dir,
               const BenchOptions& options) {
    const Suite suite = make_suite(suite_name);
    const int budget = options.budget_override > 0 ? options.budget_override : suite.default_budget;

    const ObjectiveSet objective = suite.objective.build();
    const ObjectiveNormalizer normalizer = ObjectiveNormalizer::for_objective(objective);

    fs::create_directories(out_dir);

    std::vector<ExperimentConfig> configs;
    for (const auto& region : suite.regions) {
        for (const auto& method : method_specs()) {
            for (std::uint64_t seed : kBenchSeeds) {
                configs.push_back(job_config(suite, region, method, seed, budget, out_dir));
            }
        }
    }

    json manifest;
    manifest["suite"] = suite.name;
    manifest["T"] = budget;
    manifest["n_init"] = 10;
    manifest["seeds"] = std::vector<std::uint64_t>(std::begin(kBenchSeeds), std::end(kBenchSeeds));
    manifest["mc_weights"] = options.mc_weights;
    manifest["objective"] = configs.front().to_json()["objective"];
    manifest["normalization"] = {{"lo", std::vector<double>(normalizer.lo.begin(), normalizer.lo.end())},
                                 {"hi", std::vector<double>(normalizer.hi.begin(), normalizer.hi.end())}};
    json regions = json::array();
    for (const auto& region : suite.regions) {
        json r;
        r["name"] = region.name;
        r["weight_dist"] = weight_dist_to_json(region.dist);
        r["center_lambda"] =
            std::vector<double>(region.center_lambda.begin(), region.center_lambda.end());
        regions.push_back(r);
    }
    manifest["regions"] = regions;
    json methods = json::array();
    for (const auto& method : method_specs()) methods.push_back(method.name);
    manifest["methods"] = methods;
    {
        std::ofstream out(fs::path(out_dir) / "manifest.json");
        out << manifest.dump(2) << "\n";
    }

    std::cerr << "bench " << suite.name << ": " << configs.size() << " runs (T=" << budget
              << ", jobs=" << options.jobs << ")\n";
    run_jobs(configs, options.jobs);

    // Seed-combined regret CSV per region and method.
    const ObjectiveProbe probe = ObjectiveProbe::build(objective);
    for (const auto& region : suite.regions) {
        for (const auto& method : method_specs()) {
            std::vector<std::future<RegretReport>> futures;
            std::vector<RegretReport> reports;
            for (std::uint64_t seed : kBenchSeeds) {
                const std::string path = (fs::path(out_dir) / region.name / method.name /
                                          ("seed" + std::to_string(seed) + ".jsonl"))
                                             .string();
                futures.push_back(std::async(
                    std::launch::async,
                    [&, path]() {
                        const ExperimentState state = read_log(path);
                        RngStream proxy_rng(kProxySeed, "sr-proxy");
                        return evaluate_log(state, objective, normalizer, probe, region.dist,
                                            options.mc_weights, proxy_rng);
                    }));
                if (static_cast<int>(futures.size()) >= std::max(1, options.jobs)) {
                    for (auto& f : futures) reports.push_back(f.get());
                    futures.clear();
                }
            }
            for (auto& f : futures) reports.push_back(f.get());
            const BayesRegretSummary summary = bayes_regret_estimate(reports);
            write_regret_csv(summary,
                             (fs::path(out_dir) / region.name / (method.name + "_regret.csv")).string());
        }
    }
}

void write_plot_data(const std::string& bench_dir, const std::string& out_dir) {
    const fs::path manifest_path = fs::path(bench_dir) / "manifest.json";
    std::ifstream manifest_in(manifest_path);
    if (!manifest_in) {
        throw EvaluationError("plotdata: missing manifest at " + manifest_path.string());
    }
    json manifest;
    manifest_in >> manifest;

    fs::create_directories(out_dir);
    const std::vector<std::uint64_t> seeds = manifest.at("seeds").get<std::vector<std::uint64_t>>();

    for (const auto& region : manifest.at("regions")) {
        const std::string region_name = region.at("name").get<std::string>();
        for (const auto& method_json : manifest.at("methods")) {
            const std::string method = method_json.get<std::string>();
            bool any = false;
            std::ofstream scatter;
            for (std::uint64_t seed : seeds) {
                const fs::path log_path = fs::path(bench_dir) / region_name / method /
                                          ("seed" + std::to_string(seed) + ".jsonl");
                if (!fs::exists(log_path)) {
                    throw EvaluationError("plotdata: missing log " + log_path.string());
                }
                const ExperimentState state = read_log(log_path.string());
                if (state.records.empty()) {
                    throw EvaluationError("plotdata: empty log " + log_path.string());
                }
                if (!any) {
                    scatter.open(fs::path(out_dir) /
                                 (region_name + "_" + method + "_scatter.csv"));
                    scatter << "t";
                    for (Eigen::Index k = 0; k < state.records.front().y.size(); ++k) {
                        scatter << ",y" << (k + 1);
                    }
                    scatter << "\n";
                    any = true;
                }
                for (const auto& record : state.records) {
                    scatter << record.t;
                    for (Eigen::Index k = 0; k < record.y.size(); ++k) {
                        scatter << ',' << format_double(record.y[k]);
                    }
                    scatter << "\n";
                }
            }
            // Regret curves are already combined per method by the bench run;
            // copy them beside the scatter files when present.
            const fs::path regret_src =
                fs::path(bench_dir) / region_name / (method + "_regret.csv");
            if (fs::exists(regret_src)) {
                fs::copy_file(regret_src,
                              fs::path(out_dir) / (region_name + "_" + method + "_regret.csv"),
                              fs::copy_options::overwrite_existing);
            }
        }
    }
}

} // namespace mobo
