#pragma once

#include <string>
#include <vector>

#include "mobo/config.hpp"

namespace mobo {

// A named benchmark suite: one objective, one or more preference regions,
// the four proposed methods plus the uniform-random and fixed-center-weight
// baselines, five seeds each.
struct BenchOptions {
    int jobs = 1;
    int budget_override = 0;   // 0 keeps the suite default T
    int mc_weights = 1000;     // L for the simple-regret proxy
};

std::vector<std::string> bench_suite_names();

// Runs every (region, method, seed) job, writes logs under
// out_dir/<region>/<method>/seed<k>.jsonl, a manifest.json, and one
// combined regret CSV per region and method.
void run_bench(const std::string& suite_name, const std::string& out_dir,
               const BenchOptions& options = {});

// Emits plot-ready data from a completed bench directory: per-method
// scatter CSVs (t, y1..yK over all seeds) and regret-curve CSVs.
void write_plot_data(const std::string& bench_dir, const std::string& out_dir);

} // namespace mobo
