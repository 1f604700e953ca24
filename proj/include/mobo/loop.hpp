#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mobo/config.hpp"
#include "mobo/kernel_gp.hpp"

namespace mobo {

// One evaluation of the black box. Loop-phase records carry the sampled
// weights (post-transform for Tchebychev) and the acquisition value at the
// chosen point. wall_ms is a diagnostic and is never serialized: logs must
// be byte-identical across runs with the same seed.
struct EvaluationRecord {
    struct Refit {
        int objective_index = 0;
        KernelParams params;
        double log_marginal_likelihood = 0.0;
        bool degenerate = false;
    };

    int t = 0;                     // global 0-based record index
    std::string phase;             // "init" or "loop"
    Eigen::VectorXd x;
    Eigen::VectorXd y;             // raw noisy observations, one per objective
    std::optional<Eigen::VectorXd> lambda;
    std::optional<double> acq_value;
    std::vector<Refit> refits;     // hyperparameter refits performed after this evaluation
    std::map<std::string, std::uint64_t> rng_counts;  // stream positions after this record
    std::int64_t wall_ms = 0;
};

struct ExperimentState {
    ExperimentConfig config;
    std::string config_hash;
    std::vector<EvaluationRecord> records;
    std::vector<KernelParams> current_params;  // one per objective

    int total_records() const { return config.n_init + config.budget; }
    bool complete() const { return static_cast<int>(records.size()) >= total_records(); }
};

// Runs the experiment from scratch, writing the JSON-lines log at
// config.output_path plus the fit-report sidecar <output_path>.fits.jsonl.
ExperimentState run(const ExperimentConfig& config);

// Restores the state persisted at log_path and continues to the configured
// budget. A truncated trailing line is dropped with a warning; an edited
// config (hash mismatch) is refused. Completing an already-complete log is
// a no-op. The final log is byte-identical to an uninterrupted run.
ExperimentState resume(const std::string& log_path);

// Parses a log without continuing it (shared by resume, the regret tools
// and the CLI).
ExperimentState read_log(const std::string& log_path);

std::string fit_report_path(const std::string& log_path);

} // namespace mobo
