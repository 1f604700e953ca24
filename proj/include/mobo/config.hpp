#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "mobo/acquisition.hpp"
#include "mobo/direct.hpp"
#include "mobo/objectives.hpp"
#include "mobo/weights.hpp"

namespace mobo {

// Candidate-selection method. kRandomSearch is the uniform-random baseline:
// weights are still sampled each step (for regret bookkeeping) but the next
// point is drawn uniformly instead of maximizing an acquisition.
enum class Method { kThompson, kUcb, kRandomSearch };

std::string to_string(Method method);
std::string to_string(Scalarization kind);

struct AcquisitionSpec {
    Method method = Method::kUcb;
    Scalarization scalarization = Scalarization::kLinear;
    BetaSchedule beta;  // UCB only
    // Tchebychev reference point in raw objective units; absent means the
    // per-objective running minimum of the observations.
    std::optional<Eigen::VectorXd> reference;
};

// Declarative objective description; build() materializes the black box.
struct ObjectiveSpec {
    std::string kind;  // circle_pair | branin_currin_4d | random_gp | subprocess
    int num_objectives = 0;         // random_gp / subprocess
    int dim = 0;                    // random_gp / subprocess
    std::uint64_t gp_seed = 0;      // random_gp
    std::string command;            // subprocess
    double timeout_seconds = 300.0; // subprocess
    std::optional<Eigen::VectorXd> noise_stds;  // overrides the default

    ObjectiveSet build() const;
};

struct ExperimentConfig {
    ObjectiveSpec objective;
    int budget = 100;  // T: loop evaluations after initialization
    int n_init = 10;
    AcquisitionSpec acquisition;
    WeightDistribution weight_dist = WeightDistribution::flat_dirichlet(2);
    std::uint64_t seed = 0;
    int refit_every = 10;
    std::string output_path;
    OptBudget acq_opt;
    int ts_features = 512;
    std::optional<KernelParams> init_params;  // surrogate params before the first refit

    void validate() const;
    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::string& path);

    // FNV-1a of the canonical serialization, as a 16-digit hex string.
    std::string hash() const;
};

nlohmann::json weight_dist_to_json(const WeightDistribution& dist);
WeightDistribution weight_dist_from_json(const nlohmann::json& j);

} // namespace mobo
