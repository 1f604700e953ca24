#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mobo/loop.hpp"
#include "mobo/objectives.hpp"
#include "mobo/weights.hpp"

namespace mobo {

// Per-objective affine maps onto [0,1]: declared ranges when the benchmark
// provides them, otherwise the min/max of a dense random probe (padded 1%).
struct ObjectiveNormalizer {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    static ObjectiveNormalizer for_objective(const ObjectiveSet& objective,
                                             int probe_points = 100000);

    double normalize(int k, double value) const { return (value - lo[k]) / (hi[k] - lo[k]); }
    Eigen::VectorXd normalize(const Eigen::VectorXd& values) const {
        return ((values - lo).array() / (hi - lo).array()).matrix();
    }
    // Affine image of a raw-unit reference point.
    Eigen::VectorXd normalize_reference(const Eigen::VectorXd& raw) const {
        return normalize(raw);
    }
};

// A reusable random probe of the true objective; shared by the normalizer
// and the per-weight oracle so neither pays for re-evaluation.
struct ObjectiveProbe {
    Eigen::MatrixXd points;  // n x d
    Eigen::MatrixXd values;  // n x K, raw units

    static ObjectiveProbe build(const ObjectiveSet& objective, int count = 100000);
};

// max_x g(lambda, normalized f(x)) via DIRECT (10^4 evaluations) cross-
// validated against the probe; extra candidate points (e.g. a log's own
// evaluations) can be folded in so measured regret is never negative.
double oracle_max(const ObjectiveSet& objective, const ObjectiveNormalizer& normalizer,
                  const ObjectiveProbe& probe, const Eigen::VectorXd& lambda, Scalarization kind,
                  const Eigen::VectorXd& reference_normalized,
                  const std::vector<Eigen::VectorXd>* extra_candidates = nullptr);

struct RegretReport {
    std::vector<double> instantaneous;      // r_t per loop step, clamped at 0
    std::vector<double> cumulative_curve;   // R_t
    std::vector<double> sr_proxy;           // -E_lambda max_{s<=t} g per t
    int mc_weights = 0;                     // L used for the proxy
};

// Eq.-style cumulative regret over the loop records: r_t is the gap between
// the per-weight oracle and the scalarized true value at x_t, computed in
// normalized objective space. reference_raw (if given) is mapped through
// the normalizer; by default the reference is the normalized-space origin.
RegretReport cumulative_regret(const ExperimentState& state, const ObjectiveSet& objective,
                               const ObjectiveNormalizer& normalizer, const ObjectiveProbe& probe,
                               std::optional<Eigen::VectorXd> reference_raw = std::nullopt);

// -1/L sum_j max_{t<=T} g(lambda_j, f(x_t)) with L fixed weight draws
// (transformed for the Tchebychev kind), one curve value per T.
std::vector<double> simple_regret_proxy(const ExperimentState& state,
                                        const ObjectiveSet& objective,
                                        const ObjectiveNormalizer& normalizer,
                                        const WeightDistribution& weight_dist, int mc_count,
                                        Scalarization kind, const Eigen::VectorXd& reference_normalized,
                                        RngStream& rng);

// Fills both metric families for one log.
RegretReport evaluate_log(const ExperimentState& state, const ObjectiveSet& objective,
                          const ObjectiveNormalizer& normalizer, const ObjectiveProbe& probe,
                          const WeightDistribution& weight_dist, int mc_count, RngStream& rng);

struct BayesRegretSummary {
    std::vector<double> sr_proxy_mean, sr_proxy_std;
    std::vector<double> cum_regret_mean, cum_regret_std;
    std::vector<double> cum_regret_over_t;
};

// Seed-averaged metrics; refuses reports of different lengths.
BayesRegretSummary bayes_regret_estimate(const std::vector<RegretReport>& reports);

// CSV schema: T, sr_proxy_mean, sr_proxy_std, cum_regret_mean,
// cum_regret_std, cum_regret_over_T; one row per T.
void write_regret_csv(const BayesRegretSummary& summary, const std::string& path);

} // namespace mobo
