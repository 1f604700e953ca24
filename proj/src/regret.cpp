#include "mobo/regret.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "mobo/direct.hpp"

namespace mobo {

namespace {

constexpr std::uint64_t kProbeSeed = 0x6d6f626f70726f62ull;
constexpr double kRegretSlack = 1e-9;

double scalarized(const Eigen::VectorXd& lambda, const Eigen::VectorXd& values, Scalarization kind,
                  const Eigen::VectorXd& reference) {
    return kind == Scalarization::kLinear ? linear_scalarize(lambda, values)
                                          : tchebychev_scalarize(lambda, values, reference);
}

// Best scalarized value over a matrix of normalized objective rows.
double best_over_rows(const Eigen::MatrixXd& rows, const Eigen::VectorXd& lambda,
                      Scalarization kind, const Eigen::VectorXd& reference) {
    if (rows.rows() == 0) return -std::numeric_limits<double>::infinity();
    if (kind == Scalarization::kLinear) {
        return (rows * lambda).maxCoeff();
    }
    return ((rows.rowwise() - reference.transpose()) * lambda.asDiagonal())
        .rowwise()
        .minCoeff()
        .maxCoeff();
}

std::string format_double(double value) {
    char buffer[32];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

} // namespace

ObjectiveProbe ObjectiveProbe::build(const ObjectiveSet& objective, int count) {
    if (!objective.supports_oracle) {
        throw ContractError("ObjectiveProbe: true function unavailable (subprocess objective)");
    }
    RngStream rng(kProbeSeed, "oracle-probe");
    ObjectiveProbe probe;
    probe.points.resize(count, objective.dim);
    probe.values.resize(count, objective.num_objectives);
    Eigen::VectorXd x(objective.dim);
    for (int i = 0; i < count; ++i) {
        for (int j = 0; j < objective.dim; ++j) x[j] = rng.uniform01();
        probe.points.row(i) = x.transpose();
        probe.values.row(i) = objective.evaluate(x).transpose();
    }
    return probe;
}

ObjectiveNormalizer ObjectiveNormalizer::for_objective(const ObjectiveSet& objective,
                                                       int probe_points) {
    ObjectiveNormalizer normalizer;
    normalizer.lo.resize(objective.num_objectives);
    normalizer.hi.resize(objective.num_objectives);
    if (objective.known_ranges) {
        for (int k = 0; k < objective.num_objectives; ++k) {
            const auto& [lo, hi] = (*objective.known_ranges)[static_cast<size_t>(k)];
            if (!(hi > lo)) throw ContractError("ObjectiveNormalizer: declared range with hi <= lo");
            normalizer.lo[k] = lo;
            normalizer.hi[k] = hi;
        }
        return normalizer;
    }
    const ObjectiveProbe probe = ObjectiveProbe::build(objective, probe_points);
    for (int k = 0; k < objective.num_objectives; ++k) {
        const double lo = probe.values.col(k).minCoeff();
        const double hi = probe.values.col(k).maxCoeff();
        const double pad = 0.01 * std::max(hi - lo, 1e-12);
        normalizer.lo[k] = lo - pad;
        normalizer.hi[k] = hi + pad;
    }
    return normalizer;
}

namespace {

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& raw, const ObjectiveNormalizer& normalizer) {
    return ((raw.rowwise() - normalizer.lo.transpose()).array().rowwise() /
            (normalizer.hi - normalizer.lo).transpose().array())
        .matrix();
}

} // namespace

double oracle_max(const ObjectiveSet& objective, const ObjectiveNormalizer& normalizer,
                  const ObjectiveProbe& probe, const Eigen::VectorXd& lambda, Scalarization kind,
                  const Eigen::VectorXd& reference_normalized,
                  const std::vector<Eigen::VectorXd>* extra_candidates) {
    if (!objective.supports_oracle) {
        throw ContractError("oracle_max: true function unavailable (subprocess objective)");
    }
    const Eigen::MatrixXd normalized_probe = normalize_rows(probe.values, normalizer);
    double best = best_over_rows(normalized_probe, lambda, kind, reference_normalized);
    if (extra_candidates) {
        for (const auto& x : *extra_candidates) {
            best = std::max(best, scalarized(lambda, normalizer.normalize(objective.evaluate(x)),
                                             kind, reference_normalized));
        }
    }
    OptBudget budget;
    budget.max_evals = 10000;
    budget.local_refine_evals = 500;
    const OptResult direct = maximize(
        [&](const Eigen::VectorXd& x) {
            return scalarized(lambda, normalizer.normalize(objective.evaluate(x)), kind,
                              reference_normalized);
        },
        objective.dim, budget);
    return std::max(best, direct.value_best);
}

RegretReport cumulative_regret(const ExperimentState& state, const ObjectiveSet& objective,
                               const ObjectiveNormalizer& normalizer, const ObjectiveProbe& probe,
                               std::optional<Eigen::VectorXd> reference_raw) {
    const Eigen::VectorXd reference =
        reference_raw ? normalizer.normalize_reference(*reference_raw)
                      : Eigen::VectorXd::Zero(objective.num_objectives).eval();
    const Scalarization kind = state.config.acquisition.scalarization;

    // Normalized probe and the log's own (noiseless) values, computed once.
    const Eigen::MatrixXd normalized_probe = normalize_rows(probe.values, normalizer);
    std::vector<const EvaluationRecord*> loop_records;
    for (const auto& record : state.records) {
        if (record.phase == "loop") loop_records.push_back(&record);
    }
    Eigen::MatrixXd own_values(loop_records.size(), objective.num_objectives);
    for (size_t i = 0; i < loop_records.size(); ++i) {
        own_values.row(static_cast<Eigen::Index>(i)) =
            normalizer.normalize(objective.evaluate(loop_records[i]->x)).transpose();
    }

    OptBudget budget;
    budget.max_evals = 10000;
    budget.local_refine_evals = 500;

    RegretReport report;
    double running = 0.0;
    for (size_t i = 0; i < loop_records.size(); ++i) {
        const EvaluationRecord& record = *loop_records[i];
        if (!record.lambda) {
            throw ConfigError("cumulative_regret: loop record without lambda (malformed log)");
        }
        const Eigen::VectorXd& lambda = *record.lambda;
        double oracle = best_over_rows(normalized_probe, lambda, kind, reference);
        oracle = std::max(oracle, best_over_rows(own_values, lambda, kind, reference));
        const OptResult direct = maximize(
            [&](const Eigen::VectorXd& x) {
                return scalarized(lambda, normalizer.normalize(objective.evaluate(x)), kind,
                                  reference);
            },
            objective.dim, budget);
        oracle = std::max(oracle, direct.value_best);

        const double achieved = scalarized(
            lambda, own_values.row(static_cast<Eigen::Index>(i)).transpose(), kind, reference);
        double gap = oracle - achieved;
        if (gap < 0.0) {
            if (gap < -kRegretSlack) {
                throw NumericError("cumulative_regret: negative regret beyond slack: " +
                                   std::to_string(gap));
            }
            gap = 0.0;
        }
        report.instantaneous.push_back(gap);
        running += gap;
        report.cumulative_curve.push_back(running);
    }
    return report;
}

std::vector<double> simple_regret_proxy(const ExperimentState& state,
                                        const ObjectiveSet& objective,
                                        const ObjectiveNormalizer& normalizer,
                                        const WeightDistribution& weight_dist, int mc_count,
                                        Scalarization kind,
                                        const Eigen::VectorXd& reference_normalized,
                                        RngStream& rng) {
    if (mc_count < 1) throw ContractError("simple_regret_proxy: L must be >= 1");

    std::vector<Eigen::VectorXd> lambdas;
    lambdas.reserve(static_cast<size_t>(mc_count));
    for (int j = 0; j < mc_count; ++j) {
        lambdas.push_back(weights_for_scalarization(weight_dist, kind, rng).values());
    }

    std::vector<double> best(static_cast<size_t>(mc_count),
                             -std::numeric_limits<double>::infinity());
    std::vector<double> curve;
    for (const auto& record : state.records) {
        if (record.phase != "loop") continue;
        const Eigen::VectorXd values = normalizer.normalize(objective.evaluate(record.x));
        double sum = 0.0;
        for (int j = 0; j < mc_count; ++j) {
            double& incumbent = best[static_cast<size_t>(j)];
            incumbent = std::max(incumbent, scalarized(lambdas[static_cast<size_t>(j)], values,
                                                       kind, reference_normalized));
            sum += incumbent;
        }
        curve.push_back(-sum / mc_count);
    }
    return curve;
}

RegretReport evaluate_log(const ExperimentState& state, const ObjectiveSet& objective,
                          const ObjectiveNormalizer& normalizer, const ObjectiveProbe& probe,
                          const WeightDistribution& weight_dist, int mc_count, RngStream& rng) {
    RegretReport report = cumulative_regret(state, objective, normalizer, probe);
    const Eigen::VectorXd reference = Eigen::VectorXd::Zero(objective.num_objectives);
    report.sr_proxy = simple_regret_proxy(state, objective, normalizer, weight_dist, mc_count,
                                          state.config.acquisition.scalarization, reference, rng);
    report.mc_weights = mc_count;
    return report;
}

BayesRegretSummary bayes_regret_estimate(const std::vector<RegretReport>& reports) {
    if (reports.size() < 1) {
        throw ContractError("bayes_regret_estimate: need at least one report");
    }
    const size_t horizon = reports.front().cumulative_curve.size();
    for (const auto& report : reports) {
        if (report.cumulative_curve.size() != horizon || report.sr_proxy.size() != horizon) {
            throw ConfigError("bayes_regret_estimate: reports have mismatched horizons");
        }
    }

    BayesRegretSummary summary;
    auto mean_std = [&](auto getter, std::vector<double>& means, std::vector<double>& stds) {
        for (size_t t = 0; t < horizon; ++t) {
            double mean = 0.0;
            for (const auto& report : reports) mean += getter(report, t);
            mean /= static_cast<double>(reports.size());
            double var = 0.0;
            for (const auto& report : reports) {
                const double delta = getter(report, t) - mean;
                var += delta * delta;
            }
            var /= static_cast<double>(reports.size());
            means.push_back(mean);
            stds.push_back(std::sqrt(var));
        }
    };
    mean_std([](const RegretReport& r, size_t t) { return r.sr_proxy[t]; }, summary.sr_proxy_mean,
             summary.sr_proxy_std);
    mean_std([](const RegretReport& r, size_t t) { return r.cumulative_curve[t]; },
             summary.cum_regret_mean, summary.cum_regret_std);
    for (size_t t = 0; t < horizon; ++t) {
        summary.cum_regret_over_t.push_back(summary.cum_regret_mean[t] /
                                            static_cast<double>(t + 1));
    }
    return summary;
}

void write_regret_csv(const BayesRegretSummary& summary, const std::string& path) {
    if (auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) {
        std::filesystem::create_directories(parent);
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot open CSV for writing: " + path);
    out << "T,sr_proxy_mean,sr_proxy_std,cum_regret_mean,cum_regret_std,cum_regret_over_T\n";
    for (size_t t = 0; t < summary.sr_proxy_mean.size(); ++t) {
        out << (t + 1) << ',' << format_double(summary.sr_proxy_mean[t]) << ','
            << format_double(summary.sr_proxy_std[t]) << ','
            << format_double(summary.cum_regret_mean[t]) << ','
            << format_double(summary.cum_regret_std[t]) << ','
            << format_double(summary.cum_regret_over_t[t]) << '\n';
    }
}

} // namespace mobo
