#include "mobo/acquisition.hpp"

#include <cmath>
#include <limits>

namespace mobo {

double beta_value(const BetaSchedule& schedule, int t) {
    if (t < 1) throw ContractError("beta_value: t must be >= 1");
    if (!(schedule.coefficient > 0.0)) {
        throw ContractError("beta_value: coefficient must be positive");
    }
    return schedule.coefficient * std::log(2.0 * t + 1.0);
}

double ucb_linear(const Eigen::VectorXd& lambda, const std::vector<PosteriorSummary>& posteriors,
                  double beta) {
    if (lambda.size() != static_cast<Eigen::Index>(posteriors.size())) {
        throw ContractError("ucb_linear: weight/posterior count mismatch");
    }
    if (beta < 0.0) throw ContractError("ucb_linear: beta must be nonnegative");
    double mean = 0.0;
    double var = 0.0;
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        mean += lambda[k] * posteriors[k].mean;
        var += lambda[k] * lambda[k] * posteriors[k].std * posteriors[k].std;
    }
    return mean + std::sqrt(beta) * std::sqrt(var);
}

double ucb_tchebychev(const Eigen::VectorXd& lambda,
                      const std::vector<PosteriorSummary>& posteriors, double beta,
                      const Eigen::VectorXd& reference) {
    if (lambda.size() != static_cast<Eigen::Index>(posteriors.size()) ||
        lambda.size() != reference.size()) {
        throw ContractError("ucb_tchebychev: weight/posterior/reference count mismatch");
    }
    if (beta < 0.0) throw ContractError("ucb_tchebychev: beta must be nonnegative");
    const double sqrt_beta = std::sqrt(beta);
    double acq = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        acq = std::min(acq, lambda[k] * (posteriors[k].mean + sqrt_beta * posteriors[k].std -
                                         reference[k]));
    }
    return acq;
}

double ts_acquisition(const Eigen::VectorXd& lambda, const std::vector<SpectralSample>& draws,
                      Scalarization kind, const Eigen::VectorXd& reference,
                      const Eigen::VectorXd& x) {
    if (lambda.size() != static_cast<Eigen::Index>(draws.size())) {
        throw ContractError("ts_acquisition: weight/draw count mismatch");
    }
    Eigen::VectorXd values(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        values[k] = draws[static_cast<size_t>(k)](x);
    }
    if (kind == Scalarization::kLinear) {
        return linear_scalarize(lambda, values);
    }
    return tchebychev_scalarize(lambda, values, reference);
}

} // namespace mobo
