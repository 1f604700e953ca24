#pragma once

#include <vector>

#include "mobo/kernel_gp.hpp"
#include "mobo/scalarize.hpp"

namespace mobo {

// beta_t = coefficient * ln(2t + 1), t >= 1 and 1-indexed over
// post-initialization iterations.
struct BetaSchedule {
    double coefficient = 0.125;
};

double beta_value(const BetaSchedule& schedule, int t);

// sum_k lambda_k mu_k + sqrt(beta) * sqrt(sum_k lambda_k^2 sigma_k^2)
double ucb_linear(const Eigen::VectorXd& lambda, const std::vector<PosteriorSummary>& posteriors,
                  double beta);

// min_k lambda_k (mu_k + sqrt(beta) sigma_k - reference_k)
double ucb_tchebychev(const Eigen::VectorXd& lambda,
                      const std::vector<PosteriorSummary>& posteriors, double beta,
                      const Eigen::VectorXd& reference);

// Scalarization of one fixed posterior draw per objective, evaluated at x.
// The draws are held fixed across the whole inner maximization.
double ts_acquisition(const Eigen::VectorXd& lambda, const std::vector<SpectralSample>& draws,
                      Scalarization kind, const Eigen::VectorXd& reference,
                      const Eigen::VectorXd& x);

} // namespace mobo
