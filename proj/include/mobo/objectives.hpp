#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mobo/errors.hpp"
#include "mobo/rng.hpp"

namespace mobo {

// A vector-valued black box over [0,1]^d. All objectives follow the
// maximization convention; `evaluate` is the noiseless function,
// `observe` adds iid Gaussian noise per objective.
struct ObjectiveSet {
    std::string name;
    int num_objectives = 0;
    int dim = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> evaluate;
    Eigen::VectorXd noise_stds;
    std::optional<std::vector<std::pair<double, double>>> known_ranges;
    bool supports_oracle = true;  // false when the true function lives out of process

    Eigen::VectorXd observe(const Eigen::VectorXd& x, RngStream& noise_rng) const;
};

// f1 = x*y, f2 = y*sqrt(1-x^2) on [0,1]^2; the attainable front is the
// quarter circle at y = 1.
ObjectiveSet circle_pair();

// Negated Branin-4 and CurrinExp-4: each 4-d function is the average of
// its standard 2-d form over the coordinate pairs (x1,x2) and (x3,x4),
// with Branin negated so both objectives are maximized.
ObjectiveSet branin_currin_4d();

// Standard 2-d forms on the unit square (Branin's domain mapped from
// [-5,10]x[0,15]); exposed for tests and oracles.
double branin2(double x1, double x2);
double currin2(double x1, double x2);

// K fixed draws from an SE-kernel GP prior (bandwidth 0.2, scale 1),
// realized as spectral-feature expansions; deterministic given the seed.
ObjectiveSet random_gp_objectives(int num_objectives, int dim, std::uint64_t seed);

// External black box speaking the line protocol: one JSON object per line,
// request {"x":[...]} answered by {"y":[...]}. Evaluations are serialized;
// child exit, malformed output, or timeout raise EvaluationError.
ObjectiveSet subprocess_objective(const std::string& command, int num_objectives, int dim,
                                  double timeout_seconds = 300.0);

} // namespace mobo
