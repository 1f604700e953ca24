#pragma once

#include <Eigen/Dense>
#include <functional>

#include "mobo/errors.hpp"

namespace mobo {

struct OptBudget {
    int max_evals = 2000;          // total objective evaluations, refinement included
    int max_rects = 200000;        // safety cap on live rectangles
    int local_refine_evals = 200;  // reserved for the golden-section polish

    void validate() const;
};

struct OptResult {
    Eigen::VectorXd x_best;
    double value_best = 0.0;
    int evals_used = 0;
};

// Deterministic global maximization over [0,1]^d.
//
// Dividing-rectangles search: potentially-optimal rectangles are selected
// with the convex-hull criterion on (size, value) pairs (epsilon 1e-4
// relative), then trisected along their longest side, ties broken by the
// lowest dimension index. The tail of the budget (at most
// local_refine_evals, never more than half of max_evals) goes to a
// coordinate-wise golden-section polish inside the incumbent's final
// rectangle. The result is the best point over every evaluation made.
OptResult maximize(const std::function<double(const Eigen::VectorXd&)>& objective, int dim,
                   const OptBudget& budget = {});

} // namespace mobo
