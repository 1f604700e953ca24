#include "mobo/scalarize.hpp"

#include <cmath>

namespace mobo {

WeightVector::WeightVector(Eigen::VectorXd weights) : weights_(std::move(weights)) {
    if (weights_.size() < 1) {
        throw ContractError("WeightVector: need at least one weight");
    }
    if (!weights_.allFinite()) {
        throw ContractError("WeightVector: weights must be finite");
    }
    if ((weights_.array() < 0.0).any()) {
        throw ContractError("WeightVector: weights must be nonnegative");
    }
    double sum = weights_.sum();
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw ContractError("WeightVector: weights must sum to one, got " + std::to_string(sum));
    }
}

double linear_scalarize(const Eigen::VectorXd& lambda, const Eigen::VectorXd& values) {
    if (lambda.size() != values.size()) {
        throw ContractError("linear_scalarize: weight/value length mismatch");
    }
    return lambda.dot(values);
}

double tchebychev_scalarize(const Eigen::VectorXd& lambda, const Eigen::VectorXd& values,
                            const Eigen::VectorXd& reference) {
    if (lambda.size() != values.size() || lambda.size() != reference.size()) {
        throw ContractError("tchebychev_scalarize: weight/value/reference length mismatch");
    }
    return (lambda.array() * (values - reference).array()).minCoeff();
}

WeightVector transform_weights(const WeightVector& lambda) {
    const Eigen::VectorXd& w = lambda.values();
    if ((w.array() <= 0.0).any()) {
        throw ContractError("transform_weights: undefined for zero weights");
    }
    Eigen::VectorXd inv = w.array().inverse();
    return WeightVector(inv / inv.sum());
}

} // namespace mobo
