#pragma once

#include <Eigen/Dense>

#include "mobo/errors.hpp"

namespace mobo {

enum class Scalarization { kLinear, kTchebychev };

// A preference point on the (K-1)-simplex: nonnegative entries summing to
// one. Carrier type for sampled weights; construction validates.
class WeightVector {
public:
    static constexpr double kSumTolerance = 1e-9;

    explicit WeightVector(Eigen::VectorXd weights);

    const Eigen::VectorXd& values() const { return weights_; }
    int size() const { return static_cast<int>(weights_.size()); }
    double operator[](int k) const { return weights_[k]; }

private:
    Eigen::VectorXd weights_;
};

// Weighted sum of objective values. Weights need not be normalized here;
// the simplex invariant lives on WeightVector.
double linear_scalarize(const Eigen::VectorXd& lambda, const Eigen::VectorXd& values);

// min_k lambda_k * (f_k - reference_k). Maximization form: the min picks
// the worst weighted excess over the reference point.
double tchebychev_scalarize(const Eigen::VectorXd& lambda, const Eigen::VectorXd& values,
                            const Eigen::VectorXd& reference);

inline double linear_scalarize(const WeightVector& lambda, const Eigen::VectorXd& values) {
    return linear_scalarize(lambda.values(), values);
}
inline double tchebychev_scalarize(const WeightVector& lambda, const Eigen::VectorXd& values,
                                   const Eigen::VectorXd& reference) {
    return tchebychev_scalarize(lambda.values(), values, reference);
}

// Pointwise reciprocal followed by L1 normalization; an involution on the
// open simplex. Undefined (throws) when any weight is zero or negative.
WeightVector transform_weights(const WeightVector& lambda);

} // namespace mobo
