#include "mobo/weights.hpp"

#include <cmath>
#include <iostream>

namespace mobo {

namespace {

// Clamp to the minimum weight and take the surplus out of the largest
// coordinate, so the sum stays exactly one after clamping.
Eigen::VectorXd clamp_to_simplex(Eigen::VectorXd w) {
    double deficit = 0.0;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        if (w[k] < kMinWeight) {
            deficit += kMinWeight - w[k];
            w[k] = kMinWeight;
        }
    }
    if (deficit > 0.0) {
        Eigen::Index argmax = 0;
        w.maxCoeff(&argmax);
        w[argmax] -= deficit;
    }
    return w;
}

WeightVector finish(Eigen::VectorXd raw) {
    double sum = raw.sum();
    if (!(sum > 0.0) || !raw.allFinite()) {
        throw ConfigError("weight sampler produced a degenerate draw (zero or non-finite mass)");
    }
    return WeightVector(clamp_to_simplex(raw / sum));
}

} // namespace

WeightDistribution WeightDistribution::bounding_box(std::vector<std::pair<double, double>> boxes) {
    if (boxes.empty()) {
        throw ContractError("bounding_box: need at least one interval");
    }
    bool clamped = false;
    bool all_zero = true;
    for (auto& [lo, hi] : boxes) {
        if (!(lo <= hi)) {
            throw ContractError("bounding_box: interval with lo > hi");
        }
        if (lo < 0.0) {
            lo = 0.0;
            hi = std::max(hi, 0.0);
            clamped = true;
        }
        if (hi > 0.0) all_zero = false;
    }
    if (clamped) {
        std::cerr << "warning: bounding box edges below zero clamped to zero "
                     "(boxes are interpreted in normalized objective units)\n";
    }
    if (all_zero) {
        throw ConfigError("bounding_box: all intervals are [0,0]; weight draw undefined");
    }
    return WeightDistribution(BoundingBoxDist{std::move(boxes)});
}

WeightDistribution WeightDistribution::flat_dirichlet(int num_objectives) {
    if (num_objectives < 1) throw ContractError("flat_dirichlet: K must be >= 1");
    return WeightDistribution(FlatDirichletDist{num_objectives});
}

WeightDistribution WeightDistribution::sphere_uniform(int num_objectives) {
    if (num_objectives < 1) throw ContractError("sphere_uniform: K must be >= 1");
    return WeightDistribution(SphereUniformDist{num_objectives});
}

WeightDistribution WeightDistribution::fixed(Eigen::VectorXd lambda) {
    WeightVector check{lambda}; // validates simplex membership
    return WeightDistribution(FixedWeightDist{std::move(lambda)});
}

WeightDistribution WeightDistribution::ratio_uniform(double lo, double hi, int index) {
    if (!(0.0 <= lo && lo < hi)) {
        throw ContractError("ratio_uniform: need 0 <= lo < hi");
    }
    if (index != 0 && index != 1) {
        throw ContractError("ratio_uniform: index must be 0 or 1");
    }
    return WeightDistribution(RatioUniformDist{lo, hi, index});
}

int WeightDistribution::dimension() const {
    return std::visit(
        [](const auto& d) -> int {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, BoundingBoxDist>) {
                return static_cast<int>(d.boxes.size());
            } else if constexpr (std::is_same_v<T, FlatDirichletDist>) {
                return d.num_objectives;
            } else if constexpr (std::is_same_v<T, SphereUniformDist>) {
                return d.num_objectives;
            } else if constexpr (std::is_same_v<T, FixedWeightDist>) {
                return static_cast<int>(d.lambda.size());
            } else {
                return 2;
            }
        },
        spec_);
}

WeightVector sample_weight(const WeightDistribution& dist, RngStream& rng) {
    return std::visit(
        [&rng](const auto& d) -> WeightVector {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, BoundingBoxDist>) {
                Eigen::VectorXd u(d.boxes.size());
                for (size_t k = 0; k < d.boxes.size(); ++k) {
                    u[static_cast<Eigen::Index>(k)] = rng.uniform(d.boxes[k].first, d.boxes[k].second);
                }
                return finish(std::move(u));
            } else if constexpr (std::is_same_v<T, FlatDirichletDist>) {
                // Dir(1,...,1) = normalized iid Exp(1).
                Eigen::VectorXd u(d.num_objectives);
                for (int k = 0; k < d.num_objectives; ++k) {
                    u[k] = -std::log(1.0 - rng.uniform01());
                }
                return finish(std::move(u));
            } else if constexpr (std::is_same_v<T, SphereUniformDist>) {
                Eigen::VectorXd u(d.num_objectives);
                for (int k = 0; k < d.num_objectives; ++k) {
                    u[k] = std::abs(rng.normal());
                }
                return finish(std::move(u));
            } else if constexpr (std::is_same_v<T, FixedWeightDist>) {
                return WeightVector(clamp_to_simplex(d.lambda));
            } else {
                double u = rng.uniform(d.lo, d.hi);
                Eigen::VectorXd w(2);
                w[d.index] = u / (u + 1.0);
                w[1 - d.index] = 1.0 / (u + 1.0);
                return finish(std::move(w));
            }
        },
        dist.spec());
}

WeightVector weights_for_scalarization(const WeightDistribution& dist, Scalarization kind,
                                       RngStream& rng) {
    WeightVector lambda = sample_weight(dist, rng);
    if (kind == Scalarization::kTchebychev) {
        return transform_weights(lambda);
    }
    return lambda;
}

} // namespace mobo
