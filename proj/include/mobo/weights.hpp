#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "mobo/rng.hpp"
#include "mobo/scalarize.hpp"

namespace mobo {

// Sampled weights are clamped so every coordinate stays at least this large;
// keeps the reciprocal transform defined for every draw.
inline constexpr double kMinWeight = 1e-6;

// User preference expressed as per-objective intervals in normalized
// objective units; a draw is u_k ~ Unif[a_k, b_k] normalized to the simplex.
struct BoundingBoxDist {
    std::vector<std::pair<double, double>> boxes;
};

// Dirichlet(1, ..., 1): uniform over the simplex.
struct FlatDirichletDist {
    int num_objectives = 0;
};

// |w| / ||w||_1 with w standard normal: uniform direction on the positive
// part of the unit sphere, normalized.
struct SphereUniformDist {
    int num_objectives = 0;
};

struct FixedWeightDist {
    Eigen::VectorXd lambda;
};

// Two-objective law lambda = [u/(u+1), 1/(u+1)] with u ~ Unif(lo, hi);
// `index` selects which coordinate receives u/(u+1).
struct RatioUniformDist {
    double lo = 0.0;
    double hi = 1.0;
    int index = 0;
};

class WeightDistribution {
public:
    using Spec = std::variant<BoundingBoxDist, FlatDirichletDist, SphereUniformDist,
                              FixedWeightDist, RatioUniformDist>;

    // Factories validate; bounding boxes with negative lower edges are
    // clamped to zero (with a warning on stderr).
    static WeightDistribution bounding_box(std::vector<std::pair<double, double>> boxes);
    static WeightDistribution flat_dirichlet(int num_objectives);
    static WeightDistribution sphere_uniform(int num_objectives);
    static WeightDistribution fixed(Eigen::VectorXd lambda);
    static WeightDistribution ratio_uniform(double lo, double hi, int index = 0);

    int dimension() const;
    const Spec& spec() const { return spec_; }

private:
    explicit WeightDistribution(Spec spec) : spec_(std::move(spec)) {}
    Spec spec_;
};

// One draw from the distribution; output is on the simplex with every
// coordinate >= kMinWeight.
WeightVector sample_weight(const WeightDistribution& dist, RngStream& rng);

// Draw for a given scalarization: the Tchebychev path applies the
// reciprocal transform to the sampled weights, the linear path does not.
WeightVector weights_for_scalarization(const WeightDistribution& dist, Scalarization kind,
                                       RngStream& rng);

} // namespace mobo
