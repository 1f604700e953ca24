#include "mobo/objectives.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "mobo/kernel_gp.hpp"

namespace mobo {

namespace {

void check_point(const Eigen::VectorXd& x, int dim, const char* who) {
    if (x.size() != dim) {
        throw ContractError(std::string(who) + ": point dimension mismatch");
    }
}

// Exact 2-d extrema; the 4-d averages attain the same bounds when both
// coordinate pairs sit at an extremum.
constexpr double kBraninMin = 0.39788735772973816;
constexpr double kBraninMax = 308.12909601160663;
constexpr double kCurrinMin = 1.1804080208620997;  // 3 (1 - e^{-1/2}) at (0, 1)
constexpr double kCurrinMax = 13.798722044728434;  // x2 -> 0 boundary, x1 ~ 0.2167

} // namespace

Eigen::VectorXd ObjectiveSet::observe(const Eigen::VectorXd& x, RngStream& noise_rng) const {
    Eigen::VectorXd y = evaluate(x);
    for (int k = 0; k < num_objectives; ++k) {
        y[k] += noise_stds[k] * noise_rng.normal();
    }
    return y;
}

ObjectiveSet circle_pair() {
    ObjectiveSet set;
    set.name = "circle_pair";
    set.num_objectives = 2;
    set.dim = 2;
    set.evaluate = [](const Eigen::VectorXd& x) {
        check_point(x, 2, "circle_pair");
        Eigen::VectorXd y(2);
        y[0] = x[0] * x[1];
        y[1] = x[1] * std::sqrt(std::max(0.0, 1.0 - x[0] * x[0]));
        return y;
    };
    set.noise_stds = Eigen::VectorXd::Constant(2, 0.01);
    set.known_ranges = {{0.0, 1.0}, {0.0, 1.0}};
    return set;
}

double branin2(double x1, double x2) {
    const double a = 1.0;
    const double b = 5.1 / (4.0 * std::numbers::pi * std::numbers::pi);
    const double c = 5.0 / std::numbers::pi;
    const double r = 6.0;
    const double s = 10.0;
    const double t = 1.0 / (8.0 * std::numbers::pi);
    const double u = -5.0 + 15.0 * x1;
    const double v = 15.0 * x2;
    const double term = v - b * u * u + c * u - r;
    return a * term * term + s * (1.0 - t) * std::cos(u) + s;
}

double currin2(double x1, double x2) {
    const double factor = x2 == 0.0 ? 1.0 : 1.0 - std::exp(-1.0 / (2.0 * x2));
    const double numerator = 2300.0 * x1 * x1 * x1 + 1900.0 * x1 * x1 + 2092.0 * x1 + 60.0;
    const double denominator = 100.0 * x1 * x1 * x1 + 500.0 * x1 * x1 + 4.0 * x1 + 20.0;
    return factor * numerator / denominator;
}

ObjectiveSet branin_currin_4d() {
    ObjectiveSet set;
    set.name = "branin_currin_4d";
    set.num_objectives = 2;
    set.dim = 4;
    set.evaluate = [](const Eigen::VectorXd& x) {
        check_point(x, 4, "branin_currin_4d");
        Eigen::VectorXd y(2);
        y[0] = -0.5 * (branin2(x[0], x[1]) + branin2(x[2], x[3]));
        y[1] = 0.5 * (currin2(x[0], x[1]) + currin2(x[2], x[3]));
        return y;
    };
    set.known_ranges = {{-kBraninMax, -kBraninMin}, {kCurrinMin, kCurrinMax}};
    set.noise_stds = Eigen::VectorXd(2);
    set.noise_stds[0] = 0.01 * (kBraninMax - kBraninMin);
    set.noise_stds[1] = 0.01 * (kCurrinMax - kCurrinMin);
    return set;
}

ObjectiveSet random_gp_objectives(int num_objectives, int dim, std::uint64_t seed) {
    if (num_objectives < 1 || dim < 1) {
        throw ContractError("random_gp_objectives: K and d must be >= 1");
    }
    KernelParams params;
    params.scale = 1.0;
    params.bandwidths = Eigen::VectorXd::Constant(dim, 0.2);
    params.noise_var = 0.0;

    constexpr int kFeatures = 512;
    auto draws = std::make_shared<std::vector<SpectralSample>>();
    GpModel prior(params, dim);
    for (int k = 0; k < num_objectives; ++k) {
        RngStream stream(seed, "random-gp-objective-" + std::to_string(k));
        draws->push_back(prior.draw_spectral_sample(kFeatures, stream));
    }

    ObjectiveSet set;
    set.name = "random_gp";
    set.num_objectives = num_objectives;
    set.dim = dim;
    set.evaluate = [draws, num_objectives, dim](const Eigen::VectorXd& x) {
        check_point(x, dim, "random_gp");
        Eigen::VectorXd y(num_objectives);
        for (int k = 0; k < num_objectives; ++k) {
            y[k] = (*draws)[static_cast<size_t>(k)](x);
        }
        return y;
    };
    set.noise_stds = Eigen::VectorXd::Constant(num_objectives, 0.04);
    return set;
}

} // namespace mobo
