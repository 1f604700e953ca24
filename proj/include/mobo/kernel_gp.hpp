#pragma once

#include <Eigen/Dense>
#include <optional>

#include "mobo/errors.hpp"
#include "mobo/rng.hpp"

namespace mobo {

// Squared-exponential hyperparameters for one objective's GP.
struct KernelParams {
    double scale = 1.0;          // signal variance
    Eigen::VectorXd bandwidths;  // per-dimension lengthscales
    double noise_var = 1e-4;     // observation noise variance

    int dim() const { return static_cast<int>(bandwidths.size()); }
    void validate() const;
};

KernelParams default_kernel_params(int dim);

// k(x1, x2) = scale * exp(-sum_i (x1_i - x2_i)^2 / (2 * bw_i^2))
double kernel_eval(const KernelParams& params, const Eigen::VectorXd& x1,
                   const Eigen::VectorXd& x2);

struct PosteriorSummary {
    double mean = 0.0;
    double std = 0.0;
};

// One approximate posterior function draw: a random Fourier expansion of
// the prior pathwise-conditioned on the training data. Evaluation is
// deterministic given the stored fields.
class SpectralSample {
public:
    double operator()(const Eigen::VectorXd& x) const;

    const Eigen::MatrixXd& frequencies() const { return frequencies_; }
    const Eigen::VectorXd& phases() const { return phases_; }
    const Eigen::VectorXd& amplitudes() const { return amplitudes_; }

private:
    friend class GpModel;
    Eigen::MatrixXd frequencies_;  // M x d
    Eigen::VectorXd phases_;       // M, in [0, 2pi)
    Eigen::VectorXd amplitudes_;   // M
    // Conditioning on observed data (empty for prior draws).
    KernelParams params_;
    Eigen::MatrixXd train_inputs_;  // n x d
    Eigen::VectorXd correction_;    // n
    double mean_offset_ = 0.0;
};

// One objective's fitted surrogate: immutable after construction, safe for
// concurrent read-only posterior queries.
class GpModel {
public:
    // Prior-only model (no observations).
    GpModel(KernelParams params, int dim);

    // Builds and factorizes K + (noise_var + jitter) I. Jitter starts at
    // 1e-6 * scale and escalates tenfold up to 1e-3 * scale before failing.
    static GpModel fit(const KernelParams& params, const Eigen::MatrixXd& inputs,
                       const Eigen::VectorXd& targets);

    PosteriorSummary posterior(const Eigen::VectorXd& x) const;

    SpectralSample draw_spectral_sample(int num_features, RngStream& rng) const;

    int size() const { return static_cast<int>(targets_.size()); }
    int dim() const { return dim_; }
    const KernelParams& params() const { return params_; }
    const Eigen::MatrixXd& inputs() const { return inputs_; }
    const Eigen::VectorXd& targets() const { return targets_; }
    double mean_offset() const { return mean_offset_; }
    double jitter() const { return jitter_; }
    const Eigen::MatrixXd& factorization() const { return chol_lower_; }

    double log_marginal_likelihood() const;

    static constexpr double kVarianceFloor = 1e-12;

private:
    KernelParams params_;
    int dim_ = 0;
    Eigen::MatrixXd inputs_;      // n x d
    Eigen::VectorXd targets_;     // n, raw observations
    double mean_offset_ = 0.0;    // median of targets
    double jitter_ = 0.0;
    Eigen::MatrixXd chol_lower_;  // L with L L^T = K + (noise_var + jitter) I
    Eigen::VectorXd alpha_;       // (K + noise I)^{-1} (targets - offset)

    Eigen::VectorXd cross_covariance(const Eigen::VectorXd& x) const;
};

inline double log_marginal_likelihood(const KernelParams& params, const Eigen::MatrixXd& inputs,
                                      const Eigen::VectorXd& targets) {
    return GpModel::fit(params, inputs, targets).log_marginal_likelihood();
}

struct FitBounds {
    double bandwidth_lo = 0.01, bandwidth_hi = 10.0;
    double scale_lo = 1e-3, scale_hi = 100.0;
    double noise_var_lo = 1e-6, noise_var_hi = 1.0;
};

struct FitReport {
    KernelParams params;
    double log_marginal_likelihood = 0.0;
    bool degenerate_data = false;
};

// Maximum-likelihood hyperparameters via multistart coordinate-wise
// golden-section search in log-parameter space. Start 0 is the default
// parameter set; the rest are drawn uniformly in the log box.
FitReport fit_hyperparams(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                          const FitBounds& bounds, RngStream& rng, int num_starts = 8);

} // namespace mobo
