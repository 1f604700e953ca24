#include "mobo/kernel_gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace mobo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double median(Eigen::VectorXd values) {
    const Eigen::Index n = values.size();
    if (n == 0) return 0.0;
    std::sort(values.begin(), values.end());
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Gram matrix of the SE kernel, built from per-dimension squared distances.
Eigen::MatrixXd gram_matrix(const KernelParams& params, const Eigen::MatrixXd& inputs) {
    const Eigen::Index n = inputs.rows();
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < params.dim(); ++i) {
        const double inv_two_bw2 = 0.5 / (params.bandwidths[i] * params.bandwidths[i]);
        const Eigen::VectorXd col = inputs.col(i);
        q.noalias() += inv_two_bw2 *
                       (col.replicate(1, n) - col.transpose().replicate(n, 1)).array().square().matrix();
    }
    return params.scale * (-q.array()).exp().matrix();
}

} // namespace

void KernelParams::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ContractError("KernelParams: scale must be positive and finite");
    }
    if (bandwidths.size() < 1 || !bandwidths.allFinite() || (bandwidths.array() <= 0.0).any()) {
        throw ContractError("KernelParams: bandwidths must be positive and finite");
    }
    if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) {
        throw ContractError("KernelParams: noise_var must be nonnegative and finite");
    }
}

KernelParams default_kernel_params(int dim) {
    KernelParams p;
    p.scale = 1.0;
    p.bandwidths = Eigen::VectorXd::Constant(dim, 0.25);
    p.noise_var = 1e-4;
    return p;
}

double kernel_eval(const KernelParams& params, const Eigen::VectorXd& x1,
                   const Eigen::VectorXd& x2) {
    if (x1.size() != params.bandwidths.size() || x2.size() != params.bandwidths.size()) {
        throw ContractError("kernel_eval: point dimension does not match bandwidths");
    }
    double q = 0.0;
    for (int i = 0; i < params.dim(); ++i) {
        const double delta = x1[i] - x2[i];
        q += delta * delta / (2.0 * params.bandwidths[i] * params.bandwidths[i]);
    }
    return params.scale * std::exp(-q);
}

double SpectralSample::operator()(const Eigen::VectorXd& x) const {
    double value = mean_offset_ + amplitudes_.dot(((frequencies_ * x + phases_).array()).cos().matrix());
    for (Eigen::Index i = 0; i < correction_.size(); ++i) {
        value += correction_[i] * kernel_eval(params_, train_inputs_.row(i), x);
    }
    return value;
}

GpModel::GpModel(KernelParams params, int dim) : params_(std::move(params)), dim_(dim) {
    params_.validate();
    if (params_.dim() != dim) {
        throw ContractError("GpModel: bandwidth count does not match dimension");
    }
    inputs_.resize(0, dim);
    targets_.resize(0);
}

GpModel GpModel::fit(const KernelParams& params, const Eigen::MatrixXd& inputs,
                     const Eigen::VectorXd& targets) {
    params.validate();
    if (inputs.rows() != targets.size()) {
        throw ContractError("GpModel::fit: inputs/targets size mismatch");
    }
    if (inputs.cols() != params.bandwidths.size()) {
        throw ContractError("GpModel::fit: input dimension does not match bandwidths");
    }
    if (!targets.allFinite() || !inputs.allFinite()) {
        throw NumericError("GpModel::fit: non-finite training data");
    }

    GpModel model(params, static_cast<int>(inputs.cols()));
    model.inputs_ = inputs;
    model.targets_ = targets;
    model.mean_offset_ = median(targets);

    const Eigen::Index n = inputs.rows();
    if (n == 0) return model;

    Eigen::MatrixXd gram = gram_matrix(params, inputs);
    const Eigen::VectorXd centered = targets.array() - model.mean_offset_;

    for (double jitter = 1e-6 * params.scale; jitter <= 1.0001e-3 * params.scale; jitter *= 10.0) {
        Eigen::MatrixXd sys = gram;
        sys.diagonal().array() += params.noise_var + jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(sys);
        if (llt.info() == Eigen::Success) {
            model.jitter_ = jitter;
            model.chol_lower_ = llt.matrixL();
            model.alpha_ = llt.solve(centered);
            return model;
        }
    }
    throw NumericError("GpModel::fit: factorization failed at maximum jitter (n=" +
                       std::to_string(n) + ")");
}

Eigen::VectorXd GpModel::cross_covariance(const Eigen::VectorXd& x) const {
    Eigen::ArrayXd q = Eigen::ArrayXd::Zero(inputs_.rows());
    for (int i = 0; i < dim_; ++i) {
        const double inv_two_bw2 = 0.5 / (params_.bandwidths[i] * params_.bandwidths[i]);
        q += inv_two_bw2 * (inputs_.col(i).array() - x[i]).square();
    }
    return params_.scale * (-q).exp();
}

PosteriorSummary GpModel::posterior(const Eigen::VectorXd& x) const {
    if (x.size() != dim_) {
        throw ContractError("GpModel::posterior: query dimension mismatch");
    }
    if (size() == 0) {
        return {mean_offset_, std::sqrt(params_.scale)};
    }
    const Eigen::VectorXd k = cross_covariance(x);
    const double mean = mean_offset_ + k.dot(alpha_);
    const Eigen::VectorXd v = chol_lower_.triangularView<Eigen::Lower>().solve(k);
    const double variance = params_.scale - v.squaredNorm();
    return {mean, std::sqrt(std::max(variance, kVarianceFloor))};
}

SpectralSample GpModel::draw_spectral_sample(int num_features, RngStream& rng) const {
    if (num_features < 1) {
        throw ContractError("draw_spectral_sample: need at least one feature");
    }
    SpectralSample sample;
    sample.params_ = params_;
    sample.mean_offset_ = mean_offset_;

    // SE spectral density: frequencies are independent normals with
    // per-dimension std 1/bw_i.
    sample.frequencies_.resize(num_features, dim_);
    for (int j = 0; j < num_features; ++j) {
        for (int i = 0; i < dim_; ++i) {
            sample.frequencies_(j, i) = rng.normal() / params_.bandwidths[i];
        }
    }
    sample.phases_.resize(num_features);
    for (int j = 0; j < num_features; ++j) {
        sample.phases_[j] = kTwoPi * rng.uniform01();
    }
    const double feature_scale = std::sqrt(2.0 * params_.scale / num_features);
    sample.amplitudes_.resize(num_features);
    for (int j = 0; j < num_features; ++j) {
        sample.amplitudes_[j] = feature_scale * rng.normal();
    }

    if (size() > 0) {
        // Pathwise conditioning: correct the prior path by the exact-kernel
        // solve of the residual at the training points.
        Eigen::VectorXd prior_at_train(size());
        for (int i = 0; i < size(); ++i) {
            prior_at_train[i] = sample.amplitudes_.dot(
                ((sample.frequencies_ * inputs_.row(i).transpose() + sample.phases_).array())
                    .cos()
                    .matrix());
        }
        Eigen::VectorXd noise(size());
        const double noise_std = std::sqrt(params_.noise_var);
        for (int i = 0; i < size(); ++i) {
            noise[i] = noise_std * rng.normal();
        }
        const Eigen::VectorXd residual =
            (targets_.array() - mean_offset_).matrix() - prior_at_train - noise;
        sample.train_inputs_ = inputs_;
        sample.correction_ = chol_lower_.triangularView<Eigen::Lower>().transpose().solve(
            chol_lower_.triangularView<Eigen::Lower>().solve(residual));
    }
    return sample;
}

double GpModel::log_marginal_likelihood() const {
    const Eigen::Index n = targets_.size();
    if (n == 0) {
        throw ContractError("log_marginal_likelihood: need at least one observation");
    }
    const Eigen::VectorXd centered = targets_.array() - mean_offset_;
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        log_det += std::log(chol_lower_(i, i));
    }
    return -0.5 * centered.dot(alpha_) - log_det - 0.5 * static_cast<double>(n) * std::log(kTwoPi);
}

namespace {

// Golden-section maximization of fn over [lo, hi]; returns best (x, value)
// over all evaluations.
std::pair<double, double> golden_max(const std::function<double(double)>& fn, double lo, double hi,
                                     int iterations) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = fn(x1), f2 = fn(x2);
    double best_x = f1 >= f2 ? x1 : x2;
    double best_f = std::max(f1, f2);
    for (int it = 0; it < iterations; ++it) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = fn(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = fn(x2);
        }
        if (f1 > best_f) { best_f = f1; best_x = x1; }
        if (f2 > best_f) { best_f = f2; best_x = x2; }
    }
    return {best_x, best_f};
}

} // namespace

FitReport fit_hyperparams(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                          const FitBounds& bounds, RngStream& rng, int num_starts) {
    const int n = static_cast<int>(inputs.rows());
    const int d = static_cast<int>(inputs.cols());
    if (n < 2) {
        throw ContractError("fit_hyperparams: need at least two observations");
    }
    if (targets.size() != n) {
        throw ContractError("fit_hyperparams: inputs/targets size mismatch");
    }

    auto clamp_params = [&](KernelParams p) {
        p.scale = std::clamp(p.scale, bounds.scale_lo, bounds.scale_hi);
        for (int i = 0; i < p.dim(); ++i) {
            p.bandwidths[i] = std::clamp(p.bandwidths[i], bounds.bandwidth_lo, bounds.bandwidth_hi);
        }
        p.noise_var = std::clamp(p.noise_var, bounds.noise_var_lo, bounds.noise_var_hi);
        return p;
    };

    const double spread = targets.maxCoeff() - targets.minCoeff();
    if (!(spread > 1e-12 * std::max(1.0, std::abs(targets.maxCoeff())))) {
        KernelParams defaults = clamp_params(default_kernel_params(d));
        return {defaults, log_marginal_likelihood(defaults, inputs, targets), true};
    }

    // theta layout: [log bw_1 .. log bw_d, log scale, log noise_var]
    const int num_params = d + 2;
    Eigen::VectorXd lo(num_params), hi(num_params);
    for (int i = 0; i < d; ++i) {
        lo[i] = std::log(bounds.bandwidth_lo);
        hi[i] = std::log(bounds.bandwidth_hi);
    }
    lo[d] = std::log(bounds.scale_lo);
    hi[d] = std::log(bounds.scale_hi);
    lo[d + 1] = std::log(bounds.noise_var_lo);
    hi[d + 1] = std::log(bounds.noise_var_hi);

    // Squared-distance stacks are parameter-independent; cache them once.
    std::vector<Eigen::MatrixXd> dist2(d);
    for (int i = 0; i < d; ++i) {
        const Eigen::VectorXd col = inputs.col(i);
        dist2[i] = (col.replicate(1, n) - col.transpose().replicate(n, 1)).array().square();
    }
    const double offset = median(targets);
    const Eigen::VectorXd centered = targets.array() - offset;

    auto to_params = [&](const Eigen::VectorXd& theta) {
        KernelParams p;
        p.bandwidths.resize(d);
        for (int i = 0; i < d; ++i) p.bandwidths[i] = std::exp(theta[i]);
        p.scale = std::exp(theta[d]);
        p.noise_var = std::exp(theta[d + 1]);
        return p;
    };

    auto lml = [&](const Eigen::VectorXd& theta) -> double {
        const KernelParams p = to_params(theta);
        Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < d; ++i) {
            q.noalias() += (0.5 / (p.bandwidths[i] * p.bandwidths[i])) * dist2[i];
        }
        Eigen::MatrixXd sys = p.scale * (-q.array()).exp().matrix();
        sys.diagonal().array() += p.noise_var + 1e-6 * p.scale;
        Eigen::LLT<Eigen::MatrixXd> llt(sys);
        if (llt.info() != Eigen::Success) {
            return -std::numeric_limits<double>::infinity();
        }
        const Eigen::MatrixXd& l = llt.matrixL();
        double log_det = 0.0;
        for (int i = 0; i < n; ++i) log_det += std::log(l(i, i));
        const Eigen::VectorXd alpha = llt.solve(centered);
        return -0.5 * centered.dot(alpha) - log_det - 0.5 * n * std::log(kTwoPi);
    };

    Eigen::VectorXd best_theta;
    double best_value = -std::numeric_limits<double>::infinity();

    for (int start = 0; start < num_starts; ++start) {
        Eigen::VectorXd theta(num_params);
        if (start == 0) {
            const KernelParams defaults = clamp_params(default_kernel_params(d));
            for (int i = 0; i < d; ++i) theta[i] = std::log(defaults.bandwidths[i]);
            theta[d] = std::log(defaults.scale);
            theta[d + 1] = std::log(defaults.noise_var);
        } else {
            for (int i = 0; i < num_params; ++i) theta[i] = rng.uniform(lo[i], hi[i]);
        }
        double value = lml(theta);
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (int i = 0; i < num_params; ++i) {
                auto line = [&](double t) {
                    Eigen::VectorXd candidate = theta;
                    candidate[i] = t;
                    return lml(candidate);
                };
                auto [t_best, v_best] = golden_max(line, lo[i], hi[i], 14);
                if (v_best > value) {
                    value = v_best;
                    theta[i] = t_best;
                }
            }
        }
        if (value > best_value) {
            best_value = value;
            best_theta = theta;
        }
    }

    if (!best_theta.size() || !std::isfinite(best_value)) {
        KernelParams defaults = clamp_params(default_kernel_params(d));
        return {defaults, log_marginal_likelihood(defaults, inputs, targets), true};
    }
    return {to_params(best_theta), best_value, false};
}

} // namespace mobo
