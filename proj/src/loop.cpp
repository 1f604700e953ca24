#include "mobo/loop.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mobo/acquisition.hpp"
#include "mobo/direct.hpp"

namespace mobo {

namespace {

using nlohmann::json;

constexpr int kLogVersion = 1;
const char* const kStreamNames[] = {"init-design", "weight-sampler", "ts-draws", "mle-restarts",
                                    "objective-noise"};

struct Streams {
    RngStream init_design;
    RngStream weight_sampler;
    RngStream ts_draws;
    RngStream mle_restarts;
    RngStream objective_noise;

    explicit Streams(std::uint64_t seed)
        : init_design(seed, kStreamNames[0]),
          weight_sampler(seed, kStreamNames[1]),
          ts_draws(seed, kStreamNames[2]),
          mle_restarts(seed, kStreamNames[3]),
          objective_noise(seed, kStreamNames[4]) {}

    std::map<std::string, std::uint64_t> counts() const {
        return {{kStreamNames[0], init_design.count()},
                {kStreamNames[1], weight_sampler.count()},
                {kStreamNames[2], ts_draws.count()},
                {kStreamNames[3], mle_restarts.count()},
                {kStreamNames[4], objective_noise.count()}};
    }

    void seek(const std::map<std::string, std::uint64_t>& counts) {
        init_design.seek(counts.at(kStreamNames[0]));
        weight_sampler.seek(counts.at(kStreamNames[1]));
        ts_draws.seek(counts.at(kStreamNames[2]));
        mle_restarts.seek(counts.at(kStreamNames[3]));
        objective_noise.seek(counts.at(kStreamNames[4]));
    }
};

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.begin(), v.end());
}

Eigen::VectorXd to_eigen(const json& arr) {
    Eigen::VectorXd v(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    return v;
}

json params_to_json(const KernelParams& p) {
    return {{"scale", p.scale}, {"bandwidths", to_std(p.bandwidths)}, {"noise_var", p.noise_var}};
}

KernelParams params_from_json(const json& j) {
    KernelParams p;
    p.scale = j.at("scale").get<double>();
    p.bandwidths = to_eigen(j.at("bandwidths"));
    p.noise_var = j.at("noise_var").get<double>();
    return p;
}

json record_to_json(const EvaluationRecord& record) {
    json j;
    j["t"] = record.t;
    j["phase"] = record.phase;
    j["x"] = to_std(record.x);
    j["y"] = to_std(record.y);
    if (record.lambda) j["lambda"] = to_std(*record.lambda);
    if (record.acq_value) j["acq_value"] = *record.acq_value;
    if (!record.refits.empty()) {
        json refits = json::array();
        for (const auto& refit : record.refits) {
            refits.push_back({{"objective_index", refit.objective_index},
                              {"params", params_to_json(refit.params)},
                              {"log_marginal_likelihood", refit.log_marginal_likelihood},
                              {"degenerate", refit.degenerate}});
        }
        j["refits"] = refits;
    }
    j["rng"] = record.rng_counts;
    return j;
}

EvaluationRecord record_from_json(const json& j) {
    EvaluationRecord record;
    record.t = j.at("t").get<int>();
    record.phase = j.at("phase").get<std::string>();
    record.x = to_eigen(j.at("x"));
    record.y = to_eigen(j.at("y"));
    if (j.contains("lambda")) record.lambda = to_eigen(j["lambda"]);
    if (j.contains("acq_value")) record.acq_value = j["acq_value"].get<double>();
    if (j.contains("refits")) {
        for (const auto& r : j["refits"]) {
            EvaluationRecord::Refit refit;
            refit.objective_index = r.at("objective_index").get<int>();
            refit.params = params_from_json(r.at("params"));
            refit.log_marginal_likelihood = r.at("log_marginal_likelihood").get<double>();
            refit.degenerate = r.value("degenerate", false);
            record.refits.push_back(std::move(refit));
        }
    }
    for (const auto& [name, count] : j.at("rng").items()) {
        record.rng_counts[name] = count.get<std::uint64_t>();
    }
    return record;
}

// Append-only writer for the evaluation log and the fit-report sidecar.
class LogWriter {
public:
    LogWriter(const std::string& path, bool truncate) {
        if (auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) {
            std::filesystem::create_directories(parent);
        }
        log_.open(path, truncate ? std::ios::trunc : std::ios::app);
        if (!log_) throw ConfigError("cannot open log for writing: " + path);
        fits_.open(fit_report_path(path), truncate ? std::ios::trunc : std::ios::app);
        if (!fits_) throw ConfigError("cannot open fit report for writing: " + fit_report_path(path));
    }

    void header(const ExperimentConfig& config, const std::string& hash) {
        json j;
        j["config"] = config.to_json();
        j["config_hash"] = hash;
        j["version"] = kLogVersion;
        log_ << j.dump() << "\n";
        log_.flush();
    }

    void record(const EvaluationRecord& rec) {
        log_ << record_to_json(rec).dump() << "\n";
        log_.flush();
        for (const auto& refit : rec.refits) {
            json j;
            j["t"] = rec.t;
            j["objective_index"] = refit.objective_index;
            j["params"] = params_to_json(refit.params);
            j["log_marginal_likelihood"] = refit.log_marginal_likelihood;
            fits_ << j.dump() << "\n";
        }
        fits_.flush();
    }

private:
    std::ofstream log_;
    std::ofstream fits_;
};

// Everything the loop needs between steps; rebuilt on resume.
struct LoopContext {
    ObjectiveSet objective;
    Streams streams;
    Eigen::MatrixXd inputs;              // rows are evaluated points
    std::vector<Eigen::VectorXd> targets;  // per objective
    std::vector<KernelParams> params;      // per objective

    LoopContext(const ExperimentConfig& config)
        : objective(config.objective.build()), streams(config.seed) {
        inputs.resize(0, objective.dim);
        targets.assign(static_cast<size_t>(objective.num_objectives), Eigen::VectorXd());
        KernelParams initial =
            config.init_params ? *config.init_params : default_kernel_params(objective.dim);
        initial.validate();
        if (initial.dim() != objective.dim) {
            throw ConfigError("config: init_params bandwidth count does not match objective dim");
        }
        params.assign(static_cast<size_t>(objective.num_objectives), initial);
    }

    void append_observation(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        inputs.conservativeResize(inputs.rows() + 1, Eigen::NoChange);
        inputs.row(inputs.rows() - 1) = x.transpose();
        for (int k = 0; k < objective.num_objectives; ++k) {
            auto& column = targets[static_cast<size_t>(k)];
            column.conservativeResize(column.size() + 1);
            column[column.size() - 1] = y[k];
        }
    }

    Eigen::VectorXd running_min() const {
        Eigen::VectorXd z(objective.num_objectives);
        for (int k = 0; k < objective.num_objectives; ++k) {
            const auto& column = targets[static_cast<size_t>(k)];
            z[k] = column.size() ? column.minCoeff() : 0.0;
        }
        return z;
    }
};

Eigen::VectorXd uniform_point(RngStream& rng, int dim) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = rng.uniform01();
    return x;
}

// One loop step: sample weights, maximize the acquisition, evaluate, update
// the surrogates, refit on cadence.
EvaluationRecord loop_step(const ExperimentConfig& config, LoopContext& ctx, int step) {
    const auto started = std::chrono::steady_clock::now();
    const int num_objectives = ctx.objective.num_objectives;

    const WeightVector lambda = weights_for_scalarization(
        config.weight_dist, config.acquisition.scalarization, ctx.streams.weight_sampler);

    EvaluationRecord record;
    record.t = config.n_init + step - 1;
    record.phase = "loop";
    record.lambda = lambda.values();

    Eigen::VectorXd x_next;
    if (config.acquisition.method == Method::kRandomSearch) {
        x_next = uniform_point(ctx.streams.init_design, ctx.objective.dim);
    } else {
        std::vector<GpModel> models;
        models.reserve(static_cast<size_t>(num_objectives));
        for (int k = 0; k < num_objectives; ++k) {
            models.push_back(GpModel::fit(ctx.params[static_cast<size_t>(k)], ctx.inputs,
                                          ctx.targets[static_cast<size_t>(k)]));
        }
        const Eigen::VectorXd reference = config.acquisition.reference
                                              ? *config.acquisition.reference
                                              : ctx.running_min();
        if (config.acquisition.reference &&
            config.acquisition.reference->size() != num_objectives) {
            throw ConfigError("config: acquisition.reference length does not match objectives");
        }

        std::function<double(const Eigen::VectorXd&)> acquisition;
        std::vector<SpectralSample> draws;
        if (config.acquisition.method == Method::kThompson) {
            for (int k = 0; k < num_objectives; ++k) {
                draws.push_back(models[static_cast<size_t>(k)].draw_spectral_sample(
                    config.ts_features, ctx.streams.ts_draws));
            }
            acquisition = [&](const Eigen::VectorXd& x) {
                return ts_acquisition(lambda.values(), draws, config.acquisition.scalarization,
                                      reference, x);
            };
        } else {
            const double beta = beta_value(config.acquisition.beta, step);
            acquisition = [&, beta](const Eigen::VectorXd& x) {
                std::vector<PosteriorSummary> posts(static_cast<size_t>(num_objectives));
                for (int k = 0; k < num_objectives; ++k) {
                    posts[static_cast<size_t>(k)] = models[static_cast<size_t>(k)].posterior(x);
                }
                if (config.acquisition.scalarization == Scalarization::kLinear) {
                    return ucb_linear(lambda.values(), posts, beta);
                }
                return ucb_tchebychev(lambda.values(), posts, beta, reference);
            };
        }

        const OptResult opt = mobo::maximize(acquisition, ctx.objective.dim, config.acq_opt);
        x_next = opt.x_best;
        record.acq_value = opt.value_best;
    }

    const Eigen::VectorXd y = ctx.objective.observe(x_next, ctx.streams.objective_noise);
    ctx.append_observation(x_next, y);
    record.x = x_next;
    record.y = y;

    if (step % config.refit_every == 0 && ctx.inputs.rows() >= 2) {
        for (int k = 0; k < num_objectives; ++k) {
            const FitReport report = fit_hyperparams(ctx.inputs, ctx.targets[static_cast<size_t>(k)],
                                                     FitBounds{}, ctx.streams.mle_restarts);
            ctx.params[static_cast<size_t>(k)] = report.params;
            record.refits.push_back(
                {k, report.params, report.log_marginal_likelihood, report.degenerate_data});
        }
    }

    record.rng_counts = ctx.streams.counts();
    record.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    return record;
}

EvaluationRecord init_step(const ExperimentConfig& config, LoopContext& ctx, int index) {
    const auto started = std::chrono::steady_clock::now();
    EvaluationRecord record;
    record.t = index;
    record.phase = "init";
    record.x = uniform_point(ctx.streams.init_design, ctx.objective.dim);
    record.y = ctx.objective.observe(record.x, ctx.streams.objective_noise);
    ctx.append_observation(record.x, record.y);
    record.rng_counts = ctx.streams.counts();
    record.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    return record;
}

ExperimentState run_from(const ExperimentConfig& config, LoopContext& ctx,
                         std::vector<EvaluationRecord> done, LogWriter& writer) {
    ExperimentState state;
    state.config = config;
    state.config_hash = config.hash();
    state.records = std::move(done);

    while (static_cast<int>(state.records.size()) < config.n_init) {
        EvaluationRecord record = init_step(config, ctx, static_cast<int>(state.records.size()));
        writer.record(record);
        state.records.push_back(std::move(record));
    }
    while (static_cast<int>(state.records.size()) < config.n_init + config.budget) {
        const int step = static_cast<int>(state.records.size()) - config.n_init + 1;
        EvaluationRecord record = loop_step(config, ctx, step);
        writer.record(record);
        state.records.push_back(std::move(record));
    }
    state.current_params = ctx.params;
    return state;
}

} // namespace

std::string fit_report_path(const std::string& log_path) {
    return log_path + ".fits.jsonl";
}

ExperimentState run(const ExperimentConfig& config) {
    config.validate();
    LoopContext ctx(config);
    LogWriter writer(config.output_path, /*truncate=*/true);
    writer.header(config, config.hash());
    return run_from(config, ctx, {}, writer);
}

ExperimentState read_log(const std::string& log_path) {
    std::ifstream in(log_path);
    if (!in) throw ConfigError("cannot open log: " + log_path);

    std::string line;
    if (!std::getline(in, line)) throw ConfigError("log is empty: " + log_path);
    json header;
    try {
        header = json::parse(line);
    } catch (const json::exception& e) {
        throw ConfigError("log header is not valid JSON: " + std::string(e.what()));
    }
    if (header.value("version", -1) != kLogVersion) {
        throw ConfigError("log version mismatch (expected " + std::to_string(kLogVersion) + ")");
    }

    ExperimentState state;
    state.config = ExperimentConfig::from_json(header.at("config"));
    state.config_hash = header.at("config_hash").get<std::string>();
    const std::string recomputed = state.config.hash();
    if (recomputed != state.config_hash) {
        throw ConfigError("config hash mismatch: log says " + state.config_hash +
                          " but the embedded config hashes to " + recomputed +
                          " (was the log edited?)");
    }

    int line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
            state.records.push_back(record_from_json(j));
        } catch (const json::exception&) {
            if (in.peek() == EOF) {
                std::cerr << "warning: dropping truncated trailing line " << line_number << " of "
                          << log_path << "\n";
                break;
            }
            throw ConfigError("corrupt record at line " + std::to_string(line_number) + " of " +
                              log_path);
        }
        if (state.records.back().t != static_cast<int>(state.records.size()) - 1) {
            throw ConfigError("record indices out of order at line " + std::to_string(line_number));
        }
    }
    return state;
}

ExperimentState resume(const std::string& log_path) {
    ExperimentState persisted = read_log(log_path);
    const ExperimentConfig& config = persisted.config;

    LoopContext ctx(config);
    for (const auto& record : persisted.records) {
        ctx.append_observation(record.x, record.y);
        for (const auto& refit : record.refits) {
            ctx.params[static_cast<size_t>(refit.objective_index)] = refit.params;
        }
    }
    if (!persisted.records.empty()) {
        ctx.streams.seek(persisted.records.back().rng_counts);
    }

    if (persisted.complete()) {
        persisted.current_params = ctx.params;
        return persisted;
    }

    // Rewrite the good prefix (drops any truncated trailing line), then
    // continue appending.
    {
        LogWriter rewriter(log_path, /*truncate=*/true);
        rewriter.header(config, persisted.config_hash);
        for (const auto& record : persisted.records) rewriter.record(record);
        ExperimentState state =
            run_from(config, ctx, std::move(persisted.records), rewriter);
        return state;
    }
}

} // namespace mobo
