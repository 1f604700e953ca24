#include "mobo/config.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace mobo {

namespace {

using nlohmann::json;

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.begin(), v.end());
}

Eigen::VectorXd to_eigen(const json& arr, const char* field) {
    if (!arr.is_array()) throw ConfigError(std::string("config: ") + field + " must be an array");
    Eigen::VectorXd v(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) {
            throw ConfigError(std::string("config: ") + field + " must contain numbers");
        }
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    return v;
}

const json& require(const json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end()) {
        throw ConfigError(std::string("config: missing required field \"") + field + "\"");
    }
    return *it;
}

} // namespace

std::string to_string(Method method) {
    switch (method) {
        case Method::kThompson: return "ts";
        case Method::kUcb: return "ucb";
        case Method::kRandomSearch: return "random";
    }
    return "?";
}

std::string to_string(Scalarization kind) {
    return kind == Scalarization::kLinear ? "linear" : "tch";
}

ObjectiveSet ObjectiveSpec::build() const {
    ObjectiveSet set;
    if (kind == "circle_pair") {
        set = circle_pair();
    } else if (kind == "branin_currin_4d") {
        set = branin_currin_4d();
    } else if (kind == "random_gp") {
        set = random_gp_objectives(num_objectives, dim, gp_seed);
    } else if (kind == "subprocess") {
        set = subprocess_objective(command, num_objectives, dim, timeout_seconds);
    } else {
        throw ConfigError("config: unknown objective kind \"" + kind + "\"");
    }
    if (noise_stds) {
        if (noise_stds->size() != set.num_objectives) {
            throw ConfigError("config: noise_stds length does not match objective count");
        }
        set.noise_stds = *noise_stds;
    }
    return set;
}

nlohmann::json weight_dist_to_json(const WeightDistribution& dist) {
    json j;
    std::visit(
        [&j](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, BoundingBoxDist>) {
                j["kind"] = "bounding_box";
                json boxes = json::array();
                for (const auto& [lo, hi] : d.boxes) boxes.push_back({lo, hi});
                j["boxes"] = boxes;
            } else if constexpr (std::is_same_v<T, FlatDirichletDist>) {
                j["kind"] = "flat_dirichlet";
                j["K"] = d.num_objectives;
            } else if constexpr (std::is_same_v<T, SphereUniformDist>) {
                j["kind"] = "sphere_uniform";
                j["K"] = d.num_objectives;
            } else if constexpr (std::is_same_v<T, FixedWeightDist>) {
                j["kind"] = "fixed";
                j["lambda"] = to_std(d.lambda);
            } else {
                j["kind"] = "ratio_uniform";
                j["lo"] = d.lo;
                j["hi"] = d.hi;
                j["index"] = d.index;
            }
        },
        dist.spec());
    return j;
}

WeightDistribution weight_dist_from_json(const json& j) {
    const std::string kind = require(j, "kind").get<std::string>();
    if (kind == "bounding_box") {
        const json& boxes = require(j, "boxes");
        std::vector<std::pair<double, double>> parsed;
        for (const auto& box : boxes) {
            if (!box.is_array() || box.size() != 2) {
                throw ConfigError("config: weight_dist boxes must be [lo, hi] pairs");
            }
            parsed.emplace_back(box[0].get<double>(), box[1].get<double>());
        }
        return WeightDistribution::bounding_box(std::move(parsed));
    }
    if (kind == "flat_dirichlet") {
        return WeightDistribution::flat_dirichlet(require(j, "K").get<int>());
    }
    if (kind == "sphere_uniform") {
        return WeightDistribution::sphere_uniform(require(j, "K").get<int>());
    }
    if (kind == "fixed") {
        return WeightDistribution::fixed(to_eigen(require(j, "lambda"), "weight_dist.lambda"));
    }
    if (kind == "ratio_uniform") {
        return WeightDistribution::ratio_uniform(require(j, "lo").get<double>(),
                                                 require(j, "hi").get<double>(),
                                                 j.value("index", 0));
    }
    throw ConfigError("config: unknown weight_dist kind \"" + kind + "\"");
}

void ExperimentConfig::validate() const {
    if (budget < 0) throw ConfigError("config: T must be >= 0");
    if (n_init < 0) throw ConfigError("config: n_init must be >= 0");
    if (refit_every < 1) throw ConfigError("config: refit_every must be >= 1");
    if (ts_features < 1) throw ConfigError("config: ts_features must be >= 1");
    if (output_path.empty()) throw ConfigError("config: missing required field \"output_path\"");
    acq_opt.validate();
    if (acquisition.method == Method::kUcb && !(acquisition.beta.coefficient > 0.0)) {
        throw ConfigError("config: acquisition.beta_coefficient must be positive");
    }
}

nlohmann::json ExperimentConfig::to_json() const {
    json j;
    json obj;
    obj["kind"] = objective.kind;
    if (objective.kind == "random_gp" || objective.kind == "subprocess") {
        obj["K"] = objective.num_objectives;
        obj["d"] = objective.dim;
    }
    if (objective.kind == "random_gp") obj["gp_seed"] = objective.gp_seed;
    if (objective.kind == "subprocess") {
        obj["command"] = objective.command;
        obj["timeout_seconds"] = objective.timeout_seconds;
    }
    if (objective.noise_stds) obj["noise_stds"] = to_std(*objective.noise_stds);
    j["objective"] = obj;

    j["T"] = budget;
    j["n_init"] = n_init;

    json acq;
    acq["method"] = to_string(acquisition.method);
    acq["scalarization"] = to_string(acquisition.scalarization);
    if (acquisition.method == Method::kUcb) {
        acq["beta_coefficient"] = acquisition.beta.coefficient;
    }
    if (acquisition.reference) acq["reference"] = to_std(*acquisition.reference);
    j["acquisition"] = acq;

    j["weight_dist"] = weight_dist_to_json(weight_dist);
    j["seed"] = seed;
    j["refit_every"] = refit_every;
    j["output_path"] = output_path;
    j["acq_opt"] = {{"max_evals", acq_opt.max_evals},
                    {"local_refine_evals", acq_opt.local_refine_evals}};
    j["ts_features"] = ts_features;
    if (init_params) {
        j["init_params"] = {{"scale", init_params->scale},
                            {"bandwidths", to_std(init_params->bandwidths)},
                            {"noise_var", init_params->noise_var}};
    }
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig config;

    const json& obj = require(j, "objective");
    config.objective.kind = require(obj, "kind").get<std::string>();
    config.objective.num_objectives = obj.value("K", 0);
    config.objective.dim = obj.value("d", 0);
    config.objective.gp_seed = obj.value("gp_seed", std::uint64_t{0});
    config.objective.command = obj.value("command", std::string{});
    config.objective.timeout_seconds = obj.value("timeout_seconds", 300.0);
    if (obj.contains("noise_stds")) {
        config.objective.noise_stds = to_eigen(obj["noise_stds"], "objective.noise_stds");
    }

    config.budget = require(j, "T").get<int>();
    config.n_init = j.value("n_init", 10);

    const json& acq = require(j, "acquisition");
    const std::string method = require(acq, "method").get<std::string>();
    if (method == "ts") {
        config.acquisition.method = Method::kThompson;
    } else if (method == "ucb") {
        config.acquisition.method = Method::kUcb;
    } else if (method == "random") {
        config.acquisition.method = Method::kRandomSearch;
    } else {
        throw ConfigError("config: acquisition.method must be ts, ucb, or random");
    }
    const std::string scal = require(acq, "scalarization").get<std::string>();
    if (scal == "linear") {
        config.acquisition.scalarization = Scalarization::kLinear;
    } else if (scal == "tch" || scal == "tchebychev") {
        config.acquisition.scalarization = Scalarization::kTchebychev;
    } else {
        throw ConfigError("config: acquisition.scalarization must be linear or tch");
    }
    config.acquisition.beta.coefficient = acq.value("beta_coefficient", 0.125);
    if (acq.contains("reference")) {
        config.acquisition.reference = to_eigen(acq["reference"], "acquisition.reference");
    }

    config.weight_dist = weight_dist_from_json(require(j, "weight_dist"));
    config.seed = require(j, "seed").get<std::uint64_t>();
    config.refit_every = j.value("refit_every", 10);
    config.output_path = require(j, "output_path").get<std::string>();
    if (j.contains("acq_opt")) {
        config.acq_opt.max_evals = j["acq_opt"].value("max_evals", 2000);
        config.acq_opt.local_refine_evals = j["acq_opt"].value("local_refine_evals", 200);
    }
    config.ts_features = j.value("ts_features", 512);
    if (j.contains("init_params")) {
        KernelParams p;
        p.scale = require(j["init_params"], "scale").get<double>();
        p.bandwidths = to_eigen(require(j["init_params"], "bandwidths"), "init_params.bandwidths");
        p.noise_var = require(j["init_params"], "noise_var").get<double>();
        config.init_params = p;
    }
    config.validate();
    return config;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config: invalid JSON in " + path + ": " + e.what());
    }
    return from_json(j);
}

std::string ExperimentConfig::hash() const {
    const std::string canonical = to_json().dump();
    const std::uint64_t h = fnv1a64(canonical);
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

} // namespace mobo
