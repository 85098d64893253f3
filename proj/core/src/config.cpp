#include "lr/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace lr {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    raise(ErrorCode::SchemaError, path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path, std::set<std::string> allowed) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            schema_error(path.empty() ? item.key() : path + "." + item.key(), "unknown field");
        }
    }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(path.empty() ? key : path + "." + key, "missing required field");
    return *it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) schema_error(path, "expected a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) schema_error(path, "expected an integer");
    return v.get<int>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) schema_error(path, "expected a string");
    return v.get<std::string>();
}

Vector as_vector(const json& v, const std::string& path) {
    if (!v.is_array()) schema_error(path, "expected an array of numbers");
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = as_number(v[i], path + "[" + std::to_string(i) + "]");
    }
    return out;
}

Matrix as_matrix(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) schema_error(path, "expected a non-empty array of rows");
    const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
    if (cols == 0) schema_error(path, "rows must be non-empty arrays");
    Matrix out(v.size(), cols);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string row_path = path + "[" + std::to_string(i) + "]";
        if (!v[i].is_array() || v[i].size() != cols) {
            schema_error(row_path, "rows must all have the same length");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                as_number(v[i][j], row_path + "[" + std::to_string(j) + "]");
        }
    }
    return out;
}

Alpha parse_alpha(const json& v, const std::string& path) {
    if (v.is_string()) {
        if (v.get<std::string>() == "one_over_L") return Alpha::one_over_l();
        schema_error(path, "expected a number or the token \"one_over_L\"");
    }
    return Alpha::number(as_number(v, path));
}

Beta parse_beta(const json& v, const std::string& path) {
    if (v.is_string()) {
        if (v.get<std::string>() == "theorem") return Beta::theorem();
        schema_error(path, "expected a number, an array, or the token \"theorem\"");
    }
    if (v.is_array()) {
        std::vector<double> schedule;
        schedule.reserve(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            schedule.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
        }
        return Beta::schedule(std::move(schedule));
    }
    return Beta::scalar(as_number(v, path));
}

} // namespace

LossContext ExperimentConfig::make_context() const {
    MarkovRewardProcess mrp = validate_mrp(P, r, gamma, rho);
    FeatureMap fm_theta(features_theta);
    FeatureMap fm_w(features_w.value_or(features_theta));
    LossContext ctx(std::move(mrp), std::move(fm_theta), std::move(fm_w));
    if (init_theta.size() != ctx.dim_theta()) {
        schema_error("init.theta", "length does not match features_theta columns");
    }
    if (init_w.size() != ctx.dim_w()) {
        schema_error("init.w", "length does not match features_w columns");
    }
    return ctx;
}

ExperimentConfig parse_config(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        raise(ErrorCode::ParseError, origin + ": " + e.what());
    }
    if (!doc.is_object()) raise(ErrorCode::SchemaError, origin + ": top level must be an object");

    reject_unknown(doc, "", {"mrp", "features_theta", "features_w", "init", "algo", "gradients",
                             "instrument", "output"});

    ExperimentConfig cfg;

    const json& mrp = require(doc, "", "mrp");
    reject_unknown(mrp, "mrp", {"P", "r", "gamma", "rho"});
    cfg.P = as_matrix(require(mrp, "mrp", "P"), "mrp.P");
    cfg.r = as_vector(require(mrp, "mrp", "r"), "mrp.r");
    cfg.gamma = as_number(require(mrp, "mrp", "gamma"), "mrp.gamma");
    if (mrp.contains("rho")) {
        const json& rho = mrp["rho"];
        if (rho.is_string()) {
            if (rho.get<std::string>() != "stationary") {
                schema_error("mrp.rho", "expected an array or the token \"stationary\"");
            }
        } else {
            cfg.rho = as_vector(rho, "mrp.rho");
        }
    }

    cfg.features_theta = as_matrix(require(doc, "", "features_theta"), "features_theta");
    if (doc.contains("features_w")) {
        cfg.features_w = as_matrix(doc["features_w"], "features_w");
    }

    const json& init = require(doc, "", "init");
    reject_unknown(init, "init", {"theta", "w"});
    cfg.init_theta = as_vector(require(init, "init", "theta"), "init.theta");
    cfg.init_w = as_vector(require(init, "init", "w"), "init.w");

    const json& algo = require(doc, "", "algo");
    reject_unknown(algo, "algo", {"name", "T", "K_L", "K_R", "alpha", "beta", "tau"});
    const std::string name = as_string(require(algo, "algo", "name"), "algo.name");
    if (name == "lr") cfg.algo = ExperimentConfig::AlgoName::Lr;
    else if (name == "td_copy") cfg.algo = ExperimentConfig::AlgoName::TdCopy;
    else if (name == "td_polyak") cfg.algo = ExperimentConfig::AlgoName::TdPolyak;
    else schema_error("algo.name", "expected one of lr, td_copy, td_polyak");

    cfg.hyperparams.T = as_int(require(algo, "algo", "T"), "algo.T");
    cfg.hyperparams.K_L = as_int(require(algo, "algo", "K_L"), "algo.K_L");
    if (algo.contains("K_R")) cfg.hyperparams.K_R = as_int(algo["K_R"], "algo.K_R");
    if (algo.contains("alpha")) cfg.hyperparams.alpha = parse_alpha(algo["alpha"], "algo.alpha");
    if (algo.contains("beta")) cfg.hyperparams.beta = parse_beta(algo["beta"], "algo.beta");
    if (algo.contains("tau")) cfg.hyperparams.tau = as_number(algo["tau"], "algo.tau");

    if (doc.contains("gradients")) {
        const json& g = doc["gradients"];
        reject_unknown(g, "gradients", {"mode", "batch_size", "seed"});
        const std::string mode = as_string(require(g, "gradients", "mode"), "gradients.mode");
        if (mode == "exact") cfg.gradients.mode = GradientOptions::Mode::Exact;
        else if (mode == "sampled") cfg.gradients.mode = GradientOptions::Mode::Sampled;
        else schema_error("gradients.mode", "expected exact or sampled");
        if (g.contains("batch_size")) {
            cfg.gradients.batch_size = as_int(g["batch_size"], "gradients.batch_size");
            if (cfg.gradients.batch_size < 1) schema_error("gradients.batch_size", "must be >= 1");
        }
        if (g.contains("seed")) {
            if (!g["seed"].is_number_unsigned() && !g["seed"].is_number_integer()) {
                schema_error("gradients.seed", "expected an integer");
            }
            cfg.gradients.seed = g["seed"].get<std::uint64_t>();
        }
    }

    if (doc.contains("instrument")) {
        if (!doc["instrument"].is_boolean()) schema_error("instrument", "expected a boolean");
        cfg.instrument = doc["instrument"].get<bool>();
    }
    if (doc.contains("output")) {
        if (!doc["output"].is_string()) schema_error("output", "expected a string");
        cfg.output = doc["output"].get<std::string>();
    }

    cfg.hyperparams.validate();
    cfg.make_context(); // full validation: stochasticity, discount, dimensions
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        raise(ErrorCode::IOError, "cannot open config file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string());
}

const std::string& bundled_config(const std::string& name) {
    static const std::string b1 = R"json({
  "mrp": {
    "P": [[0.6, 0.4], [0.2, 0.8]],
    "r": [1, 1],
    "gamma": 0.5,
    "rho": "stationary"
  },
  "features_theta": [[1, 2, 1], [1, 1, 2]],
  "init": { "theta": [1.2, 2, 0.5], "w": [0.1, 2, 0.5] },
  "algo": {
    "name": "lr",
    "T": 800,
    "K_L": 400,
    "K_R": 1,
    "alpha": "one_over_L",
    "beta": 0.022727272727272728
  },
  "output": "b1.csv"
})json";
    static const std::string b2 = R"json({
  "mrp": {
    "P": [[0.6, 0.4], [0.2, 0.8]],
    "r": [1, 1],
    "gamma": 0.5,
    "rho": "stationary"
  },
  "features_theta": [[1, 2, 1], [1, 1, 2]],
  "features_w": [[1, 2], [2, 1]],
  "init": { "theta": [1.2, 0, 0.3], "w": [0.3, 0.6] },
  "algo": {
    "name": "lr",
    "T": 800,
    "K_L": 400,
    "K_R": 1,
    "alpha": "one_over_L",
    "beta": 0.022727272727272728
  },
  "output": "b2.csv"
})json";
    if (name == "b1") return b1;
    if (name == "b2") return b2;
    raise(ErrorCode::SchemaError, "no bundled config named " + name + " (expected b1 or b2)");
}

} // namespace lr
