#pragma once

#include <filesystem>
#include <string>

#include "lr/algo.hpp"

namespace lr {

/// One experiment, fully specified: process, feature maps, initial point,
/// algorithm and its hyperparameters, gradient mode, and output path.
struct ExperimentConfig {
    Matrix P;
    Vector r;
    double gamma = 0.0;
    std::optional<Vector> rho; // absent = "stationary"

    Matrix features_theta;
    std::optional<Matrix> features_w; // absent = same as features_theta

    Vector init_theta;
    Vector init_w;

    enum class AlgoName { Lr, TdCopy, TdPolyak };
    AlgoName algo = AlgoName::Lr;
    Hyperparams hyperparams;

    GradientOptions gradients;
    bool instrument = false;
    std::string output; // CSV path; empty = caller decides

    /// Validates cross-dimensions and builds the loss context (computing the
    /// stationary distribution when rho is absent).
    LossContext make_context() const;
};

/// Parses and validates a config file. Unknown fields are rejected; every
/// error message names the offending field path.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Same, from an in-memory JSON document.
ExperimentConfig parse_config(const std::string& json_text, const std::string& origin);

/// Canonical JSON for the two bundled toy experiments, keyed "b1" and "b2".
/// Throws SchemaError for unknown names.
const std::string& bundled_config(const std::string& name);

} // namespace lr
