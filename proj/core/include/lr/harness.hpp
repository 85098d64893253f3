#pragma once

#include <filesystem>
#include <json.hpp>
#include <utility>

#include "lr/config.hpp"
#include "lr/solution_sets.hpp"
#include "lr/theory.hpp"

namespace lr {

struct RunSummary {
    Vector final_theta;
    Vector final_w;
    double h_loss = 0.0;
    double g_loss = 0.0;
    double bellman_residual = 0.0;
    double value_gap = 0.0;
    std::optional<double> dist_fvalue;
    double wall_seconds = 0.0;
    double resolved_alpha = 0.0;
    std::vector<double> resolved_beta;
    TheoryConstants constants;
    std::vector<std::string> notes;

    nlohmann::json to_json() const;
};

/// Column order is fixed: t, theta_0.., w_0.., h_loss, g_loss,
/// bellman_residual, value_gap, dist_fvalue. Values carry 17 significant
/// digits so they re-parse to bit-identical doubles; lines end with LF.
void write_trajectory_csv(const Trajectory& trajectory, const std::filesystem::path& path);

/**
 * Runs the configured experiment, writes the trajectory CSV to csv_path and a
 * JSON summary next to it (extension replaced by .summary.json). The distance
 * to the value-equivalent solution set is recorded each outer iteration when
 * the set is nonempty, and the summary carries the full constants report.
 */
std::pair<Trajectory, RunSummary> run_experiment(const ExperimentConfig& config,
                                                 const std::filesystem::path& csv_path);

/// Uses config.output as the CSV path ("trajectory.csv" when blank).
std::pair<Trajectory, RunSummary> run_experiment(const ExperimentConfig& config);

struct GeneratedInstance {
    MarkovRewardProcess mrp;
    FeatureMap features; // shared by both sides
    Vector theta_bar;    // v* = Phi theta_bar by construction

    LossContext make_context() const { return LossContext(mrp, features, features); }
};

/**
 * Random test instance with a representable fixed point: Dirichlet-row
 * transition matrix, full-column-rank Gaussian features (resampled until
 * sigma_min > 1e-3, RankFailure after 100 attempts), and r chosen so that
 * v* = Phi theta_bar exactly. Requires 1 <= d <= n so that F_w > 0.
 * Deterministic in the seed.
 */
GeneratedInstance generate_instance(std::uint64_t seed, int n, int d,
                                    std::pair<double, double> gamma_range = {0.3, 0.95});

/// Entry point behind the command-line tool; returns the process exit code
/// (0 ok, 1 config/validation error, 2 numerical failure, 3 check failure).
int cli_dispatch(const std::vector<std::string>& args);

} // namespace lr
