#include "lr/harness.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include "lr/rng.hpp"
#include "lr/serialize.hpp"

namespace lr {

using nlohmann::json;

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

json RunSummary::to_json() const {
    json out = {
        {"final_theta", vector_to_json(final_theta)},
        {"final_w", vector_to_json(final_w)},
        {"h_loss", h_loss},
        {"g_loss", g_loss},
        {"bellman_residual", bellman_residual},
        {"value_gap", value_gap},
        {"dist_fvalue", dist_fvalue.has_value() ? json(*dist_fvalue) : json(nullptr)},
        {"wall_seconds", wall_seconds},
        {"resolved_alpha", resolved_alpha},
        {"resolved_beta", resolved_beta},
        {"constants", lr::to_json(constants)},
        {"notes", notes},
    };
    return out;
}

void write_trajectory_csv(const Trajectory& trajectory, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary); // binary keeps LF endings everywhere
    if (!out) {
        raise(ErrorCode::IOError, "cannot open " + path.string() + " for writing");
    }
    const auto& first = trajectory.records.front();
    out << "t";
    for (Eigen::Index i = 0; i < first.theta.size(); ++i) out << ",theta_" << i;
    for (Eigen::Index i = 0; i < first.w.size(); ++i) out << ",w_" << i;
    out << ",h_loss,g_loss,bellman_residual,value_gap,dist_fvalue\n";

    for (const auto& rec : trajectory.records) {
        out << rec.t;
        for (Eigen::Index i = 0; i < rec.theta.size(); ++i) out << ',' << format_double(rec.theta(i));
        for (Eigen::Index i = 0; i < rec.w.size(); ++i) out << ',' << format_double(rec.w(i));
        out << ',' << format_double(rec.h_loss);
        out << ',' << format_double(rec.g_loss);
        out << ',' << format_double(rec.bellman_residual);
        out << ',' << format_double(rec.value_gap);
        out << ',';
        if (rec.dist_fvalue) out << format_double(*rec.dist_fvalue);
        out << '\n';
    }
    if (!out) {
        raise(ErrorCode::IOError, "write to " + path.string() + " failed");
    }
}

std::pair<Trajectory, RunSummary> run_experiment(const ExperimentConfig& config,
                                                 const std::filesystem::path& csv_path) {
    const LossContext ctx = config.make_context();

    RunOptions options;
    options.instrument = config.instrument;
    options.gradients = config.gradients;

    const AffineSet f_value = solve_f_value(ctx);
    if (!f_value.empty) {
        options.dist_fvalue = [&f_value](const Vector& theta, const Vector& w) {
            Vector stacked(theta.size() + w.size());
            stacked << theta, w;
            return membership_and_distance(f_value, stacked).residual;
        };
    }

    const ParamPair init{config.init_theta, config.init_w};
    const auto start = std::chrono::steady_clock::now();
    Trajectory trajectory;
    switch (config.algo) {
    case ExperimentConfig::AlgoName::Lr:
        trajectory = run_lr(ctx, init, config.hyperparams, options);
        break;
    case ExperimentConfig::AlgoName::TdCopy:
        trajectory = run_td_copy(ctx, init, config.hyperparams, options);
        break;
    case ExperimentConfig::AlgoName::TdPolyak:
        trajectory = run_td_polyak(ctx, init, config.hyperparams, options);
        break;
    }
    const auto stop = std::chrono::steady_clock::now();

    RunSummary summary;
    const auto& last = trajectory.final();
    summary.final_theta = last.theta;
    summary.final_w = last.w;
    summary.h_loss = last.h_loss;
    summary.g_loss = last.g_loss;
    summary.bellman_residual = last.bellman_residual;
    summary.value_gap = last.value_gap;
    summary.dist_fvalue = last.dist_fvalue;
    summary.wall_seconds = std::chrono::duration<double>(stop - start).count();
    summary.resolved_alpha = trajectory.resolved_alpha;
    summary.resolved_beta = trajectory.resolved_beta;
    summary.constants =
        schedule_constants(linear_constants(ctx), config.hyperparams.K_L, config.hyperparams.K_R);
    if (f_value.empty) {
        summary.notes.emplace_back(
            "value-equivalent solution set is empty; dist_fvalue omitted from the CSV");
    }

    write_trajectory_csv(trajectory, csv_path);
    std::filesystem::path summary_path = csv_path;
    summary_path.replace_extension(".summary.json");
    std::ofstream sout(summary_path, std::ios::binary);
    if (!sout) {
        raise(ErrorCode::IOError, "cannot open " + summary_path.string() + " for writing");
    }
    sout << summary.to_json().dump(2) << '\n';

    return {std::move(trajectory), std::move(summary)};
}

std::pair<Trajectory, RunSummary> run_experiment(const ExperimentConfig& config) {
    const std::filesystem::path path = config.output.empty() ? "trajectory.csv" : config.output;
    return run_experiment(config, path);
}

GeneratedInstance generate_instance(std::uint64_t seed, int n, int d,
                                    std::pair<double, double> gamma_range) {
    if (n < 1 || d < 1 || d > n) {
        raise(ErrorCode::PreconditionViolated,
              "instance generation requires 1 <= d <= n for full column rank");
    }
    Rng rng(Rng::splitmix64(seed ^ 0xA0761D6478BD642Full));

    // Dirichlet(1,...,1) rows via normalized exponentials; strictly positive
    // entries keep the chain irreducible and the stationary solve unique.
    Matrix P(n, n);
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            double u = rng.uniform01();
            while (u <= 0.0) u = rng.uniform01();
            P(i, j) = -std::log(u);
            row_sum += P(i, j);
        }
        P.row(i) /= row_sum;
    }

    const double gamma = rng.uniform(gamma_range.first, gamma_range.second);

    Matrix phi(n, d);
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j) phi(i, j) = rng.normal();
        }
        Eigen::JacobiSVD<Matrix> svd(phi);
        ok = svd.singularValues()(svd.singularValues().size() - 1) > 1e-3;
    }
    if (!ok) {
        raise(ErrorCode::RankFailure, "could not sample a full-column-rank feature matrix");
    }

    Vector theta_bar(d);
    for (int j = 0; j < d; ++j) theta_bar(j) = rng.normal();

    const Vector v_star = phi * theta_bar;
    const Vector r = (Matrix::Identity(n, n) - gamma * P) * v_star;

    MarkovRewardProcess mrp = validate_mrp(std::move(P), r, gamma);
    return GeneratedInstance{std::move(mrp), FeatureMap(std::move(phi)), std::move(theta_bar)};
}

} // namespace lr
