#include "lr/serialize.hpp"

#include <algorithm>
#include <cmath>

namespace lr {

using nlohmann::json;

namespace {

json number_or_null(double v) {
    if (std::isnan(v) || std::isinf(v)) return nullptr;
    return v;
}

} // namespace

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json matrix_to_json(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

json to_json(const TheoryConstants& c) {
    json flags = {
        {"F_w_positive", c.premise_Fw_positive},
        {"F_w_gt_F_theta", c.premise_Fw_gt_Ftheta},
        {"F_w_gt_7kappa1sq", c.premise_Fw_gt_7kappa1sq},
        {"F_w_gt_4kappa1sq_over_1mzeta", c.premise_Fw_gt_4kappa1sq_over_1mzeta},
        {"B2_ge_8A2", c.premise_B2_ge_8A2},
    };
    json out = {
        {"F_w", number_or_null(c.F_w)},
        {"L", number_or_null(c.L)},
        {"F_theta", number_or_null(c.F_theta)},
        {"kappa1", number_or_null(c.kappa1)},
        {"K_L", c.K_L},
        {"K_R", c.K_R},
        {"kappa", number_or_null(c.kappa)},
        {"eta", number_or_null(c.eta)},
        {"a", number_or_null(c.a)},
        {"zeta", number_or_null(c.zeta)},
        {"A", number_or_null(c.A)},
        {"B", number_or_null(c.B)},
        {"J", number_or_null(c.J)},
        {"beta0", number_or_null(c.beta0)},
        {"beta_k", number_or_null(c.beta_k)},
        {"E_factor", number_or_null(c.E_factor)},
        {"G_factor", number_or_null(c.G_factor)},
        {"sigma_sq_first", number_or_null(c.sigma_sq_first)},
        {"sigma_sq_later", number_or_null(c.sigma_sq_later)},
        {"sigma", number_or_null(c.sigma)},
        {"premises", std::move(flags)},
        {"theorem_applicable", c.theorem_applicable()},
        {"sigma_check", c.theorem_applicable() ? "active" : "not applicable"},
        {"F_w_le_2kappa1sq", c.fw_le_2kappa1sq},
        {"notes", c.notes},
    };
    return out;
}

json to_json(const AffineSet& set) {
    return {
        {"ambient_dim", set.ambient_dim},
        {"dim", set.dim()},
        {"empty", set.empty},
        {"residual", set.residual},
        {"particular", vector_to_json(set.particular)},
        {"basis", matrix_to_json(set.basis)},
    };
}

json to_json(const ClaimsReport& report) {
    return {
        {"vacuous", report.vacuous},
        {"claim1_pass", report.claim1_pass},
        {"claim2_pass", report.claim2_pass},
        {"dims_pass", report.dims_pass},
        {"claim1_max_residual", report.claim1_max_residual},
        {"claim2_max_residual", report.claim2_max_residual},
        {"dim_f_single", report.dim_f_single},
        {"dim_f_pair", report.dim_f_pair},
        {"dim_f_value", report.dim_f_value},
        {"samples", report.samples},
        {"pass", report.pass()},
    };
}

json to_json(const LemmaReport& report) {
    auto max_of = [](const std::vector<double>& v) {
        return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
    };
    return {
        {"pass", report.pass},
        {"tol", report.tol},
        {"max_slack", report.max_slack},
        {"max_slack_descent", max_of(report.slack_descent)},
        {"max_slack_inner_step", max_of(report.slack_inner_step)},
        {"max_slack_outer_step", max_of(report.slack_outer_step)},
        {"checks_descent", report.slack_descent.size()},
        {"checks_inner_step", report.slack_inner_step.size()},
        {"checks_outer_step", report.slack_outer_step.size()},
        {"reference_theta", vector_to_json(report.reference.theta)},
        {"reference_w", vector_to_json(report.reference.w)},
    };
}

} // namespace lr
