#include "crlb/bounds.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace crlb {

std::string to_string(TheoremId id) {
    switch (id) {
        case TheoremId::T_L2: return "T_L2";
        case TheoremId::T_LinfComplexity: return "T_LinfComplexity";
        case TheoremId::T_Linf: return "T_Linf";
        case TheoremId::T_SelfBounding: return "T_SelfBounding";
        case TheoremId::P_Linear2p: return "P_Linear2p";
        case TheoremId::P_LinearSchatten: return "P_LinearSchatten";
        case TheoremId::P_Dnn: return "P_Dnn";
        case TheoremId::Baseline: return "Baseline";
    }
    return "?";
}

double BoundReport::component(const std::string& name) const {
    for (const auto& [key, value] : components)
        if (key == name) return value;
    throw std::invalid_argument("BoundReport: no component '" + name + "'");
}

namespace {

void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("bound: delta must lie in (0,1)");
}

double finish(BoundReport& report) {
    double total = 0.0;
    for (const auto& [name, value] : report.components) total += value;
    report.total = total;
    return total;
}

double confidence_two_sided(double b, int n, double delta) {
    return 3.0 * b * std::sqrt(std::log(2.0 / delta) / (2.0 * n));
}

struct LinfParts {
    double base;     // 24 G (R^2+1) / sqrt(n)
    double chained;  // 48 G sqrt(k) rad_h chain_factor
};

LinfParts linf_parts(double rad_h, double radius, double g, int n, int k) {
    LinfParts parts;
    parts.base = 24.0 * g * (radius * radius + 1.0) / std::sqrt(static_cast<double>(n));
    parts.chained = 48.0 * g * std::sqrt(static_cast<double>(k)) * rad_h *
                    chain_factor(radius, n, k);
    return parts;
}

}  // namespace

double chain_factor(double radius, int n, int k) {
    if (n < 1 || k < 1) throw std::invalid_argument("chain_factor: n, k must be >= 1");
    const double r2 = radius * radius;
    const double depth =
        std::ceil(std::log2(r2 * std::sqrt(static_cast<double>(n)) / 12.0));
    const double clamped = std::max(1.0, depth);
    return 1.0 + std::log(4.0 * r2 * std::pow(static_cast<double>(n), 1.5) * k) * clamped;
}

BoundReport bound_l2(double emp_risk, double term_a, double radius, double g2, double b,
                     int n, double delta) {
    check_delta(delta);
    if (n < 1) throw std::invalid_argument("bound_l2: n must be >= 1");
    BoundReport report;
    report.theorem_id = TheoremId::T_L2;
    report.components = {
        {"empirical_risk", emp_risk},
        {"complexity", 4.0 * std::sqrt(6.0) * radius * g2 * term_a / n},
        {"confidence", confidence_two_sided(b, n, delta)},
    };
    finish(report);
    report.inputs = {{"term_A", term_a}, {"R", radius},   {"G2", g2}, {"B", b},
                     {"n", double(n)},   {"delta", delta}};
    report.inputs["complexity_only"] = std::sqrt(24.0) * radius * g2 * term_a / n;
    return report;
}

double complexity_linf(double rad_h, double radius, double g, int n, int k) {
    if (rad_h < 0.0) throw std::invalid_argument("complexity_linf: rad_h must be >= 0");
    const LinfParts parts = linf_parts(rad_h, radius, g, n, k);
    return parts.base + parts.chained;
}

BoundReport bound_linf(double emp_risk, double term_c, double radius, double g, double b,
                       int n, int k, double delta) {
    check_delta(delta);
    if (n < 2 || k < 1) throw std::invalid_argument("bound_linf: need n >= 2, k >= 1");
    const double rad_h = std::sqrt(12.0) * radius * term_c / (static_cast<double>(n) * k);
    const LinfParts parts = linf_parts(rad_h, radius, g, n, k);
    BoundReport report;
    report.theorem_id = TheoremId::T_Linf;
    report.components = {
        {"empirical_risk", emp_risk},
        {"confidence", confidence_two_sided(b, n, delta)},
        {"radius_term", 2.0 * parts.base},
        {"chained_complexity", 2.0 * parts.chained},
    };
    finish(report);
    report.inputs = {{"term_C", term_c}, {"R", radius},       {"G", g},
                     {"B", b},           {"n", double(n)},    {"k", double(k)},
                     {"delta", delta},   {"chain_factor", chain_factor(radius, n, k)}};
    return report;
}

BoundReport bound_selfbounding(double emp_risk, double rad_h, double radius, LossKind loss,
                               double b, int n, int k, double delta) {
    check_delta(delta);
    if (n < 3) throw std::invalid_argument("bound_selfbounding: n must be >= 3");
    const auto gs_opt = selfbounding_constant(loss);
    if (!gs_opt)
        throw std::invalid_argument("bound_selfbounding: loss is not self-bounding");
    const double gs = *gs_opt;
    const LinfParts parts = linf_parts(rad_h, radius, gs, n, k);
    const double a = std::sqrt(2.0) * (parts.base + parts.chained);
    const double r_hat = a * a;
    const double r0 =
        b * (std::log(1.0 / delta) + 6.0 * std::log(std::log(static_cast<double>(n)))) / n;
    BoundReport report;
    report.theorem_id = TheoremId::T_SelfBounding;
    report.components = {
        {"empirical_risk", emp_risk},
        {"fixed_point", 90.0 * r_hat},
        {"confidence", 90.0 * r0},
        {"cross_term", 4.0 * std::sqrt(emp_risk * (r_hat + r0))},
    };
    finish(report);
    report.inputs = {{"rad_H", rad_h}, {"R", radius},    {"Gs", gs},
                     {"B", b},         {"n", double(n)}, {"k", double(k)},
                     {"delta", delta}, {"a", a},         {"r_hat", r_hat},
                     {"r0", r0}};
    return report;
}

namespace {

double conjugate(double q) {
    if (q <= 1.0) return std::numeric_limits<double>::infinity();
    return q / (q - 1.0);
}

}  // namespace

double complexity_upper_linear(const std::vector<VectorXd>& points, double p, double lambda,
                               int d, MatrixNormKind kind) {
    if (p < 1.0) throw std::invalid_argument("complexity_upper_linear: p must be >= 1");
    if (d < 1) throw std::invalid_argument("complexity_upper_linear: d must be >= 1");
    if (points.empty()) return 0.0;
    double sq_sum = 0.0;
    for (const auto& x : points) sq_sum += x.squaredNorm();
    const double root_sq_sum = std::sqrt(sq_sum);
    const double dd = static_cast<double>(d);

    if (kind == MatrixNormKind::MixedL2p || kind == MatrixNormKind::Frobenius) {
        const double effective_p = kind == MatrixNormKind::Frobenius ? 2.0 : p;
        // admissible grid: geometric sweep from p, the conjugate-log(d) point,
        // capped so q* stays below max(2, log d) + 2
        const double qstar_cap = std::max(2.0, std::log(dd)) + 2.0;
        std::vector<double> grid;
        for (double q = std::max(effective_p, 1.0 + 1e-9); ; q *= 1.25) {
            if (conjugate(q) <= qstar_cap) grid.push_back(q);
            if (conjugate(q) <= 1.0 + 1e-9 || grid.size() > 200) break;
        }
        if (dd > std::exp(1.0)) {
            const double q_log = std::log(dd) / (std::log(dd) - 1.0);
            if (q_log >= effective_p) grid.push_back(q_log);
        }
        grid.push_back(std::max(effective_p, 2.0));
        double best = std::numeric_limits<double>::infinity();
        for (double q : grid) {
            const double qs = conjugate(q);
            if (!std::isfinite(qs)) continue;
            const double value = lambda * std::pow(dd, 1.0 / qs) *
                                 std::max(std::sqrt(qs - 1.0), 1.0) * root_sq_sum;
            best = std::min(best, value);
        }
        return best;
    }

    if (p > 2.0)
        throw std::invalid_argument("complexity_upper_linear: Schatten form requires p <= 2");
    const int dim = static_cast<int>(points.front().size());
    MatrixXd outer = MatrixXd::Zero(dim, dim);
    for (const auto& x : points) outer.noalias() += x * x.transpose();
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(dd * outer);
    VectorXd sv = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    double best = std::numeric_limits<double>::infinity();
    for (double q = p; q <= 2.0 + 1e-12; q += (2.0 - p) / 8.0 + 1e-9) {
        const double qq = std::min(q, 2.0);
        const double qs = conjugate(qq);
        double schatten;
        if (std::isfinite(qs)) {
            double acc = 0.0;
            for (int i = 0; i < sv.size(); ++i) acc += std::pow(sv[i], qs);
            schatten = std::pow(acc, 1.0 / qs);
        } else {
            schatten = sv.maxCoeff();
        }
        const double value = lambda * std::pow(2.0, -0.25) * std::sqrt(qs * kPi / std::exp(1.0)) *
                             std::max(schatten, std::pow(dd, 1.0 / qs) * root_sq_sum);
        best = std::min(best, value);
        if (qq >= 2.0) break;
    }
    return best;
}

double complexity_upper_dnn(const std::vector<VectorXd>& points, int d, double lambda,
                            const std::vector<double>& layer_budgets) {
    if (layer_budgets.empty())
        throw std::invalid_argument("complexity_upper_dnn: at least one layer required");
    if (d < 1) throw std::invalid_argument("complexity_upper_dnn: d must be >= 1");
    const double depth = static_cast<double>(layer_budgets.size());
    double product = lambda;
    for (double bl : layer_budgets) product *= bl;
    double sq_sum = 0.0, pair_sq = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        sq_sum += points[i].squaredNorm();
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double ip = points[i].dot(points[j]);
            pair_sq += ip * ip;
        }
    }
    return std::sqrt(static_cast<double>(d)) * product *
           std::sqrt(16.0 * depth * std::sqrt(pair_sq) + sq_sum);
}

BoundReport baseline_bound(double emp_risk, double term_b, double radius, double g2,
                           double b, int n, int k, double delta) {
    check_delta(delta);
    if (n < 1 || k < 1) throw std::invalid_argument("baseline_bound: need n >= 1, k >= 1");
    BoundReport report;
    report.theorem_id = TheoremId::Baseline;
    report.components = {
        {"empirical_risk", emp_risk},
        {"complexity",
         4.0 * std::sqrt(6.0) * g2 * radius * std::sqrt(static_cast<double>(k)) * term_b / n},
        {"confidence", 3.0 / std::sqrt(2.0) * b * std::sqrt(std::log(1.0 / delta) / n)},
    };
    finish(report);
    report.inputs = {{"term_B", term_b}, {"R", radius},    {"G2", g2},
                     {"B", b},           {"n", double(n)}, {"k", double(k)},
                     {"delta", delta}};
    return report;
}

BoundReport downstream_bound(const BoundReport& report) {
    BoundReport out = report;
    if (report.complexity_source.find("linear") != std::string::npos ||
        report.complexity_source.find("2p") != std::string::npos)
        out.downstream_of = "linear_transfer";
    else if (report.complexity_source.find("dnn") != std::string::npos ||
             report.complexity_source.find("mlp") != std::string::npos)
        out.downstream_of = "mlp_transfer";
    else
        out.downstream_of = "transfer";
    return out;
}

}  // namespace crlb
