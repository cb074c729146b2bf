#include "crlb/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crlb {

std::string to_string(LossKind kind) {
    return kind == LossKind::Hinge ? "hinge" : "logistic";
}

LossKind loss_from_string(const std::string& name) {
    if (name == "hinge") return LossKind::Hinge;
    if (name == "logistic") return LossKind::Logistic;
    throw std::invalid_argument("unknown loss '" + name + "'");
}

std::optional<double> selfbounding_constant(LossKind kind) {
    if (kind == LossKind::Logistic) return 2.0;
    return std::nullopt;
}

double evaluate(LossKind kind, const VectorXd& scores) {
    if (scores.size() == 0) throw std::invalid_argument("evaluate: empty score vector");
    if (kind == LossKind::Hinge)
        return std::max(0.0, 1.0 + (-scores).maxCoeff());

    // log(1 + sum exp(-v_i)) = m + log(exp(-m) + sum exp(-v_i - m)),
    // m = max(0, max(-v_i)); keeps every exponent nonpositive.
    const double m = std::max(0.0, (-scores).maxCoeff());
    double acc = std::exp(-m);
    for (int i = 0; i < scores.size(); ++i) acc += std::exp(-scores[i] - m);
    return m + std::log(acc);
}

VectorXd subgradient(LossKind kind, const VectorXd& scores) {
    if (scores.size() == 0) throw std::invalid_argument("subgradient: empty score vector");
    VectorXd g = VectorXd::Zero(scores.size());
    if (kind == LossKind::Hinge) {
        int arg = 0;
        double worst = -scores[0];
        for (int i = 1; i < scores.size(); ++i) {
            if (-scores[i] > worst) {
                worst = -scores[i];
                arg = i;
            }
        }
        if (1.0 + worst > 0.0) g[arg] = -1.0;
        return g;
    }
    const double m = std::max(0.0, (-scores).maxCoeff());
    double denom = std::exp(-m);
    for (int i = 0; i < scores.size(); ++i) denom += std::exp(-scores[i] - m);
    for (int i = 0; i < scores.size(); ++i) g[i] = -std::exp(-scores[i] - m) / denom;
    return g;
}

double uniform_bound(LossKind kind, double radius, int k) {
    if (radius <= 0.0) throw std::invalid_argument("uniform_bound: radius must be > 0");
    if (k < 1) throw std::invalid_argument("uniform_bound: k must be >= 1");
    const double m = 2.0 * radius * radius;  // worst score is -2R^2
    if (kind == LossKind::Hinge) return 1.0 + m;
    // log(1 + k*exp(m)) without overflow
    return m + std::log(static_cast<double>(k)) + std::log1p(std::exp(-m) / k);
}

namespace {

VectorXd random_scores(int k, Rng& rng) {
    VectorXd v(k);
    for (int i = 0; i < k; ++i) v[i] = rng.uniform(-10.0, 10.0);
    return v;
}

}  // namespace

LipschitzReport check_lipschitz(LossKind kind, ScoreNorm norm, int trials, Rng& rng) {
    if (trials < 1) throw std::invalid_argument("check_lipschitz: trials must be >= 1");
    double max_ratio = 0.0;
    for (int t = 0; t < trials; ++t) {
        const int k = 1 + rng.below(32);
        const VectorXd a = random_scores(k, rng);
        const VectorXd b = random_scores(k, rng);
        const VectorXd diff = a - b;
        const double dist =
            norm == ScoreNorm::L2 ? diff.norm() : diff.cwiseAbs().maxCoeff();
        if (dist == 0.0) continue;
        const double ratio = std::abs(evaluate(kind, a) - evaluate(kind, b)) / dist;
        max_ratio = std::max(max_ratio, ratio);
    }
    return {kind, norm, trials, max_ratio};
}

SelfBoundingReport check_selfbounding(LossKind kind, int trials, Rng& rng) {
    if (trials < 1) throw std::invalid_argument("check_selfbounding: trials must be >= 1");
    const auto gs_opt = selfbounding_constant(kind);
    if (!gs_opt)
        throw std::invalid_argument("check_selfbounding: loss has no self-bounding constant");
    const double gs = *gs_opt;
    SelfBoundingReport report{trials, 0, std::numeric_limits<double>::infinity()};
    for (int t = 0; t < trials; ++t) {
        const int k = 1 + rng.below(32);
        const VectorXd a = random_scores(k, rng);
        const VectorXd b = random_scores(k, rng);
        const double la = evaluate(LossKind::Logistic, a);
        const double lb = evaluate(LossKind::Logistic, b);
        const double lhs = std::abs(la - lb);
        const double rhs =
            gs * std::sqrt(std::max(la, lb)) * (a - b).cwiseAbs().maxCoeff();
        const double slack = rhs - lhs;
        report.max_slack = std::min(report.max_slack, slack);
        if (slack < -1e-12) ++report.violations;
    }
    return report;
}

}  // namespace crlb
