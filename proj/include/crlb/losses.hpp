#pragma once

#include "crlb/common.hpp"

#include <optional>
#include <string>

namespace crlb {

// The two multi-negative losses: hinge max{0, 1 + max_i(-v_i)} and logistic
// log(1 + sum_i exp(-v_i)). Both are 1-Lipschitz w.r.t. the l2 and linf norms
// of the score vector; the logistic loss is additionally 2-self-bounding.
enum class LossKind { Hinge, Logistic };

std::string to_string(LossKind kind);
LossKind loss_from_string(const std::string& name);

inline double lipschitz_l2(LossKind) { return 1.0; }
inline double lipschitz_linf(LossKind) { return 1.0; }

// Self-bounding constant; only the logistic loss carries one.
std::optional<double> selfbounding_constant(LossKind kind);

// Loss value on a score vector in R^k, k >= 1. Logistic is evaluated with an
// overflow-safe log-sum-exp.
double evaluate(LossKind kind, const VectorXd& scores);

// A subgradient of the loss. Hinge tie-breaking: -1 at the smallest index
// attaining max_i(-v_i) when the hinge is strictly active, else zero.
VectorXd subgradient(LossKind kind, const VectorXd& scores);

// Uniform bound B on the loss when every score lies in [-2R^2, 2R^2].
double uniform_bound(LossKind kind, double radius, int k);

enum class ScoreNorm { L2, Linf };

struct LipschitzReport {
    LossKind loss;
    ScoreNorm norm;
    int trials;
    double max_ratio;  // max |l(a)-l(a')| / ||a-a'|| over sampled pairs
};

struct SelfBoundingReport {
    int trials;
    int violations;      // pairs with |l(a)-l(a')| > Gs*sqrt(max loss)*||a-a'||_inf
    double max_slack;    // most binding margin RHS - LHS over pairs
};

// Samples `trials` pairs with entries in [-10,10], k in {1..32}; identical
// pairs contribute nothing.
LipschitzReport check_lipschitz(LossKind kind, ScoreNorm norm, int trials, Rng& rng);

// Logistic only (throws for hinge); verifies
// |l(a)-l(a')| <= Gs*max{l(a),l(a')}^(1/2)*||a-a'||_inf with Gs = 2.
SelfBoundingReport check_selfbounding(LossKind kind, int trials, Rng& rng);

}  // namespace crlb
