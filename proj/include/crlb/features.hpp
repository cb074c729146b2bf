#pragma once

#include "crlb/common.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace crlb {

// Matrix norms used for constraint balls. MixedL2p is the (2,p) norm over
// columns; SchattenP the lp norm of the singular values; Frobenius is
// SchattenP(2).
enum class MatrixNormKind { MixedL2p, SchattenP, Frobenius };

std::string to_string(MatrixNormKind kind);

double matrix_norm(const MatrixXd& w, MatrixNormKind kind, double p = 2.0);

// Dual norm used by closed-form inner suprema: (2,p) <-> (2,p*),
// Schatten-p <-> Schatten-p*.
double matrix_dual_norm(const MatrixXd& w, MatrixNormKind kind, double p);

// Linear map x -> U x with U in a norm ball ||U^T|| <= budget; optional
// radial projection of the output onto the ball of radius output_radius.
struct LinearFeatureMap {
    MatrixXd weight;  // d x D
    MatrixNormKind constraint = MatrixNormKind::MixedL2p;
    double p = 2.0;
    double budget = 1.0;  // Lambda
    std::optional<double> output_radius;

    int input_dim() const { return static_cast<int>(weight.cols()); }
    int output_dim() const { return static_cast<int>(weight.rows()); }
};

// Bias-free ReLU network x -> U relu(V_L relu(... relu(V_1 x))) with
// Frobenius budgets per layer and on the head. Positive homogeneity of the
// class requires the absence of biases.
struct MlpFeatureMap {
    std::vector<MatrixXd> layers;       // V_1 .. V_L
    std::vector<double> layer_budgets;  // B_1 .. B_L (Frobenius)
    MatrixXd head;                      // U: d x (last hidden width)
    double head_budget = 1.0;           // Lambda (Frobenius)
    std::optional<double> output_radius;

    int input_dim() const {
        return layers.empty() ? static_cast<int>(head.cols())
                              : static_cast<int>(layers.front().cols());
    }
    int output_dim() const { return static_cast<int>(head.rows()); }
};

struct FeatureMap {
    std::variant<LinearFeatureMap, MlpFeatureMap> variant;

    bool is_linear() const { return std::holds_alternative<LinearFeatureMap>(variant); }
    const LinearFeatureMap& linear() const { return std::get<LinearFeatureMap>(variant); }
    const MlpFeatureMap& mlp() const { return std::get<MlpFeatureMap>(variant); }
    int input_dim() const;
    int output_dim() const;
    std::optional<double> output_radius() const;
    void set_output_radius(std::optional<double> r);
};

FeatureMap make_linear_map(MatrixXd weight, MatrixNormKind constraint, double p,
                           double budget, std::optional<double> output_radius = {});
FeatureMap make_mlp_map(std::vector<MatrixXd> layers, std::vector<double> layer_budgets,
                        MatrixXd head, double head_budget,
                        std::optional<double> output_radius = {});

// Radial projection onto the Euclidean ball of radius r.
VectorXd project_to_ball(const VectorXd& z, double r);

VectorXd apply(const FeatureMap& f, const VectorXd& x);

// Radial rescaling of every constrained matrix back into its ball; idempotent.
FeatureMap project_params(const FeatureMap& f);

bool params_feasible(const FeatureMap& f, double tol = 1e-9);

// Parameter gradients, laid out as [weight] for linear maps and
// [V_1 .. V_L, head] for networks.
struct ParamGradient {
    std::vector<MatrixXd> mats;
    void scale(double a);
    double squared_norm() const;
};

ParamGradient zeros_like(const FeatureMap& f);
int param_count(const FeatureMap& f);
std::vector<const MatrixXd*> param_matrices(const FeatureMap& f);
std::vector<MatrixXd*> param_matrices(FeatureMap& f);
void axpy_params(FeatureMap& f, const ParamGradient& g, double alpha);

// Accumulates w * d/dtheta [ c . f(x) ]. The ball projection uses the radial
// Jacobian on and outside the boundary; ReLU subgradient at 0 is 0.
void accumulate_functional_gradient(const FeatureMap& f, const VectorXd& x,
                                    const VectorXd& c, double w, ParamGradient& grad);

// Accumulates w * d/dtheta [ f(x).(f(xp) - f(xn)) ].
void accumulate_score_gradient(const FeatureMap& f, const VectorXd& x, const VectorXd& xp,
                               const VectorXd& xn, double w, ParamGradient& grad);

struct ScoreTerm {
    VectorXd x, xp, xn;
    double weight = 1.0;
};

ParamGradient param_gradient(const FeatureMap& f, const std::vector<ScoreTerm>& batch);

// Fresh random member of the same constraint class (Gaussian fill, projected).
FeatureMap random_member(const FeatureMap& class_spec, Rng& rng, double scale = 1.0);

}  // namespace crlb
