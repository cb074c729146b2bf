#include "crlb/features.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace crlb {

std::string to_string(MatrixNormKind kind) {
    switch (kind) {
        case MatrixNormKind::MixedL2p: return "l2p";
        case MatrixNormKind::SchattenP: return "schatten";
        case MatrixNormKind::Frobenius: return "frobenius";
    }
    return "?";
}

namespace {

double lp_norm(const VectorXd& v, double p) {
    if (!std::isfinite(p)) return v.cwiseAbs().maxCoeff();
    if (p == 2.0) return v.norm();
    if (p == 1.0) return v.cwiseAbs().sum();
    double acc = 0.0;
    for (int i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]), p);
    return std::pow(acc, 1.0 / p);
}

VectorXd singular_values(const MatrixXd& w) {
    Eigen::JacobiSVD<MatrixXd> svd(w);
    return svd.singularValues();
}

double conjugate_exponent(double p) {
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    if (!std::isfinite(p)) return 1.0;
    return p / (p - 1.0);
}

}  // namespace

double matrix_norm(const MatrixXd& w, MatrixNormKind kind, double p) {
    if (kind == MatrixNormKind::Frobenius) return w.norm();
    if (p < 1.0) throw std::invalid_argument("matrix_norm: p must be >= 1");
    if (kind == MatrixNormKind::MixedL2p) {
        VectorXd col_norms(w.cols());
        for (int i = 0; i < w.cols(); ++i) col_norms[i] = w.col(i).norm();
        return lp_norm(col_norms, p);
    }
    return lp_norm(singular_values(w), p);
}

double matrix_dual_norm(const MatrixXd& w, MatrixNormKind kind, double p) {
    if (kind == MatrixNormKind::Frobenius) return w.norm();
    return matrix_norm(w, kind, conjugate_exponent(p));
}

int FeatureMap::input_dim() const {
    return is_linear() ? linear().input_dim() : mlp().input_dim();
}

int FeatureMap::output_dim() const {
    return is_linear() ? linear().output_dim() : mlp().output_dim();
}

std::optional<double> FeatureMap::output_radius() const {
    return is_linear() ? linear().output_radius : mlp().output_radius;
}

void FeatureMap::set_output_radius(std::optional<double> r) {
    if (is_linear())
        std::get<LinearFeatureMap>(variant).output_radius = r;
    else
        std::get<MlpFeatureMap>(variant).output_radius = r;
}

FeatureMap make_linear_map(MatrixXd weight, MatrixNormKind constraint, double p,
                           double budget, std::optional<double> output_radius) {
    if (constraint != MatrixNormKind::Frobenius && p < 1.0)
        throw std::invalid_argument("make_linear_map: p must be >= 1");
    if (constraint == MatrixNormKind::SchattenP && p > 2.0)
        throw std::invalid_argument("make_linear_map: Schatten constraint requires p <= 2");
    if (budget < 0.0) throw std::invalid_argument("make_linear_map: negative budget");
    LinearFeatureMap f;
    f.weight = std::move(weight);
    f.constraint = constraint;
    f.p = p;
    f.budget = budget;
    f.output_radius = output_radius;
    return FeatureMap{std::move(f)};
}

FeatureMap make_mlp_map(std::vector<MatrixXd> layers, std::vector<double> layer_budgets,
                        MatrixXd head, double head_budget,
                        std::optional<double> output_radius) {
    if (layers.size() != layer_budgets.size())
        throw std::invalid_argument("make_mlp_map: one budget per layer required");
    int prev = layers.empty() ? static_cast<int>(head.cols())
                              : static_cast<int>(layers.front().cols());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (layers[l].cols() != prev)
            throw std::invalid_argument("make_mlp_map: layer shape mismatch");
        prev = static_cast<int>(layers[l].rows());
    }
    if (head.cols() != prev) throw std::invalid_argument("make_mlp_map: head shape mismatch");
    MlpFeatureMap f;
    f.layers = std::move(layers);
    f.layer_budgets = std::move(layer_budgets);
    f.head = std::move(head);
    f.head_budget = head_budget;
    f.output_radius = output_radius;
    return FeatureMap{std::move(f)};
}

VectorXd project_to_ball(const VectorXd& z, double r) {
    const double norm = z.norm();
    if (norm <= r) return z;
    return z * (r / norm);
}

namespace {

VectorXd relu(const VectorXd& z) { return z.cwiseMax(0.0); }

// Forward pass with cached activations: a[0] = x, a[l] = relu(V_l a[l-1]),
// raw = head a[L], out = projected raw.
struct Forward {
    std::vector<VectorXd> activations;
    VectorXd raw;
    VectorXd out;
};

Forward forward_mlp(const MlpFeatureMap& f, const VectorXd& x) {
    Forward fw;
    fw.activations.reserve(f.layers.size() + 1);
    fw.activations.push_back(x);
    for (const auto& v : f.layers) fw.activations.push_back(relu(v * fw.activations.back()));
    fw.raw = f.head * fw.activations.back();
    fw.out = f.output_radius ? project_to_ball(fw.raw, *f.output_radius) : fw.raw;
    return fw;
}

// c pulled back through the ball projection at raw output z: identity strictly
// inside, (r/||z||)(I - zz^T/||z||^2) on and outside the boundary.
VectorXd pull_back_projection(const VectorXd& c, const VectorXd& raw,
                              std::optional<double> radius) {
    if (!radius) return c;
    const double norm = raw.norm();
    if (norm < *radius || norm == 0.0) return c;
    const VectorXd unit = raw / norm;
    return (*radius / norm) * (c - unit * unit.dot(c));
}

}  // namespace

VectorXd apply(const FeatureMap& f, const VectorXd& x) {
    if (x.size() != f.input_dim())
        throw std::invalid_argument("apply: input dimension mismatch");
    if (f.is_linear()) {
        VectorXd z = f.linear().weight * x;
        return f.linear().output_radius ? project_to_ball(z, *f.linear().output_radius) : z;
    }
    return forward_mlp(f.mlp(), x).out;
}

namespace {

MatrixXd rescale_into_ball(const MatrixXd& w, MatrixNormKind kind, double p, double budget) {
    const double norm = matrix_norm(w, kind, p);
    if (norm <= budget || norm == 0.0) return w;
    return w * (budget / norm);
}

}  // namespace

FeatureMap project_params(const FeatureMap& f) {
    FeatureMap out = f;
    if (out.is_linear()) {
        auto& lin = std::get<LinearFeatureMap>(out.variant);
        lin.weight = rescale_into_ball(lin.weight.transpose(), lin.constraint, lin.p, lin.budget)
                         .transpose();
    } else {
        auto& mlp = std::get<MlpFeatureMap>(out.variant);
        for (std::size_t l = 0; l < mlp.layers.size(); ++l)
            mlp.layers[l] = rescale_into_ball(mlp.layers[l], MatrixNormKind::Frobenius, 2.0,
                                              mlp.layer_budgets[l]);
        mlp.head =
            rescale_into_ball(mlp.head, MatrixNormKind::Frobenius, 2.0, mlp.head_budget);
    }
    return out;
}

bool params_feasible(const FeatureMap& f, double tol) {
    if (f.is_linear()) {
        const auto& lin = f.linear();
        return matrix_norm(lin.weight.transpose(), lin.constraint, lin.p) <=
               lin.budget * (1.0 + tol);
    }
    const auto& mlp = f.mlp();
    for (std::size_t l = 0; l < mlp.layers.size(); ++l)
        if (mlp.layers[l].norm() > mlp.layer_budgets[l] * (1.0 + tol)) return false;
    return mlp.head.norm() <= mlp.head_budget * (1.0 + tol);
}

void ParamGradient::scale(double a) {
    for (auto& m : mats) m *= a;
}

double ParamGradient::squared_norm() const {
    double acc = 0.0;
    for (const auto& m : mats) acc += m.squaredNorm();
    return acc;
}

ParamGradient zeros_like(const FeatureMap& f) {
    ParamGradient g;
    for (const MatrixXd* m : param_matrices(f)) g.mats.push_back(MatrixXd::Zero(m->rows(), m->cols()));
    return g;
}

std::vector<const MatrixXd*> param_matrices(const FeatureMap& f) {
    std::vector<const MatrixXd*> out;
    if (f.is_linear()) {
        out.push_back(&f.linear().weight);
    } else {
        for (const auto& v : f.mlp().layers) out.push_back(&v);
        out.push_back(&f.mlp().head);
    }
    return out;
}

std::vector<MatrixXd*> param_matrices(FeatureMap& f) {
    std::vector<MatrixXd*> out;
    if (f.is_linear()) {
        out.push_back(&std::get<LinearFeatureMap>(f.variant).weight);
    } else {
        auto& mlp = std::get<MlpFeatureMap>(f.variant);
        for (auto& v : mlp.layers) out.push_back(&v);
        out.push_back(&mlp.head);
    }
    return out;
}

int param_count(const FeatureMap& f) {
    int total = 0;
    for (const MatrixXd* m : param_matrices(f)) total += static_cast<int>(m->size());
    return total;
}

void axpy_params(FeatureMap& f, const ParamGradient& g, double alpha) {
    auto mats = param_matrices(f);
    if (mats.size() != g.mats.size())
        throw std::invalid_argument("axpy_params: gradient layout mismatch");
    for (std::size_t i = 0; i < mats.size(); ++i) *mats[i] += alpha * g.mats[i];
}

void accumulate_functional_gradient(const FeatureMap& f, const VectorXd& x,
                                    const VectorXd& c, double w, ParamGradient& grad) {
    if (w == 0.0) return;
    if (f.is_linear()) {
        const auto& lin = f.linear();
        const VectorXd raw = lin.weight * x;
        const VectorXd cb = pull_back_projection(c, raw, lin.output_radius);
        grad.mats[0].noalias() += w * cb * x.transpose();
        return;
    }
    const auto& mlp = f.mlp();
    const Forward fw = forward_mlp(mlp, x);
    const VectorXd cb = pull_back_projection(c, fw.raw, mlp.output_radius);
    const std::size_t nl = mlp.layers.size();
    grad.mats[nl].noalias() += w * cb * fw.activations.back().transpose();
    VectorXd g = mlp.head.transpose() * cb;
    for (std::size_t l = nl; l-- > 0;) {
        // gate by relu'(z) = 1 on positive activations, 0 otherwise
        const VectorXd& act = fw.activations[l + 1];
        for (int i = 0; i < g.size(); ++i)
            if (act[i] <= 0.0) g[i] = 0.0;
        grad.mats[l].noalias() += w * g * fw.activations[l].transpose();
        g = mlp.layers[l].transpose() * g;
    }
}

void accumulate_score_gradient(const FeatureMap& f, const VectorXd& x, const VectorXd& xp,
                               const VectorXd& xn, double w, ParamGradient& grad) {
    const VectorXd yx = apply(f, x);
    const VectorXd yp = apply(f, xp);
    const VectorXd yn = apply(f, xn);
    accumulate_functional_gradient(f, x, yp - yn, w, grad);
    accumulate_functional_gradient(f, xp, yx, w, grad);
    accumulate_functional_gradient(f, xn, yx, -w, grad);
}

ParamGradient param_gradient(const FeatureMap& f, const std::vector<ScoreTerm>& batch) {
    ParamGradient g = zeros_like(f);
    for (const auto& term : batch)
        accumulate_score_gradient(f, term.x, term.xp, term.xn, term.weight, g);
    return g;
}

FeatureMap random_member(const FeatureMap& class_spec, Rng& rng, double scale) {
    FeatureMap out = class_spec;
    for (MatrixXd* m : param_matrices(out))
        for (int i = 0; i < m->rows(); ++i)
            for (int j = 0; j < m->cols(); ++j) (*m)(i, j) = scale * rng.gaussian();
    return project_params(out);
}

}  // namespace crlb
