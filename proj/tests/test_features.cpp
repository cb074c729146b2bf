#include "crlb/features.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace crlb;

namespace {

MatrixXd mat2(double a, double b, double c, double d) {
    MatrixXd m(2, 2);
    m << a, b, c, d;
    return m;
}

FeatureMap small_mlp(Rng& rng, int in_dim, int hidden, int out_dim, double scale = 0.7) {
    std::vector<MatrixXd> layers = {MatrixXd::Zero(hidden, in_dim)};
    FeatureMap f = make_mlp_map(std::move(layers), {1.5}, MatrixXd::Zero(out_dim, hidden), 1.2);
    for (MatrixXd* m : param_matrices(f))
        for (int r = 0; r < m->rows(); ++r)
            for (int c = 0; c < m->cols(); ++c) (*m)(r, c) = scale * rng.gaussian();
    return project_params(f);
}

}  // namespace

TEST_CASE("matrix norms on pinned matrices") {
    MatrixXd w(2, 2);
    w << 3.0, 0.0, 4.0, 0.0;  // columns (3,4) and (0,0)
    CHECK(matrix_norm(w, MatrixNormKind::MixedL2p, 1.0) == doctest::Approx(5.0));

    const MatrixXd diag = mat2(3.0, 0.0, 0.0, 4.0);
    CHECK(matrix_norm(diag, MatrixNormKind::SchattenP, 1.0) == doctest::Approx(7.0));
    CHECK(matrix_norm(diag, MatrixNormKind::SchattenP, 2.0) == doctest::Approx(5.0));
    CHECK_THROWS(matrix_norm(diag, MatrixNormKind::SchattenP, 0.5));
}

TEST_CASE("schatten-2 equals frobenius on random matrices") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        MatrixXd w(5, 7);
        for (int r = 0; r < 5; ++r)
            for (int c = 0; c < 7; ++c) w(r, c) = rng.gaussian();
        CHECK(std::abs(matrix_norm(w, MatrixNormKind::SchattenP, 2.0) - w.norm()) <= 1e-10);
    }
}

TEST_CASE("mixed norm is nonincreasing in p; schatten-2 <= schatten-1") {
    Rng rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        MatrixXd w(3, 4);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 4; ++c) w(r, c) = rng.gaussian();
        double prev = matrix_norm(w, MatrixNormKind::MixedL2p, 1.0);
        for (double p : {1.5, 2.0, 3.0, 6.0}) {
            const double cur = matrix_norm(w, MatrixNormKind::MixedL2p, p);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
        CHECK(matrix_norm(w, MatrixNormKind::SchattenP, 2.0) <=
              matrix_norm(w, MatrixNormKind::SchattenP, 1.0) + 1e-12);
    }
}

TEST_CASE("apply: identity, projection, zero network") {
    FeatureMap identity = make_linear_map(MatrixXd::Identity(2, 2), MatrixNormKind::MixedL2p,
                                          2.0, 10.0);
    VectorXd x(2);
    x << 1.0, 2.0;
    CHECK(apply(identity, x) == x);

    FeatureMap projected = make_linear_map(MatrixXd::Identity(2, 2), MatrixNormKind::MixedL2p,
                                           2.0, 10.0, 1.0);
    VectorXd big(2);
    big << 3.0, 4.0;
    const VectorXd y = apply(projected, big);
    CHECK(y[0] == doctest::Approx(0.6));
    CHECK(y[1] == doctest::Approx(0.8));

    FeatureMap zero_net = make_mlp_map({MatrixXd::Zero(3, 2)}, {1.0}, MatrixXd::Zero(2, 3), 1.0);
    CHECK(apply(zero_net, big).norm() == 0.0);
    CHECK_THROWS(apply(identity, VectorXd::Zero(3)));
}

TEST_CASE("project_params: idempotence, feasibility, pinned cases") {
    // already feasible map is returned unchanged
    FeatureMap feasible = make_linear_map(0.1 * MatrixXd::Identity(2, 2),
                                          MatrixNormKind::MixedL2p, 2.0, 1.0);
    CHECK(project_params(feasible).linear().weight == feasible.linear().weight);

    // frobenius overshoot by 2x halves every entry
    FeatureMap over = make_mlp_map({mat2(2.0, 0.0, 0.0, 0.0)}, {1.0}, MatrixXd::Identity(2, 2),
                                   10.0);
    const FeatureMap scaled = project_params(over);
    CHECK(scaled.mlp().layers[0](0, 0) == doctest::Approx(1.0));

    // schatten-1 of diag(3,4) is exactly 7
    FeatureMap diag = make_linear_map(mat2(3.0, 0.0, 0.0, 4.0), MatrixNormKind::SchattenP, 1.0,
                                      7.0);
    CHECK(project_params(diag).linear().weight == diag.linear().weight);

    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        FeatureMap f = make_linear_map(5.0 * MatrixXd::Random(3, 4),
                                       MatrixNormKind::MixedL2p, 1.5, 1.0);
        const FeatureMap once = project_params(f);
        const FeatureMap twice = project_params(once);
        CHECK(params_feasible(once));
        CHECK((once.linear().weight - twice.linear().weight).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("ball projection is non-expansive") {
    Rng rng(6);
    for (int trial = 0; trial < 10000; ++trial) {
        VectorXd a = rng.gaussian_vector(3) * 2.0;
        VectorXd b = rng.gaussian_vector(3) * 2.0;
        CHECK((project_to_ball(a, 1.0) - project_to_ball(b, 1.0)).norm() <=
              (a - b).norm() + 1e-12);
    }
}

TEST_CASE("projected maps respect the output radius") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        FeatureMap proto = make_linear_map(MatrixXd::Zero(3, 4), MatrixNormKind::MixedL2p, 2.0,
                                           3.0, 0.8);
        const FeatureMap f = random_member(proto, rng, 2.0);
        const VectorXd x = rng.gaussian_vector(4) * 3.0;
        CHECK(apply(f, x).norm() <= 0.8 + 1e-9);
    }
}

TEST_CASE("linear score gradient matches the hand derivative") {
    // d=D=1, u=1: d/du [ux (u xp - u xn)] = 2u x (xp - xn) = 2 at x=1,xp=2,xn=1
    FeatureMap f = make_linear_map(MatrixXd::Identity(1, 1), MatrixNormKind::MixedL2p, 2.0,
                                   10.0);
    ParamGradient g = zeros_like(f);
    VectorXd x(1), xp(1), xn(1);
    x << 1.0;
    xp << 2.0;
    xn << 1.0;
    accumulate_score_gradient(f, x, xp, xn, 1.0, g);
    CHECK(g.mats[0](0, 0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("zero weights give zero gradients") {
    FeatureMap f = make_mlp_map({MatrixXd::Zero(3, 2)}, {1.0}, MatrixXd::Zero(2, 3), 1.0);
    std::vector<ScoreTerm> batch;
    VectorXd x(2);
    x << 1.0, -1.0;
    batch.push_back({x, 2.0 * x, -x, 1.0});
    const ParamGradient g = param_gradient(f, batch);
    CHECK(g.squared_norm() == 0.0);
}

TEST_CASE("mlp score gradients match finite differences") {
    Rng rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        FeatureMap f = small_mlp(rng, 3, 4, 2);
        std::vector<ScoreTerm> batch;
        for (int b = 0; b < 3; ++b)
            batch.push_back({rng.gaussian_vector(3), rng.gaussian_vector(3),
                             rng.gaussian_vector(3), rng.uniform(0.5, 1.5)});
        const ParamGradient analytic = param_gradient(f, batch);

        auto objective = [&](const FeatureMap& g) {
            double acc = 0.0;
            for (const auto& term : batch)
                acc += term.weight * apply(g, term.x).dot(apply(g, term.xp) - apply(g, term.xn));
            return acc;
        };
        auto mats = param_matrices(f);
        for (std::size_t m = 0; m < mats.size(); ++m)
            for (int r = 0; r < mats[m]->rows(); ++r)
                for (int c = 0; c < mats[m]->cols(); ++c) {
                    const double fd = oracles::central_difference(
                        [&](double v) {
                            FeatureMap probe = f;
                            (*param_matrices(probe)[m])(r, c) = v;
                            return objective(probe);
                        },
                        (*mats[m])(r, c));
                    const double an = analytic.mats[m](r, c);
                    CHECK(std::abs(an - fd) / std::max({1.0, std::abs(an), std::abs(fd)}) <=
                          1e-5);
                }
    }
}
