#include "crlb/rademacher.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace crlb {

std::string to_string(ComplexityTerm term) {
    switch (term) {
        case ComplexityTerm::A: return "A";
        case ComplexityTerm::B: return "B";
        case ComplexityTerm::C: return "C";
    }
    return "?";
}

std::string to_string(InnerSolverKind kind) {
    return kind == InnerSolverKind::ClosedFormDual ? "closed_form_dual" : "projected_ascent";
}

std::string to_string(EstimateMethod method) {
    return method == EstimateMethod::ExactEnumeration ? "exact_enumeration" : "monte_carlo";
}

double exact_rademacher(const MatrixXd& values) {
    const int m = static_cast<int>(values.rows());
    const int n = static_cast<int>(values.cols());
    if (m < 1 || n < 1) throw std::invalid_argument("exact_rademacher: empty table");
    VectorXd sums(m);
    double acc = 0.0;
    for_each_sign_pattern(n, [&](const std::vector<int>& signs, int flipped) {
        if (flipped < 0) {
            for (int f = 0; f < m; ++f) sums[f] = values.row(f).sum();
        } else {
            const double s = 2.0 * signs[static_cast<std::size_t>(flipped)];
            for (int f = 0; f < m; ++f) sums[f] += s * values(f, flipped);
        }
        acc += sums.maxCoeff();
    });
    return acc / (static_cast<double>(n) * std::ldexp(1.0, n));
}

namespace {

struct MeanAccumulator {
    double sum = 0.0;
    double sumsq = 0.0;
    int count = 0;
    void add(double v) {
        sum += v;
        sumsq += v * v;
        ++count;
    }
    double mean() const { return sum / count; }
    double std_error() const {
        if (count < 2) return 0.0;
        const double m = mean();
        return std::sqrt(std::max(0.0, (sumsq - count * m * m) / (count - 1)) / count);
    }
};

bool closed_form_applicable(const FeatureMap& class_spec) {
    return class_spec.is_linear() && !class_spec.output_radius();
}

void require_closed_form(const FeatureMap& class_spec) {
    if (!closed_form_applicable(class_spec))
        throw std::invalid_argument(
            "ClosedFormDual solver requires an un-projected linear class");
}

// budget scaling for sup_U sum_t u_t^T M u_t over the constraint ball: all
// mass on the top eigendirection unless p > 2 spreads it across rows
double quadratic_budget_factor(const LinearFeatureMap& lin, int d) {
    const double lambda2 = lin.budget * lin.budget;
    if (lin.constraint == MatrixNormKind::MixedL2p && lin.p > 2.0)
        return lambda2 * std::pow(static_cast<double>(d), 1.0 - 2.0 / lin.p);
    return lambda2;
}

double ascent_maximize(const FeatureMap& class_spec, const SolverConfig& solver,
                       std::uint64_t seed,
                       const std::function<double(const FeatureMap&)>& objective,
                       const std::function<ParamGradient(const FeatureMap&)>& gradient) {
    double best = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < std::max(1, solver.ascent_restarts); ++r) {
        Rng rng(derive_seed(seed, seedtag::kAscent, static_cast<std::uint64_t>(r)));
        FeatureMap f = random_member(class_spec, rng);
        best = std::max(best, objective(f));
        for (int t = 1; t <= solver.ascent_steps; ++t) {
            ParamGradient g = gradient(f);
            const double gnorm = std::sqrt(g.squared_norm());
            if (gnorm < 1e-14) break;
            axpy_params(f, g, solver.ascent_step / std::sqrt(static_cast<double>(t)) / gnorm);
            f = project_params(f);
            best = std::max(best, objective(f));
        }
    }
    return best;
}

}  // namespace

double sup_linear_functional(const FeatureMap& class_spec,
                             const std::vector<WeightedSlot>& slots,
                             const SolverConfig& solver, std::uint64_t seed) {
    if (slots.empty()) return 0.0;
    if (solver.kind == InnerSolverKind::ClosedFormDual) {
        require_closed_form(class_spec);
        const auto& lin = class_spec.linear();
        if (lin.budget == 0.0) return 0.0;
        MatrixXd aggregate = MatrixXd::Zero(lin.input_dim(), lin.output_dim());
        for (const auto& slot : slots) aggregate.noalias() += slot.x * slot.c.transpose();
        return lin.budget * matrix_dual_norm(aggregate, lin.constraint, lin.p);
    }
    auto objective = [&](const FeatureMap& f) {
        double acc = 0.0;
        for (const auto& slot : slots) acc += slot.c.dot(apply(f, slot.x));
        return acc;
    };
    auto gradient = [&](const FeatureMap& f) {
        ParamGradient g = zeros_like(f);
        for (const auto& slot : slots)
            accumulate_functional_gradient(f, slot.x, slot.c, 1.0, g);
        return g;
    };
    return ascent_maximize(class_spec, solver, seed, objective, gradient);
}

double sup_signed_scores(const FeatureMap& class_spec,
                         const std::vector<SignedTriple>& terms,
                         const SolverConfig& solver, std::uint64_t seed) {
    if (terms.empty()) return 0.0;
    if (solver.kind == InnerSolverKind::ClosedFormDual) {
        require_closed_form(class_spec);
        const auto& lin = class_spec.linear();
        if (lin.budget == 0.0) return 0.0;
        const int dim = lin.input_dim();
        MatrixXd m = MatrixXd::Zero(dim, dim);
        for (const auto& t : terms)
            m.noalias() += t.sign * (t.triple->positive - t.triple->negative) *
                           t.triple->anchor.transpose();
        const MatrixXd sym = 0.5 * (m + m.transpose());
        Eigen::SelfAdjointEigenSolver<MatrixXd> eig(sym);
        const double top = eig.eigenvalues().maxCoeff();
        return quadratic_budget_factor(lin, lin.output_dim()) * std::max(0.0, top);
    }
    auto objective = [&](const FeatureMap& f) {
        double acc = 0.0;
        for (const auto& t : terms)
            acc += t.sign * apply(f, t.triple->anchor)
                                .dot(apply(f, t.triple->positive) - apply(f, t.triple->negative));
        return acc;
    };
    auto gradient = [&](const FeatureMap& f) {
        ParamGradient g = zeros_like(f);
        for (const auto& t : terms)
            accumulate_score_gradient(f, t.triple->anchor, t.triple->positive,
                                      t.triple->negative, static_cast<double>(t.sign), g);
        return g;
    };
    return ascent_maximize(class_spec, solver, seed, objective, gradient);
}

RademacherEstimate mc_rademacher(const MatrixXd& values, int draws, std::uint64_t seed) {
    const int m = static_cast<int>(values.rows());
    const int n = static_cast<int>(values.cols());
    if (m < 1 || n < 1) throw std::invalid_argument("mc_rademacher: empty table");
    if (draws < 2) throw std::invalid_argument("mc_rademacher: draws must be >= 2");
    MeanAccumulator acc;
    for (int d = 0; d < draws; ++d) {
        Rng rng(derive_seed(seed, seedtag::kSigns, static_cast<std::uint64_t>(d)));
        double best = -std::numeric_limits<double>::infinity();
        VectorXd signs(n);
        for (int i = 0; i < n; ++i) signs[i] = rng.sign();
        for (int f = 0; f < m; ++f) best = std::max(best, values.row(f).dot(signs));
        acc.add(best / n);
    }
    RademacherEstimate est;
    est.value = acc.mean();
    est.std_error = acc.std_error();
    est.method = EstimateMethod::MonteCarlo;
    est.n_sign_draws = draws;
    return est;
}

namespace {

std::vector<WeightedSlot> feature_slots(const std::vector<VectorXd>& points,
                                        const std::vector<int>& signs, int d) {
    std::vector<WeightedSlot> slots;
    slots.reserve(points.size());
    int idx = 0;
    for (const auto& x : points) {
        VectorXd c(d);
        for (int t = 0; t < d; ++t) c[t] = signs[static_cast<std::size_t>(idx++)];
        slots.push_back({x, std::move(c)});
    }
    return slots;
}

}  // namespace

RademacherEstimate mc_rademacher(const FeatureMap& class_spec,
                                 const std::vector<VectorXd>& points, int draws,
                                 const SolverConfig& solver, std::uint64_t seed, bool exact) {
    if (points.empty()) throw std::invalid_argument("mc_rademacher: no points");
    const int n = static_cast<int>(points.size());
    const int d = class_spec.output_dim();
    const int n_signs = n * d;
    RademacherEstimate est;
    est.solver = solver;
    if (exact) {
        if (n_signs > kMaxExactSigns)
            throw std::invalid_argument("mc_rademacher: exact enumeration budget exceeded");
        double acc = 0.0;
        int count = 0;
        for_each_sign_pattern(n_signs, [&](const std::vector<int>& signs, int) {
            acc += sup_linear_functional(class_spec, feature_slots(points, signs, d), solver,
                                         derive_seed(seed, seedtag::kAscent,
                                                     static_cast<std::uint64_t>(count)));
            ++count;
        });
        est.value = acc / (static_cast<double>(n) * std::ldexp(1.0, n_signs));
        est.method = EstimateMethod::ExactEnumeration;
        est.n_sign_draws = count;
        return est;
    }
    if (draws < 2) throw std::invalid_argument("mc_rademacher: draws must be >= 2");
    MeanAccumulator acc;
    for (int dr = 0; dr < draws; ++dr) {
        Rng rng(derive_seed(seed, seedtag::kSigns, static_cast<std::uint64_t>(dr)));
        std::vector<int> signs(static_cast<std::size_t>(n_signs));
        for (auto& s : signs) s = rng.sign();
        const double sup =
            sup_linear_functional(class_spec, feature_slots(points, signs, d), solver,
                                  derive_seed(seed, seedtag::kAscent, static_cast<std::uint64_t>(dr)));
        acc.add(sup / n);
    }
    est.value = acc.mean();
    est.std_error = acc.std_error();
    est.method = EstimateMethod::MonteCarlo;
    est.n_sign_draws = draws;
    return est;
}

namespace {

// slot layout per sign draw for the three complexity terms
std::vector<WeightedSlot> term_slots(ComplexityTerm term, const ContrastiveDataset& dataset,
                                     const std::vector<const Triplet*>& multiset, int d,
                                     const std::vector<int>& signs) {
    std::vector<WeightedSlot> slots;
    std::size_t idx = 0;
    auto next_coeff = [&](int dim) {
        VectorXd c(dim);
        for (int t = 0; t < dim; ++t) c[t] = signs[idx++];
        return c;
    };
    if (term == ComplexityTerm::A) {
        for (const auto& block : dataset.blocks) {
            for (const auto& neg : block.negatives) {
                slots.push_back({block.anchor, next_coeff(d)});
                slots.push_back({block.positive, next_coeff(d)});
                slots.push_back({neg, next_coeff(d)});
            }
        }
    } else if (term == ComplexityTerm::B) {
        for (const auto& block : dataset.blocks) {
            slots.push_back({block.anchor, next_coeff(d)});
            slots.push_back({block.positive, next_coeff(d)});
            for (const auto& neg : block.negatives) slots.push_back({neg, next_coeff(d)});
        }
    } else {
        for (const Triplet* tr : multiset) {
            slots.push_back({tr->anchor, next_coeff(d)});
            slots.push_back({tr->positive, next_coeff(d)});
            slots.push_back({tr->negative, next_coeff(d)});
        }
    }
    return slots;
}

int term_sign_count(ComplexityTerm term, int n, int k, int d) {
    switch (term) {
        case ComplexityTerm::A: return 3 * n * k * d;
        case ComplexityTerm::B: return n * d * (k + 2);
        case ComplexityTerm::C: return 3 * n * k * d;
    }
    return 0;
}

RademacherEstimate expectation_over_signs(int n_signs, const TermConfig& cfg,
                                          std::uint64_t seed,
                                          const std::function<double(const std::vector<int>&, std::uint64_t)>& sup_of) {
    RademacherEstimate est;
    est.solver = cfg.solver;
    if (cfg.exact) {
        if (n_signs > kMaxExactSigns)
            throw std::invalid_argument("estimate_term: exact enumeration budget exceeded");
        double acc = 0.0;
        int count = 0;
        for_each_sign_pattern(n_signs, [&](const std::vector<int>& signs, int) {
            acc += sup_of(signs, derive_seed(seed, seedtag::kAscent,
                                             static_cast<std::uint64_t>(count)));
            ++count;
        });
        est.value = acc / std::ldexp(1.0, n_signs);
        est.method = EstimateMethod::ExactEnumeration;
        est.n_sign_draws = count;
        return est;
    }
    if (cfg.sign_draws < 2)
        throw std::invalid_argument("estimate_term: sign_draws must be >= 2");
    MeanAccumulator acc;
    for (int dr = 0; dr < cfg.sign_draws; ++dr) {
        Rng rng(derive_seed(seed, seedtag::kSigns, static_cast<std::uint64_t>(dr)));
        std::vector<int> signs(static_cast<std::size_t>(n_signs));
        for (auto& s : signs) s = rng.sign();
        acc.add(sup_of(signs, derive_seed(seed, seedtag::kAscent, static_cast<std::uint64_t>(dr))));
    }
    est.value = acc.mean();
    est.std_error = acc.std_error();
    est.method = EstimateMethod::MonteCarlo;
    est.n_sign_draws = cfg.sign_draws;
    return est;
}

std::vector<const Triplet*> identity_multiset(const ExpandedTripletSet& expanded) {
    std::vector<const Triplet*> out;
    out.reserve(expanded.triples.size());
    for (const auto& t : expanded.triples) out.push_back(&t);
    return out;
}

}  // namespace

RademacherEstimate estimate_term(ComplexityTerm term, const ContrastiveDataset& dataset,
                                 const FeatureMap& class_spec, const TermConfig& cfg,
                                 std::uint64_t seed) {
    dataset.validate();
    if (dataset.dim() != class_spec.input_dim())
        throw std::invalid_argument("estimate_term: data/class dimension mismatch");
    const int n = dataset.size();
    const int k = dataset.negatives_per_block();
    const int d = class_spec.output_dim();
    const int n_signs = term_sign_count(term, n, k, d);

    ExpandedTripletSet expanded;
    std::vector<const Triplet*> multiset;
    if (term == ComplexityTerm::C) {
        expanded = expand_to_triplets(dataset);
        multiset = identity_multiset(expanded);
        if (cfg.greedy_multiset) {
            // greedy swap search with common random signs; keeps the larger
            // estimate, so the result remains a lower bound of the outer max
            TermConfig search_cfg = cfg;
            search_cfg.sign_draws = std::max(2, cfg.greedy_draws);
            search_cfg.exact = false;
            auto evaluate_multiset = [&](const std::vector<const Triplet*>& ms) {
                return expectation_over_signs(
                           n_signs, search_cfg, seed,
                           [&](const std::vector<int>& signs, std::uint64_t sup_seed) {
                               return sup_linear_functional(
                                   class_spec, term_slots(term, dataset, ms, d, signs),
                                   cfg.solver, sup_seed);
                           })
                    .value;
            };
            double best = evaluate_multiset(multiset);
            const int nk = static_cast<int>(multiset.size());
            for (int pos = 0; pos < nk; ++pos) {
                const Triplet* original = multiset[static_cast<std::size_t>(pos)];
                const Triplet* best_cand = original;
                for (int cand = 0; cand < nk; ++cand) {
                    const Triplet* t = &expanded.triples[static_cast<std::size_t>(cand)];
                    if (t == original) continue;
                    multiset[static_cast<std::size_t>(pos)] = t;
                    const double v = evaluate_multiset(multiset);
                    if (v > best + 1e-12) {
                        best = v;
                        best_cand = t;
                    }
                }
                multiset[static_cast<std::size_t>(pos)] = best_cand;
            }
        }
    }

    return expectation_over_signs(
        n_signs, cfg, seed, [&](const std::vector<int>& signs, std::uint64_t sup_seed) {
            return sup_linear_functional(class_spec,
                                         term_slots(term, dataset, multiset, d, signs),
                                         cfg.solver, sup_seed);
        });
}

RademacherEstimate worstcase_rademacher_H(const ExpandedTripletSet& expanded,
                                          const FeatureMap& class_spec,
                                          const TermConfig& cfg, std::uint64_t seed) {
    if (expanded.triples.empty())
        throw std::invalid_argument("worstcase_rademacher_H: empty triple set");
    const int nk = static_cast<int>(expanded.triples.size());
    std::vector<const Triplet*> multiset = identity_multiset(expanded);

    auto estimate_for = [&](const std::vector<const Triplet*>& ms, const TermConfig& c) {
        return expectation_over_signs(
            nk, c, seed, [&](const std::vector<int>& signs, std::uint64_t sup_seed) {
                std::vector<SignedTriple> terms(static_cast<std::size_t>(nk));
                for (int j = 0; j < nk; ++j)
                    terms[static_cast<std::size_t>(j)] = {ms[static_cast<std::size_t>(j)],
                                                          signs[static_cast<std::size_t>(j)]};
                return sup_signed_scores(class_spec, terms, cfg.solver, sup_seed) / nk;
            });
    };

    if (cfg.greedy_multiset) {
        TermConfig search_cfg = cfg;
        search_cfg.sign_draws = std::max(2, cfg.greedy_draws);
        search_cfg.exact = false;
        double best = estimate_for(multiset, search_cfg).value;
        for (int pos = 0; pos < nk; ++pos) {
            const Triplet* original = multiset[static_cast<std::size_t>(pos)];
            const Triplet* best_cand = original;
            for (int cand = 0; cand < nk; ++cand) {
                const Triplet* t = &expanded.triples[static_cast<std::size_t>(cand)];
                if (t == original) continue;
                multiset[static_cast<std::size_t>(pos)] = t;
                const double v = estimate_for(multiset, search_cfg).value;
                if (v > best + 1e-12) {
                    best = v;
                    best_cand = t;
                }
            }
            multiset[static_cast<std::size_t>(pos)] = best_cand;
        }
    }
    return estimate_for(multiset, cfg);
}

double lower_bound_C(const FeatureMap& class_spec, const ExpandedTripletSet& expanded,
                     const SolverConfig& solver, std::uint64_t seed) {
    if (expanded.triples.empty()) throw std::invalid_argument("lower_bound_C: empty triple set");
    const double nk = static_cast<double>(expanded.triples.size());
    double best = 0.0;
    int idx = 0;
    for (const auto& tr : expanded.triples) {
        double sup;
        if (solver.kind == InnerSolverKind::ClosedFormDual) {
            require_closed_form(class_spec);
            const auto& lin = class_spec.linear();
            MatrixXd pts(lin.input_dim(), 3);
            pts.col(0) = tr.anchor;
            pts.col(1) = tr.positive;
            pts.col(2) = tr.negative;
            Eigen::JacobiSVD<MatrixXd> svd(pts);
            double factor = lin.budget;
            if (lin.constraint == MatrixNormKind::MixedL2p && lin.p > 2.0)
                factor *= std::pow(static_cast<double>(lin.output_dim()), 0.5 - 1.0 / lin.p);
            sup = factor * svd.singularValues()[0];
        } else {
            auto objective = [&](const FeatureMap& f) {
                return apply(f, tr.anchor).squaredNorm() + apply(f, tr.positive).squaredNorm() +
                       apply(f, tr.negative).squaredNorm();
            };
            auto gradient = [&](const FeatureMap& f) {
                ParamGradient g = zeros_like(f);
                accumulate_functional_gradient(f, tr.anchor, 2.0 * apply(f, tr.anchor), 1.0, g);
                accumulate_functional_gradient(f, tr.positive, 2.0 * apply(f, tr.positive), 1.0, g);
                accumulate_functional_gradient(f, tr.negative, 2.0 * apply(f, tr.negative), 1.0, g);
                return g;
            };
            sup = std::sqrt(std::max(
                0.0, ascent_maximize(class_spec, solver,
                                     derive_seed(seed, seedtag::kAscent,
                                                 static_cast<std::uint64_t>(idx)),
                                     objective, gradient)));
        }
        best = std::max(best, sup);
        ++idx;
    }
    return std::sqrt(nk / 2.0) * best;
}

}  // namespace crlb
