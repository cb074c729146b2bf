#pragma once

#include "crlb/common.hpp"
#include "crlb/features.hpp"
#include "crlb/synthgen.hpp"

#include <optional>
#include <string>
#include <vector>

namespace crlb {

// Inner supremum over the feature class for one sign assignment.
// ClosedFormDual is exact for un-projected linear classes (dual-norm of the
// sign-weighted data aggregate, or top eigenvalue for score sums); projected
// or network classes fall back to projected gradient ascent, whose feasible
// iterates make every reported value a certified lower bound.
enum class InnerSolverKind { ClosedFormDual, ProjectedAscent };

struct SolverConfig {
    InnerSolverKind kind = InnerSolverKind::ClosedFormDual;
    int ascent_steps = 200;
    double ascent_step = 0.1;
    int ascent_restarts = 5;
};

enum class EstimateMethod { ExactEnumeration, MonteCarlo };

struct RademacherEstimate {
    double value = 0.0;
    std::optional<double> std_error;  // absent for exact enumeration
    EstimateMethod method = EstimateMethod::MonteCarlo;
    SolverConfig solver;
    int n_sign_draws = 0;
};

// The three sign-indexed complexity sums: A couples one sign per
// (block, negative, feature, slot); B one per (block, feature, slot) with
// k+2 slots; C ranges over the expanded triple set.
enum class ComplexityTerm { A, B, C };

std::string to_string(ComplexityTerm term);
std::string to_string(InnerSolverKind kind);
std::string to_string(EstimateMethod method);

// Empirical Rademacher complexity of an explicit finite class given as an
// m x n value table: (1/(n 2^n)) sum over sign patterns of the row maximum.
// Requires n <= 22.
double exact_rademacher(const MatrixXd& values);

// Monte Carlo counterpart on the same table.
RademacherEstimate mc_rademacher(const MatrixXd& values, int draws, std::uint64_t seed);

// (1/n) E sup_f sum_{j,t} eps_{j,t} f_t(x_j) for a constraint-ball class.
// `exact` enumerates all n*d sign variables instead of sampling (budget 22).
RademacherEstimate mc_rademacher(const FeatureMap& class_spec,
                                 const std::vector<VectorXd>& points, int draws,
                                 const SolverConfig& solver, std::uint64_t seed,
                                 bool exact = false);

struct TermConfig {
    int sign_draws = 200;
    SolverConfig solver;
    bool exact = false;           // enumerate signs exactly (tiny instances)
    bool greedy_multiset = false; // local search over the triple multiset (term C)
    int greedy_draws = 32;        // sign draws used during the greedy search
};

// Un-normalized expectation of the inner supremum for term A, B or C.
// For C the default multiset is the expanded set itself; the optional greedy
// swap search only ever increases the reported value, which therefore stays a
// lower bound of the defined maximum.
RademacherEstimate estimate_term(ComplexityTerm term, const ContrastiveDataset& dataset,
                                 const FeatureMap& class_spec, const TermConfig& cfg,
                                 std::uint64_t seed);

// (1/(nk)) E sup_f sum_j eps_j f(x_j).(f(xp_j) - f(xn_j)) over the expanded
// triple set, with the same multiset policy as term C.
RademacherEstimate worstcase_rademacher_H(const ExpandedTripletSet& expanded,
                                          const FeatureMap& class_spec,
                                          const TermConfig& cfg, std::uint64_t seed);

// sqrt(nk/2) * sup_f max over triples of the root sum of squared embedding
// norms; valid lower bound on term C for symmetric classes (all constraint
// balls here are symmetric).
double lower_bound_C(const FeatureMap& class_spec, const ExpandedTripletSet& expanded,
                     const SolverConfig& solver, std::uint64_t seed);

// --- shared inner-sup primitives (also used by tests) ---

// One slot of a linear functional objective: coefficient vector c against f(x).
struct WeightedSlot {
    VectorXd x;
    VectorXd c;
};

double sup_linear_functional(const FeatureMap& class_spec,
                             const std::vector<WeightedSlot>& slots,
                             const SolverConfig& solver, std::uint64_t seed);

struct SignedTriple {
    const Triplet* triple;
    int sign;
};

double sup_signed_scores(const FeatureMap& class_spec,
                         const std::vector<SignedTriple>& terms,
                         const SolverConfig& solver, std::uint64_t seed);

}  // namespace crlb
