#pragma once

#include "crlb/common.hpp"

#include <string>
#include <vector>

namespace crlb {

// m functions evaluated at n points.
struct FiniteClassTable {
    MatrixXd values;

    int num_functions() const { return static_cast<int>(values.rows()); }
    int num_points() const { return static_cast<int>(values.cols()); }
};

struct CoveringNumber {
    int count = 0;
    bool exact = true;  // false for the greedy fallback on large classes
};

// Smallest proper linf cover at radius eps: centers are rows of the table.
// Exact set-cover search for m <= 15, greedy upper bound above that.
CoveringNumber covering_number_linf(const FiniteClassTable& table, double eps);

// Largest number of table points sign-shatterable with margin eps/2 around
// per-point witnesses; exact (n <= 10, m <= 64). Witness search sweeps the
// breakpoints v +- eps/2 of the observed values, which realizes every
// achievable (above, below) split.
int fat_shattering(const FiniteClassTable& table, double eps);

enum class LemmaId {
    KK_LOWER,
    KK_UPPER_VEC,
    KK_UPPER_MAT,
    CHAOS_MGF,
    VEC_CONTRACTION,
    GEN_CONTRACTION,
    H_COMPLEXITY,
    LOWER_C,
    FAT_VS_RADEMACHER,
    COVER_VS_FAT,
    CHAIN_SUM,
    GEN_VS_RADEMACHER,
};

std::vector<LemmaId> all_lemmas();
std::string to_string(LemmaId id);
LemmaId lemma_from_string(const std::string& name);

struct VerificationReport {
    LemmaId lemma_id;
    int instances = 0;
    int violations = 0;
    double max_slack = 0.0;  // most binding margin observed (min over instances)
    bool pass() const { return violations == 0; }
};

struct VerifyConfig {
    int instances = 30;
};

// Checks the named inequality on randomly generated instances small enough
// for exact enumeration (expectations by full sign enumeration, suprema over
// explicit finite classes). GEN_VS_RADEMACHER instances are frequency
// experiments: 200 resampled datasets against the delta = 0.1 bound.
VerificationReport verify_inequality(LemmaId id, const VerifyConfig& cfg, std::uint64_t seed);

}  // namespace crlb
