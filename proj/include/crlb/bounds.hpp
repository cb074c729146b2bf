#pragma once

#include "crlb/common.hpp"
#include "crlb/features.hpp"
#include "crlb/losses.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace crlb {

enum class TheoremId {
    T_L2,
    T_LinfComplexity,
    T_Linf,
    T_SelfBounding,
    P_Linear2p,
    P_LinearSchatten,
    P_Dnn,
    Baseline,
};

std::string to_string(TheoremId id);

// One evaluated bound: named addends, their sum, and an echo of the inputs.
struct BoundReport {
    TheoremId theorem_id;
    std::vector<std::pair<std::string, double>> components;
    double total = 0.0;
    std::map<std::string, double> inputs;
    std::string complexity_source;  // e.g. "mc_closed_form_dual", "surrogate_linear_2p"
    std::string downstream_of;      // set by downstream_bound, else empty

    double component(const std::string& name) const;
};

// 1 + log(4 R^2 n^{3/2} k) * max(1, ceil(log2(R^2 sqrt(n) / 12)))
double chain_factor(double radius, int n, int k);

// total = emp_risk + 4*sqrt(6)*R*G2*term_a/n + 3B*sqrt(log(2/delta)/(2n));
// the complexity-only form sqrt(24)*R*G2*term_a/n is echoed under
// inputs["complexity_only"].
BoundReport bound_l2(double emp_risk, double term_a, double radius, double g2, double b,
                     int n, double delta);

// 24 G (R^2+1) n^{-1/2} + 48 G sqrt(k) rad_h * chain_factor
double complexity_linf(double rad_h, double radius, double g, int n, int k);

// total = emp_risk + 3B*sqrt(log(2/delta)/(2n)) + 48G(R^2+1)/sqrt(n)
//       + (96*sqrt(12)*G*R/(n*sqrt(k))) * chain_factor * term_c.
// Built from the same parts as complexity_linf under the substitution
// rad_h = sqrt(12)*R*term_c/(nk), so the two routes agree bit-for-bit.
BoundReport bound_linf(double emp_risk, double term_c, double radius, double g, double b,
                       int n, int k, double delta);

// Optimistic bound with explicit constants: a = sqrt(2) * (24 Gs (R^2+1)/sqrt(n)
// + 48 Gs sqrt(k) rad_h chain_factor), fixed point r_hat = a^2,
// r0 = B (log(1/delta) + 6 log log n)/n,
// total = emp_risk + 90 (r_hat + r0) + 4 sqrt(emp_risk (r_hat + r0)).
// Requires n >= 3 and a self-bounding loss (logistic, Gs = 2).
BoundReport bound_selfbounding(double emp_risk, double rad_h, double radius, LossKind loss,
                               double b, int n, int k, double delta);

// Upper bounds on E sup_f sum_{t,j} eps_{t,j} f_t(x_j) for linear classes.
// Mixed (2,p): min over an admissible q-grid of Lambda d^{1/q*} max(sqrt(q*-1),1)
// times the root sum of squared point norms. Schatten-p (p <= 2): the
// 2^{-1/4} sqrt(q* pi / e) form minimized over q in [p, 2].
double complexity_upper_linear(const std::vector<VectorXd>& points, double p, double lambda,
                               int d, MatrixNormKind kind);

// sqrt(d) Lambda prod(B_l) (16 L sqrt(sum_{i<j} (x_i.x_j)^2) + sum_j |x_j|^2)^{1/2}
double complexity_upper_dnn(const std::vector<VectorXd>& points, int d, double lambda,
                            const std::vector<double>& layer_budgets);

// Existing sqrt(k)-prefactor comparison bound with constants pinned to the
// l2 calculator's: total = emp_risk + 4 sqrt(6) G2 R sqrt(k) term_b / n
// + (3/sqrt(2)) B sqrt(log(1/delta)/n).
BoundReport baseline_bound(double emp_risk, double term_b, double radius, double g2,
                           double b, int n, int k, double delta);

// Relabels an unsupervised bound as a transfer bound on the weighted average
// supervised risk of the mean classifier; numerically the identity.
BoundReport downstream_bound(const BoundReport& report);

}  // namespace crlb
