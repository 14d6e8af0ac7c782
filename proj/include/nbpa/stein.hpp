#ifndef NBPA_STEIN_HPP
#define NBPA_STEIN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nbpa/pmf.hpp"

namespace nbpa {

/// Solution g of the NB Stein equation
///   (1-p)(r+k) g(k+1) - k g(k) = 1[k in A] - P(Y in A)
/// for a target set A, with the convention g(0) = 0. Substituting g back
/// into the equation reproduces the right side to rounding for
/// 0 <= k <= kmax-1.
struct SteinSolution {
    NBParams params;
    std::vector<std::uint8_t> in_set;  // indicator of A on [0, kmax]
    std::vector<double> g;             // indexed 0..kmax
    std::int64_t kmax;
    double target_prob;                // P(Y in A)
};

/// One draw from a coupling of (W, W^{*r}) together with the good-event
/// indicator.
struct CouplingSample {
    std::int64_t w;
    std::int64_t w_star;
    bool on_b;
};

/// Per-bound certification result for the Stein solution smoothness bounds.
struct SolutionBoundReport {
    // Worst-case violation |value| - bound for each of the four bounds;
    // negative slack means the bound holds with room to spare.
    double slack_kg;        // |(k+1) g(k+1)| <= max{1,r} e / p
    double slack_delta_g;   // |Delta g(k)| <= min{1/((1-p)(r+k)), 1/k}
    double slack_dr_g;      // |D_r g(k)|  <= (max{r,1} e + 1)/(r(1-p))
    double slack_delta_dr;  // |Delta D_r g(k)| <= min{1 + 2/r, (2-p)/(r(1-p))}
    std::int64_t worst_k;
    bool pass;              // all slacks <= 1e-9

    double max_slack() const;
    std::string worst_bound_name() const;
};

// E[(1-p)(r+Y) g(Y+1) - Y g(Y)] for Y ~ pmf; zero (up to tail effects)
// exactly when pmf is NB(r, p). g must be defined on [0, len(pmf)].
double stein_operator_expectation(const NBParams& params, const std::vector<double>& g,
                                  const IntegerPmf& pmf);

// Solve the Stein equation by the forward recursion
//   g(k+1) = (k g(k) + 1[k in A] - P(Y in A)) / ((1-p)(r+k)),
// accumulating in extended precision; P(Y in A) is computed at a finer
// truncation (tail < 1e-13) than kmax.
SteinSolution solve_stein_equation(const NBParams& params, const std::vector<std::int64_t>& target_set,
                                   std::int64_t kmax);

// Independent route to the same solution through the covariance
// representation (k+1) g(k+1) = [P(Y in A, Y <= k) - P(Y in A) P(Y <= k)] / P(Y = k+1),
// evaluated through backward tail sums for stability. Used as an oracle
// against solve_stein_equation.
std::vector<double> stein_solution_alternative(const NBParams& params,
                                               const std::vector<std::int64_t>& target_set,
                                               std::int64_t kmax);

// Checks the four smoothness bounds of the Stein solution over [0, kmax].
SolutionBoundReport certify_solution_bounds(const SteinSolution& sol);

// min{(r+2)(1-p), 2-p}; at most 2.
double stein_coupling_constant(double r, double p);

struct TvBoundEstimate {
    double bound_b;       // c_{r,p} E[1_B |W* - W|] + 2(e max{1,r} + 1) P(B^c)
    double bound_simple;  // 2(e max{1,r} + 1) P(W* != W)
    double p_neq;         // P(W* != W)
    double p_bc;          // P(B^c)
    double bound_b_stderr;
    double bound_simple_stderr;
};

// Monte Carlo evaluation of the equilibrium-coupling TV upper bound from a
// collection of coupling samples.
TvBoundEstimate tv_upper_bound(const std::vector<CouplingSample>& samples, double r, double p);

}  // namespace nbpa

#endif
