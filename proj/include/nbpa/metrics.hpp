#ifndef NBPA_METRICS_HPP
#define NBPA_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nbpa/pmf.hpp"

namespace nbpa {

/// Total variation distance between truncated pmfs, with an honest error
/// bracket from the two tail masses.
struct TvResult {
    double value;
    double bracket;  // true distance lies within value +- bracket
};

// Half-L1 distance plus half the tail-mass gap.
TvResult tv_exact(const IntegerPmf& p, const IntegerPmf& q);

// Upper bound r eps / (p - eps) on d_TV(NB(r,p), NB(r,p-eps)).
double tv_nb_shift_bound(double r, double p, double eps);

// Normalized histogram of the samples; tail_mass zero.
IntegerPmf empirical_pmf(const std::vector<std::int64_t>& samples);

enum class ConvergenceMethod { kExactDp, kMonteCarlo };

struct ConvergenceRecord {
    std::int64_t n;
    int m;
    double delta;
    ConvergenceMethod method;
    double dtv;
    double stderr_;  // 0 for exact
    std::uint64_t seed;
};

struct ConvergenceConfig {
    std::vector<std::int64_t> n_values;
    PAParams params{1, 0.0};
    ConvergenceMethod method = ConvergenceMethod::kExactDp;
    std::int64_t graphs = 200;          // Monte Carlo graphs per n
    std::uint64_t seed = 1;
    std::int64_t bootstrap_resamples = 200;
    double dp_step_budget = 4e9;        // guard for the exact route
};

// Convergence-rate experiment: exact DP route for m = 1, pooled Monte Carlo
// otherwise; deterministic for a fixed config.
std::vector<ConvergenceRecord> convergence_experiment(const ConvergenceConfig& config);

struct RateFit {
    double slope;
    double intercept;
};

// Least-squares regression of log(dtv) on log(n / log n); slope near -1
// indicates the log(n)/n rate.
RateFit fit_rate(const std::vector<ConvergenceRecord>& records);

/// The three-claim triangle decomposition of the main rate. Values are the
/// mixed TVs in claim order; conditional_mean holds the matching
/// conditional-mean bounds (each dominating its mixed value).
struct DecompositionReport {
    double values[3];
    double conditional_mean[3];
};

struct DecompositionOptions {
    std::int64_t graphs = 200;   // Monte Carlo fallback (m > 1) only
    std::uint64_t seed = 1;
};

DecompositionReport decomposition_check(std::int64_t n, const PAParams& params,
                                        const DecompositionOptions& options = {});

struct Theorem31Row {
    std::int64_t i;
    double dtv;           // exact d_TV(L(W_{n,i}), NB(m+d, (m+d)/(mu+m+d)))
    double scaled_dtv;    // i * dtv
    double bound_b;
    double bound_b_stderr;
    double bound_simple;
    double p_neq;
    double p_bc;
};

// Exact per-vertex TV against the martingale-mean NB target plus the
// coupling-based Stein bound from Monte Carlo replicas (m = 1 only).
std::vector<Theorem31Row> theorem31_check(std::int64_t n, const std::vector<std::int64_t>& i_list,
                                          const PAParams& params, std::int64_t replicas,
                                          std::uint64_t seed);

struct CouplingReport {
    double p_neq;
    double p_bc;
    double bound_b;
    double bound_simple;
    double dtv_exact;  // NaN unless m == 1
};

CouplingReport coupling_report(std::int64_t n, std::int64_t i, const PAParams& params,
                               std::int64_t replicas, std::uint64_t seed);

}  // namespace nbpa

#endif
