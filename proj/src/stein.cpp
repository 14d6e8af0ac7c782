#include "nbpa/stein.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nbpa/distributions.hpp"
#include "nbpa/transforms.hpp"

namespace nbpa {

namespace {

constexpr double kNumericalSlop = 1e-9;

std::vector<std::uint8_t> set_indicator(const std::vector<std::int64_t>& target_set,
                                        std::int64_t kmax) {
    std::vector<std::uint8_t> in_set(static_cast<std::size_t>(kmax) + 1, 0);
    for (std::int64_t a : target_set) {
        if (a < 0) throw std::domain_error("stein: target set must contain non-negative integers");
        if (a <= kmax) in_set[static_cast<std::size_t>(a)] = 1;
    }
    return in_set;
}

}  // namespace

double stein_operator_expectation(const NBParams& params, const std::vector<double>& g,
                                  const IntegerPmf& pmf) {
    params.validate();
    if (g.size() < pmf.size() + 1) {
        throw std::invalid_argument("stein_operator_expectation: g must be defined on [0, len(pmf)]");
    }
    long double acc = 0.0L;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        double kd = static_cast<double>(k);
        acc += static_cast<long double>(pmf.probs[k]) *
               ((1.0 - params.p) * (params.r + kd) * g[k + 1] - kd * g[k]);
    }
    return static_cast<double>(acc);
}

SteinSolution solve_stein_equation(const NBParams& params,
                                   const std::vector<std::int64_t>& target_set,
                                   std::int64_t kmax) {
    params.validate();
    if (!(params.p < 1.0)) throw std::domain_error("solve_stein_equation: requires p < 1");
    if (kmax < 1) throw std::domain_error("solve_stein_equation: kmax must be >= 1");

    auto in_set = set_indicator(target_set, kmax);

    // The forward recursion amplifies any error in P(Y in A) by roughly
    // (1-p)^{-k}, so the target probability and the recursion both run in
    // quad precision; the bounded true solution then survives to kmax with
    // plenty of digits to spare.
    const __float128 p = params.p;
    const __float128 r = params.r;
    std::vector<std::int64_t> sorted_set = target_set;
    std::sort(sorted_set.begin(), sorted_set.end());
    __float128 prob_a = 0.0;
    {
        __float128 term = expq(r * logq(p));
        __float128 cum = 0.0;
        std::size_t next = 0;
        for (std::int64_t k = 0; k < (1 << 22); ++k) {
            while (next < sorted_set.size() && sorted_set[next] < k) ++next;
            if (next < sorted_set.size() && sorted_set[next] == k) prob_a += term;
            cum += term;
            if (k >= kmax && static_cast<double>((long double)(1.0 - cum)) < 1e-30) break;
            term *= (1.0 - p) * (r + static_cast<__float128>(k)) /
                    (static_cast<__float128>(k) + 1.0);
        }
    }

    SteinSolution sol;
    sol.params = params;
    sol.in_set = std::move(in_set);
    sol.kmax = kmax;
    sol.target_prob = static_cast<double>((long double)prob_a);
    sol.g.assign(static_cast<std::size_t>(kmax) + 1, 0.0);

    __float128 gk = 0.0;  // g(0) := 0 by convention
    for (std::int64_t k = 0; k < kmax; ++k) {
        __float128 rhs = static_cast<__float128>(sol.in_set[static_cast<std::size_t>(k)]) - prob_a;
        gk = (static_cast<__float128>(k) * gk + rhs) /
             ((1.0 - p) * (r + static_cast<__float128>(k)));
        sol.g[static_cast<std::size_t>(k) + 1] = static_cast<double>((long double)gk);
    }
    return sol;
}

std::vector<double> stein_solution_alternative(const NBParams& params,
                                               const std::vector<std::int64_t>& target_set,
                                               std::int64_t kmax) {
    params.validate();
    if (!(params.p < 1.0)) throw std::domain_error("stein_solution_alternative: requires p < 1");
    if (kmax < 1) throw std::domain_error("stein_solution_alternative: kmax must be >= 1");

    // Quad precision throughout: the covariance numerator is a difference
    // of two near-equal tail quantities deep in the tail, and the division
    // by (k+1) P(Y=k+1) magnifies whatever cancellation leaves behind.
    const __float128 p = params.p;
    const __float128 r = params.r;
    std::vector<__float128> terms;
    {
        __float128 term = expq(r * logq(p));
        __float128 cum = 0.0;
        for (std::int64_t k = 0; k < (1 << 22); ++k) {
            terms.push_back(term);
            cum += term;
            if (k >= kmax + 2 &&
                static_cast<double>((long double)(1.0 - cum)) < 1e-30) {
                break;
            }
            term *= (1.0 - p) * (r + static_cast<__float128>(k)) /
                    (static_cast<__float128>(k) + 1.0);
        }
    }
    auto in_set = set_indicator(target_set, static_cast<std::int64_t>(terms.size()) - 1);

    // Backward tail sums keep the covariance numerator accurate where both
    // factors are tiny.
    std::size_t len = terms.size();
    std::vector<__float128> tail(len + 1, 0.0), tail_a(len + 1, 0.0);
    for (std::size_t k = len; k-- > 0;) {
        tail[k] = tail[k + 1] + terms[k];
        tail_a[k] = tail_a[k + 1] + (in_set[k] ? terms[k] : static_cast<__float128>(0.0));
    }
    __float128 prob_a = tail_a[0];

    std::vector<double> g(static_cast<std::size_t>(kmax) + 1, 0.0);
    for (std::int64_t k = 0; k < kmax; ++k) {
        std::size_t idx = static_cast<std::size_t>(k);
        if (idx + 1 >= len || !(static_cast<double>((long double)terms[idx + 1]) > 0.0)) {
            throw std::domain_error("stein_solution_alternative: P(Y=k+1) underflows before kmax");
        }
        // Cov form with the cdf factors re-expressed through tails:
        // P(A, Y<=k) - P(A) P(Y<=k) = P(A) P(Y>k) - P(A, Y>k).
        __float128 numer = prob_a * tail[idx + 1] - tail_a[idx + 1];
        g[idx + 1] = static_cast<double>(
            (long double)(numer / ((static_cast<__float128>(k) + 1.0) * terms[idx + 1])));
    }
    return g;
}

double SolutionBoundReport::max_slack() const {
    double worst = slack_kg;
    if (slack_delta_g > worst) worst = slack_delta_g;
    if (slack_dr_g > worst) worst = slack_dr_g;
    if (slack_delta_dr > worst) worst = slack_delta_dr;
    return worst;
}

std::string SolutionBoundReport::worst_bound_name() const {
    double worst = max_slack();
    if (worst == slack_kg) return "kg";
    if (worst == slack_delta_g) return "delta_g";
    if (worst == slack_dr_g) return "dr_g";
    return "delta_dr_g";
}

SolutionBoundReport certify_solution_bounds(const SteinSolution& sol) {
    const double r = sol.params.r;
    const double p = sol.params.p;
    const double e = std::exp(1.0);
    const double bound_kg = std::max(1.0, r) * e / p;
    const double bound_dr = (std::max(r, 1.0) * e + 1.0) / (r * (1.0 - p));
    const double bound_ddr = std::min(1.0 + 2.0 / r, (2.0 - p) / (r * (1.0 - p)));

    SolutionBoundReport rep{-bound_kg, -1.0, -bound_dr, -bound_ddr, 0, true};
    double global_worst = -1e300;
    auto note = [&rep, &global_worst](double& slot, double slack, std::int64_t k) {
        if (slack > slot) slot = slack;
        if (slack > global_worst) {
            global_worst = slack;
            rep.worst_k = k;
        }
    };

    for (std::int64_t k = 0; k < sol.kmax; ++k) {
        std::size_t idx = static_cast<std::size_t>(k);
        note(rep.slack_kg, std::abs((static_cast<double>(k) + 1.0) * sol.g[idx + 1]) - bound_kg, k);

        double delta_g = sol.g[idx + 1] - sol.g[idx];
        double bound_dg = 1.0 / ((1.0 - p) * (r + static_cast<double>(k)));
        if (k >= 1) bound_dg = std::min(bound_dg, 1.0 / static_cast<double>(k));
        note(rep.slack_delta_g, std::abs(delta_g) - bound_dg, k);

        note(rep.slack_dr_g, std::abs(dr_operator(sol.g, k, r)) - bound_dr, k);

        if (k + 1 < sol.kmax) {
            double ddr = dr_operator(sol.g, k + 1, r) - dr_operator(sol.g, k, r);
            note(rep.slack_delta_dr, std::abs(ddr) - bound_ddr, k);
        }
    }
    rep.pass = rep.max_slack() <= kNumericalSlop;
    return rep;
}

double stein_coupling_constant(double r, double p) {
    return std::min((r + 2.0) * (1.0 - p), 2.0 - p);
}

TvBoundEstimate tv_upper_bound(const std::vector<CouplingSample>& samples, double r, double p) {
    if (samples.empty()) throw std::domain_error("tv_upper_bound: empty sample");
    const double c_rp = stein_coupling_constant(r, p);
    const double c_tail = 2.0 * (std::exp(1.0) * std::max(1.0, r) + 1.0);

    long double sum_b = 0.0L, sum_b2 = 0.0L;
    long double sum_s = 0.0L, sum_s2 = 0.0L;
    long double n_neq = 0.0L, n_bc = 0.0L;
    for (const CouplingSample& s : samples) {
        double term_b = s.on_b ? c_rp * std::abs(static_cast<double>(s.w_star - s.w))
                               : c_tail;
        double term_s = (s.w_star != s.w) ? c_tail : 0.0;
        sum_b += term_b;
        sum_b2 += static_cast<long double>(term_b) * term_b;
        sum_s += term_s;
        sum_s2 += static_cast<long double>(term_s) * term_s;
        if (s.w_star != s.w) n_neq += 1.0L;
        if (!s.on_b) n_bc += 1.0L;
    }
    const double n = static_cast<double>(samples.size());
    TvBoundEstimate est;
    est.bound_b = static_cast<double>(sum_b) / n;
    est.bound_simple = static_cast<double>(sum_s) / n;
    est.p_neq = static_cast<double>(n_neq) / n;
    est.p_bc = static_cast<double>(n_bc) / n;
    auto stderr_of = [n](long double sum, long double sum2) {
        if (n < 2) return 0.0;
        long double mean = sum / n;
        long double var = (sum2 - n * mean * mean) / (n - 1.0L);
        if (var < 0.0L) var = 0.0L;
        return static_cast<double>(std::sqrt(static_cast<double>(var) / n));
    };
    est.bound_b_stderr = stderr_of(sum_b, sum_b2);
    est.bound_simple_stderr = stderr_of(sum_s, sum_s2);
    return est;
}

}  // namespace nbpa
