#include "nbpa/distributions.hpp"

#include <cmath>
#include <stdexcept>

#include "nbpa/numerics.hpp"

namespace nbpa {

namespace {

constexpr std::int64_t kMaxSupport = 1 << 22;

double nb_log_pmf(double r, double p, std::int64_t k) {
    return log_gamma(r + static_cast<double>(k)) - log_gamma(static_cast<double>(k) + 1.0) -
           log_gamma(r) + static_cast<double>(k) * std::log1p(-p) + r * std::log(p);
}

double clamp_tail(long double sum) {
    long double tail = 1.0L - sum;
    return tail > 0.0L ? static_cast<double>(tail) : 0.0;
}

}  // namespace

IntegerPmf nb_pmf(const NBParams& params, std::int64_t kmax) {
    params.validate();
    if (kmax < 0) throw std::domain_error("nb_pmf: kmax must be non-negative");
    IntegerPmf out;
    out.probs.resize(static_cast<std::size_t>(kmax) + 1, 0.0);
    if (params.p == 1.0) {
        out.probs[0] = 1.0;
        return out;
    }
    long double sum = 0.0L;
    for (std::int64_t k = 0; k <= kmax; ++k) {
        double q = std::exp(nb_log_pmf(params.r, params.p, k));
        out.probs[static_cast<std::size_t>(k)] = q;
        sum += q;
    }
    out.tail_mass = clamp_tail(sum);
    return out;
}

std::int64_t nb_adaptive_kmax(const NBParams& params, double tail_bound) {
    params.validate();
    if (params.p == 1.0) return 0;
    long double cum = 0.0L;
    long double term = std::exp(static_cast<long double>(params.r) * std::log(params.p));
    for (std::int64_t k = 0; k < kMaxSupport; ++k) {
        cum += term;
        if (1.0L - cum < tail_bound) return k;
        term *= (1.0L - params.p) * (params.r + static_cast<long double>(k)) /
                (static_cast<long double>(k) + 1.0L);
    }
    throw std::domain_error("nb_adaptive_kmax: truncation point exceeds support cap");
}

IntegerPmf nb_pmf_adaptive(const NBParams& params, double tail_bound) {
    return nb_pmf(params, nb_adaptive_kmax(params, tail_bound));
}

std::int64_t nb_sample(const NBParams& params, RngStream& rng) {
    params.validate();
    if (params.p == 1.0) return 0;
    double u = rng.uniform_open();
    long double cum = 0.0L;
    long double term = std::exp(static_cast<long double>(params.r) * std::log(params.p));
    std::int64_t k = 0;
    for (;;) {
        cum += term;
        if (u < cum) return k;
        term *= (1.0L - params.p) * (params.r + static_cast<long double>(k)) /
                (static_cast<long double>(k) + 1.0L);
        ++k;
        // Rounding can leave cum microscopically short of one; the residual
        // mass at that point is far below any resolvable uniform draw.
        if (term <= 0.0L) return k;
    }
}

double nb_falling_factorial_moment(const NBParams& params, int k) {
    params.validate();
    if (k < 0) throw std::domain_error("nb_falling_factorial_moment: k must be >= 0");
    if (k == 0) return 1.0;
    if (params.p == 1.0) return 0.0;
    double rising = 1.0;
    for (int j = 0; j < k; ++j) rising *= params.r + j;
    return rising * std::pow((1.0 - params.p) / params.p, k);
}

IntegerPmf k_pmf(const PAParams& params, std::int64_t kmax) {
    params.validate();
    if (kmax < 0) throw std::domain_error("k_pmf: kmax must be non-negative");
    const double eps = params.epsilon();
    const double r = params.limit_shape();
    const double front = (2.0 + eps) * gamma_ratio(r, 2.0 + eps, 0.0);
    IntegerPmf out;
    out.probs.resize(static_cast<std::size_t>(kmax) + 1, 0.0);
    long double sum = 0.0L;
    for (std::int64_t l = 0; l <= kmax; ++l) {
        double q = front * gamma_ratio(static_cast<double>(l) + r, 0.0, 3.0 + eps);
        out.probs[static_cast<std::size_t>(l)] = q;
        sum += q;
    }
    out.tail_mass = clamp_tail(sum);
    return out;
}

std::int64_t k_adaptive_kmax(const PAParams& params, double tail_bound) {
    params.validate();
    const double eps = params.epsilon();
    const double r = params.limit_shape();
    const double front = (2.0 + eps) * gamma_ratio(r, 2.0 + eps, 0.0);
    long double cum = 0.0L;
    long double term = front * gamma_ratio(r, 0.0, 3.0 + eps);
    for (std::int64_t l = 0; l < kMaxSupport; ++l) {
        cum += term;
        if (1.0L - cum < tail_bound) return l;
        // ratio of consecutive point probabilities
        term *= (static_cast<long double>(l) + r) /
                (static_cast<long double>(l) + r + 3.0L + eps);
    }
    throw std::domain_error("k_adaptive_kmax: truncation point exceeds support cap");
}

IntegerPmf k_pmf_adaptive(const PAParams& params, double tail_bound) {
    return k_pmf(params, k_adaptive_kmax(params, tail_bound));
}

double k_tail_constant(const PAParams& params) {
    params.validate();
    const double eps = params.epsilon();
    return (2.0 + eps) * gamma_ratio(params.limit_shape(), 2.0 + eps, 0.0);
}

std::int64_t k_sample(const PAParams& params, RngStream& rng) {
    params.validate();
    double u = rng.uniform_open();
    NBParams nb{params.limit_shape(), std::pow(u, params.mixing_exponent())};
    return nb_sample(nb, rng);
}

}  // namespace nbpa
