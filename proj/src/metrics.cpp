#include "nbpa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nbpa/distributions.hpp"
#include "nbpa/pa_graph.hpp"
#include "nbpa/stein.hpp"

namespace nbpa {

namespace {

IntegerPmf mixture(const std::vector<IntegerPmf>& parts) {
    IntegerPmf out;
    const double weight = 1.0 / static_cast<double>(parts.size());
    for (const IntegerPmf& part : parts) {
        if (part.size() > out.size()) out.probs.resize(part.size(), 0.0);
        for (std::size_t k = 0; k < part.size(); ++k) out.probs[k] += weight * part.probs[k];
        out.tail_mass += weight * part.tail_mass;
    }
    return out;
}

// Pooled in-degree histogram over `graphs` independent graphs; one
// histogram per graph so callers can bootstrap at graph level.
std::vector<std::vector<std::int64_t>> simulate_degree_histograms(std::int64_t n,
                                                                  const PAParams& params,
                                                                  std::int64_t graphs,
                                                                  std::uint64_t seed) {
    std::vector<std::vector<std::int64_t>> histograms;
    histograms.reserve(static_cast<std::size_t>(graphs));
    for (std::int64_t g = 0; g < graphs; ++g) {
        RngStream rng(seed, static_cast<std::uint64_t>(g));
        PAGraphM1 fine = generate_m1(n * params.m, params.epsilon(), rng);
        std::vector<std::int64_t> degrees = collapse(fine, params.m);
        std::vector<std::int64_t> hist;
        for (std::int64_t d : degrees) {
            if (static_cast<std::size_t>(d) >= hist.size()) hist.resize(static_cast<std::size_t>(d) + 1, 0);
            hist[static_cast<std::size_t>(d)] += 1;
        }
        histograms.push_back(std::move(hist));
    }
    return histograms;
}

IntegerPmf histogram_mixture(const std::vector<std::vector<std::int64_t>>& histograms,
                             const std::vector<std::size_t>& picks) {
    std::int64_t total = 0;
    std::vector<std::int64_t> merged;
    for (std::size_t g : picks) {
        const auto& hist = histograms[g];
        if (hist.size() > merged.size()) merged.resize(hist.size(), 0);
        for (std::size_t k = 0; k < hist.size(); ++k) merged[k] += hist[k];
        for (std::int64_t c : hist) total += c;
    }
    IntegerPmf out;
    out.probs.reserve(merged.size());
    for (std::int64_t c : merged) out.probs.push_back(static_cast<double>(c) / static_cast<double>(total));
    return out;
}

}  // namespace

TvResult tv_exact(const IntegerPmf& p, const IntegerPmf& q) {
    long double half_l1 = 0.0L;
    std::size_t len = std::max(p.size(), q.size());
    for (std::size_t k = 0; k < len; ++k) half_l1 += std::abs(p.at(k) - q.at(k));
    half_l1 = half_l1 / 2.0L + std::abs(p.tail_mass - q.tail_mass) / 2.0L;
    TvResult out;
    out.value = static_cast<double>(half_l1);
    out.bracket = (p.tail_mass + q.tail_mass) / 2.0;
    return out;
}

double tv_nb_shift_bound(double r, double p, double eps) {
    if (!(r > 0.0) || !(eps >= 0.0) || !(eps < p) || !(p <= 1.0)) {
        throw std::domain_error("tv_nb_shift_bound: requires r > 0 and 0 <= eps < p <= 1");
    }
    return r * eps / (p - eps);
}

IntegerPmf empirical_pmf(const std::vector<std::int64_t>& samples) {
    if (samples.empty()) throw std::domain_error("empirical_pmf: empty input");
    std::vector<std::int64_t> counts;
    for (std::int64_t s : samples) {
        if (s < 0) throw std::domain_error("empirical_pmf: negative sample");
        if (static_cast<std::size_t>(s) >= counts.size()) counts.resize(static_cast<std::size_t>(s) + 1, 0);
        counts[static_cast<std::size_t>(s)] += 1;
    }
    IntegerPmf out;
    out.probs.reserve(counts.size());
    for (std::int64_t c : counts) {
        out.probs.push_back(static_cast<double>(c) / static_cast<double>(samples.size()));
    }
    return out;
}

std::vector<ConvergenceRecord> convergence_experiment(const ConvergenceConfig& config) {
    config.params.validate();
    const IntegerPmf limit = k_pmf_adaptive(config.params);
    std::vector<ConvergenceRecord> records;
    records.reserve(config.n_values.size());

    if (config.method == ConvergenceMethod::kExactDp) {
        if (config.params.m != 1) {
            throw std::domain_error("convergence_experiment: exact route requires m = 1");
        }
        double projected = 0.0;
        for (std::int64_t n : config.n_values) {
            projected += static_cast<double>(n) * static_cast<double>(n) * 512.0;
        }
        if (projected > config.dp_step_budget) {
            throw std::domain_error("convergence_experiment: projected DP cost exceeds step budget");
        }
    }

    for (std::int64_t n : config.n_values) {
        ConvergenceRecord rec;
        rec.n = n;
        rec.m = config.params.m;
        rec.delta = config.params.delta;
        rec.method = config.method;
        rec.seed = config.seed;
        if (config.method == ConvergenceMethod::kExactDp) {
            IntegerPmf w_law = exact_W_pmf_m1_adaptive(n, config.params.epsilon());
            rec.dtv = tv_exact(w_law, limit).value;
            rec.stderr_ = 0.0;
        } else {
            auto histograms = simulate_degree_histograms(n, config.params, config.graphs, config.seed);
            std::vector<std::size_t> all(histograms.size());
            for (std::size_t g = 0; g < all.size(); ++g) all[g] = g;
            rec.dtv = tv_exact(histogram_mixture(histograms, all), limit).value;

            // Graph-level bootstrap for the error bar.
            RngStream boot(config.seed ^ 0x626f6f74ULL, 0);
            long double sum = 0.0L, sum2 = 0.0L;
            for (std::int64_t b = 0; b < config.bootstrap_resamples; ++b) {
                std::vector<std::size_t> picks(histograms.size());
                for (std::size_t g = 0; g < picks.size(); ++g) {
                    picks[g] = static_cast<std::size_t>(boot.below(histograms.size()));
                }
                double d = tv_exact(histogram_mixture(histograms, picks), limit).value;
                sum += d;
                sum2 += static_cast<long double>(d) * d;
            }
            const double nb = static_cast<double>(config.bootstrap_resamples);
            long double mean = sum / nb;
            long double var = (sum2 - nb * mean * mean) / (nb - 1.0L);
            rec.stderr_ = var > 0.0L ? std::sqrt(static_cast<double>(var)) : 0.0;
        }
        records.push_back(rec);
    }
    return records;
}

RateFit fit_rate(const std::vector<ConvergenceRecord>& records) {
    if (records.size() < 3) throw std::domain_error("fit_rate: need at least 3 records");
    long double sx = 0.0L, sy = 0.0L, sxx = 0.0L, sxy = 0.0L;
    for (const ConvergenceRecord& rec : records) {
        if (!(rec.dtv > 0.0)) throw std::domain_error("fit_rate: dtv must be positive");
        double x = std::log(static_cast<double>(rec.n) / std::log(static_cast<double>(rec.n)));
        double y = std::log(rec.dtv);
        sx += x;
        sy += y;
        sxx += static_cast<long double>(x) * x;
        sxy += static_cast<long double>(x) * y;
    }
    const long double count = static_cast<long double>(records.size());
    const long double denom = count * sxx - sx * sx;
    if (!(denom > 0.0L)) throw std::domain_error("fit_rate: degenerate n values");
    RateFit fit;
    fit.slope = static_cast<double>((count * sxy - sx * sy) / denom);
    fit.intercept = static_cast<double>((sy - fit.slope * sx) / count);
    return fit;
}

DecompositionReport decomposition_check(std::int64_t n, const PAParams& params,
                                        const DecompositionOptions& options) {
    params.validate();
    if (n < 1) throw std::domain_error("decomposition_check: n must be >= 1");
    const double r = params.limit_shape();
    const double exponent = params.mixing_exponent();

    std::vector<IntegerPmf> nb_mean_parts, nb_index_parts;
    std::vector<IntegerPmf> w_parts;  // m = 1 only
    double cond1 = 0.0, cond2 = 0.0;
    nb_mean_parts.reserve(static_cast<std::size_t>(n));
    nb_index_parts.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 1; i <= n; ++i) {
        double mu = expected_in_degree({n, i, params});
        NBParams mean_target{r, r / (mu + r)};
        NBParams index_target{r, std::pow(static_cast<double>(i) / static_cast<double>(n), exponent)};
        nb_mean_parts.push_back(nb_pmf_adaptive(mean_target));
        nb_index_parts.push_back(nb_pmf_adaptive(index_target));
        cond2 += tv_exact(nb_mean_parts.back(), nb_index_parts.back()).value;
        if (params.m == 1) {
            w_parts.push_back(exact_degree_pmf_m1_adaptive(n, i, params.epsilon()));
            cond1 += tv_exact(w_parts.back(), nb_mean_parts.back()).value;
        }
    }
    IntegerPmf mix_mean = mixture(nb_mean_parts);
    IntegerPmf mix_index = mixture(nb_index_parts);
    IntegerPmf limit = k_pmf_adaptive(params);

    DecompositionReport report{};
    if (params.m == 1) {
        report.values[0] = tv_exact(mixture(w_parts), mix_mean).value;
        report.conditional_mean[0] = cond1 / static_cast<double>(n);
    } else {
        auto histograms = simulate_degree_histograms(n, params, options.graphs, options.seed);
        std::vector<std::size_t> all(histograms.size());
        for (std::size_t g = 0; g < all.size(); ++g) all[g] = g;
        report.values[0] = tv_exact(histogram_mixture(histograms, all), mix_mean).value;
        report.conditional_mean[0] = report.values[0];
    }
    report.values[1] = tv_exact(mix_mean, mix_index).value;
    report.conditional_mean[1] = cond2 / static_cast<double>(n);
    report.values[2] = tv_exact(mix_index, limit).value;

    // Conditional version of the third claim: couple the uniform mixing
    // variable with I by restricting it to ((i-1)/n, i/n) and average the
    // per-index TVs, each sub-mixture evaluated by Gauss-Legendre quadrature.
    static const double kGlNodes[8] = {-0.9602898564975363, -0.7966664774136267,
                                       -0.5255324099163290, -0.1834346424956498,
                                       0.1834346424956498,  0.5255324099163290,
                                       0.7966664774136267,  0.9602898564975363};
    static const double kGlWeights[8] = {0.1012285362903763, 0.2223810344533745,
                                         0.3137066458778873, 0.3626837833783620,
                                         0.3626837833783620, 0.3137066458778873,
                                         0.2223810344533745, 0.1012285362903763};
    double cond3 = 0.0;
    for (std::int64_t i = 1; i <= n; ++i) {
        std::vector<IntegerPmf> local;
        local.reserve(8);
        IntegerPmf sub;
        for (int q = 0; q < 8; ++q) {
            double u = (static_cast<double>(i) - 0.5 + 0.5 * kGlNodes[q]) / static_cast<double>(n);
            IntegerPmf part = nb_pmf_adaptive({r, std::pow(u, exponent)});
            if (part.size() > sub.size()) sub.probs.resize(part.size(), 0.0);
            for (std::size_t k = 0; k < part.size(); ++k) {
                sub.probs[k] += 0.5 * kGlWeights[q] * part.probs[k];
            }
            sub.tail_mass += 0.5 * kGlWeights[q] * part.tail_mass;
        }
        cond3 += tv_exact(nb_index_parts[static_cast<std::size_t>(i) - 1], sub).value;
    }
    report.conditional_mean[2] = cond3 / static_cast<double>(n);
    return report;
}

std::vector<Theorem31Row> theorem31_check(std::int64_t n, const std::vector<std::int64_t>& i_list,
                                          const PAParams& params, std::int64_t replicas,
                                          std::uint64_t seed) {
    params.validate();
    if (params.m != 1) throw std::domain_error("theorem31_check: exact route requires m = 1");
    if (replicas < 1) throw std::domain_error("theorem31_check: replicas must be >= 1");
    const double r = params.limit_shape();

    std::vector<Theorem31Row> rows;
    rows.reserve(i_list.size());
    for (std::int64_t i : i_list) {
        IntegerPmf w_law = exact_degree_pmf_m1_adaptive(n, i, params.epsilon());
        double mu = expected_in_degree({n, i, params});
        double p = r / (mu + r);
        IntegerPmf target = nb_pmf_adaptive({r, p});

        CouplingSimulator sim(n, i, params);
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        std::vector<CouplingSample> samples;
        samples.reserve(static_cast<std::size_t>(replicas));
        for (std::int64_t rep = 0; rep < replicas; ++rep) samples.push_back(sim.sample(rng));
        TvBoundEstimate bound = tv_upper_bound(samples, r, p);

        Theorem31Row row;
        row.i = i;
        row.dtv = tv_exact(w_law, target).value;
        row.scaled_dtv = static_cast<double>(i) * row.dtv;
        row.bound_b = bound.bound_b;
        row.bound_b_stderr = bound.bound_b_stderr;
        row.bound_simple = bound.bound_simple;
        row.p_neq = bound.p_neq;
        row.p_bc = bound.p_bc;
        rows.push_back(row);
    }
    return rows;
}

CouplingReport coupling_report(std::int64_t n, std::int64_t i, const PAParams& params,
                               std::int64_t replicas, std::uint64_t seed) {
    params.validate();
    if (replicas < 1) throw std::domain_error("coupling_report: replicas must be >= 1");
    const double r = params.limit_shape();
    double mu = expected_in_degree({n, i, params});
    double p = r / (mu + r);

    CouplingSimulator sim(n, i, params);
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    std::vector<CouplingSample> samples;
    samples.reserve(static_cast<std::size_t>(replicas));
    for (std::int64_t rep = 0; rep < replicas; ++rep) samples.push_back(sim.sample(rng));
    TvBoundEstimate bound = tv_upper_bound(samples, r, p);

    CouplingReport report;
    report.p_neq = bound.p_neq;
    report.p_bc = bound.p_bc;
    report.bound_b = bound.bound_b;
    report.bound_simple = bound.bound_simple;
    report.dtv_exact = std::numeric_limits<double>::quiet_NaN();
    if (params.m == 1) {
        IntegerPmf w_law = exact_degree_pmf_m1_adaptive(n, i, params.epsilon());
        report.dtv_exact = tv_exact(w_law, nb_pmf_adaptive({r, p})).value;
    }
    return report;
}

}  // namespace nbpa
