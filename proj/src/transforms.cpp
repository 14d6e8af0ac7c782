#include "nbpa/transforms.hpp"

#include <cmath>
#include <stdexcept>

#include "nbpa/distributions.hpp"

namespace nbpa {

namespace {

// One forward step of the urn recursion: law of U_{r,k} -> law of U_{r,k+1}.
void urn_step(std::vector<double>& law, std::int64_t k, double r) {
    law.push_back(0.0);
    for (std::size_t u = law.size() - 1; u > 0; --u) {
        double stay = law[u] * (1.0 - (r + static_cast<double>(u)) / (r + static_cast<double>(k)));
        double up = law[u - 1] * (r + static_cast<double>(u) - 1.0) / (r + static_cast<double>(k));
        law[u] = stay + up;
    }
    law[0] *= 1.0 - r / (r + static_cast<double>(k));
}

}  // namespace

void UrnSpec::validate() const {
    if (!(r > 0.0)) throw std::domain_error("UrnSpec: r must be positive");
    if (n < 1) throw std::domain_error("UrnSpec: n must be >= 1");
}

IntegerPmf size_bias(const IntegerPmf& pmf) {
    if (pmf.tail_mass >= 1e-8) {
        throw std::invalid_argument("size_bias: tail mass too large for an honest transform");
    }
    double mu = pmf.mean();
    if (!(mu > 1e-12)) throw std::domain_error("size_bias: mean must be strictly positive");
    IntegerPmf out;
    out.probs.resize(pmf.size(), 0.0);
    for (std::size_t k = 1; k < pmf.size(); ++k) {
        out.probs[k] = static_cast<double>(k) * pmf.probs[k] / mu;
    }
    out.tail_mass = 0.0;
    return out;
}

IntegerPmf urn_pmf(const UrnSpec& spec) {
    spec.validate();
    std::vector<double> law{1.0};  // U_{r,1} = 0
    for (std::int64_t k = 1; k < spec.n; ++k) urn_step(law, k, spec.r);
    IntegerPmf out;
    out.probs = std::move(law);
    out.tail_mass = 0.0;
    return out;
}

std::int64_t urn_sample(const UrnSpec& spec, RngStream& rng) {
    spec.validate();
    std::int64_t u = 0;
    for (std::int64_t k = 1; k < spec.n; ++k) {
        if (rng.uniform() < (spec.r + static_cast<double>(u)) / (spec.r + static_cast<double>(k))) {
            ++u;
        }
    }
    return u;
}

double urn_falling_factorial_moment(const UrnSpec& spec, int k) {
    spec.validate();
    if (k < 0) throw std::domain_error("urn_falling_factorial_moment: k must be >= 0");
    if (k == 0) return 1.0;
    if (k >= spec.n) return 0.0;
    double prod = spec.r / (spec.r + k);
    for (int j = 1; j <= k; ++j) prod *= static_cast<double>(spec.n - j);
    return prod;
}

IntegerPmf r_equilibrium(const IntegerPmf& pmf, double r) {
    if (!(r > 0.0)) throw std::domain_error("r_equilibrium: r must be positive");
    IntegerPmf sb = size_bias(pmf);
    std::size_t kmax = sb.size() - 1;
    IntegerPmf out;
    out.probs.assign(kmax > 0 ? kmax : 1, 0.0);
    // Run the urn recursion once, folding in the mixture weight at each n.
    std::vector<double> law{1.0};
    for (std::size_t n = 1; n <= kmax; ++n) {
        if (n > 1) urn_step(law, static_cast<std::int64_t>(n) - 1, r);
        double weight = sb.probs[n];
        if (weight != 0.0) {
            for (std::size_t u = 0; u < law.size(); ++u) out.probs[u] += weight * law[u];
        }
    }
    out.tail_mass = 0.0;
    return out;
}

double fixed_point_residual(const NBParams& params, std::int64_t kmax) {
    params.validate();
    if (!(params.p < 1.0)) throw std::domain_error("fixed_point_residual: requires p < 1");
    IntegerPmf truncated = nb_pmf(params, kmax).renormalized();
    IntegerPmf transformed = r_equilibrium(truncated, params.r);
    long double half_l1 = 0.0L;
    std::size_t len = std::max(truncated.size(), transformed.size());
    for (std::size_t k = 0; k < len; ++k) {
        half_l1 += std::abs(truncated.at(k) - transformed.at(k));
    }
    return static_cast<double>(half_l1 / 2.0L);
}

double dr_operator(const std::vector<double>& g, std::int64_t k, double r) {
    double kr = static_cast<double>(k) / r;
    return (kr + 1.0) * g[static_cast<std::size_t>(k) + 1] - kr * g[static_cast<std::size_t>(k)];
}

}  // namespace nbpa
