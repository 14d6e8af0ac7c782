#include "nbpa/pa_graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nbpa/numerics.hpp"
#include "nbpa/transforms.hpp"

namespace nbpa {

namespace {

constexpr std::int64_t kStateCapLimit = 1 << 20;

double chain_weight(double epsilon) { return 1.0 + epsilon; }

// DP core shared by the capped and adaptive entry points; returns the law
// with whatever tail the cap leaves.
IntegerPmf degree_dp_m1(std::int64_t n, std::int64_t j, double epsilon, std::int64_t cap) {
    const double w = chain_weight(epsilon);
    IntegerPmf out;
    out.probs.assign(static_cast<std::size_t>(cap), 0.0);
    double p_loop = w / (static_cast<double>(j) * (2.0 + epsilon) - 1.0);
    out.probs[0] = 1.0 - p_loop;
    if (cap > 1) {
        out.probs[1] = p_loop;
    } else {
        out.tail_mass = p_loop;
    }
    std::size_t top = cap > 1 ? 1 : 0;
    for (std::int64_t s = j + 1; s <= n; ++s) {
        const double denom = static_cast<double>(s) * (2.0 + epsilon) - 1.0;
        if (top == static_cast<std::size_t>(cap) - 1) {
            out.tail_mass += out.probs[top] * (static_cast<double>(top) + w) / denom;
        }
        std::size_t high = std::min(top + 1, static_cast<std::size_t>(cap) - 1);
        for (std::size_t d = high; d >= 1; --d) {
            double stay = out.probs[d] * (1.0 - (static_cast<double>(d) + w) / denom);
            double up = out.probs[d - 1] * (static_cast<double>(d) - 1.0 + w) / denom;
            out.probs[d] = stay + up;
        }
        out.probs[0] *= 1.0 - w / denom;
        top = high;
    }
    return out;
}

}  // namespace

std::vector<std::int64_t> PAGraphM1::in_degrees() const {
    std::vector<std::int64_t> deg(static_cast<std::size_t>(n), 0);
    for (std::int32_t t : targets) deg[static_cast<std::size_t>(t) - 1] += 1;
    return deg;
}

std::int64_t ConditionedGraph::block_in_degree(std::int64_t i, int m) const {
    std::int64_t lo = m * (i - 1) + 1, hi = m * i;
    std::int64_t count = 0;
    for (std::int32_t t : targets) {
        if (t >= lo && t <= hi) ++count;
    }
    return count;
}

void DegreeQuery::validate() const {
    params.validate();
    if (n < 1 || i < 1 || i > n) throw std::domain_error("DegreeQuery: requires 1 <= i <= n");
}

PAGraphM1 generate_m1(std::int64_t n, double epsilon, RngStream& rng) {
    if (n < 1) throw std::domain_error("generate_m1: n must be >= 1");
    if (!(epsilon > -1.0)) throw std::domain_error("generate_m1: epsilon must exceed -1");

    PAGraphM1 g;
    g.n = n;
    g.epsilon = epsilon;
    g.targets.reserve(static_cast<std::size_t>(n));
    g.targets.push_back(1);

    std::vector<std::int32_t> endpoints;
    endpoints.reserve(static_cast<std::size_t>(2 * n));
    endpoints.push_back(1);
    endpoints.push_back(1);
    std::vector<std::int64_t> degree(static_cast<std::size_t>(n) + 1, 0);
    degree[1] = 2;

    for (std::int64_t s = 2; s <= n; ++s) {
        const std::uint64_t n_endpoints = static_cast<std::uint64_t>(2 * (s - 1) + 1);
        std::int64_t target;
        if (epsilon >= 0.0) {
            const double denom = static_cast<double>(s) * (2.0 + epsilon) - 1.0;
            if (rng.uniform() * denom < static_cast<double>(n_endpoints)) {
                std::uint64_t e = rng.below(n_endpoints);
                target = e < endpoints.size() ? endpoints[e] : s;  // last slot: s's own out-stub
            } else {
                target = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(s)));
            }
        } else {
            // Thinned endpoint proposal: propose proportional to degree,
            // accept with (deg + eps)/deg.
            for (;;) {
                std::uint64_t e = rng.below(n_endpoints);
                std::int64_t cand = e < endpoints.size() ? endpoints[e] : s;
                double d = cand == s ? 1.0 : static_cast<double>(degree[static_cast<std::size_t>(cand)]);
                if (rng.uniform() * d < d + epsilon) {
                    target = cand;
                    break;
                }
            }
        }
        g.targets.push_back(static_cast<std::int32_t>(target));
        endpoints.push_back(static_cast<std::int32_t>(s));
        endpoints.push_back(static_cast<std::int32_t>(target));
        degree[static_cast<std::size_t>(target)] += 1;
        degree[static_cast<std::size_t>(s)] += 1;
    }
    return g;
}

std::vector<std::int64_t> collapse(const PAGraphM1& g, int m) {
    if (m < 1 || g.n % m != 0) throw std::domain_error("collapse: g.n must be divisible by m");
    std::vector<std::int64_t> fine = g.in_degrees();
    std::vector<std::int64_t> coarse(static_cast<std::size_t>(g.n / m), 0);
    for (std::size_t v = 0; v < fine.size(); ++v) coarse[v / static_cast<std::size_t>(m)] += fine[v];
    return coarse;
}

std::int64_t sample_W(std::int64_t n, const PAParams& params, RngStream& rng) {
    params.validate();
    if (n < 1) throw std::domain_error("sample_W: n must be >= 1");
    PAGraphM1 g = generate_m1(n * params.m, params.epsilon(), rng);
    std::vector<std::int64_t> deg = collapse(g, params.m);
    return deg[rng.below(static_cast<std::uint64_t>(n))];
}

double expected_in_degree_m1(std::int64_t k, std::int64_t j, double epsilon) {
    if (j < 1) throw std::domain_error("expected_in_degree_m1: j must be >= 1");
    if (k < j) return 0.0;
    const double a = (1.0 + epsilon) / (2.0 + epsilon);
    const double ratio_j = gamma_ratio(static_cast<double>(j), a - 1.0, 0.0);  // G(j-1+a)/G(j)
    const double ratio_k = gamma_ratio(static_cast<double>(k), 1.0, a);        // G(k+1)/G(k+a)
    return (1.0 + epsilon) * (ratio_j * ratio_k - 1.0);
}

double expected_in_degree(const DegreeQuery& q) {
    q.validate();
    const double eps = q.params.epsilon();
    const std::int64_t nm = q.n * q.params.m;
    double mu = 0.0;
    for (int j = 1; j <= q.params.m; ++j) {
        mu += expected_in_degree_m1(nm, (q.i - 1) * q.params.m + j, eps);
    }
    return mu;
}

IntegerPmf exact_degree_pmf_m1(std::int64_t n, std::int64_t j, double epsilon,
                               std::int64_t state_cap) {
    if (j < 1 || j > n) throw std::domain_error("exact_degree_pmf_m1: requires 1 <= j <= n");
    if (state_cap < 1) throw std::domain_error("exact_degree_pmf_m1: state_cap must be >= 1");
    IntegerPmf out = degree_dp_m1(n, j, epsilon, state_cap);
    if (out.tail_mass > 1e-8) {
        throw std::domain_error("exact_degree_pmf_m1: state_cap too small (tail mass above 1e-8)");
    }
    return out;
}

IntegerPmf exact_degree_pmf_m1_adaptive(std::int64_t n, std::int64_t j, double epsilon) {
    if (j < 1 || j > n) throw std::domain_error("exact_degree_pmf_m1: requires 1 <= j <= n");
    for (std::int64_t cap = 512; cap <= kStateCapLimit; cap *= 2) {
        IntegerPmf out = degree_dp_m1(n, j, epsilon, cap);
        if (out.tail_mass < 1e-10) return out;
    }
    throw std::domain_error("exact_degree_pmf_m1_adaptive: state cap limit reached");
}

IntegerPmf exact_W_pmf_m1(std::int64_t n, double epsilon, std::int64_t state_cap) {
    if (n < 1) throw std::domain_error("exact_W_pmf_m1: n must be >= 1");
    IntegerPmf out;
    out.probs.assign(static_cast<std::size_t>(state_cap), 0.0);
    const double weight = 1.0 / static_cast<double>(n);
    for (std::int64_t j = 1; j <= n; ++j) {
        IntegerPmf part = exact_degree_pmf_m1(n, j, epsilon, state_cap);
        for (std::size_t d = 0; d < part.size(); ++d) out.probs[d] += weight * part.probs[d];
        out.tail_mass += weight * part.tail_mass;
    }
    return out;
}

IntegerPmf exact_W_pmf_m1_adaptive(std::int64_t n, double epsilon) {
    if (n < 1) throw std::domain_error("exact_W_pmf_m1: n must be >= 1");
    IntegerPmf out;
    const double weight = 1.0 / static_cast<double>(n);
    for (std::int64_t j = 1; j <= n; ++j) {
        IntegerPmf part = exact_degree_pmf_m1_adaptive(n, j, epsilon);
        if (part.size() > out.size()) out.probs.resize(part.size(), 0.0);
        for (std::size_t d = 0; d < part.size(); ++d) out.probs[d] += weight * part.probs[d];
        out.tail_mass += weight * part.tail_mass;
    }
    return out;
}

ConditionedBuilder::ConditionedBuilder(std::int64_t nm, double epsilon, std::int64_t k,
                                       std::int64_t l)
    : nm_(nm), k_(k), l_(l), step_(1), epsilon_(epsilon) {
    if (nm < 1 || l < 1 || l > k || k > nm) {
        throw std::domain_error("ConditionedBuilder: requires 1 <= l <= k <= nm");
    }
    degree_.assign(static_cast<std::size_t>(nm) + 1, 0);
    // Pre-placed edge from vertex k to i'.
    degree_[0] = 1;
    degree_[static_cast<std::size_t>(k_)] = 1;
    targets_.reserve(static_cast<std::size_t>(nm));
}

std::vector<std::pair<std::int32_t, double>> ConditionedBuilder::attachment_distribution() const {
    if (done()) throw std::logic_error("ConditionedBuilder: construction already finished");
    const std::int64_t s = step_;
    if (s == k_) return {};
    std::vector<std::pair<std::int32_t, double>> dist;
    double total = 0.0;
    for (std::int64_t j = 1; j <= s; ++j) {
        double weight = static_cast<double>(degree_[static_cast<std::size_t>(j)]) + epsilon_;
        if (j == s) weight += 1.0;  // the attacher's own out-stub
        dist.emplace_back(static_cast<std::int32_t>(j), weight);
        total += weight;
    }
    if (s >= l_) {
        double weight = static_cast<double>(degree_[0]);  // i' carries no offset
        dist.emplace_back(0, weight);
        total += weight;
    }
    for (auto& entry : dist) entry.second /= total;
    return dist;
}

void ConditionedBuilder::advance(std::int32_t target) {
    const std::int64_t s = step_;
    if (done() || s == k_) throw std::logic_error("ConditionedBuilder: no free choice at this step");
    if (target < 0 || target > s || (target == 0 && s < l_)) {
        throw std::domain_error("ConditionedBuilder: invalid attachment target");
    }
    degree_[static_cast<std::size_t>(s)] += 1;       // out-half
    degree_[static_cast<std::size_t>(target)] += 1;  // in-half
    targets_.push_back(target);
    ++step_;
}

void ConditionedBuilder::advance_forced() {
    if (done() || step_ != k_) throw std::logic_error("ConditionedBuilder: step has a free choice");
    targets_.push_back(0);  // vertex k's edge sits on i'
    ++step_;
}

ConditionedGraph ConditionedBuilder::finish() && {
    if (!done()) throw std::logic_error("ConditionedBuilder: construction not finished");
    ConditionedGraph g;
    g.nm = nm_;
    g.epsilon = epsilon_;
    g.k = k_;
    g.l = l_;
    g.targets = std::move(targets_);
    g.i_prime_degree = degree_[0];
    return g;
}

ConditionedGraph generate_conditioned(std::int64_t n, const PAParams& params, std::int64_t k,
                                      std::int64_t l, RngStream& rng) {
    params.validate();
    ConditionedBuilder builder(n * params.m, params.epsilon(), k, l);
    while (!builder.done()) {
        auto dist = builder.attachment_distribution();
        if (dist.empty()) {
            builder.advance_forced();
            continue;
        }
        double u = rng.uniform();
        double cum = 0.0;
        std::int32_t chosen = dist.back().first;
        for (const auto& [target, prob] : dist) {
            cum += prob;
            if (u < cum) {
                chosen = target;
                break;
            }
        }
        builder.advance(chosen);
    }
    return std::move(builder).finish();
}

CouplingSimulator::CouplingSimulator(std::int64_t n, std::int64_t i, const PAParams& params)
    : n_(n), i_(i), m_(params.m), epsilon_(params.epsilon()) {
    params.validate();
    if (n < 1 || i < 1 || i > n) throw std::domain_error("CouplingSimulator: requires 1 <= i <= n");
    nm_ = n * m_;
    b1_ = static_cast<std::int64_t>(m_) * (i - 1) + 1;
    bm_ = static_cast<std::int64_t>(m_) * i;
    w_ = 1.0 + epsilon_;

    // Size-bias index table: P(K=k, L=l) proportional to E X_{k,l}.
    double cum = 0.0;
    for (std::int64_t l = b1_; l <= bm_; ++l) {
        for (std::int64_t k = l; k <= nm_; ++k) {
            double ex = (expected_in_degree_m1(k - 1, l, epsilon_) + w_) /
                        (static_cast<double>(k) * (2.0 + epsilon_) - 1.0);
            cum += ex;
            kl_k_.push_back(k);
            kl_l_.push_back(l);
            kl_cum_.push_back(cum);
        }
    }
    mu_ = cum;
}

CouplingSample CouplingSimulator::sample(RngStream& rng) {
    // Draw (K, L) by inversion on the size-bias index table.
    const double u_kl = rng.uniform() * mu_;
    std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(kl_cum_.begin(), kl_cum_.end(), u_kl) - kl_cum_.begin());
    if (idx >= kl_cum_.size()) idx = kl_cum_.size() - 1;
    const std::int64_t K = kl_k_[idx];
    const std::int64_t L = kl_l_[idx];

    std::vector<std::int64_t> und(static_cast<std::size_t>(m_), 0);
    std::vector<std::int64_t> con(static_cast<std::size_t>(m_), 0);
    std::int64_t received_ip = 0;  // in-edges of i' beyond the initial one from K
    bool on_b = true;

    for (std::int64_t s = b1_; s <= nm_; ++s) {
        const double u = rng.uniform();
        const double denom_u = static_cast<double>(s) * (2.0 + epsilon_) - 1.0;
        const bool conditioned_phase = s >= L && s < K;
        const double denom_c = conditioned_phase ? static_cast<double>(s) * (2.0 + epsilon_)
                                                 : denom_u;

        // Unconditioned chain: intervals laid out block-index ascending.
        double cum_u = 0.0;
        int hit_u = -1;
        for (int j = 0; j < m_; ++j) {
            if (b1_ + j > s) break;
            cum_u += (static_cast<double>(und[static_cast<std::size_t>(j)]) + w_) / denom_u;
            if (u < cum_u) {
                hit_u = j;
                break;
            }
        }
        if (hit_u >= 0) und[static_cast<std::size_t>(hit_u)] += 1;

        // Conditioned chain: same interval order, plus the i' interval.
        if (s != K) {
            double cum_c = 0.0;
            int hit_c = -1;  // -2 means i'
            for (int j = 0; j < m_; ++j) {
                if (b1_ + j > s) break;
                cum_c += (static_cast<double>(con[static_cast<std::size_t>(j)]) + w_) / denom_c;
                if (u < cum_c) {
                    hit_c = j;
                    break;
                }
            }
            if (hit_c < 0 && s >= L) {
                double p_ip = (1.0 + static_cast<double>(received_ip)) / denom_c;
                if (u < cum_c + p_ip) hit_c = -2;
            }
            if (hit_c >= 0) con[static_cast<std::size_t>(hit_c)] += 1;
            if (hit_c == -2) received_ip += 1;
            if (s >= b1_ && s <= bm_ && hit_c != -1) on_b = false;
        }
    }

    CouplingSample out;
    out.w = 0;
    std::int64_t w_cond = 0;
    for (int j = 0; j < m_; ++j) {
        out.w += und[static_cast<std::size_t>(j)];
        w_cond += con[static_cast<std::size_t>(j)];
    }
    out.on_b = on_b;
    if (on_b) {
        out.w_star = w_cond;
    } else {
        // Off B the urn identity breaks, so resample the urn value: T is
        // the size-bias total (block count plus i' in-degree), and a fresh
        // U_{m+d, T} draw restores the exact r-equilibrium marginal.
        const std::int64_t t = w_cond + received_ip + 1;
        out.w_star = urn_sample({static_cast<double>(m_) * (1.0 + epsilon_), t}, rng);
    }
    return out;
}

CouplingSample sample_equilibrium_coupling(std::int64_t n, std::int64_t i, const PAParams& params,
                                           RngStream& rng) {
    CouplingSimulator sim(n, i, params);
    return sim.sample(rng);
}

}  // namespace nbpa
