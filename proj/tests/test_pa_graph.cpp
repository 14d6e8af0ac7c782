#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "enumeration_oracle.hpp"
#include "nbpa/pa_graph.hpp"
#include "nbpa/rng.hpp"
#include "nbpa/transforms.hpp"

using namespace nbpa;
using namespace nbpa_test;

TEST_CASE("n=2 frozen values") {
    // Vertex 2 self-loops with probability 1/3, else attaches to vertex 1.
    CHECK(expected_in_degree({2, 1, PAParams{1, 0.0}}) == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
    IntegerPmf law = exact_degree_pmf_m1(2, 2, 0.0, 8);
    CHECK(law.probs[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(law.probs[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    RngStream rng(1);
    int loops = 0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        RngStream local(5, static_cast<std::uint64_t>(t));
        PAGraphM1 g = generate_m1(2, 0.0, local);
        if (g.targets[1] == 2) ++loops;
    }
    CHECK(std::abs(static_cast<double>(loops) / trials - 1.0 / 3.0) < 0.01);
}

TEST_CASE("generator matches the enumeration law (both signs of epsilon)") {
    for (double eps : {0.0, 0.5, -0.5}) {
        auto graphs = enumerate_unconditioned(4, eps);
        std::map<std::vector<int>, double> truth;
        for (const auto& g : graphs) truth[g.targets] += g.prob;

        std::map<std::vector<int>, double> freq;
        const int trials = 300000;
        for (int t = 0; t < trials; ++t) {
            RngStream rng(77, static_cast<std::uint64_t>(t));
            PAGraphM1 g = generate_m1(4, eps, rng);
            std::vector<int> key(g.targets.begin(), g.targets.end());
            freq[key] += 1.0 / trials;
        }
        double half_l1 = 0.0;
        for (const auto& [key, p] : truth) half_l1 += std::abs(p - (freq.count(key) ? freq[key] : 0.0));
        CHECK(half_l1 / 2.0 < 0.01);
    }
}

TEST_CASE("edge conservation and collapse") {
    RngStream rng(3);
    PAGraphM1 g = generate_m1(60, 0.25, rng);
    auto deg = g.in_degrees();
    std::int64_t total = 0;
    for (std::int64_t d : deg) total += d;
    CHECK(total == 60);  // every vertex contributes exactly one out-edge

    auto coarse = collapse(g, 3);
    REQUIRE(coarse.size() == 20);
    std::int64_t coarse_total = 0;
    for (std::int64_t d : coarse) coarse_total += d;
    CHECK(coarse_total == 60);
    CHECK_THROWS_AS(collapse(g, 7), std::domain_error);
}

TEST_CASE("DP degree law matches enumeration for nm <= 6") {
    for (double eps : {0.0, 0.5}) {
        for (int n = 1; n <= 6; ++n) {
            auto graphs = enumerate_unconditioned(n, eps);
            for (int j = 1; j <= n; ++j) {
                auto law = enum_block_law(graphs, j, 1);
                IntegerPmf dp = exact_degree_pmf_m1_adaptive(n, j, eps);
                for (std::size_t v = 0; v < std::max(law.size(), dp.size()); ++v) {
                    double truth = v < law.size() ? law[v] : 0.0;
                    CHECK(std::abs(dp.at(v) - truth) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("DP mean equals the closed-form martingale mean") {
    for (double eps : {0.0, 0.5, -0.25}) {
        for (std::int64_t n : {10, 100, 500}) {
            for (std::int64_t j : {std::int64_t{1}, n / 2 + 1, n}) {
                IntegerPmf law = exact_degree_pmf_m1_adaptive(n, j, eps);
                double mu = expected_in_degree_m1(n, j, eps);
                CHECK(std::abs(law.mean() - mu) <= 1e-8 * std::max(1.0, mu));
            }
        }
    }
}

TEST_CASE("conditioned construction: attachment probabilities (nm <= 6)") {
    // The conditioned law, with i' merged back into l, must equal the
    // unconditioned law given that vertex k attaches to l.
    struct Cfg { int m; double delta; };
    for (Cfg cfg : {Cfg{1, 0.0}, Cfg{1, 0.5}, Cfg{2, 1.0}}) {
        const double eps = cfg.delta / cfg.m;
        for (int n = 1; n * cfg.m <= 6; ++n) {
            const int nm = n * cfg.m;
            auto graphs = enumerate_unconditioned(nm, eps);
            for (int i = 1; i <= n; ++i) {
                const int b1 = cfg.m * (i - 1) + 1, bm = cfg.m * i;
                for (int l = b1; l <= bm; ++l) {
                    for (int k = l; k <= nm; ++k) {
                        double ex = enum_edge_prob(graphs, k, l);
                        double ex_cf = (expected_in_degree_m1(k - 1, l, eps) + 1.0 + eps) /
                                       (k * (2.0 + eps) - 1.0);
                        CHECK(std::abs(ex - ex_cf) <= 1e-10);

                        auto cond = enumerate_conditioned(nm, eps, k, l, i, cfg.m);
                        std::map<std::vector<int>, double> merged;
                        double mass = 0.0;
                        for (const auto& e : cond) {
                            std::vector<int> t(e.targets.begin(), e.targets.end());
                            for (int& x : t) {
                                if (x == 0) x = l;
                            }
                            merged[t] += e.prob;
                            mass += e.prob;
                        }
                        CHECK(std::abs(mass - 1.0) <= 1e-10);
                        for (const auto& g : graphs) {
                            if (g.targets[static_cast<std::size_t>(k) - 1] != l) continue;
                            double lhs = merged.count(g.targets) ? merged[g.targets] : 0.0;
                            CHECK(std::abs(lhs - g.prob / ex) <= 1e-10);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("conditioned construction: size bias, urn identity, equilibrium (nm <= 6)") {
    struct Cfg { int m; double delta; };
    for (Cfg cfg : {Cfg{1, 0.0}, Cfg{1, 0.5}, Cfg{2, 1.0}}) {
        const double eps = cfg.delta / cfg.m;
        const double r = cfg.m + cfg.delta;
        for (int n = 1; n * cfg.m <= 6; ++n) {
            const int nm = n * cfg.m;
            auto graphs = enumerate_unconditioned(nm, eps);
            for (int i = 1; i <= n; ++i) {
                IntegerPmf wlaw;
                wlaw.probs = enum_block_law(graphs, i, cfg.m);
                const double mu = wlaw.mean();
                const int b1 = cfg.m * (i - 1) + 1, bm = cfg.m * i;

                std::map<std::int64_t, double> t_law;                        // P(T=t)
                std::map<std::pair<std::int64_t, std::int64_t>, double> wtb; // P(W=v, T=t, B)
                std::map<std::int64_t, double> t_b;                          // P(T=t, B)
                std::map<std::int64_t, double> star;                         // P(W* = v)
                for (int l = b1; l <= bm; ++l) {
                    for (int k = l; k <= nm; ++k) {
                        double wkl = enum_edge_prob(graphs, k, l) / mu;
                        auto cond = enumerate_conditioned(nm, eps, k, l, i, cfg.m);
                        for (const auto& e : cond) {
                            std::int64_t t = e.w + e.i_prime_degree;
                            t_law[t] += wkl * e.prob;
                            if (e.on_b) {
                                wtb[{e.w, t}] += wkl * e.prob;
                                t_b[t] += wkl * e.prob;
                                star[e.w] += wkl * e.prob;
                            } else {
                                IntegerPmf urn = urn_pmf({r, t});
                                for (std::size_t v = 0; v < urn.size(); ++v) {
                                    star[static_cast<std::int64_t>(v)] += wkl * e.prob * urn.probs[v];
                                }
                            }
                        }
                    }
                }

                // Size bias: T has the size-bias law of W.
                IntegerPmf sb = size_bias(wlaw);
                for (std::size_t t = 0; t < sb.size() + 2; ++t) {
                    double lhs = t_law.count(static_cast<std::int64_t>(t))
                                     ? t_law[static_cast<std::int64_t>(t)]
                                     : 0.0;
                    CHECK(std::abs(lhs - sb.at(t)) <= 1e-10);
                }

                // Urn identity on B: P(W=v, B | T=t) = P(U_{r,t}=v) P(B | T=t).
                for (const auto& [t, pt] : t_law) {
                    double pbt = t_b.count(t) ? t_b[t] : 0.0;
                    IntegerPmf urn = urn_pmf({r, t});
                    for (std::int64_t v = 0; v < static_cast<std::int64_t>(urn.size()) + 1; ++v) {
                        double lhs = wtb.count({v, t}) ? wtb[{v, t}] : 0.0;
                        CHECK(std::abs(lhs - urn.at(static_cast<std::size_t>(v)) * pbt) <= 1e-10);
                    }
                }

                // The urn-resampled W* has exactly the r-equilibrium law.
                IntegerPmf eq = r_equilibrium(wlaw, r);
                for (std::size_t v = 0; v < eq.size() + 2; ++v) {
                    double lhs = star.count(static_cast<std::int64_t>(v))
                                     ? star[static_cast<std::int64_t>(v)]
                                     : 0.0;
                    CHECK(std::abs(lhs - eq.at(v)) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("good event probability matches the closed-form product") {
    struct Cfg { int m; double delta; };
    for (Cfg cfg : {Cfg{1, 0.0}, Cfg{2, 1.0}}) {
        const double eps = cfg.delta / cfg.m;
        const int n = 6 / cfg.m;
        const int nm = n * cfg.m;
        for (int i = 1; i <= n; ++i) {
            const int b1 = cfg.m * (i - 1) + 1, bm = cfg.m * i;
            for (int l = b1; l <= bm; ++l) {
                for (int k = l; k <= nm; ++k) {
                    auto cond = enumerate_conditioned(nm, eps, k, l, i, cfg.m);
                    double pb = 0.0;
                    for (const auto& e : cond) {
                        if (e.on_b) pb += e.prob;
                    }
                    double cf = 1.0;
                    for (int j = b1; j <= bm; ++j) {
                        if (j == k) continue;
                        // Weight outside the block over total weight at step
                        // j. Steps before l still lack the re-rooted edge's
                        // in-half (-1 in the denominator); steps after k have
                        // that edge attached to i', which removes one
                        // half-edge from both the outside weight and the
                        // total.
                        double num = cfg.m * (i - 1) * (1.0 + eps) + j - 1 - (j > k ? 1.0 : 0.0);
                        double den = j * (2.0 + eps) - (j < l || j > k ? 1.0 : 0.0);
                        cf *= num / den;
                    }
                    CHECK(std::abs(pb - cf) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("coupling simulator marginals match the exact laws") {
    // W marginal vs DP, W* marginal vs the r-equilibrium of the DP law,
    // and the per-sample coupling is usable for the TV bound.
    const std::int64_t n = 40, i = 8;
    PAParams params{1, 0.0};
    IntegerPmf w_law = exact_degree_pmf_m1_adaptive(n, i, 0.0);
    IntegerPmf eq_law = r_equilibrium(w_law, 1.0);

    CouplingSimulator sim(n, i, params);
    CHECK(sim.mean_w() == doctest::Approx(w_law.mean()).epsilon(1e-9));

    RngStream rng(2024);
    const int replicas = 100000;
    std::vector<double> w_freq, ws_freq;
    int neq = 0, bc = 0;
    for (int t = 0; t < replicas; ++t) {
        CouplingSample s = sim.sample(rng);
        if (static_cast<std::size_t>(s.w) >= w_freq.size()) w_freq.resize(s.w + 1, 0.0);
        if (static_cast<std::size_t>(s.w_star) >= ws_freq.size()) ws_freq.resize(s.w_star + 1, 0.0);
        w_freq[static_cast<std::size_t>(s.w)] += 1.0 / replicas;
        ws_freq[static_cast<std::size_t>(s.w_star)] += 1.0 / replicas;
        if (s.w != s.w_star) ++neq;
        if (!s.on_b) ++bc;
    }
    double d_w = 0.0, d_ws = 0.0;
    for (std::size_t v = 0; v < std::max(w_freq.size(), w_law.size()); ++v) {
        d_w += std::abs((v < w_freq.size() ? w_freq[v] : 0.0) - w_law.at(v));
    }
    for (std::size_t v = 0; v < std::max(ws_freq.size(), eq_law.size()); ++v) {
        d_ws += std::abs((v < ws_freq.size() ? ws_freq[v] : 0.0) - eq_law.at(v));
    }
    CHECK(d_w / 2.0 < 0.01);
    CHECK(d_ws / 2.0 < 0.01);
    // The coupling is informative: mismatch and bad-event rates are small
    // for a vertex this old.
    CHECK(static_cast<double>(neq) / replicas < 0.5);
    CHECK(static_cast<double>(bc) / replicas < 0.2);
}

TEST_CASE("validation errors") {
    RngStream rng(1);
    CHECK_THROWS_AS(generate_m1(0, 0.0, rng), std::domain_error);
    CHECK_THROWS_AS(generate_m1(5, -1.0, rng), std::domain_error);
    CHECK_THROWS_AS(exact_degree_pmf_m1(5, 6, 0.0, 64), std::domain_error);
    CHECK_THROWS_AS(ConditionedBuilder(5, 0.0, 3, 4), std::domain_error);
    CHECK_THROWS_AS(CouplingSimulator(10, 11, PAParams{1, 0.0}), std::domain_error);
}
