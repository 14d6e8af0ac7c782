#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nbpa/distributions.hpp"
#include "nbpa/rng.hpp"
#include "nbpa/stein.hpp"

using namespace nbpa;

TEST_CASE("stein equation residual is exact at the recursion level") {
    RngStream rng(3);
    for (int t = 0; t < 30; ++t) {
        double r = 0.2 + 4.8 * rng.uniform();
        double p = 0.1 + 0.85 * rng.uniform();
        std::int64_t kmax = 60;
        std::vector<std::int64_t> target_set;
        for (std::int64_t k = 0; k <= kmax; ++k) {
            if (rng.uniform() < 0.4) target_set.push_back(k);
        }
        SteinSolution sol = solve_stein_equation({r, p}, target_set, kmax);
        for (std::int64_t k = 0; k < kmax; ++k) {
            std::size_t idx = static_cast<std::size_t>(k);
            double lhs = (1.0 - p) * (r + static_cast<double>(k)) * sol.g[idx + 1] -
                         static_cast<double>(k) * sol.g[idx];
            double rhs = static_cast<double>(sol.in_set[idx]) - sol.target_prob;
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(sol.g[idx]) * k));
        }
    }
}

TEST_CASE("empty and full target sets give the zero solution") {
    SteinSolution empty = solve_stein_equation({1.0, 0.5}, {}, 40);
    CHECK(empty.target_prob == doctest::Approx(0.0).epsilon(1e-13));
    for (double v : empty.g) CHECK(std::abs(v) <= 1e-12);

    std::vector<std::int64_t> all;
    for (std::int64_t k = 0; k <= 400; ++k) all.push_back(k);
    SteinSolution full = solve_stein_equation({1.0, 0.5}, all, 40);
    CHECK(full.target_prob == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : full.g) CHECK(std::abs(v) <= 1e-9);
}

TEST_CASE("frozen value g(1) for A = {0}, r = 1, p = 1/2") {
    // g(1) = (1 - P(Y=0)) / ((1-p) r) = (1 - 1/2) / (1/2) = 1.
    SteinSolution sol = solve_stein_equation({1.0, 0.5}, {0}, 10);
    CHECK(sol.g[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("recursion solution matches the covariance representation") {
    RngStream rng(7);
    for (int t = 0; t < 40; ++t) {
        double r = 0.2 + 4.8 * rng.uniform();
        double p = 0.1 + 0.85 * rng.uniform();
        // Stay within the support the tail bound makes meaningful: past it
        // the forward recursion amplifies roundoff by (1-p)^-k faster than
        // any fixed working precision can absorb.
        std::int64_t kmax = nb_adaptive_kmax({r, p}, 1e-6 * std::pow(1e-6, rng.uniform()));
        std::vector<std::int64_t> target_set;
        for (std::int64_t k = 0; k <= kmax; ++k) {
            if (rng.uniform() < 0.5) target_set.push_back(k);
        }
        SteinSolution sol = solve_stein_equation({r, p}, target_set, kmax);
        std::vector<double> alt = stein_solution_alternative({r, p}, target_set, kmax);
        for (std::size_t k = 0; k < alt.size(); ++k) {
            CHECK(std::abs(sol.g[k] - alt[k]) <= 1e-9);
        }
    }
}

TEST_CASE("solution bound certification on hand-picked cases") {
    {
        std::int64_t kmax = nb_adaptive_kmax({5.0, 0.9}, 1e-12);
        SteinSolution sol = solve_stein_equation({5.0, 0.9}, {2, 3, 5}, kmax);
        SolutionBoundReport rep = certify_solution_bounds(sol);
        CHECK(rep.pass);
        CHECK(rep.max_slack() <= 1e-9);
    }
    {
        RngStream rng(11);
        std::int64_t kmax = nb_adaptive_kmax({0.3, 0.2}, 1e-12);
        std::vector<std::int64_t> target_set;
        for (std::int64_t k = 0; k <= kmax; ++k) {
            if (rng.uniform() < 0.125) target_set.push_back(k);
        }
        SteinSolution sol = solve_stein_equation({0.3, 0.2}, target_set, kmax);
        SolutionBoundReport rep = certify_solution_bounds(sol);
        CHECK(rep.pass);
    }
}

TEST_CASE("worst bound name is one of the four labels") {
    SteinSolution sol = solve_stein_equation({1.0, 0.5}, {0, 2}, 50);
    SolutionBoundReport rep = certify_solution_bounds(sol);
    std::string name = rep.worst_bound_name();
    CHECK((name == "kg" || name == "delta_g" || name == "dr_g" || name == "delta_dr_g"));
}

TEST_CASE("coupling constant formula and cap") {
    CHECK(stein_coupling_constant(1.0, 0.5) == doctest::Approx(std::min(1.5, 1.5)).epsilon(1e-14));
    CHECK(stein_coupling_constant(10.0, 0.1) == doctest::Approx(1.9).epsilon(1e-14));
    RngStream rng(13);
    for (int t = 0; t < 200; ++t) {
        double r = 0.1 + 10.0 * rng.uniform();
        double p = rng.uniform();
        CHECK(stein_coupling_constant(r, p) <= 2.0 + 1e-15);
    }
}

TEST_CASE("tv_upper_bound arithmetic on tiny samples") {
    // Single on-B sample, w=1, w*=3, r=1, p=0.5: c_{1,0.5} = 1.5, bound_b = 3.
    {
        std::vector<CouplingSample> s{{1, 3, true}};
        TvBoundEstimate est = tv_upper_bound(s, 1.0, 0.5);
        CHECK(est.bound_b == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(est.p_bc == 0.0);
        CHECK(est.p_neq == 1.0);
        CHECK(est.bound_simple == doctest::Approx(2.0 * (std::exp(1.0) + 1.0)).epsilon(1e-14));
    }
    // p_neq = 0.1 with r = 1: bound_simple = 2(e+1)/10.
    {
        std::vector<CouplingSample> s;
        for (int t = 0; t < 10; ++t) s.push_back({2, t == 0 ? 3 : 2, true});
        TvBoundEstimate est = tv_upper_bound(s, 1.0, 0.5);
        CHECK(est.p_neq == doctest::Approx(0.1).epsilon(1e-14));
        CHECK(est.bound_simple == doctest::Approx(0.2 * (std::exp(1.0) + 1.0)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(tv_upper_bound({}, 1.0, 0.5), std::domain_error);
}

TEST_CASE("stein_operator_expectation is near zero exactly for the matching NB") {
    NBParams params{2.0, 0.4};
    IntegerPmf pmf = nb_pmf_adaptive(params, 1e-13);
    std::vector<double> g(pmf.size() + 1);
    RngStream rng(17);
    for (double& v : g) v = rng.uniform() - 0.5;
    CHECK(std::abs(stein_operator_expectation(params, g, pmf)) <= 1e-7 * (params.r + pmf.size()));
    // Mismatched parameters produce a visible residual.
    CHECK(std::abs(stein_operator_expectation({2.0, 0.6}, g, pmf)) > 1e-4);
}
