#include "nbpa.h"

#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>

#include "nbpa/distributions.hpp"
#include "nbpa/metrics.hpp"
#include "nbpa/pa_graph.hpp"
#include "nbpa/pmf.hpp"
#include "nbpa/reports.hpp"
#include "nbpa/transforms.hpp"

struct nbpa_pmf {
    nbpa::IntegerPmf pmf;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
    g_last_error = what;
    return code;
}

// Maps C++ exceptions onto error codes; domain/invalid-argument are caller
// input problems, everything else is internal.
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::domain_error& e) {
        return fail(NBPA_ERR_DOMAIN, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(NBPA_ERR_DOMAIN, e.what());
    } catch (const std::exception& e) {
        return fail(NBPA_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(NBPA_ERR_INTERNAL, "unknown error");
    }
}

char* copy_out(const std::string& s) {
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return buf;
}

int require(bool ok, const char* what) {
    return ok ? NBPA_OK : fail(NBPA_ERR_USAGE, what);
}

}  // namespace

extern "C" {

const char* nbpa_last_error(void) { return g_last_error.c_str(); }

void nbpa_string_free(char* s) { delete[] s; }

int nbpa_nb_pmf(double r, double p, int64_t kmax, nbpa_pmf** out) {
    if (int rc = require(out != nullptr, "nbpa_nb_pmf: out is null")) return rc;
    return guarded([&] {
        nbpa::NBParams params{r, p};
        nbpa::IntegerPmf pmf = kmax < 0 ? nbpa::nb_pmf_adaptive(params) : nbpa::nb_pmf(params, kmax);
        *out = new nbpa_pmf{std::move(pmf)};
        return NBPA_OK;
    });
}

int nbpa_k_pmf(int m, double delta, int64_t kmax, nbpa_pmf** out) {
    if (int rc = require(out != nullptr, "nbpa_k_pmf: out is null")) return rc;
    return guarded([&] {
        nbpa::PAParams params{m, delta};
        nbpa::IntegerPmf pmf = kmax < 0 ? nbpa::k_pmf_adaptive(params) : nbpa::k_pmf(params, kmax);
        *out = new nbpa_pmf{std::move(pmf)};
        return NBPA_OK;
    });
}

int64_t nbpa_pmf_len(const nbpa_pmf* pmf) {
    return pmf ? static_cast<int64_t>(pmf->pmf.size()) : 0;
}

double nbpa_pmf_prob(const nbpa_pmf* pmf, int64_t k) {
    if (!pmf || k < 0) return 0.0;
    return pmf->pmf.at(static_cast<std::size_t>(k));
}

double nbpa_pmf_tail(const nbpa_pmf* pmf) { return pmf ? pmf->pmf.tail_mass : 0.0; }

void nbpa_pmf_free(nbpa_pmf* pmf) { delete pmf; }

int nbpa_fixed_point_residual(double r, double p, int64_t kmax, double* out) {
    if (int rc = require(out != nullptr, "nbpa_fixed_point_residual: out is null")) return rc;
    return guarded([&] {
        nbpa::NBParams params{r, p};
        std::int64_t k = kmax < 0 ? nbpa::nb_adaptive_kmax(params) : kmax;
        *out = nbpa::fixed_point_residual(params, k);
        return NBPA_OK;
    });
}

int nbpa_expected_in_degree(int64_t n, int64_t i, int m, double delta, double* out) {
    if (int rc = require(out != nullptr, "nbpa_expected_in_degree: out is null")) return rc;
    return guarded([&] {
        *out = nbpa::expected_in_degree({n, i, nbpa::PAParams{m, delta}});
        return NBPA_OK;
    });
}

int nbpa_run_pmf(const char* dist, double r, double p, int m, double delta, int64_t kmax,
                 const char* format, char** out) {
    if (int rc = require(out && dist && format, "nbpa_run_pmf: null argument")) return rc;
    const std::string dist_s = dist, format_s = format;
    if (int rc = require(dist_s == "nb" || dist_s == "k", "nbpa_run_pmf: dist must be nb or k")) {
        return rc;
    }
    if (int rc = require(format_s == "csv" || format_s == "json",
                         "nbpa_run_pmf: format must be csv or json")) {
        return rc;
    }
    return guarded([&] {
        nbpa::IntegerPmf pmf;
        if (dist_s == "nb") {
            nbpa::NBParams params{r, p};
            pmf = kmax < 0 ? nbpa::nb_pmf_adaptive(params) : nbpa::nb_pmf(params, kmax);
        } else {
            nbpa::PAParams params{m, delta};
            pmf = kmax < 0 ? nbpa::k_pmf_adaptive(params) : nbpa::k_pmf(params, kmax);
        }
        *out = copy_out(format_s == "csv" ? nbpa::pmf_to_csv(pmf) : nbpa::pmf_to_json(pmf));
        return NBPA_OK;
    });
}

int nbpa_run_simulate(int64_t n, int m, double delta, int64_t graphs, uint64_t seed, char** out) {
    if (int rc = require(out != nullptr, "nbpa_run_simulate: out is null")) return rc;
    return guarded([&] {
        *out = copy_out(nbpa::simulate_csv(n, nbpa::PAParams{m, delta}, graphs, seed));
        return NBPA_OK;
    });
}

int nbpa_run_converge(const int64_t* n_values, int64_t n_count, int m, double delta,
                      const char* mode, int64_t graphs, uint64_t seed, const char* format,
                      char** out) {
    if (int rc = require(out && mode && format && n_values && n_count > 0,
                         "nbpa_run_converge: null or empty argument")) {
        return rc;
    }
    const std::string mode_s = mode, format_s = format;
    if (int rc = require(mode_s == "exact" || mode_s == "mc",
                         "nbpa_run_converge: mode must be exact or mc")) {
        return rc;
    }
    if (int rc = require(format_s == "csv" || format_s == "json",
                         "nbpa_run_converge: format must be csv or json")) {
        return rc;
    }
    return guarded([&] {
        nbpa::ConvergenceConfig config;
        config.n_values.assign(n_values, n_values + n_count);
        config.params = nbpa::PAParams{m, delta};
        config.method = mode_s == "exact" ? nbpa::ConvergenceMethod::kExactDp
                                          : nbpa::ConvergenceMethod::kMonteCarlo;
        config.graphs = graphs;
        config.seed = seed;
        auto records = nbpa::convergence_experiment(config);
        *out = copy_out(format_s == "csv" ? nbpa::convergence_to_csv(records)
                                          : nbpa::convergence_to_json(records));
        return NBPA_OK;
    });
}

int nbpa_run_stein_check(double r, double p, int64_t kmax, int64_t set_count, uint64_t set_seed,
                         int* all_pass, char** out) {
    if (int rc = require(out && all_pass, "nbpa_run_stein_check: null argument")) return rc;
    return guarded([&] {
        nbpa::NBParams params{r, p};
        if (kmax < 0) kmax = nbpa::nb_adaptive_kmax(params);
        bool pass = false;
        std::string report = nbpa::stein_check_report(params, kmax, set_count, set_seed, pass);
        *all_pass = pass ? 1 : 0;
        *out = copy_out(report);
        return NBPA_OK;
    });
}

int nbpa_run_fixedpoint(double r, double p, int64_t kmax, int* pass, char** out) {
    if (int rc = require(out && pass, "nbpa_run_fixedpoint: null argument")) return rc;
    return guarded([&] {
        nbpa::NBParams params{r, p};
        std::int64_t k = kmax < 0 ? nbpa::nb_adaptive_kmax(params) : kmax;
        double residual = nbpa::fixed_point_residual(params, k);
        bool ok = residual < 1e-6;
        *pass = ok ? 1 : 0;
        *out = copy_out(nbpa::fixedpoint_json(params, k, residual, ok));
        return NBPA_OK;
    });
}

int nbpa_run_coupling(int64_t n, int64_t i, int m, double delta, int64_t replicas, uint64_t seed,
                      char** out) {
    if (int rc = require(out != nullptr, "nbpa_run_coupling: out is null")) return rc;
    return guarded([&] {
        auto report = nbpa::coupling_report(n, i, nbpa::PAParams{m, delta}, replicas, seed);
        *out = copy_out(nbpa::coupling_to_json(report));
        return NBPA_OK;
    });
}

int nbpa_run_theorem31(int64_t n, const int64_t* i_list, int64_t i_count, int m, double delta,
                       int64_t replicas, uint64_t seed, char** out) {
    if (int rc = require(out && i_list && i_count > 0, "nbpa_run_theorem31: null or empty argument")) {
        return rc;
    }
    return guarded([&] {
        std::vector<std::int64_t> is(i_list, i_list + i_count);
        auto rows = nbpa::theorem31_check(n, is, nbpa::PAParams{m, delta}, replicas, seed);
        *out = copy_out(nbpa::theorem31_to_csv(rows));
        return NBPA_OK;
    });
}

}  // extern "C"
