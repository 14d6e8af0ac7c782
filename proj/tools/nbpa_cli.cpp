// Command line front end; talks to the core exclusively through the C API.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nbpa.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCertFail = 2;

int emit(const char* text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fwrite(text, 1, std::string(text).size(), stdout);
        return kExitOk;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open " << out_path << "\n";
        return kExitUsage;
    }
    f << text;
    return kExitOk;
}

int report_api_error() {
    std::cerr << "error: " << nbpa_last_error() << "\n";
    return kExitUsage;
}

// Accepts "random:<count>:<seed>".
bool parse_sets_spec(const std::string& spec, std::int64_t& count, std::uint64_t& seed) {
    if (spec.rfind("random:", 0) != 0) return false;
    std::size_t second = spec.find(':', 7);
    if (second == std::string::npos) return false;
    try {
        count = std::stoll(spec.substr(7, second - 7));
        seed = std::stoull(spec.substr(second + 1));
    } catch (...) {
        return false;
    }
    return count > 0;
}

bool parse_int_list(const std::string& text, std::vector<std::int64_t>& values) {
    values.clear();
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        try {
            values.push_back(std::stoll(text.substr(pos, comma - pos)));
        } catch (...) {
            return false;
        }
        pos = comma + 1;
    }
    return !values.empty();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Preferential attachment degree laws, Stein certification, and experiments"};
    app.require_subcommand(1);

    std::string out_path, format = "csv";

    // pmf
    auto* pmf = app.add_subcommand("pmf", "Emit an exact pmf (nb or the mixed limit law k)");
    std::string pmf_dist;
    double pmf_r = 1.0, pmf_p = 0.5, pmf_delta = 0.0;
    int pmf_m = 1;
    std::int64_t pmf_kmax = -1;
    pmf->add_option("dist", pmf_dist, "nb or k")->required()->check(CLI::IsMember({"nb", "k"}));
    pmf->add_option("--r", pmf_r, "NB shape");
    pmf->add_option("--p", pmf_p, "NB success probability");
    pmf->add_option("--m", pmf_m, "edges per vertex");
    pmf->add_option("--delta", pmf_delta, "attachment offset");
    pmf->add_option("--kmax", pmf_kmax, "truncation point (default adaptive)");
    pmf->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    pmf->add_option("--out", out_path, "output file (default stdout)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Generate graphs and emit in-degrees");
    std::int64_t sim_n = 0, sim_graphs = 1;
    int sim_m = 1;
    double sim_delta = 0.0;
    std::uint64_t sim_seed = 1;
    sim->add_option("--n", sim_n, "vertices per graph")->required();
    sim->add_option("--m", sim_m, "edges per vertex");
    sim->add_option("--delta", sim_delta, "attachment offset");
    sim->add_option("--graphs", sim_graphs, "number of graphs");
    sim->add_option("--seed", sim_seed, "rng seed");
    sim->add_option("--out", out_path, "output file (default stdout)");

    // converge
    auto* conv = app.add_subcommand("converge", "Distance to the limit law across n");
    std::string conv_n_list, conv_mode = "exact";
    int conv_m = 1;
    double conv_delta = 0.0;
    std::int64_t conv_graphs = 200;
    std::uint64_t conv_seed = 1;
    conv->add_option("--n-list", conv_n_list, "comma separated n values")->required();
    conv->add_option("--m", conv_m, "edges per vertex");
    conv->add_option("--delta", conv_delta, "attachment offset");
    conv->add_option("--mode", conv_mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
    conv->add_option("--graphs", conv_graphs, "Monte Carlo graphs per n");
    conv->add_option("--seed", conv_seed, "rng seed");
    conv->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    conv->add_option("--out", out_path, "output file (default stdout)");

    // stein-check
    auto* stein = app.add_subcommand("stein-check", "Certify Stein solution bounds on random sets");
    double stein_r = 1.0, stein_p = 0.5;
    std::int64_t stein_kmax = -1;
    std::string stein_sets = "random:10:1";
    stein->add_option("--r", stein_r, "NB shape")->required();
    stein->add_option("--p", stein_p, "NB success probability")->required();
    stein->add_option("--kmax", stein_kmax, "solution length (negative: adaptive truncation)");
    stein->add_option("--sets", stein_sets, "random:<count>:<seed>");
    stein->add_option("--out", out_path, "output file (default stdout)");

    // fixedpoint
    auto* fixed = app.add_subcommand("fixedpoint", "Fixed-point residual of the equilibrium transform");
    double fp_r = 1.0, fp_p = 0.5;
    std::int64_t fp_kmax = -1;
    fixed->add_option("--r", fp_r, "NB shape")->required();
    fixed->add_option("--p", fp_p, "NB success probability")->required();
    fixed->add_option("--kmax", fp_kmax, "truncation point (default adaptive)");
    fixed->add_option("--out", out_path, "output file (default stdout)");

    // coupling
    auto* coup = app.add_subcommand("coupling", "Monte Carlo equilibrium-coupling bound for one vertex");
    std::int64_t coup_n = 0, coup_i = 0, coup_replicas = 10000;
    int coup_m = 1;
    double coup_delta = 0.0;
    std::uint64_t coup_seed = 1;
    coup->add_option("--n", coup_n, "graph size")->required();
    coup->add_option("--i", coup_i, "vertex index")->required();
    coup->add_option("--m", coup_m, "edges per vertex");
    coup->add_option("--delta", coup_delta, "attachment offset");
    coup->add_option("--replicas", coup_replicas, "coupling replicas");
    coup->add_option("--seed", coup_seed, "rng seed");
    coup->add_option("--out", out_path, "output file (default stdout)");

    // theorem31
    auto* t31 = app.add_subcommand("theorem31", "Per-vertex exact TV against its NB target with coupling bounds");
    std::int64_t t31_n = 0, t31_replicas = 10000;
    std::string t31_i_list;
    int t31_m = 1;
    double t31_delta = 0.0;
    std::uint64_t t31_seed = 1;
    t31->add_option("--n", t31_n, "graph size")->required();
    t31->add_option("--i-list", t31_i_list, "comma separated vertex indices")->required();
    t31->add_option("--m", t31_m, "edges per vertex");
    t31->add_option("--delta", t31_delta, "attachment offset");
    t31->add_option("--replicas", t31_replicas, "coupling replicas per vertex");
    t31->add_option("--seed", t31_seed, "rng seed");
    t31->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    char* text = nullptr;
    int rc = NBPA_OK;
    int exit_code = kExitOk;

    if (pmf->parsed()) {
        rc = nbpa_run_pmf(pmf_dist.c_str(), pmf_r, pmf_p, pmf_m, pmf_delta, pmf_kmax,
                          format.c_str(), &text);
    } else if (sim->parsed()) {
        rc = nbpa_run_simulate(sim_n, sim_m, sim_delta, sim_graphs, sim_seed, &text);
    } else if (conv->parsed()) {
        std::vector<std::int64_t> n_values;
        if (!parse_int_list(conv_n_list, n_values)) {
            std::cerr << "error: --n-list must be a comma separated integer list\n";
            return kExitUsage;
        }
        rc = nbpa_run_converge(n_values.data(), static_cast<std::int64_t>(n_values.size()), conv_m,
                               conv_delta, conv_mode.c_str(), conv_graphs, conv_seed,
                               format.c_str(), &text);
    } else if (stein->parsed()) {
        std::int64_t count = 0;
        std::uint64_t seed = 0;
        if (!parse_sets_spec(stein_sets, count, seed)) {
            std::cerr << "error: --sets must look like random:<count>:<seed>\n";
            return kExitUsage;
        }
        int all_pass = 0;
        rc = nbpa_run_stein_check(stein_r, stein_p, stein_kmax, count, seed, &all_pass, &text);
        if (rc == NBPA_OK && !all_pass) exit_code = kExitCertFail;
    } else if (fixed->parsed()) {
        int pass = 0;
        rc = nbpa_run_fixedpoint(fp_r, fp_p, fp_kmax, &pass, &text);
        if (rc == NBPA_OK && !pass) exit_code = kExitCertFail;
    } else if (coup->parsed()) {
        rc = nbpa_run_coupling(coup_n, coup_i, coup_m, coup_delta, coup_replicas, coup_seed, &text);
    } else if (t31->parsed()) {
        std::vector<std::int64_t> i_values;
        if (!parse_int_list(t31_i_list, i_values)) {
            std::cerr << "error: --i-list must be a comma separated integer list\n";
            return kExitUsage;
        }
        rc = nbpa_run_theorem31(t31_n, i_values.data(), static_cast<std::int64_t>(i_values.size()),
                                t31_m, t31_delta, t31_replicas, t31_seed, &text);
    }

    if (rc != NBPA_OK) return report_api_error();
    int emit_rc = emit(text, out_path);
    nbpa_string_free(text);
    return emit_rc != kExitOk ? emit_rc : exit_code;
}
