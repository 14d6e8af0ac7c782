#include "nbpa/reports.hpp"

#include <cstdio>
#include <cstdlib>

#include <json.hpp>

#include "nbpa/distributions.hpp"
#include "nbpa/pa_graph.hpp"
#include "nbpa/rng.hpp"

namespace nbpa {

namespace {

const char* method_name(ConvergenceMethod method) {
    return method == ConvergenceMethod::kExactDp ? "exact_dp" : "monte_carlo";
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

std::string pmf_to_csv(const IntegerPmf& pmf) {
    std::string out = "k,prob\n";
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += format_double(pmf.probs[k]);
        out += '\n';
    }
    out += "tail,";
    out += format_double(pmf.tail_mass);
    out += '\n';
    return out;
}

std::string pmf_to_json(const IntegerPmf& pmf) {
    nlohmann::json j;
    j["probs"] = pmf.probs;
    j["tail_mass"] = pmf.tail_mass;
    return j.dump() + "\n";
}

std::string simulate_csv(std::int64_t n, const PAParams& params, std::int64_t graphs,
                         std::uint64_t seed) {
    params.validate();
    if (n < 1 || graphs < 1) throw std::domain_error("simulate: n and graphs must be >= 1");
    std::string out = "graph_id,vertex,in_degree\n";
    for (std::int64_t g = 0; g < graphs; ++g) {
        RngStream rng(seed, static_cast<std::uint64_t>(g));
        PAGraphM1 fine = generate_m1(n * params.m, params.epsilon(), rng);
        std::vector<std::int64_t> degrees = collapse(fine, params.m);
        for (std::int64_t v = 1; v <= n; ++v) {
            out += std::to_string(g);
            out += ',';
            out += std::to_string(v);
            out += ',';
            out += std::to_string(degrees[static_cast<std::size_t>(v) - 1]);
            out += '\n';
        }
    }
    return out;
}

std::string convergence_to_csv(const std::vector<ConvergenceRecord>& records) {
    std::string out = "n,m,delta,method,dtv,stderr,seed\n";
    for (const ConvergenceRecord& rec : records) {
        out += std::to_string(rec.n);
        out += ',';
        out += std::to_string(rec.m);
        out += ',';
        out += format_double(rec.delta);
        out += ',';
        out += method_name(rec.method);
        out += ',';
        out += format_double(rec.dtv);
        out += ',';
        out += format_double(rec.stderr_);
        out += ',';
        out += std::to_string(rec.seed);
        out += '\n';
    }
    return out;
}

std::string convergence_to_json(const std::vector<ConvergenceRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ConvergenceRecord& rec : records) {
        arr.push_back({{"n", rec.n},
                       {"m", rec.m},
                       {"delta", rec.delta},
                       {"method", method_name(rec.method)},
                       {"dtv", rec.dtv},
                       {"stderr", rec.stderr_},
                       {"seed", rec.seed}});
    }
    return arr.dump() + "\n";
}

std::string stein_check_report(const NBParams& params, std::int64_t kmax, std::int64_t set_count,
                               std::uint64_t set_seed, bool& all_pass) {
    params.validate();
    if (kmax < 1 || set_count < 1) {
        throw std::domain_error("stein_check: kmax and set count must be >= 1");
    }
    all_pass = true;
    std::string out;
    for (std::int64_t id = 0; id < set_count; ++id) {
        RngStream rng(set_seed, static_cast<std::uint64_t>(id));
        std::vector<std::int64_t> target_set;
        for (std::int64_t k = 0; k <= kmax; ++k) {
            if (rng.uniform() < 0.5) target_set.push_back(k);
        }
        SteinSolution sol = solve_stein_equation(params, target_set, kmax);
        SolutionBoundReport rep = certify_solution_bounds(sol);
        if (!rep.pass) all_pass = false;
        nlohmann::json j{{"set_id", id},
                         {"bound", rep.worst_bound_name()},
                         {"max_slack", rep.max_slack()},
                         {"pass", rep.pass}};
        out += j.dump() + "\n";
    }
    return out;
}

std::string fixedpoint_json(const NBParams& params, std::int64_t kmax, double residual, bool pass) {
    nlohmann::json j{{"r", params.r},
                     {"p", params.p},
                     {"kmax", kmax},
                     {"residual", residual},
                     {"pass", pass}};
    return j.dump() + "\n";
}

std::string coupling_to_json(const CouplingReport& report) {
    nlohmann::json j{{"p_neq", report.p_neq},
                     {"p_bc", report.p_bc},
                     {"bound_b", report.bound_b},
                     {"bound_simple", report.bound_simple}};
    if (report.dtv_exact == report.dtv_exact) {
        j["dtv_exact"] = report.dtv_exact;
    } else {
        j["dtv_exact"] = nullptr;
    }
    return j.dump() + "\n";
}

std::string theorem31_to_csv(const std::vector<Theorem31Row>& rows) {
    std::string out = "i,dtv,scaled_dtv,bound_b,bound_b_stderr,bound_simple,p_neq,p_bc\n";
    for (const Theorem31Row& row : rows) {
        out += std::to_string(row.i);
        out += ',';
        out += format_double(row.dtv);
        out += ',';
        out += format_double(row.scaled_dtv);
        out += ',';
        out += format_double(row.bound_b);
        out += ',';
        out += format_double(row.bound_b_stderr);
        out += ',';
        out += format_double(row.bound_simple);
        out += ',';
        out += format_double(row.p_neq);
        out += ',';
        out += format_double(row.p_bc);
        out += '\n';
    }
    return out;
}

}  // namespace nbpa
