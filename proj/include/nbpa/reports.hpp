#ifndef NBPA_REPORTS_HPP
#define NBPA_REPORTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nbpa/metrics.hpp"
#include "nbpa/pmf.hpp"
#include "nbpa/stein.hpp"

namespace nbpa {

// Shortest round-trip decimal form of x, locale independent.
std::string format_double(double x);

// CSV: header `k,prob`, one row per support point, final row `tail,<mass>`.
std::string pmf_to_csv(const IntegerPmf& pmf);
std::string pmf_to_json(const IntegerPmf& pmf);

// CSV `graph_id,vertex,in_degree`, graphs indexed from 0, vertices from 1.
std::string simulate_csv(std::int64_t n, const PAParams& params, std::int64_t graphs,
                         std::uint64_t seed);

std::string convergence_to_csv(const std::vector<ConvergenceRecord>& records);
std::string convergence_to_json(const std::vector<ConvergenceRecord>& records);

// One JSON object per line: {"set_id":…, "bound":…, "max_slack":…, "pass":…}.
// all_pass is set to whether every set certified.
std::string stein_check_report(const NBParams& params, std::int64_t kmax, std::int64_t set_count,
                               std::uint64_t set_seed, bool& all_pass);

std::string fixedpoint_json(const NBParams& params, std::int64_t kmax, double residual, bool pass);

std::string coupling_to_json(const CouplingReport& report);

std::string theorem31_to_csv(const std::vector<Theorem31Row>& rows);

}  // namespace nbpa

#endif
