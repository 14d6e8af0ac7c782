#ifndef NBPA_DISTRIBUTIONS_HPP
#define NBPA_DISTRIBUTIONS_HPP

#include <cstdint>

#include "nbpa/pmf.hpp"
#include "nbpa/rng.hpp"

namespace nbpa {

// Exact NB(r, p) pmf on {0, ..., kmax}, every term evaluated in log space.
IntegerPmf nb_pmf(const NBParams& params, std::int64_t kmax);

// Truncation point with tail mass below `tail_bound` (default 1e-10).
std::int64_t nb_adaptive_kmax(const NBParams& params, double tail_bound = 1e-10);
IntegerPmf nb_pmf_adaptive(const NBParams& params, double tail_bound = 1e-10);

// One NB(r, p) draw via cdf inversion with the term recurrence
// t_{k+1} = t_k (1-p)(r+k)/(k+1); exact in distribution.
std::int64_t nb_sample(const NBParams& params, RngStream& rng);

// r (r+1) ... (r+k-1) ((1-p)/p)^k, the k-th falling factorial moment of NB(r, p).
double nb_falling_factorial_moment(const NBParams& params, int k);

// Exact pmf of the mixed limit law on {0, ..., kmax}: the mixture
// NB(m+delta, U^(1/(2+delta/m))) with U uniform, in closed form through
// gamma ratios.
IntegerPmf k_pmf(const PAParams& params, std::int64_t kmax);
std::int64_t k_adaptive_kmax(const PAParams& params, double tail_bound = 1e-10);
IntegerPmf k_pmf_adaptive(const PAParams& params, double tail_bound = 1e-10);

// Tail constant: probs[l] * l^(3+delta/m) -> this value.
double k_tail_constant(const PAParams& params);

// One draw of the mixed law: U uniform open, then NB(m+delta, U^(1/(2+delta/m))).
std::int64_t k_sample(const PAParams& params, RngStream& rng);

}  // namespace nbpa

#endif
