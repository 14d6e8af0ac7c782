#ifndef NBPA_TRANSFORMS_HPP
#define NBPA_TRANSFORMS_HPP

#include <cstdint>
#include <vector>

#include "nbpa/pmf.hpp"
#include "nbpa/rng.hpp"

namespace nbpa {

/// Polya urn U_{r,n}: white draws in n-1 draws, initial white weight r,
/// black weight 1.
struct UrnSpec {
    double r;
    std::int64_t n;

    void validate() const;
};

// Size-bias transform: result[k] = k pmf[k] / mean. Requires a strictly
// positive mean and tail_mass < 1e-8; the result is exact on the truncated
// support and its tail is set to zero.
IntegerPmf size_bias(const IntegerPmf& pmf);

// Exact law of U_{r,n} on {0, ..., n-1} by the one-draw-at-a-time forward
// recursion; no tail.
IntegerPmf urn_pmf(const UrnSpec& spec);

std::int64_t urn_sample(const UrnSpec& spec, RngStream& rng);

// r (n-1)(n-2)...(n-k) / (r+k); zero when k >= n.
double urn_falling_factorial_moment(const UrnSpec& spec, int k);

// r-equilibrium transform: the exact law of U_{r,X^s}, the urn mixture
// taken as a finite double sum (no sampling).
IntegerPmf r_equilibrium(const IntegerPmf& pmf, double r);

// Half-L1 distance between the renormalized truncation of NB(r, p) and its
// own r-equilibrium transform; small values certify the fixed-point
// property at the truncation level.
double fixed_point_residual(const NBParams& params, std::int64_t kmax);

// D_r g(k) = (k/r + 1) g(k+1) - (k/r) g(k).
double dr_operator(const std::vector<double>& g, std::int64_t k, double r);

}  // namespace nbpa

#endif
