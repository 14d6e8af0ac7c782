#ifndef NBPA_PA_GRAPH_HPP
#define NBPA_PA_GRAPH_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "nbpa/pmf.hpp"
#include "nbpa/rng.hpp"
#include "nbpa/stein.hpp"

namespace nbpa {

/// Attachment record of the m=1 growth process: targets[s-1] is the vertex
/// that vertex s's out-edge points to (targets[0] == 1, the initial loop).
struct PAGraphM1 {
    std::int64_t n;
    double epsilon;
    std::vector<std::int32_t> targets;

    std::vector<std::int64_t> in_degrees() const;
};

/// Attachment record of the conditioned construction over vertices
/// {1..nm} plus the auxiliary vertex i' (label 0). Vertex k's out-edge is
/// pre-placed on i'; no vertex below k attaches to k.
struct ConditionedGraph {
    std::int64_t nm;
    double epsilon;
    std::int64_t k, l;
    std::vector<std::int32_t> targets;  // targets[s-1], label 0 means i'
    std::int64_t i_prime_degree;        // in-degree of i', >= 1

    // Sum of in-degrees over the block {m(i-1)+1, ..., mi}.
    std::int64_t block_in_degree(std::int64_t i, int m) const;
};

struct DegreeQuery {
    std::int64_t n;
    std::int64_t i;
    PAParams params;

    void validate() const;
};

// Sequential growth of G_n^{1,eps}. Attachment is degree-plus-offset
// proportional in O(1) expected time per step: for eps >= 0 a mixture of a
// uniform half-edge endpoint draw (degree part) and a uniform vertex draw
// (offset part); for eps < 0 an endpoint proposal thinned with acceptance
// (deg + eps)/deg. Both are exact in distribution.
PAGraphM1 generate_m1(std::int64_t n, double epsilon, RngStream& rng);

// In-degree sequence of G_{n}^{m,delta} obtained by merging consecutive
// groups of m vertices of g (g.n must be divisible by m).
std::vector<std::int64_t> collapse(const PAGraphM1& g, int m);

// In-degree of a uniformly chosen vertex of a freshly generated G_n^{m,delta}.
std::int64_t sample_W(std::int64_t n, const PAParams& params, RngStream& rng);

// E of the in-degree of vertex j after step k of the m=1 process (the Mori
// martingale mean); zero when k < j.
double expected_in_degree_m1(std::int64_t k, std::int64_t j, double epsilon);

// mu_{n,i}: expected in-degree of vertex i of G_n^{m,delta}, in closed form
// through gamma ratios.
double expected_in_degree(const DegreeQuery& q);

// Exact law of the in-degree of vertex j in G_n^{1,eps} by forward DP over
// the attachment steps; states at or above state_cap are aggregated into
// tail_mass. Throws if the cap leaves more than 1e-8 of mass in the tail.
IntegerPmf exact_degree_pmf_m1(std::int64_t n, std::int64_t j, double epsilon,
                               std::int64_t state_cap);

// Same, with the cap doubled automatically until tail_mass < 1e-10.
IntegerPmf exact_degree_pmf_m1_adaptive(std::int64_t n, std::int64_t j, double epsilon);

// Exact law of W_n for m=1: the uniform-vertex mixture of the per-vertex laws.
IntegerPmf exact_W_pmf_m1(std::int64_t n, double epsilon, std::int64_t state_cap);
IntegerPmf exact_W_pmf_m1_adaptive(std::int64_t n, double epsilon);

/// Step-by-step driver of the conditioned construction. Exposes the exact
/// attachment distribution of every step so callers can either sample it
/// (generate_conditioned) or enumerate it exhaustively (test oracles).
class ConditionedBuilder {
  public:
    ConditionedBuilder(std::int64_t nm, double epsilon, std::int64_t k, std::int64_t l);

    bool done() const { return step_ > nm_; }
    std::int64_t current_step() const { return step_; }

    // (target label, probability) pairs of the current step; label 0 is i'.
    // Empty exactly at the skipped step s == k (call advance_forced there).
    std::vector<std::pair<std::int32_t, double>> attachment_distribution() const;

    void advance(std::int32_t target);
    // Moves past a step with no free choice (s == k).
    void advance_forced();

    ConditionedGraph finish() &&;

  private:
    std::int64_t nm_, k_, l_, step_;
    double epsilon_;
    std::vector<std::int64_t> degree_;  // total degree per vertex, [0] = i'
    std::vector<std::int32_t> targets_;
};

// One draw of the conditioned construction with edge (k -> l) re-rooted
// through i'.
ConditionedGraph generate_conditioned(std::int64_t n, const PAParams& params, std::int64_t k,
                                      std::int64_t l, RngStream& rng);

/// Sampler for the equilibrium coupling of W_{n,i} with W_{n,i}^{*r}:
/// draws (K, L) size-bias indices, runs the conditioned and unconditioned
/// block degree chains on shared uniforms, and evaluates the good event B.
/// W^{*r} is the conditioned block count on B; off B it is resampled as a
/// fresh urn draw U_{m+d, T} given the realized size-bias total T, which
/// makes the W^{*r} marginal exactly the r-equilibrium law of W_{n,i}.
/// Precomputes the (K, L) table once; reusable across replicas.
class CouplingSimulator {
  public:
    CouplingSimulator(std::int64_t n, std::int64_t i, const PAParams& params);

    CouplingSample sample(RngStream& rng);

    double mean_w() const { return mu_; }

  private:
    std::int64_t n_, i_, nm_, b1_, bm_;
    int m_;
    double epsilon_, w_, mu_;
    std::vector<std::int64_t> kl_k_, kl_l_;
    std::vector<double> kl_cum_;
};

// Convenience single-draw wrapper (builds a fresh simulator; prefer
// CouplingSimulator for repeated draws).
CouplingSample sample_equilibrium_coupling(std::int64_t n, std::int64_t i, const PAParams& params,
                                           RngStream& rng);

}  // namespace nbpa

#endif
