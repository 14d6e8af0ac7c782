#ifndef NBPA_PMF_HPP
#define NBPA_PMF_HPP

#include <cstddef>
#include <vector>

namespace nbpa {

/// Finite, truncated pmf on {0, 1, ...} with the mass beyond the
/// truncation point tracked explicitly. The probs vector is indexed by k;
/// sum(probs) + tail_mass == 1 up to rounding. Tail mass is carried, never
/// silently renormalized.
struct IntegerPmf {
    std::vector<double> probs;
    double tail_mass = 0.0;

    std::size_t size() const { return probs.size(); }
    double at(std::size_t k) const { return k < probs.size() ? probs[k] : 0.0; }

    double total_mass() const;
    double mean() const;

    // Rescales so the truncated support carries mass one; tail set to zero.
    IntegerPmf renormalized() const;

    static IntegerPmf point_mass(std::size_t k);
};

/// NB(r, p) parameters; p = 1 is the point mass at zero.
struct NBParams {
    double r;
    double p;

    void validate() const;  // throws std::domain_error
    double mean() const { return r * (1.0 - p) / p; }
};

/// Preferential attachment model parameters (m edges per vertex, offset delta).
struct PAParams {
    int m;
    double delta;

    void validate() const;  // throws std::domain_error

    double epsilon() const { return delta / m; }       // offset of the m=1 graph
    double limit_shape() const { return m + delta; }   // r of the NB mixture
    double mixing_exponent() const { return 1.0 / (2.0 + delta / m); }
    double tail_exponent() const { return 3.0 + delta / m; }
};

}  // namespace nbpa

#endif
