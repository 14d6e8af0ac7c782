#include "nbpa/pmf.hpp"

#include <stdexcept>

namespace nbpa {

double IntegerPmf::total_mass() const {
    long double s = tail_mass;
    for (double p : probs) s += p;
    return static_cast<double>(s);
}

double IntegerPmf::mean() const {
    long double s = 0.0L;
    for (std::size_t k = 0; k < probs.size(); ++k) s += static_cast<long double>(k) * probs[k];
    return static_cast<double>(s);
}

IntegerPmf IntegerPmf::renormalized() const {
    long double s = 0.0L;
    for (double p : probs) s += p;
    if (s <= 0.0L) throw std::domain_error("IntegerPmf::renormalized: zero mass");
    IntegerPmf out;
    out.probs.reserve(probs.size());
    for (double p : probs) out.probs.push_back(static_cast<double>(p / s));
    out.tail_mass = 0.0;
    return out;
}

IntegerPmf IntegerPmf::point_mass(std::size_t k) {
    IntegerPmf out;
    out.probs.assign(k + 1, 0.0);
    out.probs[k] = 1.0;
    return out;
}

void NBParams::validate() const {
    if (!(r > 0.0)) throw std::domain_error("NBParams: r must be positive");
    if (!(p > 0.0) || !(p <= 1.0)) throw std::domain_error("NBParams: p must be in (0, 1]");
}

void PAParams::validate() const {
    if (m < 1) throw std::domain_error("PAParams: m must be >= 1");
    if (!(delta > -static_cast<double>(m))) throw std::domain_error("PAParams: delta must exceed -m");
}

}  // namespace nbpa
