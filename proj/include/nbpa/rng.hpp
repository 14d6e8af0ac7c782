#ifndef NBPA_RNG_HPP
#define NBPA_RNG_HPP

#include <cstdint>
#include <random>

namespace nbpa {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded random stream. Replica t of master seed s is derived as
/// splitmix64(s ^ splitmix64(t)), so identical (seed, stream) pairs give
/// bit-identical draws independent of how work is split across streams.
/// Uniform doubles are produced from the top 53 bits directly rather than
/// via std::uniform_real_distribution, whose output is
/// implementation-defined.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : engine_(splitmix64(seed ^ splitmix64(stream))) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on the open interval (0, 1).
    double uniform_open() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in {0, ..., n-1} by rejection (unbiased).
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            std::uint64_t x = engine_();
            if (x >= threshold) return x % n;
        }
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace nbpa

#endif
