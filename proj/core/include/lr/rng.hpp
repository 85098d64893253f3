#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace lr {

/**
 * Deterministic random source used for sampled gradients and instance
 * generation.
 *
 * The engine is std::mt19937_64, whose output sequence is pinned by the
 * standard, and every derived quantity (uniform doubles, normals, categorical
 * draws) is mapped here rather than through std::*_distribution, which is
 * implementation-defined. Identical seeds therefore give bit-identical
 * streams on every platform.
 *
 * Streams are split by index: child i is seeded from splitmix64 applied to
 * the parent seed and i, so concurrent consumers can own independent
 * generators derived from one run seed.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) from the top 53 bits of one engine draw.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; consumes two uniform draws per pair.
    double normal();

    /// Index s with probability pmf(s), by linear CDF scan. The pmf must be
    /// nonnegative; it is normalized by its sum.
    Eigen::Index categorical(const Eigen::VectorXd& pmf);

    /// Independent child stream derived from this generator's seed and the
    /// stream index (not from the current engine state).
    Rng split(std::uint64_t stream) const;

    static std::uint64_t splitmix64(std::uint64_t x);

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool have_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

} // namespace lr
