#include "lr/rng.hpp"

#include <cmath>

namespace lr {

std::uint64_t Rng::splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double Rng::normal() {
    if (have_cached_normal_) {
        have_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    cached_normal_ = radius * std::sin(angle);
    have_cached_normal_ = true;
    return radius * std::cos(angle);
}

Eigen::Index Rng::categorical(const Eigen::VectorXd& pmf) {
    const double total = pmf.sum();
    const double u = uniform01() * total;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < pmf.size(); ++i) {
        acc += pmf(i);
        if (u < acc) return i;
    }
    return pmf.size() - 1; // u landed on accumulated rounding; last bucket
}

Rng Rng::split(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream + 1)));
}

} // namespace lr
