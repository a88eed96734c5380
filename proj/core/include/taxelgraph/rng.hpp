#ifndef TAXELGRAPH_RNG_HPP
#define TAXELGRAPH_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "taxelgraph/geometry.hpp"

namespace taxelgraph {

/// Deterministic random source. All samplers are hand-rolled on top of
/// mt19937_64 so that identical seeds give identical streams on every
/// platform (std:: distributions are implementation-defined).
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t bits() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive, unbiased via rejection.
    int64_t uniform_int(int64_t lo, int64_t hi) {
        const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        uint64_t r;
        do {
            r = gen_();
        } while (r >= limit);
        return lo + static_cast<int64_t>(r % span);
    }

    /// Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    Vec3 unit_vector() {
        while (true) {
            Vec3 v(uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0));
            const double n = v.norm();
            if (n > 1e-6 && n <= 1.0) return v / n;
        }
    }

    /// Uniform random rotation (Shoemake's subgroup algorithm).
    Eigen::Quaterniond rotation() {
        const double u1 = uniform(), u2 = uniform(), u3 = uniform();
        const double s1 = std::sqrt(1.0 - u1), s2 = std::sqrt(u1);
        return Eigen::Quaterniond(s1 * std::sin(2.0 * M_PI * u2),
                                  s1 * std::cos(2.0 * M_PI * u2),
                                  s2 * std::sin(2.0 * M_PI * u3),
                                  s2 * std::cos(2.0 * M_PI * u3))
            .normalized();
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace taxelgraph

#endif
