#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace wellopt {

/// Deterministic random stream.  Every piece of stochastic code in this
/// library draws from this one generator family: a 64-bit Mersenne twister
/// whose uniforms are built from the top 53 bits and whose normals come from
/// the Marsaglia polar method.  A given seed therefore reproduces the exact
/// same stream on any standard library, which is what makes reruns of a
/// seeded experiment byte-identical.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal deviate.  Rejection sampling: the number of raw draws
    /// varies, but the sequence is still a pure function of the seed.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    std::uint64_t integer() { return gen_(); }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace wellopt
