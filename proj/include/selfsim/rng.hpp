#pragma once

#include <cmath>
#include <cstdint>

#include "selfsim/errors.hpp"

namespace selfsim {

// Counter-based uniform stream: draw i of stream `key` is
//
//     mix64(key + i * GAMMA)
//
// where mix64 is the splitmix64 finalizer, a bijection on 64-bit words.
// Every draw is a pure function of (key, i), so streams are reproducible
// across platforms and independent of how work is split across threads.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key), counter_(0) {}

    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static constexpr std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGamma); }

    // Uniform on the open interval (0,1): top 53 bits plus a half-ulp
    // offset, so 0 and 1 are unreachable and inverse-CDF transforms are
    // always defined.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_exponential() { return -std::log(next_uniform()); }

    // Standard normal via the inverse CDF (Wichura's PPND16 / AS 241).
    double next_normal() { return normal_icdf(next_uniform()); }

    // Independent substream; distinct tags give non-overlapping keys.
    CounterRng derive(std::uint64_t tag) const {
        return CounterRng(mix64(key_ ^ mix64(tag * kGamma + 0x632BE59BD9B4E019ull)));
    }

    std::uint64_t key() const { return key_; }
    std::uint64_t draws() const { return counter_; }

    static double normal_icdf(double p);

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

// Wichura's algorithm AS 241 (PPND16): inverse normal CDF, about 1e-15
// absolute accuracy over (0,1).
inline double CounterRng::normal_icdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error("normal_icdf: p must lie in (0,1)");
    const double q = p - 0.5;
    double r;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        const double num =
            q * (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                      6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                    1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                  1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return num / den;
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return (q < 0.0) ? -val : val;
}

// Replicate seeding for experiments.  (experiment_id, replicate) ->
// master + (experiment_id << 32) + replicate is injective while both stay
// below 2^32, and mix64 is a bijection, so derived streams never collide
// across replicates or experiment types sharing a master seed.
struct SeedScheme {
    std::uint64_t master_seed = 0;
    std::uint32_t experiment_id = 0;

    std::uint64_t replicate_seed(std::uint64_t replicate) const {
        return CounterRng::mix64(master_seed +
                                 (static_cast<std::uint64_t>(experiment_id) << 32) +
                                 replicate);
    }
};

}  // namespace selfsim
