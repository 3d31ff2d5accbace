#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace pcad {

// Stateless 64-bit mixer (splitmix64 finalizer). Used for deriving
// independent child seeds from a master seed: every random stream in the
// project is keyed as derive_seed(parent, tag) so that runs are reproducible
// and streams stay independent when components run in parallel.
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t tag) {
    return mix64(seed + 0x9e3779b97f4a7c15ULL * (tag + 1));
}

// Inverse of the standard normal CDF, algorithm AS 241 (PPND16 variant).
// Rational approximations accurate to ~1e-15 over (0, 1).
double inverse_normal_cdf(double p);

// Deterministic random generator: std::mt19937_64 core (bit-exact across
// platforms by the C++ standard) with uniform/integer/gaussian draws that
// avoid the implementation-defined std::*_distribution classes.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1): 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform integer on [lo, hi], inclusive. Lemire multiply-shift with
    // rejection, unbiased.
    int64_t uniform_int(int64_t lo, int64_t hi) {
        uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int64_t>(bounded(range));
    }

    // Standard normal via inverse-CDF transform of an open-interval uniform.
    double gaussian() {
        double u = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;  // (0,1)
        return inverse_normal_cdf(u);
    }

    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

    // In-place Fisher-Yates shuffle (does not rely on std::shuffle, whose
    // draw sequence is implementation-defined).
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    uint64_t bounded(uint64_t range) {  // [0, range)
        uint64_t x = engine_();
        __uint128_t m = static_cast<__uint128_t>(x) * range;
        auto lo = static_cast<uint64_t>(m);
        if (lo < range) {
            uint64_t threshold = (0 - range) % range;
            while (lo < threshold) {
                x = engine_();
                m = static_cast<__uint128_t>(x) * range;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    std::mt19937_64 engine_;
};

inline double inverse_normal_cdf(double p) {
    // Coefficients from Wichura (1988), Applied Statistics 37.
    static const double a[8] = {
        3.3871328727963666080e+0, 1.3314166789178437745e+2, 1.9715909503065514427e+3,
        1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
        3.3430575583588128105e+4, 2.5090809287301226727e+3};
    static const double b[8] = {
        1.0,                      4.2313330701600911252e+1, 6.8718700749205790830e+2,
        5.3941960214247511077e+3, 2.1213794301586595867e+4, 3.9307895800092710610e+4,
        2.8729085735721942674e+4, 5.2264952788528545610e+3};
    static const double c[8] = {
        1.42343711074968357734e+0, 4.63033784615654529590e+0, 5.76949722146069140550e+0,
        3.64784832476320460504e+0, 1.27045825245236838258e+0, 2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static const double d[8] = {
        1.0,                       2.05319162663775882187e+0, 1.67638483018380384940e+0,
        6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
        5.47593808499534494600e-4, 1.05075007164441684324e-9};
    static const double e[8] = {
        6.65790464350110377720e+0, 5.46378491116411436990e+0, 1.78482653991729133580e+0,
        2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static const double f[8] = {
        1.0,                       5.99832206555887937690e-1, 1.36929880922735805310e-1,
        1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
        1.42151175831644588870e-7, 2.04426310338993978564e-15};

    auto poly = [](const double* k, double x) {
        double r = k[7];
        for (int i = 6; i >= 0; --i) r = r * x + k[i];
        return r;
    };

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * poly(a, r) / poly(b, r);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = poly(c, r) / poly(d, r);
    } else {
        r -= 5.0;
        value = poly(e, r) / poly(f, r);
    }
    return (q < 0.0) ? -value : value;
}

}  // namespace pcad
