#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// Seeded random generation with portable output. std::mt19937_64 is fully
// specified by the standard, but the std:: distribution adaptors are not, so
// every transform (uniform, normal, gamma, ...) is implemented here to keep
// results byte-identical across standard libraries.

namespace glp {

namespace detail {

// splitmix64 finalizer; good avalanche, used only for seed derivation.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

// Derives an independent stream seed from (master, stage, index). Stage tags
// keep the k-means restarts, permutation replicas, chart components and Monte
// Carlo replications on non-overlapping streams regardless of thread order.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stage, std::uint64_t index = 0) {
    return detail::mix64(detail::mix64(master ^ stage) + index);
}

namespace seed_tag {
constexpr std::uint64_t kmeans = 0x6b6d65616e730001ULL;
constexpr std::uint64_t permutation = 0x7065726d00000002ULL;
constexpr std::uint64_t component = 0x636f6d706f000003ULL;
constexpr std::uint64_t overall = 0x6f766572616c0004ULL;
constexpr std::uint64_t replication = 0x7265706c69630005ULL;
constexpr std::uint64_t generate = 0x67656e6572610006ULL;
}  // namespace seed_tag

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Unbiased integer in [0, bound) by rejection.
    std::uint64_t uniform_int(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    // Box-Muller, always consuming two uniforms per draw (no cached spare, so
    // the stream position is a pure function of the draw count).
    double normal() {
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Marsaglia-Tsang for shape >= 1; boosted by u^(1/shape) below 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            double u;
            do {
                u = uniform();
            } while (u <= 0.0);
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double chi_squared(double df) { return 2.0 * gamma(0.5 * df); }

    // Student t via N(0,1) / sqrt(chi2_df / df).
    double student_t(double df) {
        return normal() / std::sqrt(chi_squared(df) / df);
    }

    // Knuth's product method; lambda stays small here (simulation rates ~5).
    long poisson(double lambda) {
        const double limit = std::exp(-lambda);
        long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }

    // Fisher-Yates; permutes idx in place.
    template <typename T>
    void shuffle(std::vector<T>& idx) {
        for (std::size_t i = idx.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(idx[i - 1], idx[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace glp
