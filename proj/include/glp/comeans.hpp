#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <cstdint>
#include <optional>
#include <vector>

#include "glp/errors.hpp"
#include "glp/lp_basis.hpp"
#include "glp/parallel.hpp"
#include "glp/rng.hpp"
#include "glp/stats.hpp"

namespace glp {

// Cross-moments of the label bases: values(j, l) = (1/n) sum_i T_j(y_i) T_l(z_i).
// The squared Frobenius norm is the test statistic and is invariant to how
// either side's categories are numbered.
struct ComeanMatrix {
    Eigen::MatrixXd values;  // (k_y - 1) x (k_z - 1)
    int n = 0;
};

inline ComeanMatrix comeans(const std::vector<int>& y, const std::vector<int>& z) {
    if (y.size() != z.size()) throw DataError("comeans: label vectors differ in length");
    const LPBasis by = label_basis(y);
    const LPBasis bz = label_basis(z);
    ComeanMatrix cm;
    cm.n = static_cast<int>(y.size());
    cm.values = (by.values.transpose() * bz.values) / static_cast<double>(cm.n);
    return cm;
}

inline double glp_statistic(const ComeanMatrix& cm) { return cm.values.squaredNorm(); }

// Upper-tail chi-squared probability of n * statistic at df degrees of freedom.
inline double p_asymptotic(double statistic, int n, int df) {
    if (df < 1) throw ConfigError("p_asymptotic: df must be >= 1");
    if (n < 1) throw ConfigError("p_asymptotic: n must be >= 1");
    return chi_squared_sf(static_cast<double>(n) * statistic, static_cast<double>(df));
}

// Add-one permutation p-value. Z is a function of X alone, so only Y is
// shuffled; each of the b replicas draws its permutation from its own seeded
// stream, making the count independent of the thread schedule. Mathematical
// ties with the observed statistic are counted as exceedances (1e-12 slack
// absorbs summation-order noise).
inline double p_permutation(const std::vector<int>& y, const std::vector<int>& z, int b,
                            std::uint64_t seed, unsigned threads = 1) {
    if (b < 1) throw ConfigError("p_permutation: b must be >= 1");
    const std::size_t n = y.size();
    const LPBasis by = label_basis(y);
    const LPBasis bz = label_basis(z);
    const Eigen::MatrixXd observed_m =
        (by.values.transpose() * bz.values) / static_cast<double>(n);
    const double observed = observed_m.squaredNorm();

    // distinct score rows per category, so each replica only tallies a
    // contingency table
    const int ky = static_cast<int>(by.distinct_scores.rows());
    const int kz = static_cast<int>(bz.distinct_scores.rows());

    std::atomic<long> exceed{0};
    parallel_for(static_cast<std::size_t>(b), threads, [&](std::size_t rep) {
        Rng rng(mix_seed(seed, seed_tag::permutation, static_cast<std::uint64_t>(rep)));
        std::vector<int> yp(y);
        rng.shuffle(yp);
        Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(ky, kz);
        for (std::size_t i = 0; i < n; ++i) {
            counts(yp[i] - 1, z[i] - 1) += 1.0;
        }
        const Eigen::MatrixXd m = (by.distinct_scores.transpose() * (counts / static_cast<double>(n)) *
                                   bz.distinct_scores);
        if (m.squaredNorm() >= observed - 1e-12) exceed.fetch_add(1);
    });
    return (1.0 + static_cast<double>(exceed.load())) / (1.0 + static_cast<double>(b));
}

}  // namespace glp
