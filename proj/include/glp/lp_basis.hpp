#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <vector>

#include "glp/dataset.hpp"
#include "glp/errors.hpp"

// Data-adaptive orthonormal polynomial basis of one column. The first basis
// function is the standardized mid-distribution transform zeta; higher orders
// are Gram-Schmidt orthonormalizations of its powers under the empirical
// (1/n)-weighted inner product. Orthonormality is exact at every n, which is
// what turns the rank-statistic correspondences into identities.

namespace glp {

// Highest basis order a column supports: one less than its support size.
inline int max_basis_order(const ColumnSummary& s) {
    return static_cast<int>(s.support_size()) - 1;
}

// zeta(x) = sqrt(12) * (mid_cdf(x) - 1/2) / sqrt(tie_factor).
inline double zeta(const ColumnSummary& s, double value) {
    if (s.tie_factor <= 0.0) {
        throw DataError("zeta: constant column has no basis function");
    }
    const double mid = s.mid_cdf[s.index_of(value)];
    return 3.4641016151377545870548926830117 * (mid - 0.5) / std::sqrt(s.tie_factor);
}

struct LPBasis {
    int order = 0;                   // m, the number of basis functions kept
    Eigen::MatrixXd distinct_scores; // |U| x m, T_l evaluated on distinct values
    Eigen::MatrixXd values;          // n x m, T_l evaluated on the observations
};

// Gram-Schmidt over the distinct values with pmf weights. Candidates are the
// powers zeta^l in order; each is centered, projected off the accepted basis
// twice (re-orthogonalization), and dropped once its residual falls below
// 1e-8 of its centered norm. Powers of distinct points form a Vandermonde
// system, so a drop only happens at numerical rank exhaustion and every later
// power would drop too; the loop stops there, keeping column l = order l.
inline LPBasis build_basis(const ColumnSummary& s, const std::vector<double>& observed,
                           int max_order) {
    if (max_order < 1) throw ConfigError("build_basis: max_order must be >= 1");
    if (s.support_size() < 2) {
        throw DataError("build_basis: constant column has no basis function");
    }
    const int u = static_cast<int>(s.support_size());
    const int target = std::min(max_order, u - 1);

    Eigen::Map<const Eigen::VectorXd> p(s.pmf.data(), u);
    Eigen::VectorXd z(u);
    for (int j = 0; j < u; ++j) {
        z[j] = 3.4641016151377545870548926830117 * (s.mid_cdf[static_cast<std::size_t>(j)] - 0.5) /
               std::sqrt(s.tie_factor);
    }

    const auto wdot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return (p.array() * a.array() * b.array()).sum();
    };

    Eigen::MatrixXd basis(u, target);
    Eigen::VectorXd cand = Eigen::VectorXd::Ones(u);
    int m = 0;
    for (int l = 1; l <= target; ++l) {
        cand = cand.array() * z.array();  // zeta^l
        Eigen::VectorXd v = cand;
        v.array() -= wdot(v, Eigen::VectorXd::Ones(u));
        const double pre_norm = std::sqrt(wdot(v, v));
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < m; ++j) {
                v -= wdot(v, basis.col(j)) * basis.col(j);
            }
        }
        const double res_norm = std::sqrt(wdot(v, v));
        if (!(res_norm > 1e-8 * pre_norm)) break;
        basis.col(m) = v / res_norm;
        ++m;
    }

    LPBasis out;
    out.order = m;
    out.distinct_scores = basis.leftCols(m);
    out.values.resize(static_cast<Eigen::Index>(observed.size()), m);
    for (std::size_t i = 0; i < observed.size(); ++i) {
        out.values.row(static_cast<Eigen::Index>(i)) =
            out.distinct_scores.row(static_cast<Eigen::Index>(s.index_of(observed[i])));
    }
    return out;
}

inline LPBasis build_basis(const ColumnSummary& s,
                           const Eigen::Ref<const Eigen::VectorXd>& observed, int max_order) {
    return build_basis(s, std::vector<double>(observed.data(), observed.data() + observed.size()),
                       max_order);
}

// Basis of a discrete label vector, used for the comean calculation. Orders
// run up to k-1, the label column's full support.
inline LPBasis label_basis(const std::vector<int>& labels) {
    std::vector<double> as_real(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) as_real[i] = static_cast<double>(labels[i]);
    const ColumnSummary s = summarize_column(as_real);
    if (s.support_size() < 2) throw DataError("label_basis: single-valued labels");
    return build_basis(s, as_real, max_basis_order(s));
}

}  // namespace glp
