#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "glp/dataset.hpp"
#include "glp/errors.hpp"
#include "glp/lp_basis.hpp"

namespace glp {

// Order-l feature map: column j holds T_l of covariate j. Columns whose
// support cannot reach order l are excluded; kept_columns records the
// surviving original indices.
struct LPFeatureMap {
    int order = 0;
    Eigen::MatrixXd values;        // n x d'
    std::vector<int> kept_columns; // original 0-based indices, size d'
    int source_columns = 0;        // d of the dataset

    std::vector<int> excluded_columns() const {
        std::vector<int> out;
        std::size_t next = 0;
        for (int j = 0; j < source_columns; ++j) {
            if (next < kept_columns.size() && kept_columns[next] == j) {
                ++next;
            } else {
                out.push_back(j);
            }
        }
        return out;
    }
};

inline LPFeatureMap feature_map(const Dataset& ds, int order) {
    if (order < 1) throw ConfigError("feature_map: order must be >= 1");
    const int n = ds.n();
    const int d = ds.d();
    std::vector<Eigen::VectorXd> cols;
    std::vector<int> kept;
    for (int j = 0; j < d; ++j) {
        const ColumnSummary s = summarize_column(ds.x.col(j));
        if (max_basis_order(s) < order) continue;
        const LPBasis basis = build_basis(s, ds.x.col(j), order);
        if (basis.order < order) continue;  // numerical rank fell short
        cols.push_back(basis.values.col(order - 1));
        kept.push_back(j);
    }
    if (cols.empty()) {
        throw EmptyFeatureMapError("no feature admits a basis function at order " +
                                   std::to_string(order));
    }
    LPFeatureMap map;
    map.order = order;
    map.source_columns = d;
    map.kept_columns = std::move(kept);
    map.values.resize(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        map.values.col(static_cast<Eigen::Index>(j)) = cols[j];
    }
    return map;
}

// Degree-2 polynomial kernel over feature rows. The inner product is the
// mean product over the kept features, which keeps it on the same scale as
// the offset c at any dimension; raw sums would swamp c and lose the sign
// of the similarity under squaring.
struct LPKernel {
    std::vector<int> orders;  // singleton, or the fused set
    Eigen::MatrixXd w;        // n x n symmetric
    double c = 0.5;

    std::string order_label() const {
        if (orders.size() == 1) return std::to_string(orders[0]);
        std::string s = "fused{";
        for (std::size_t i = 0; i < orders.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(orders[i]);
        }
        return s + "}";
    }
};

inline LPKernel gram(const LPFeatureMap& map, double c) {
    if (c < 0.0) throw ConfigError("gram: offset c must be >= 0");
    const double dprime = static_cast<double>(map.values.cols());
    LPKernel kernel;
    kernel.orders = {map.order};
    kernel.c = c;
    Eigen::MatrixXd ip = (map.values * map.values.transpose()) / dprime;
    kernel.w = (ip.array() + c).square().matrix();
    // enforce exact symmetry lost to fp summation order
    kernel.w = 0.5 * (kernel.w + kernel.w.transpose()).eval();
    return kernel;
}

inline LPKernel fuse(const std::vector<LPKernel>& kernels) {
    if (kernels.empty()) throw ConfigError("fuse: empty kernel list");
    LPKernel out;
    out.c = kernels.front().c;
    out.w = kernels.front().w;
    out.orders = kernels.front().orders;
    for (std::size_t i = 1; i < kernels.size(); ++i) {
        if (kernels[i].w.rows() != out.w.rows()) {
            throw DataError("fuse: kernels disagree on sample count");
        }
        out.w += kernels[i].w;
        out.orders.insert(out.orders.end(), kernels[i].orders.begin(), kernels[i].orders.end());
    }
    return out;
}

}  // namespace glp
