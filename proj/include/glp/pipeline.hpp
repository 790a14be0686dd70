#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glp/comeans.hpp"
#include "glp/dataset.hpp"
#include "glp/errors.hpp"
#include "glp/kernel.hpp"
#include "glp/spectral.hpp"

namespace glp {

struct GLPResult {
    double statistic = 0.0;
    int df = 0;
    double p_asymptotic = 1.0;
    std::optional<double> p_permutation;
    int permutations = 0;
    ClusterAssignment z;
    int k_y = 0;
    int k_z = 0;
    LPKernel kernel;
    SpectralEmbedding embedding;
    std::vector<std::string> warnings;

    // the p-value downstream decisions use: permutation when available
    double used_p() const { return p_permutation ? *p_permutation : p_asymptotic; }
};

// Steps shared by a single-order test and the fused overall rerun: Laplacian,
// embedding, k-means, comeans, statistic, p-values.
inline GLPResult run_pipeline(const Dataset& ds, LPKernel kernel, std::uint64_t seed,
                              int permutations = 0, unsigned threads = 1) {
    GLPResult res;
    res.kernel = std::move(kernel);
    const Eigen::MatrixXd lap = laplacian(res.kernel);
    res.embedding = embed(lap, ds.k);
    res.warnings.insert(res.warnings.end(), res.embedding.warnings.begin(),
                        res.embedding.warnings.end());

    res.z = kmeans(res.embedding, ds.k, seed);
    if (res.z.empty_cluster) {
        res.warnings.push_back("empty cluster after " + std::to_string(res.z.restarts_used) +
                               " restarts; effective communities: " +
                               std::to_string(res.z.k_effective));
    }
    if (res.z.k_effective < 2) {
        throw DataError("clustering collapsed to a single community");
    }

    const ComeanMatrix cm = comeans(ds.y, res.z.z);
    res.statistic = glp_statistic(cm);
    res.k_y = ds.k;
    res.k_z = res.z.k_effective;
    res.df = (res.k_y - 1) * (res.k_z - 1);
    res.p_asymptotic = p_asymptotic(res.statistic, ds.n(), res.df);
    if (permutations > 0) {
        res.permutations = permutations;
        res.p_permutation = p_permutation(ds.y, res.z.z, permutations, seed, threads);
    }
    return res;
}

// Single-order GLP test: order-l feature map, degree-2 kernel, spectral
// communities, comean statistic against the true labels.
inline GLPResult glp_test(const Dataset& ds, int order, double c, std::uint64_t seed,
                          int permutations = 0, unsigned threads = 1) {
    const LPFeatureMap map = feature_map(ds, order);
    std::vector<std::string> warnings;
    const auto excluded = map.excluded_columns();
    if (!excluded.empty()) {
        warnings.push_back("order " + std::to_string(order) + ": excluded " +
                           std::to_string(excluded.size()) +
                           " feature(s) without an order-" + std::to_string(order) + " basis");
    }
    GLPResult res = run_pipeline(ds, gram(map, c), seed, permutations, threads);
    res.warnings.insert(res.warnings.begin(), warnings.begin(), warnings.end());
    return res;
}

struct ChartRow {
    int order = 0;
    std::optional<GLPResult> result;  // empty when the order was skipped
    bool significant = false;
};

struct GLPChart {
    std::vector<ChartRow> rows;
    GLPResult overall;
    std::vector<int> fused_orders;  // flagged orders; empty when overall is a fallback
    std::vector<std::string> warnings;
};

// Component decomposition: run orders 1..max_component, flag the Holm-adjusted
// significant ones at level alpha, then fuse exactly the flagged kernels and
// rerun the pipeline for the overall row. With nothing flagged the overall
// falls back to the single best order, still marked non-significant.
inline GLPChart glp_chart(const Dataset& ds, int max_component, double c, std::uint64_t seed,
                          double alpha, int permutations = 0, unsigned threads = 1) {
    if (max_component < 1) throw ConfigError("glp_chart: max_component must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("glp_chart: alpha must lie in (0,1)");

    GLPChart chart;
    std::vector<std::size_t> tested;
    for (int l = 1; l <= max_component; ++l) {
        ChartRow row;
        row.order = l;
        try {
            row.result = glp_test(ds, l, c, mix_seed(seed, seed_tag::component,
                                                     static_cast<std::uint64_t>(l)),
                                  permutations, threads);
            tested.push_back(chart.rows.size());
        } catch (const EmptyFeatureMapError&) {
            chart.warnings.push_back("component " + std::to_string(l) +
                                     " skipped: no feature supports this order");
        }
        if (row.result) {
            chart.warnings.insert(chart.warnings.end(), row.result->warnings.begin(),
                                  row.result->warnings.end());
        }
        chart.rows.push_back(std::move(row));
    }
    if (tested.empty()) {
        throw DataError("chart: every component order was skipped");
    }

    std::vector<double> pvals;
    pvals.reserve(tested.size());
    for (std::size_t idx : tested) pvals.push_back(chart.rows[idx].result->used_p());
    const std::vector<bool> flags = holm_rejections(pvals, alpha);
    for (std::size_t t = 0; t < tested.size(); ++t) {
        chart.rows[tested[t]].significant = flags[t];
        if (flags[t]) chart.fused_orders.push_back(chart.rows[tested[t]].order);
    }

    if (!chart.fused_orders.empty()) {
        std::vector<LPKernel> parts;
        for (std::size_t idx : tested) {
            if (chart.rows[idx].significant) parts.push_back(chart.rows[idx].result->kernel);
        }
        chart.overall = run_pipeline(ds, fuse(parts), mix_seed(seed, seed_tag::overall),
                                     permutations, threads);
        chart.warnings.insert(chart.warnings.end(), chart.overall.warnings.begin(),
                              chart.overall.warnings.end());
    } else {
        std::size_t best = tested.front();
        for (std::size_t idx : tested) {
            if (chart.rows[idx].result->used_p() < chart.rows[best].result->used_p()) {
                best = idx;
            }
        }
        chart.overall = *chart.rows[best].result;
        chart.warnings.push_back("no significant component; overall falls back to order " +
                                 std::to_string(chart.rows[best].order) +
                                 " and is not significant");
    }
    return chart;
}

struct ExportedFeatures {
    Eigen::MatrixXd values;             // n x (sum of kept widths)
    std::vector<std::string> names;     // order-tagged column names
    std::vector<std::string> warnings;
};

// Horizontal concatenation of the feature maps for the listed orders, columns
// tagged name_Tl. Orders without any supporting feature are skipped.
inline ExportedFeatures export_lp_features(const Dataset& ds, const std::vector<int>& orders) {
    if (orders.empty()) throw ConfigError("export_lp_features: no orders requested");
    ExportedFeatures out;
    std::vector<LPFeatureMap> maps;
    Eigen::Index total = 0;
    for (int l : orders) {
        try {
            maps.push_back(feature_map(ds, l));
            total += maps.back().values.cols();
        } catch (const EmptyFeatureMapError&) {
            out.warnings.push_back("order " + std::to_string(l) +
                                   " skipped: no feature supports it");
        }
    }
    if (maps.empty()) {
        throw DataError("export_lp_features: no requested order is supported by the data");
    }
    out.values.resize(ds.n(), total);
    Eigen::Index at = 0;
    for (const auto& map : maps) {
        out.values.middleCols(at, map.values.cols()) = map.values;
        at += map.values.cols();
        for (int j : map.kept_columns) {
            out.names.push_back(ds.column_names[static_cast<std::size_t>(j)] + "_T" +
                                std::to_string(map.order));
        }
    }
    return out;
}

}  // namespace glp
