#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "glp/errors.hpp"

namespace glp {

// Labeled sample: x holds the n x d covariates, y the group ids re-indexed to
// 1..k in first-appearance order. group_names keeps the original label text
// so reports can show it.
struct Dataset {
    Eigen::MatrixXd x;
    std::vector<int> y;
    int k = 0;
    std::vector<std::string> column_names;
    std::vector<std::string> group_names;
    std::vector<std::string> warnings;

    int n() const { return static_cast<int>(x.rows()); }
    int d() const { return static_cast<int>(x.cols()); }
};

// Empirical distribution of one column: sorted distinct values, their pmf,
// the mid-distribution transform F(x) - p(x)/2, and the tie factor
// 1 - sum p^3 from the basis denominator.
struct ColumnSummary {
    std::vector<double> distinct_values;
    std::vector<double> pmf;
    std::vector<double> mid_cdf;
    double tie_factor = 0.0;

    std::size_t support_size() const { return distinct_values.size(); }

    // Index of `value` in distinct_values; the value must be observed.
    std::size_t index_of(double value) const {
        const auto it = std::lower_bound(distinct_values.begin(), distinct_values.end(), value);
        if (it == distinct_values.end() || *it != value) {
            throw DataError("ColumnSummary: value not in observed support");
        }
        return static_cast<std::size_t>(it - distinct_values.begin());
    }
};

inline ColumnSummary summarize_column(const std::vector<double>& values) {
    if (values.empty()) throw DataError("summarize_column: empty column");
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    ColumnSummary s;
    const double n = static_cast<double>(sorted.size());
    double cum = 0.0;
    double sum_p3 = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double p = static_cast<double>(j - i) / n;
        s.distinct_values.push_back(sorted[i]);
        s.pmf.push_back(p);
        s.mid_cdf.push_back(cum + 0.5 * p);
        cum += p;
        sum_p3 += p * p * p;
        i = j;
    }
    s.tie_factor = 1.0 - sum_p3;
    return s;
}

inline ColumnSummary summarize_column(const Eigen::Ref<const Eigen::VectorXd>& col) {
    return summarize_column(std::vector<double>(col.data(), col.data() + col.size()));
}

// Re-indexes raw label strings to 1..k by first appearance and validates the
// group structure. Degenerate groups (fewer than 2 rows) cannot support the
// test's permutation law.
inline void assign_labels(Dataset& ds, const std::vector<std::string>& raw) {
    ds.y.resize(raw.size());
    ds.group_names.clear();
    std::map<std::string, int> ids;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto [it, inserted] = ids.try_emplace(raw[i], static_cast<int>(ids.size()) + 1);
        if (inserted) ds.group_names.push_back(raw[i]);
        ds.y[i] = it->second;
    }
    ds.k = static_cast<int>(ids.size());
    if (ds.k < 2) throw DataError("single-group data: label column has one distinct value");
    std::vector<int> counts(static_cast<std::size_t>(ds.k), 0);
    for (int g : ds.y) ++counts[static_cast<std::size_t>(g - 1)];
    for (int g = 0; g < ds.k; ++g) {
        if (counts[static_cast<std::size_t>(g)] < 2) {
            throw DataError("degenerate group '" + ds.group_names[static_cast<std::size_t>(g)] +
                            "': needs at least 2 observations");
        }
    }
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

inline bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

}  // namespace detail

// CSV ingestion: comma delimiter, optional header, label column picked by
// header name or 0-based index. Rows with empty cells are dropped with a
// warning; non-numeric covariate cells abort with the offending position.
inline Dataset load_csv(const std::string& path, const std::string& label_column,
                        bool has_header = true) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!detail::trim(line).empty()) lines.push_back(line);
    }
    if (lines.empty()) throw DataError("empty input file: " + path);

    std::vector<std::string> header;
    std::size_t first_data = 0;
    if (has_header) {
        header = detail::split_csv_line(lines[0]);
        first_data = 1;
    }
    if (first_data >= lines.size()) throw DataError("no data rows in: " + path);

    const std::size_t width = detail::split_csv_line(lines[first_data]).size();
    if (has_header && header.size() != width) {
        throw DataError("header width differs from data width in: " + path);
    }

    // Resolve the label column: exact header match first, then integer index.
    std::size_t label_idx = width;
    if (has_header) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (header[j] == label_column) {
                label_idx = j;
                break;
            }
        }
    }
    if (label_idx == width) {
        int idx = -1;
        const auto res =
            std::from_chars(label_column.data(), label_column.data() + label_column.size(), idx);
        if (res.ec == std::errc() && res.ptr == label_column.data() + label_column.size() &&
            idx >= 0 && static_cast<std::size_t>(idx) < width) {
            label_idx = static_cast<std::size_t>(idx);
        } else {
            throw DataError("label column '" + label_column + "' not found");
        }
    }

    Dataset ds;
    const std::size_t d = width - 1;
    if (d == 0) throw DataError("no covariate columns beside the label in: " + path);
    if (has_header) {
        for (std::size_t j = 0; j < width; ++j) {
            if (j != label_idx) ds.column_names.push_back(header[j]);
        }
    } else {
        for (std::size_t j = 1; j <= d; ++j) ds.column_names.push_back("x" + std::to_string(j));
    }

    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    std::size_t dropped = 0;
    for (std::size_t r = first_data; r < lines.size(); ++r) {
        const auto cells = detail::split_csv_line(lines[r]);
        if (cells.size() != width) {
            throw DataError("row " + std::to_string(r + 1) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(width));
        }
        if (std::any_of(cells.begin(), cells.end(),
                        [](const std::string& c) { return c.empty(); })) {
            ++dropped;
            continue;
        }
        std::vector<double> row;
        row.reserve(d);
        bool bad = false;
        for (std::size_t j = 0; j < width && !bad; ++j) {
            if (j == label_idx) continue;
            double v;
            if (!detail::parse_double(cells[j], v)) {
                throw DataError("cannot parse numeric cell at row " + std::to_string(r + 1) +
                                ", column " + std::to_string(j + 1) + ": '" + cells[j] + "'");
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
        labels.push_back(cells[label_idx]);
    }
    if (dropped > 0) {
        ds.warnings.push_back("dropped " + std::to_string(dropped) + " row(s) with missing cells");
    }
    if (rows.empty()) throw DataError("all rows were dropped or missing in: " + path);

    ds.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            ds.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    assign_labels(ds, labels);
    return ds;
}

// In-memory constructor used by the simulator and tests.
inline Dataset make_dataset(Eigen::MatrixXd x, const std::vector<int>& labels) {
    Dataset ds;
    ds.x = std::move(x);
    if (static_cast<std::size_t>(ds.x.rows()) != labels.size()) {
        throw DataError("make_dataset: label length differs from row count");
    }
    std::vector<std::string> raw(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) raw[i] = std::to_string(labels[i]);
    assign_labels(ds, raw);
    for (std::size_t j = 1; j <= static_cast<std::size_t>(ds.x.cols()); ++j) {
        ds.column_names.push_back("x" + std::to_string(j));
    }
    return ds;
}

}  // namespace glp
