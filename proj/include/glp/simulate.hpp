#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "glp/dataset.hpp"
#include "glp/errors.hpp"
#include "glp/parallel.hpp"
#include "glp/pipeline.hpp"
#include "glp/rng.hpp"
#include "glp/stats.hpp"

namespace glp {

// Synthetic k-sample scenarios at desk scale. Group 1 is always the
// reference; per-group parameter vectors are broadcast from scalars by the
// config layer (shift s -> {0, s, s, ...}, scale v -> {1, v, v, ...}).
struct ScenarioSpec {
    std::string name;  // location, scale, location_scale, heavy_tail, poisson,
                       // contaminated_location, contaminated_tail, mixed
    int d = 100;
    std::vector<int> n_per_group = {100, 100};
    std::vector<double> delta = {0.0, 0.5};    // location shifts per group
    std::vector<double> sigma = {1.0, 1.5};    // variance factors per group
    std::vector<double> lambda = {5.0, 5.5};   // Poisson rates per group
    double nu = 3.0;                           // t degrees of freedom
    double eta = 0.1;                          // contamination rate
    double r = 0.5;                            // mixed split: d2 = round(r * d)
    std::uint64_t seed = 42;
};

inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {
        "location",      "scale",           "location_scale", "heavy_tail",
        "poisson",       "contaminated_location", "contaminated_tail", "mixed"};
    return names;
}

inline void validate(const ScenarioSpec& spec) {
    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), spec.name) == names.end()) {
        throw ConfigError("unknown scenario name: '" + spec.name + "'");
    }
    if (spec.d < 1 || spec.d > 1024) {
        throw ConfigError("scenario d must lie in [1, 1024], got " + std::to_string(spec.d));
    }
    if (spec.n_per_group.size() < 2) {
        throw ConfigError("scenario needs at least 2 groups");
    }
    for (int ng : spec.n_per_group) {
        if (ng < 2) throw ConfigError("every group needs at least 2 observations");
    }
    const std::size_t g = spec.n_per_group.size();
    if (spec.delta.size() != g) throw ConfigError("delta must list one shift per group");
    if (spec.sigma.size() != g) throw ConfigError("sigma must list one variance per group");
    if (spec.lambda.size() != g) throw ConfigError("lambda must list one rate per group");
    for (double v : spec.sigma) {
        if (!(v > 0.0)) throw ConfigError("sigma entries must be positive");
    }
    for (double v : spec.lambda) {
        if (!(v > 0.0)) throw ConfigError("lambda entries must be positive");
    }
    if (!(spec.eta >= 0.0 && spec.eta <= 0.5)) {
        throw ConfigError("eta must lie in [0, 0.5], got " + std::to_string(spec.eta));
    }
    if (!(spec.nu >= 1.0)) throw ConfigError("nu must be >= 1");
    if (!(spec.r >= 0.0 && spec.r <= 1.0)) throw ConfigError("r must lie in [0, 1]");
}

namespace detail {

// With probability eta an entry is replaced by the outlier component
// N(+-20, 3); the sign is a fair coin.
inline double contaminate(Rng& rng, double clean, double eta) {
    if (rng.uniform() < eta) {
        const double sign = rng.uniform() < 0.5 ? 20.0 : -20.0;
        return sign + 1.7320508075688772935274463415059 * rng.normal();
    }
    return clean;
}

}  // namespace detail

// Draws one dataset. rep distinguishes Monte Carlo replications; the draw is
// a pure function of (spec, rep).
inline Dataset generate(const ScenarioSpec& spec, std::uint64_t rep = 0) {
    validate(spec);
    const int groups = static_cast<int>(spec.n_per_group.size());
    const int n = std::accumulate(spec.n_per_group.begin(), spec.n_per_group.end(), 0);
    Eigen::MatrixXd x(n, spec.d);
    std::vector<int> y(static_cast<std::size_t>(n));
    Rng rng(mix_seed(spec.seed, seed_tag::generate, rep));

    const int d2 = static_cast<int>(std::lround(spec.r * spec.d));  // mixed: scale block
    const int d1 = spec.d - d2;

    int row = 0;
    for (int g = 0; g < groups; ++g) {
        const double shift = spec.delta[static_cast<std::size_t>(g)];
        const double sd = std::sqrt(spec.sigma[static_cast<std::size_t>(g)]);
        const double rate = spec.lambda[static_cast<std::size_t>(g)];
        for (int i = 0; i < spec.n_per_group[static_cast<std::size_t>(g)]; ++i, ++row) {
            y[static_cast<std::size_t>(row)] = g + 1;
            if (spec.name == "location") {
                for (int j = 0; j < spec.d; ++j) x(row, j) = shift + rng.normal();
            } else if (spec.name == "scale") {
                for (int j = 0; j < spec.d; ++j) x(row, j) = sd * rng.normal();
            } else if (spec.name == "location_scale") {
                for (int j = 0; j < spec.d; ++j) x(row, j) = shift + sd * rng.normal();
            } else if (spec.name == "heavy_tail") {
                if (g == 0) {
                    for (int j = 0; j < spec.d; ++j) x(row, j) = rng.normal();
                } else {
                    // one chi-squared denominator per row: multivariate t
                    const double denom = std::sqrt(rng.chi_squared(spec.nu) / spec.nu);
                    for (int j = 0; j < spec.d; ++j) x(row, j) = rng.normal() / denom;
                }
            } else if (spec.name == "poisson") {
                for (int j = 0; j < spec.d; ++j) {
                    x(row, j) = static_cast<double>(rng.poisson(rate));
                }
            } else if (spec.name == "contaminated_location") {
                for (int j = 0; j < spec.d; ++j) {
                    x(row, j) = detail::contaminate(rng, shift + rng.normal(), spec.eta);
                }
            } else if (spec.name == "contaminated_tail") {
                if (g == 0) {
                    for (int j = 0; j < spec.d; ++j) {
                        x(row, j) = detail::contaminate(rng, rng.normal(), spec.eta);
                    }
                } else {
                    const double denom = std::sqrt(rng.chi_squared(spec.nu) / spec.nu);
                    for (int j = 0; j < spec.d; ++j) {
                        x(row, j) = detail::contaminate(rng, rng.normal() / denom, spec.eta);
                    }
                }
            } else {  // mixed: d1 shifted columns, d2 variance-inflated columns
                for (int j = 0; j < d1; ++j) x(row, j) = (g == 0 ? 0.0 : shift) + rng.normal();
                for (int j = d1; j < spec.d; ++j) {
                    x(row, j) = (g == 0 ? 1.0 : sd) * rng.normal();
                }
            }
        }
    }
    return make_dataset(std::move(x), y);
}

struct TestConfig {
    int order = 1;
    double c = 0.5;
    int permutations = 0;
    std::uint64_t seed = 42;
    unsigned threads = 1;
};

struct PowerReport {
    ScenarioSpec scenario;
    int order = 1;
    int replications = 0;
    double alpha = 0.05;
    double power = 0.0;
    double mc_stderr = 0.0;
};

// Monte Carlo power: fraction of replications with p <= alpha. Replications
// run in parallel on per-index seeds; only a count is aggregated, so the
// result is schedule-independent.
inline PowerReport estimate_power(const ScenarioSpec& spec, const TestConfig& config,
                                  int replications, double alpha) {
    if (replications < 1) throw ConfigError("estimate_power: replications must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("estimate_power: alpha must lie in (0,1)");
    validate(spec);
    std::atomic<int> rejections{0};
    std::mutex error_mutex;
    std::string first_error;
    parallel_for(static_cast<std::size_t>(replications), config.threads, [&](std::size_t rep) {
        try {
            const Dataset ds = generate(spec, rep);
            const GLPResult res =
                glp_test(ds, config.order, config.c,
                         mix_seed(config.seed, seed_tag::replication, rep), config.permutations, 1);
            if (res.used_p() <= alpha) rejections.fetch_add(1);
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (first_error.empty()) first_error = e.what();
        }
    });
    if (!first_error.empty()) {
        throw NumericError("estimate_power: replication failed: " + first_error);
    }
    PowerReport report;
    report.scenario = spec;
    report.order = config.order;
    report.replications = replications;
    report.alpha = alpha;
    report.power = static_cast<double>(rejections.load()) / static_cast<double>(replications);
    report.mc_stderr =
        std::sqrt(report.power * (1.0 - report.power) / static_cast<double>(replications));
    return report;
}

struct CalibrationSummary {
    std::vector<double> differences;  // p_asymptotic - p_permutation per replication
    double q05 = 0.0, q25 = 0.0, median_diff = 0.0, q75 = 0.0, q95 = 0.0;
    double median_abs = 0.0;

    double iqr() const { return q75 - q25; }
};

// Two-group null calibration: standard normal data, order-1 pipeline, and the
// gap between the chi-squared p-value and the B-permutation p-value.
inline CalibrationSummary calibrate_null(int d, int n1, int n2, int replications, int b,
                                         std::uint64_t seed = 42, double c = 0.5,
                                         unsigned threads = 1) {
    if (d < 1 || n1 < 2 || n2 < 2 || replications < 1 || b < 1) {
        throw ConfigError("calibrate_null: all sizes must be positive (groups >= 2)");
    }
    ScenarioSpec spec;
    spec.name = "location";
    spec.d = d;
    spec.n_per_group = {n1, n2};
    spec.delta = {0.0, 0.0};
    spec.sigma = {1.0, 1.0};
    spec.lambda = {5.0, 5.0};
    spec.seed = seed;

    CalibrationSummary summary;
    summary.differences.resize(static_cast<std::size_t>(replications));
    std::mutex error_mutex;
    std::string first_error;
    parallel_for(static_cast<std::size_t>(replications), threads, [&](std::size_t rep) {
        try {
            const Dataset ds = generate(spec, rep);
            const GLPResult res = glp_test(ds, 1, c, mix_seed(seed, seed_tag::replication, rep), b, 1);
            summary.differences[rep] = res.p_asymptotic - *res.p_permutation;
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (first_error.empty()) first_error = e.what();
        }
    });
    if (!first_error.empty()) {
        throw NumericError("calibrate_null: replication failed: " + first_error);
    }
    summary.q05 = quantile(summary.differences, 0.05);
    summary.q25 = quantile(summary.differences, 0.25);
    summary.median_diff = median(summary.differences);
    summary.q75 = quantile(summary.differences, 0.75);
    summary.q95 = quantile(summary.differences, 0.95);
    std::vector<double> abs_diffs(summary.differences.size());
    for (std::size_t i = 0; i < abs_diffs.size(); ++i) {
        abs_diffs[i] = std::abs(summary.differences[i]);
    }
    summary.median_abs = median(abs_diffs);
    return summary;
}

}  // namespace glp
