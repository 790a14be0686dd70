#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "glp/errors.hpp"
#include "glp/pipeline.hpp"
#include "glp/simulate.hpp"

// Serialization of results and configs. All JSON goes through nlohmann::json,
// whose sorted keys and shortest-round-trip doubles make the output a pure
// function of the values, which is what the byte-identical rerun guarantee
// rests on.

namespace glp {

using nlohmann::json;

inline json test_to_json(const GLPResult& res, int n) {
    json j;
    j["glp"] = res.statistic;
    j["df"] = res.df;
    j["n"] = n;
    j["k_y"] = res.k_y;
    j["k_z"] = res.k_z;
    j["p_asymptotic"] = res.p_asymptotic;
    if (res.p_permutation) {
        j["p_permutation"] = *res.p_permutation;
        j["permutations"] = res.permutations;
    }
    j["empty_cluster"] = res.z.empty_cluster;
    j["warnings"] = res.warnings;
    return j;
}

inline json chart_to_json(const GLPChart& chart) {
    json components = json::array();
    for (const auto& row : chart.rows) {
        if (!row.result) continue;  // skipped orders appear in warnings only
        json r;
        r["order"] = row.order;
        r["glp"] = row.result->statistic;
        r["p_value"] = row.result->used_p();
        r["significant"] = row.significant;
        components.push_back(r);
    }
    json j;
    j["components"] = components;
    j["overall"] = {{"glp", chart.overall.statistic}, {"p_value", chart.overall.used_p()}};
    j["fused_orders"] = chart.fused_orders;
    j["warnings"] = chart.warnings;
    return j;
}

namespace detail {

// CSV cell formatting: full round-trip precision, no locale.
inline std::string csv_num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace detail

inline std::string test_to_csv(const GLPResult& res, int n) {
    std::string s = "glp,df,n,k_y,k_z,p_asymptotic,p_permutation,permutations\n";
    s += detail::csv_num(res.statistic) + ',' + std::to_string(res.df) + ',' +
         std::to_string(n) + ',' + std::to_string(res.k_y) + ',' + std::to_string(res.k_z) + ',' +
         detail::csv_num(res.p_asymptotic) + ',';
    s += res.p_permutation ? detail::csv_num(*res.p_permutation) : std::string("");
    s += ',' + std::to_string(res.permutations) + '\n';
    return s;
}

inline std::string chart_to_csv(const GLPChart& chart) {
    std::string s = "component,glp,p_value,significant\n";
    for (const auto& row : chart.rows) {
        if (!row.result) continue;
        s += std::to_string(row.order) + ',' + detail::csv_num(row.result->statistic) + ',' +
             detail::csv_num(row.result->used_p()) + ',' + (row.significant ? "true" : "false") +
             '\n';
    }
    s += "overall," + detail::csv_num(chart.overall.statistic) + ',' +
         detail::csv_num(chart.overall.used_p()) + ',' +
         (chart.fused_orders.empty() ? "false" : "true") + '\n';
    return s;
}

inline std::string power_to_csv(const std::vector<PowerReport>& reports) {
    std::string s = "scenario,d,order,alpha,replications,power,stderr\n";
    for (const auto& r : reports) {
        s += r.scenario.name + ',' + std::to_string(r.scenario.d) + ',' +
             std::to_string(r.order) + ',' + detail::csv_num(r.alpha) + ',' +
             std::to_string(r.replications) + ',' + detail::csv_num(r.power) + ',' +
             detail::csv_num(r.mc_stderr) + '\n';
    }
    return s;
}

inline std::string calibration_to_csv(const CalibrationSummary& summary) {
    std::string s = "q05,q25,median,q75,q95,median_abs,iqr\n";
    s += detail::csv_num(summary.q05) + ',' + detail::csv_num(summary.q25) + ',' +
         detail::csv_num(summary.median_diff) + ',' + detail::csv_num(summary.q75) + ',' +
         detail::csv_num(summary.q95) + ',' + detail::csv_num(summary.median_abs) + ',' +
         detail::csv_num(summary.iqr()) + '\n';
    return s;
}

inline std::string matrix_to_csv(const Eigen::MatrixXd& m) {
    std::string s;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) s += ',';
            s += detail::csv_num(m(i, j));
        }
        s += '\n';
    }
    return s;
}

inline std::string embedding_to_csv(const SpectralEmbedding& emb) {
    std::string s = "row_type";
    for (Eigen::Index j = 0; j < emb.u.cols(); ++j) s += ",v" + std::to_string(j + 1);
    s += '\n';
    s += "eigenvalue";
    for (Eigen::Index j = 0; j < emb.eigenvalues.size(); ++j) {
        s += ',' + detail::csv_num(emb.eigenvalues[j]);
    }
    s += '\n';
    for (Eigen::Index i = 0; i < emb.u.rows(); ++i) {
        s += "u";
        for (Eigen::Index j = 0; j < emb.u.cols(); ++j) s += ',' + detail::csv_num(emb.u(i, j));
        s += '\n';
    }
    return s;
}

inline std::string features_to_csv(const ExportedFeatures& feats) {
    std::string s;
    for (std::size_t j = 0; j < feats.names.size(); ++j) {
        if (j) s += ',';
        s += feats.names[j];
    }
    s += '\n';
    s += matrix_to_csv(feats.values);
    return s;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write output file: " + path);
    out << content;
}

// Scenario config: JSON object with a scenario name plus optional parameter
// overrides. "d" may be an array for power curves. Scalars broadcast:
// delta s -> {0, s, ...}, sigma v -> {1, v, ...}. Unknown keys are rejected
// so typos cannot silently fall back to defaults.
struct ScenarioConfig {
    ScenarioSpec spec;
    std::vector<int> d_values;  // one entry per power-curve point
};

inline ScenarioConfig scenario_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("scenario config must be a JSON object");
    static const std::vector<std::string> known = {"name",   "d",   "n_per_group", "delta",
                                                   "sigma",  "nu",  "eta",         "r",
                                                   "lambda", "seed"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown scenario field '" + key + "'");
        }
    }
    ScenarioConfig cfg;
    try {
        cfg.spec.name = j.at("name").get<std::string>();
        if (j.contains("n_per_group")) {
            cfg.spec.n_per_group = j["n_per_group"].get<std::vector<int>>();
        }
        const std::size_t groups = cfg.spec.n_per_group.size();
        if (j.contains("d")) {
            if (j["d"].is_array()) {
                cfg.d_values = j["d"].get<std::vector<int>>();
            } else {
                cfg.d_values = {j["d"].get<int>()};
            }
        } else {
            cfg.d_values = {cfg.spec.d};
        }
        if (cfg.d_values.empty()) throw ConfigError("scenario field 'd' must not be empty");
        cfg.spec.d = cfg.d_values.front();
        if (j.contains("delta")) {
            if (j["delta"].is_array()) {
                cfg.spec.delta = j["delta"].get<std::vector<double>>();
            } else {
                cfg.spec.delta.assign(groups, j["delta"].get<double>());
                cfg.spec.delta[0] = 0.0;
            }
        } else if (groups != cfg.spec.delta.size()) {
            cfg.spec.delta.assign(groups, cfg.spec.delta.back());
            cfg.spec.delta[0] = 0.0;
        }
        if (j.contains("sigma")) {
            if (j["sigma"].is_array()) {
                cfg.spec.sigma = j["sigma"].get<std::vector<double>>();
            } else {
                cfg.spec.sigma.assign(groups, j["sigma"].get<double>());
                cfg.spec.sigma[0] = 1.0;
            }
        } else if (groups != cfg.spec.sigma.size()) {
            cfg.spec.sigma.assign(groups, cfg.spec.sigma.back());
            cfg.spec.sigma[0] = 1.0;
        }
        if (j.contains("lambda")) {
            if (!j["lambda"].is_array()) {
                throw ConfigError("scenario field 'lambda' must be an array of per-group rates");
            }
            cfg.spec.lambda = j["lambda"].get<std::vector<double>>();
        } else if (groups != cfg.spec.lambda.size()) {
            cfg.spec.lambda.assign(groups, cfg.spec.lambda.back());
            cfg.spec.lambda[0] = 5.0;
        }
        if (j.contains("nu")) cfg.spec.nu = j["nu"].get<double>();
        if (j.contains("eta")) cfg.spec.eta = j["eta"].get<double>();
        if (j.contains("r")) cfg.spec.r = j["r"].get<double>();
        if (j.contains("seed")) cfg.spec.seed = j["seed"].get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed scenario config: ") + e.what());
    }
    validate(cfg.spec);
    return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    return scenario_from_json(j);
}

}  // namespace glp
