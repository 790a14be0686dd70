// Command-line front end: test, chart, export, power, calibrate.
// Results go to stdout (and optionally a file); the resolved config and all
// warnings go to stderr. Exit codes: 0 ok, 1 data/numeric error, 2 config
// error.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "glp/glp.hpp"

namespace {

struct CommonArgs {
    std::string input;
    std::string label;
    bool no_header = false;
    double c = 0.5;
    int permutations = 0;
    std::uint64_t seed = 42;
    unsigned threads = 0;
    std::string format = "table";
    std::string output;
};

void add_common_data_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--input", args.input, "input CSV file")->required();
    cmd->add_option("--label", args.label, "label column, by header name or 0-based index")
        ->required();
    cmd->add_flag("--no-header", args.no_header, "treat the first CSV row as data");
}

void add_run_flags(CLI::App* cmd, CommonArgs& args, bool with_format = true) {
    cmd->add_option("--c", args.c, "kernel offset constant")->capture_default_str();
    cmd->add_option("--permutations", args.permutations,
                    "permutation count B (0 = asymptotic p-value only)")
        ->capture_default_str();
    cmd->add_option("--seed", args.seed, "master seed")->capture_default_str();
    cmd->add_option("--threads", args.threads,
                    "worker threads (0 = GLP_THREADS env, then hardware)");
    if (with_format) {
        cmd->add_option("--format", args.format, "output format: table, json, csv")
            ->check(CLI::IsMember({"table", "json", "csv"}))
            ->capture_default_str();
    }
    cmd->add_option("--output", args.output, "also write the formatted output to this file");
}

void emit(const std::string& content, const std::string& output_path) {
    std::cout << content;
    if (!output_path.empty()) glp::write_file(output_path, content);
}

void echo_config(const glp::json& j) { std::cerr << "config: " << j.dump() << "\n"; }

void echo_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string format_p(double p) {
    std::ostringstream os;
    os << std::setprecision(6) << p;
    return os.str();
}

int run_test(const CommonArgs& args, int order, const std::string& dump_kernel,
             const std::string& dump_embedding) {
    echo_config({{"command", "test"},
                 {"input", args.input},
                 {"label", args.label},
                 {"header", !args.no_header},
                 {"order", order},
                 {"c", args.c},
                 {"permutations", args.permutations},
                 {"seed", args.seed},
                 {"format", args.format},
                 {"output", args.output}});
    const glp::Dataset ds = glp::load_csv(args.input, args.label, !args.no_header);
    echo_warnings(ds.warnings);
    const unsigned threads = glp::resolve_threads(args.threads);
    glp::GLPResult res = glp::glp_test(ds, order, args.c, args.seed, args.permutations, threads);
    echo_warnings(res.warnings);
    // serialized output carries load warnings too, not just pipeline ones
    res.warnings.insert(res.warnings.begin(), ds.warnings.begin(), ds.warnings.end());
    if (!dump_kernel.empty()) glp::write_file(dump_kernel, glp::matrix_to_csv(res.kernel.w));
    if (!dump_embedding.empty()) {
        glp::write_file(dump_embedding, glp::embedding_to_csv(res.embedding));
    }

    if (args.format == "json") {
        emit(glp::test_to_json(res, ds.n()).dump(2) + "\n", args.output);
    } else if (args.format == "csv") {
        emit(glp::test_to_csv(res, ds.n()), args.output);
    } else {
        std::ostringstream os;
        os << "GLP test (order " << order << ")\n"
           << "  n=" << ds.n() << "  groups=" << res.k_y << "  communities=" << res.k_z
           << "  df=" << res.df << "\n"
           << "  GLP statistic   = " << std::setprecision(6) << res.statistic << "\n"
           << "  p (asymptotic)  = " << format_p(res.p_asymptotic) << "\n";
        if (res.p_permutation) {
            os << "  p (permutation, B=" << res.permutations
               << ") = " << format_p(*res.p_permutation) << "\n";
        }
        emit(os.str(), args.output);
    }
    return 0;
}

int run_chart(const CommonArgs& args, int components, double alpha) {
    echo_config({{"command", "chart"},
                 {"input", args.input},
                 {"label", args.label},
                 {"header", !args.no_header},
                 {"components", components},
                 {"c", args.c},
                 {"alpha", alpha},
                 {"permutations", args.permutations},
                 {"seed", args.seed},
                 {"format", args.format},
                 {"output", args.output}});
    const glp::Dataset ds = glp::load_csv(args.input, args.label, !args.no_header);
    echo_warnings(ds.warnings);
    const unsigned threads = glp::resolve_threads(args.threads);
    glp::GLPChart chart =
        glp::glp_chart(ds, components, args.c, args.seed, alpha, args.permutations, threads);
    echo_warnings(chart.warnings);
    chart.warnings.insert(chart.warnings.begin(), ds.warnings.begin(), ds.warnings.end());

    if (args.format == "json") {
        emit(glp::chart_to_json(chart).dump(2) + "\n", args.output);
    } else if (args.format == "csv") {
        emit(glp::chart_to_csv(chart), args.output);
    } else {
        std::ostringstream os;
        os << "Component  GLP          p-value\n";
        for (const auto& row : chart.rows) {
            if (!row.result) continue;
            os << std::left << std::setw(11) << row.order << std::setw(13)
               << format_p(row.result->statistic) << std::setw(12)
               << format_p(row.result->used_p()) << (row.significant ? " *" : "") << "\n";
        }
        os << std::left << std::setw(11) << "overall" << std::setw(13)
           << format_p(chart.overall.statistic) << std::setw(12)
           << format_p(chart.overall.used_p());
        if (!chart.fused_orders.empty()) {
            os << " (fused orders:";
            for (std::size_t i = 0; i < chart.fused_orders.size(); ++i) {
                os << (i ? "," : " ") << chart.fused_orders[i];
            }
            os << ")";
        }
        os << "\n";
        emit(os.str(), args.output);
    }
    return 0;
}

int run_export(const CommonArgs& args, const std::vector<int>& orders) {
    echo_config({{"command", "export"},
                 {"input", args.input},
                 {"label", args.label},
                 {"header", !args.no_header},
                 {"orders", orders},
                 {"format", args.format},
                 {"output", args.output}});
    const glp::Dataset ds = glp::load_csv(args.input, args.label, !args.no_header);
    echo_warnings(ds.warnings);
    const glp::ExportedFeatures feats = glp::export_lp_features(ds, orders);
    echo_warnings(feats.warnings);
    if (args.format == "json") {
        glp::json j;
        j["columns"] = feats.names;
        glp::json rows = glp::json::array();
        for (Eigen::Index i = 0; i < feats.values.rows(); ++i) {
            glp::json row = glp::json::array();
            for (Eigen::Index c = 0; c < feats.values.cols(); ++c) row.push_back(feats.values(i, c));
            rows.push_back(row);
        }
        j["values"] = rows;
        emit(j.dump(2) + "\n", args.output);
    } else {
        emit(glp::features_to_csv(feats), args.output);
    }
    return 0;
}

int run_power(const std::string& scenario_path, int reps, int order, double alpha,
              const CommonArgs& args) {
    const glp::ScenarioConfig cfg = glp::load_scenario(scenario_path);
    glp::json scen;
    scen["name"] = cfg.spec.name;
    scen["d"] = cfg.d_values;
    scen["n_per_group"] = cfg.spec.n_per_group;
    scen["seed"] = cfg.spec.seed;
    echo_config({{"command", "power"},
                 {"scenario_file", scenario_path},
                 {"scenario", scen},
                 {"reps", reps},
                 {"order", order},
                 {"alpha", alpha},
                 {"c", args.c},
                 {"permutations", args.permutations},
                 {"seed", args.seed},
                 {"format", args.format},
                 {"output", args.output}});
    glp::TestConfig tc;
    tc.order = order;
    tc.c = args.c;
    tc.permutations = args.permutations;
    tc.seed = args.seed;
    tc.threads = glp::resolve_threads(args.threads);
    std::vector<glp::PowerReport> reports;
    for (int d : cfg.d_values) {
        glp::ScenarioSpec spec = cfg.spec;
        spec.d = d;
        reports.push_back(glp::estimate_power(spec, tc, reps, alpha));
    }
    if (args.format == "json") {
        glp::json arr = glp::json::array();
        for (const auto& r : reports) {
            arr.push_back({{"scenario", r.scenario.name},
                           {"d", r.scenario.d},
                           {"order", r.order},
                           {"alpha", r.alpha},
                           {"replications", r.replications},
                           {"power", r.power},
                           {"stderr", r.mc_stderr}});
        }
        emit(arr.dump(2) + "\n", args.output);
    } else {
        emit(glp::power_to_csv(reports), args.output);
    }
    return 0;
}

int run_calibrate(int d, int n1, int n2, int reps, const CommonArgs& args) {
    const int b = args.permutations > 0 ? args.permutations : 1000;
    echo_config({{"command", "calibrate"},
                 {"d", d},
                 {"n1", n1},
                 {"n2", n2},
                 {"reps", reps},
                 {"permutations", b},
                 {"c", args.c},
                 {"seed", args.seed},
                 {"format", args.format},
                 {"output", args.output}});
    const glp::CalibrationSummary summary =
        glp::calibrate_null(d, n1, n2, reps, b, args.seed, args.c, glp::resolve_threads(args.threads));
    if (args.format == "json") {
        glp::json j;
        j["q05"] = summary.q05;
        j["q25"] = summary.q25;
        j["median"] = summary.median_diff;
        j["q75"] = summary.q75;
        j["q95"] = summary.q95;
        j["median_abs"] = summary.median_abs;
        j["iqr"] = summary.iqr();
        emit(j.dump(2) + "\n", args.output);
    } else {
        emit(glp::calibration_to_csv(summary), args.output);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GLP graph-based nonparametric k-sample test"};
    app.require_subcommand(1);

    CommonArgs targs;
    int order = 1;
    std::string dump_kernel, dump_embedding;
    CLI::App* test = app.add_subcommand("test", "single-order GLP test on a labeled CSV");
    add_common_data_flags(test, targs);
    test->add_option("--order", order, "LP component order")->capture_default_str();
    add_run_flags(test, targs);
    test->add_option("--dump-kernel", dump_kernel, "write the n x n kernel matrix as CSV");
    test->add_option("--dump-embedding", dump_embedding,
                     "write eigenvalues and embedding coordinates as CSV");

    CommonArgs cargs;
    int components = 4;
    double alpha = 0.05;
    CLI::App* chart = app.add_subcommand("chart", "per-component GLP chart with fused overall test");
    add_common_data_flags(chart, cargs);
    chart->add_option("--components", components, "highest component order")->capture_default_str();
    chart->add_option("--alpha", alpha, "family significance level")->capture_default_str();
    add_run_flags(chart, cargs);

    CommonArgs eargs;
    std::vector<int> orders{1, 2};
    CLI::App* exp = app.add_subcommand("export", "export the concatenated LP feature matrix");
    add_common_data_flags(exp, eargs);
    exp->add_option("--orders", orders, "comma-separated list of orders")
        ->delimiter(',')
        ->capture_default_str();
    eargs.format = "csv";
    exp->add_option("--format", eargs.format, "output format: csv, json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    exp->add_option("--output", eargs.output, "also write the output to this file");

    CommonArgs pargs;
    std::string scenario_path;
    int reps = 100;
    int porder = 1;
    double palpha = 0.05;
    CLI::App* power = app.add_subcommand("power", "Monte Carlo power for a scenario config");
    power->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    power->add_option("--reps", reps, "Monte Carlo replications")->capture_default_str();
    power->add_option("--order", porder, "LP component order")->capture_default_str();
    power->add_option("--alpha", palpha, "rejection level")->capture_default_str();
    pargs.format = "csv";
    power->add_option("--c", pargs.c, "kernel offset constant")->capture_default_str();
    power->add_option("--permutations", pargs.permutations,
                      "permutation count B per replication (0 = asymptotic)")
        ->capture_default_str();
    power->add_option("--seed", pargs.seed, "master seed")->capture_default_str();
    power->add_option("--threads", pargs.threads, "worker threads");
    power->add_option("--format", pargs.format, "output format: csv, json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    power->add_option("--output", pargs.output, "also write the output to this file");

    CommonArgs largs;
    int cal_d = 50, cal_n1 = 100, cal_n2 = 100, cal_reps = 100;
    CLI::App* cal = app.add_subcommand("calibrate",
                                       "null calibration: asymptotic vs permutation p-values");
    cal->add_option("--d", cal_d, "dimension")->capture_default_str();
    cal->add_option("--n1", cal_n1, "group 1 size")->capture_default_str();
    cal->add_option("--n2", cal_n2, "group 2 size")->capture_default_str();
    cal->add_option("--reps", cal_reps, "replications")->capture_default_str();
    largs.format = "csv";
    largs.permutations = 1000;
    cal->add_option("--permutations", largs.permutations, "permutation count B")
        ->capture_default_str();
    cal->add_option("--c", largs.c, "kernel offset constant")->capture_default_str();
    cal->add_option("--seed", largs.seed, "master seed")->capture_default_str();
    cal->add_option("--threads", largs.threads, "worker threads");
    cal->add_option("--format", largs.format, "output format: csv, json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cal->add_option("--output", largs.output, "also write the output to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (test->parsed()) return run_test(targs, order, dump_kernel, dump_embedding);
        if (chart->parsed()) return run_chart(cargs, components, alpha);
        if (exp->parsed()) return run_export(eargs, orders);
        if (power->parsed()) return run_power(scenario_path, reps, porder, palpha, pargs);
        if (cal->parsed()) return run_calibrate(cal_d, cal_n1, cal_n2, cal_reps, largs);
    } catch (const glp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const glp::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 1;
    } catch (const glp::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
