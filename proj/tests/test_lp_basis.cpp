#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "glp/dataset.hpp"
#include "glp/lp_basis.hpp"
#include "glp/rng.hpp"
#include "oracles.hpp"

namespace {

glp::LPBasis basis_of(const std::vector<double>& col, int order) {
    const auto s = glp::summarize_column(col);
    return glp::build_basis(s, col, order);
}

// orthonormality under the empirical (1/n) inner product
void check_orthonormal(const Eigen::MatrixXd& values) {
    const auto n = static_cast<double>(values.rows());
    const Eigen::MatrixXd gram = values.transpose() * values / n;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(values.cols(), values.cols());
    CHECK((gram - eye).cwiseAbs().maxCoeff() < 1e-8);
    const Eigen::VectorXd means = values.colwise().mean();
    CHECK(means.cwiseAbs().maxCoeff() < 1e-10);
}

}  // namespace

TEST_CASE("zeta hand-checked values") {
    const auto binary = glp::summarize_column(std::vector<double>{0.0, 0.0, 1.0, 1.0});
    CHECK(glp::zeta(binary, 0.0) == Catch::Approx(-1.0).margin(1e-12));
    CHECK(glp::zeta(binary, 1.0) == Catch::Approx(1.0).margin(1e-12));

    const auto three = glp::summarize_column(std::vector<double>{1.0, 2.0, 3.0});
    CHECK(glp::zeta(three, 2.0) == Catch::Approx(0.0).margin(1e-12));
    CHECK(glp::zeta(three, 1.0) == Catch::Approx(-std::sqrt(1.5)).margin(1e-12));
    CHECK(glp::zeta(three, 3.0) == Catch::Approx(std::sqrt(1.5)).margin(1e-12));

    const auto constant = glp::summarize_column(std::vector<double>{4.0, 4.0});
    CHECK_THROWS_AS(glp::zeta(constant, 4.0), glp::DataError);
}

TEST_CASE("max_basis_order is support size minus one") {
    CHECK(glp::max_basis_order(glp::summarize_column(std::vector<double>{0, 0, 1, 1})) == 1);
    CHECK(glp::max_basis_order(glp::summarize_column(std::vector<double>{1, 2, 3})) == 2);
    CHECK(glp::max_basis_order(glp::summarize_column(std::vector<double>{7, 7, 7})) == 0);
}

TEST_CASE("first basis function matches the rank closed forms") {
    SECTION("tie-free") {
        const std::vector<double> x = {0.3, -1.2, 2.5, 0.9, -0.4, 1.7};
        const auto b = basis_of(x, 1);
        REQUIRE(b.order == 1);
        const auto ref = oracle::rank_t1(x);
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(b.values(static_cast<Eigen::Index>(i), 0) ==
                  Catch::Approx(static_cast<double>(ref[i])).margin(1e-12));
        }
    }
    SECTION("binary with unbalanced counts") {
        const std::vector<double> x = {1.0, 0.0, 1.0, 1.0};
        const auto b = basis_of(x, 1);
        const auto ref = oracle::binary_t1(x);
        REQUIRE(b.order == 1);
        CHECK(b.values(1, 0) == Catch::Approx(-std::sqrt(3.0)).margin(1e-12));
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(b.values(static_cast<Eigen::Index>(i), 0) ==
                  Catch::Approx(static_cast<double>(ref[i])).margin(1e-12));
        }
    }
}

TEST_CASE("second basis function matches the quadratic rank closed form") {
    const std::vector<double> x = {4.0, 1.0, 3.0, 5.0, 2.0, 6.0, 0.0};
    const auto b = basis_of(x, 2);
    REQUIRE(b.order == 2);
    const auto ref = oracle::rank_t2(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(b.values(static_cast<Eigen::Index>(i), 1) ==
              Catch::Approx(static_cast<double>(ref[i])).margin(1e-10));
    }
    // the explicit quadratic form agrees too
    const auto quad = oracle::quadratic_t2(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(b.values(static_cast<Eigen::Index>(i), 1) ==
              Catch::Approx(static_cast<double>(quad[i])).margin(1e-10));
    }
}

TEST_CASE("basis agrees with the brute-force construction on random columns") {
    glp::Rng rng(7101);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 8 + static_cast<int>(rng.uniform_int(60));
        std::vector<double> col(static_cast<std::size_t>(n));
        const bool discrete = rep % 3 == 0;
        for (auto& v : col) {
            v = discrete ? static_cast<double>(rng.poisson(2.0)) : rng.normal();
        }
        const auto s = glp::summarize_column(col);
        if (s.support_size() < 2) continue;
        const int order = std::min(4, glp::max_basis_order(s));
        const auto b = glp::build_basis(s, col, order);
        const auto ref = oracle::lp_scores(col, order);
        REQUIRE(b.order == static_cast<int>(ref.size()));
        for (int l = 0; l < b.order; ++l) {
            for (std::size_t i = 0; i < col.size(); ++i) {
                CHECK(b.values(static_cast<Eigen::Index>(i), l) ==
                      Catch::Approx(static_cast<double>(ref[static_cast<std::size_t>(l)][i]))
                          .margin(1e-9));
            }
        }
    }
}

TEST_CASE("basis columns are orthonormal with zero means") {
    glp::Rng rng(7102);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 10 + static_cast<int>(rng.uniform_int(90));
        std::vector<double> col(static_cast<std::size_t>(n));
        for (auto& v : col) {
            v = rep % 2 == 0 ? rng.normal() : static_cast<double>(rng.poisson(4.0));
        }
        const auto s = glp::summarize_column(col);
        if (s.support_size() < 2) continue;
        const auto b = glp::build_basis(s, col, std::min(4, glp::max_basis_order(s)));
        check_orthonormal(b.values);
    }
}

TEST_CASE("basis order is capped by the support size") {
    const std::vector<double> binary = {0, 1, 0, 1, 1, 0};
    const auto b = basis_of(binary, 4);
    CHECK(b.order == 1);

    const std::vector<double> three = {1, 2, 3, 1, 2, 3};
    const auto b3 = basis_of(three, 4);
    CHECK(b3.order == 2);
    check_orthonormal(b3.values);
}

TEST_CASE("basis depends only on ranks") {
    glp::Rng rng(7103);
    std::vector<double> x(30);
    for (auto& v : x) v = rng.normal();
    std::vector<double> tx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) tx[i] = std::exp(x[i]);  // strictly increasing
    const auto a = basis_of(x, 3);
    const auto b = basis_of(tx, 3);
    REQUIRE(a.order == b.order);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("distinct_scores rows expand to values through index_of") {
    const std::vector<double> col = {2.0, 2.0, 5.0, 1.0, 5.0, 5.0};
    const auto s = glp::summarize_column(col);
    const auto b = glp::build_basis(s, col, 2);
    for (std::size_t i = 0; i < col.size(); ++i) {
        const auto j = static_cast<Eigen::Index>(s.index_of(col[i]));
        CHECK((b.values.row(static_cast<Eigen::Index>(i)) - b.distinct_scores.row(j))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }
}

TEST_CASE("build_basis input validation") {
    const auto constant = glp::summarize_column(std::vector<double>{1.0, 1.0});
    CHECK_THROWS_AS(glp::build_basis(constant, std::vector<double>{1.0, 1.0}, 1), glp::DataError);
    const auto ok = glp::summarize_column(std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(glp::build_basis(ok, std::vector<double>{1.0, 2.0}, 0), glp::ConfigError);
}

TEST_CASE("label_basis spans exactly k-1 orders") {
    const std::vector<int> labels = {1, 1, 1, 2, 2, 3, 3, 3, 3};
    const auto b = glp::label_basis(labels);
    CHECK(b.order == 2);
    CHECK(b.values.rows() == 9);
    check_orthonormal(b.values);

    // matches the brute-force scores of the labels viewed as a numeric column
    std::vector<double> as_real(labels.begin(), labels.end());
    const auto ref = oracle::lp_scores(as_real, 2);
    for (int l = 0; l < 2; ++l) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            CHECK(b.values(static_cast<Eigen::Index>(i), l) ==
                  Catch::Approx(static_cast<double>(ref[static_cast<std::size_t>(l)][i]))
                      .margin(1e-10));
        }
    }

    CHECK_THROWS_AS(glp::label_basis(std::vector<int>{1, 1, 1}), glp::DataError);
}
