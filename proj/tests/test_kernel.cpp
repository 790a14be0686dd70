#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "glp/dataset.hpp"
#include "glp/kernel.hpp"
#include "glp/rng.hpp"

namespace {

glp::Dataset random_dataset(int n_per_group, int groups, int d, std::uint64_t seed,
                            double shift = 0.0) {
    glp::Rng rng(seed);
    const int n = n_per_group * groups;
    Eigen::MatrixXd x(n, d);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int g = i / n_per_group;
        labels[static_cast<std::size_t>(i)] = g + 1;
        for (int j = 0; j < d; ++j) {
            x(i, j) = rng.normal() + shift * static_cast<double>(g);
        }
    }
    return glp::make_dataset(x, labels);
}

// mean of W over an index-pair block; excludes the diagonal when a == b
double block_mean(const Eigen::MatrixXd& w, const std::vector<int>& y, int a, int b) {
    double total = 0.0;
    long count = 0;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            if (i == j) continue;
            if (y[static_cast<std::size_t>(i)] == a && y[static_cast<std::size_t>(j)] == b) {
                total += w(i, j);
                ++count;
            }
        }
    }
    return total / static_cast<double>(count);
}

}  // namespace

TEST_CASE("feature_map keeps columns that reach the requested order") {
    glp::Rng rng(7201);
    Eigen::MatrixXd x(20, 3);
    for (int i = 0; i < 20; ++i) {
        x(i, 0) = rng.normal();            // continuous: supports any order
        x(i, 1) = i % 2 == 0 ? 0.0 : 1.0;  // binary: order 1 only
        x(i, 2) = rng.normal();
    }
    std::vector<int> labels(20, 1);
    std::fill(labels.begin() + 10, labels.end(), 2);
    const auto ds = glp::make_dataset(x, labels);

    const auto m1 = glp::feature_map(ds, 1);
    CHECK(m1.kept_columns == std::vector<int>{0, 1, 2});
    CHECK(m1.excluded_columns().empty());
    CHECK(m1.values.cols() == 3);

    const auto m2 = glp::feature_map(ds, 2);
    CHECK(m2.kept_columns == std::vector<int>{0, 2});
    CHECK(m2.excluded_columns() == std::vector<int>{1});
    CHECK(m2.values.cols() == 2);
    CHECK(m2.source_columns == 3);

    // each kept column is exactly the order-l basis function of that covariate
    const auto s0 = glp::summarize_column(ds.x.col(0));
    const auto b0 = glp::build_basis(s0, ds.x.col(0), 2);
    CHECK((m2.values.col(0) - b0.values.col(1)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("feature_map with no eligible column reports which order failed") {
    Eigen::MatrixXd x(8, 2);
    for (int i = 0; i < 8; ++i) {
        x(i, 0) = i % 2;
        x(i, 1) = i < 4 ? 0.0 : 1.0;
    }
    std::vector<int> labels = {1, 1, 1, 1, 2, 2, 2, 2};
    const auto ds = glp::make_dataset(x, labels);
    CHECK_THROWS_AS(glp::feature_map(ds, 2), glp::EmptyFeatureMapError);
    CHECK_THROWS_WITH(glp::feature_map(ds, 2), Catch::Matchers::ContainsSubstring("order 2"));
    CHECK_THROWS_AS(glp::feature_map(ds, 0), glp::ConfigError);
}

TEST_CASE("gram arithmetic on a hand-built feature map") {
    glp::LPFeatureMap map;
    map.order = 1;
    map.source_columns = 2;
    map.kept_columns = {0, 1};
    map.values.resize(3, 2);
    map.values << 1.0, 2.0,  //
        3.0, 4.0,            //
        0.0, 0.0;
    const auto kernel = glp::gram(map, 0.5);
    // ip(0,1) = (1*3 + 2*4)/2 = 5.5, w = (0.5 + 5.5)^2
    CHECK(kernel.w(0, 1) == Catch::Approx(36.0).margin(1e-12));
    CHECK(kernel.w(1, 0) == Catch::Approx(36.0).margin(1e-12));
    // diagonal: (c + |row|^2 / d')^2
    CHECK(kernel.w(0, 0) == Catch::Approx(9.0).margin(1e-12));
    CHECK(kernel.w(1, 1) == Catch::Approx(169.0).margin(1e-12));
    // an all-zero row reduces every entry against it to c^2
    CHECK(kernel.w(0, 2) == Catch::Approx(0.25).margin(1e-12));
    CHECK(kernel.w(2, 2) == Catch::Approx(0.25).margin(1e-12));
    CHECK(kernel.order_label() == "1");
    CHECK_THROWS_AS(glp::gram(map, -0.1), glp::ConfigError);
}

TEST_CASE("kernel entries are nonnegative and symmetric") {
    const auto ds = random_dataset(15, 2, 12, 7202);
    const auto kernel = glp::gram(glp::feature_map(ds, 1), 0.5);
    CHECK(kernel.w.minCoeff() >= 0.0);
    CHECK((kernel.w - kernel.w.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(kernel.w.rows() == ds.n());
}

TEST_CASE("kernel ignores covariate order and monotone transforms") {
    const auto ds = random_dataset(20, 2, 8, 7203);
    const auto w0 = glp::gram(glp::feature_map(ds, 1), 0.5).w;

    SECTION("column permutation") {
        Eigen::MatrixXd shuffled = ds.x;
        std::vector<int> perm = {5, 2, 7, 0, 3, 6, 1, 4};
        for (int j = 0; j < 8; ++j) shuffled.col(j) = ds.x.col(perm[static_cast<std::size_t>(j)]);
        const auto ds2 = glp::make_dataset(shuffled, ds.y);
        const auto w1 = glp::gram(glp::feature_map(ds2, 1), 0.5).w;
        CHECK((w0 - w1).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("strictly increasing per-column transform") {
        Eigen::MatrixXd tx = ds.x;
        for (Eigen::Index i = 0; i < tx.rows(); ++i) {
            for (Eigen::Index j = 0; j < tx.cols(); ++j) {
                tx(i, j) = std::atan(tx(i, j)) + 0.1 * static_cast<double>(j);
            }
        }
        const auto ds2 = glp::make_dataset(tx, ds.y);
        const auto w1 = glp::gram(glp::feature_map(ds2, 1), 0.5).w;
        CHECK((w0 - w1).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("kernel matrices are positive semidefinite") {
    glp::Rng rng(7204);
    for (int rep = 0; rep < 10; ++rep) {
        const auto ds =
            random_dataset(10 + static_cast<int>(rng.uniform_int(10)), 2,
                           3 + static_cast<int>(rng.uniform_int(20)), 7300 + static_cast<std::uint64_t>(rep));
        const auto kernel = glp::gram(glp::feature_map(ds, 1), 0.5);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kernel.w);
        CHECK(es.eigenvalues().minCoeff() >= -1e-8 * kernel.w.trace());
    }
}

TEST_CASE("within-group kernel blocks dominate between-group blocks under location shifts") {
    const auto ds = random_dataset(40, 3, 30, 7205, /*shift=*/1.5);
    const auto kernel = glp::gram(glp::feature_map(ds, 1), 0.5);
    for (int a = 1; a <= 3; ++a) {
        for (int b = a + 1; b <= 3; ++b) {
            const double within =
                0.5 * (block_mean(kernel.w, ds.y, a, a) + block_mean(kernel.w, ds.y, b, b));
            const double between = block_mean(kernel.w, ds.y, a, b);
            INFO("pair " << a << "," << b);
            CHECK(within > between);
        }
    }
}

TEST_CASE("fuse adds kernels entrywise and concatenates order labels") {
    const auto ds = random_dataset(12, 2, 6, 7206);
    const auto k1 = glp::gram(glp::feature_map(ds, 1), 0.5);
    const auto k2 = glp::gram(glp::feature_map(ds, 2), 0.5);
    const auto fused = glp::fuse({k1, k2});
    CHECK((fused.w - (k1.w + k2.w)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(fused.orders == std::vector<int>{1, 2});
    CHECK(fused.order_label() == "fused{1,2}");

    CHECK_THROWS_AS(glp::fuse({}), glp::ConfigError);
    const auto small = random_dataset(5, 2, 6, 7207);
    const auto ks = glp::gram(glp::feature_map(small, 1), 0.5);
    CHECK_THROWS_AS(glp::fuse({k1, ks}), glp::DataError);
}
