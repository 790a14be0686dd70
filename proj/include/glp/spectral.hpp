#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "glp/errors.hpp"
#include "glp/kernel.hpp"
#include "glp/rng.hpp"

namespace glp {

// Symmetric normalized Laplacian D^{-1/2} W D^{-1/2}. Its top eigenpair for a
// connected positive-weight graph is (1, D^{1/2} 1); community structure
// lives in the next eigenvectors.
inline Eigen::MatrixXd laplacian(const LPKernel& kernel) {
    const Eigen::Index n = kernel.w.rows();
    Eigen::VectorXd deg = kernel.w.rowwise().sum();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(deg[i] > 0.0)) {
            throw NumericError("laplacian: isolated vertex at row " + std::to_string(i) +
                               " (zero degree)");
        }
    }
    const Eigen::VectorXd dm = deg.array().rsqrt();
    Eigen::MatrixXd lap = dm.asDiagonal() * kernel.w * dm.asDiagonal();
    lap = 0.5 * (lap + lap.transpose()).eval();
    return lap;
}

struct SpectralEmbedding {
    Eigen::VectorXd eigenvalues;  // k-1 retained values, descending
    Eigen::MatrixXd u;            // n x (k-1) eigenvectors
    double trivial_value = 0.0;   // the discarded top eigenvalue
    std::vector<std::string> warnings;
};

// Full symmetric eigendecomposition; drops exactly the top eigenpair and
// retains the next k-1. An eigenvalue tie across either retention boundary
// makes the retained span ill-defined, which is reported, not fatal.
inline SpectralEmbedding embed(const Eigen::MatrixXd& lap, int k) {
    const Eigen::Index n = lap.rows();
    if (k < 2 || k > n) throw ConfigError("embed: need 2 <= k <= n");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    if (solver.info() != Eigen::Success) {
        throw NumericError("embed: eigendecomposition failed to converge");
    }
    // Eigen sorts ascending; view from the top
    const Eigen::VectorXd& vals = solver.eigenvalues();
    const Eigen::MatrixXd& vecs = solver.eigenvectors();

    SpectralEmbedding out;
    out.trivial_value = vals[n - 1];
    const int keep = k - 1;
    out.eigenvalues.resize(keep);
    out.u.resize(n, keep);
    for (int j = 0; j < keep; ++j) {
        out.eigenvalues[j] = vals[n - 2 - j];
        out.u.col(j) = vecs.col(n - 2 - j);
    }
    const double gap_top = out.trivial_value - out.eigenvalues[0];
    if (gap_top < 1e-9) {
        out.warnings.push_back("unstable embedding: trivial eigenvalue tied with retained ones");
    }
    if (n - 1 > keep) {
        const double gap_bottom = out.eigenvalues[keep - 1] - vals[n - 2 - keep];
        if (gap_bottom < 1e-9) {
            out.warnings.push_back(
                "unstable embedding: eigenvalue tie at the retained/discarded boundary");
        }
    }
    return out;
}

struct ClusterAssignment {
    std::vector<int> z;       // labels 1..k_effective, first-occurrence order
    double inertia = 0.0;
    int restarts_used = 0;
    bool empty_cluster = false;  // true when no restart filled all k clusters
    int k_effective = 0;
};

namespace detail {

struct LloydRun {
    std::vector<int> labels;  // 0-based cluster per point
    double inertia = std::numeric_limits<double>::infinity();
    bool degenerate = false;
};

inline LloydRun lloyd_once(const Eigen::MatrixXd& pts, int k, std::uint64_t seed) {
    const Eigen::Index n = pts.rows();
    Rng rng(seed);
    // k-means++ seeding
    Eigen::MatrixXd centers(k, pts.cols());
    centers.row(0) = pts.row(static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(n))));
    Eigen::VectorXd dist2 = (pts.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = dist2.sum();
        Eigen::Index pick;
        if (total > 0.0) {
            double t = rng.uniform() * total;
            pick = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                t -= dist2[i];
                if (t <= 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(n)));
        }
        centers.row(c) = pts.row(pick);
        dist2 = dist2.cwiseMin((pts.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }

    LloydRun run;
    run.labels.assign(static_cast<std::size_t>(n), 0);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int iter = 0; iter < 300; ++iter) {
        bool changed = false;
        std::fill(counts.begin(), counts.end(), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = (pts.row(i) - centers.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                const double d = (pts.row(i) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (run.labels[static_cast<std::size_t>(i)] != best) {
                run.labels[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
            ++counts[static_cast<std::size_t>(best)];
        }
        if (std::any_of(counts.begin(), counts.end(), [](int c) { return c == 0; })) {
            run.degenerate = true;
            break;
        }
        centers.setZero();
        for (Eigen::Index i = 0; i < n; ++i) {
            centers.row(run.labels[static_cast<std::size_t>(i)]) += pts.row(i);
        }
        for (int c = 0; c < k; ++c) centers.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
        if (!changed && iter > 0) break;
    }
    run.inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        run.inertia += (pts.row(i) - centers.row(run.labels[static_cast<std::size_t>(i)])).squaredNorm();
    }
    return run;
}

}  // namespace detail

// Lloyd's algorithm with k-means++ seeding and seeded restarts. The winner is
// picked by (all-clusters-nonempty, inertia, restart index), so the result is
// a pure function of (points, k, seed). Labels are renumbered 1.. in order of
// first occurrence. If every restart loses a cluster the best degenerate run
// is kept and flagged; downstream the effective df shrinks accordingly.
inline ClusterAssignment kmeans(const SpectralEmbedding& embedding, int k, std::uint64_t seed,
                                int restarts = 30) {
    if (restarts < 1) throw ConfigError("kmeans: restarts must be >= 1");
    const Eigen::Index n = embedding.u.rows();
    if (k < 2 || static_cast<Eigen::Index>(k) > n) throw ConfigError("kmeans: need 2 <= k <= n");

    detail::LloydRun best;
    bool have_clean = false;
    for (int r = 0; r < restarts; ++r) {
        detail::LloydRun run = detail::lloyd_once(embedding.u, k, mix_seed(seed, seed_tag::kmeans,
                                                                           static_cast<std::uint64_t>(r)));
        const bool better = run.degenerate == best.degenerate ? run.inertia < best.inertia
                                                              : !run.degenerate && best.degenerate;
        if ((r == 0) || better) best = std::move(run);
        if (!best.degenerate) have_clean = true;
    }

    ClusterAssignment out;
    out.restarts_used = restarts;
    out.empty_cluster = !have_clean;
    // canonical renumbering by first occurrence
    std::vector<int> remap(static_cast<std::size_t>(k), 0);
    int next = 0;
    out.z.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        int& id = remap[static_cast<std::size_t>(best.labels[static_cast<std::size_t>(i)])];
        if (id == 0) id = ++next;
        out.z[static_cast<std::size_t>(i)] = id;
    }
    out.k_effective = next;
    out.inertia = best.inertia;
    return out;
}

// NCut of a labeled partition: sum over parts of cut weight / volume.
// Test-support operation; the clustering itself goes through the relaxation.
inline double ncut_value(const Eigen::MatrixXd& w, const std::vector<int>& partition) {
    const Eigen::Index n = w.rows();
    if (static_cast<Eigen::Index>(partition.size()) != n) {
        throw DataError("ncut_value: partition length differs from kernel size");
    }
    const int k = *std::max_element(partition.begin(), partition.end());
    std::vector<double> vol(static_cast<std::size_t>(k), 0.0);
    std::vector<double> cut(static_cast<std::size_t>(k), 0.0);
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    const Eigen::VectorXd deg = w.rowwise().sum();
    for (Eigen::Index i = 0; i < n; ++i) {
        const int g = partition[static_cast<std::size_t>(i)];
        if (g < 1 || g > k) throw DataError("ncut_value: labels must lie in 1..k");
        ++count[static_cast<std::size_t>(g - 1)];
        vol[static_cast<std::size_t>(g - 1)] += deg[i];
        for (Eigen::Index j = 0; j < n; ++j) {
            if (partition[static_cast<std::size_t>(j)] != g) {
                cut[static_cast<std::size_t>(g - 1)] += w(i, j);
            }
        }
    }
    double ncut = 0.0;
    for (int g = 0; g < k; ++g) {
        if (count[static_cast<std::size_t>(g)] == 0) {
            throw DataError("ncut_value: part " + std::to_string(g + 1) + " is empty");
        }
        if (!(vol[static_cast<std::size_t>(g)] > 0.0)) {
            throw NumericError("ncut_value: part " + std::to_string(g + 1) + " has zero volume");
        }
        ncut += cut[static_cast<std::size_t>(g)] / vol[static_cast<std::size_t>(g)];
    }
    return ncut;
}

}  // namespace glp
