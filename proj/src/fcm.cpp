#include "decmata/fcm.hpp"

#include "decmata/rng.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace decmata {

namespace {

constexpr double kCoincident2 = 1e-24;  // squared distance treated as zero

Eigen::MatrixXd squared_distances(const std::vector<Point2D>& points,
                                  const std::vector<Point2D>& centers) {
    const int m = static_cast<int>(centers.size());
    const int n = static_cast<int>(points.size());
    Eigen::MatrixXd d2(m, n);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            d2(i, j) = (points[static_cast<std::size_t>(j)] - centers[static_cast<std::size_t>(i)])
                           .squaredNorm();
        }
    }
    return d2;
}

// Closed-form membership update. A column with any (near-)zero distance
// becomes one-hot on the nearest such cluster.
Eigen::MatrixXd memberships_from(const Eigen::MatrixXd& d2, double gamma) {
    const int m = static_cast<int>(d2.rows());
    const int n = static_cast<int>(d2.cols());
    const double p = 1.0 / (gamma - 1.0);
    Eigen::MatrixXd b(m, n);
    Eigen::VectorXd t(m);
    for (int j = 0; j < n; ++j) {
        int zero_at = -1;
        for (int i = 0; i < m; ++i) {
            if (d2(i, j) < kCoincident2) {
                zero_at = i;
                break;
            }
        }
        if (zero_at >= 0) {
            b.col(j).setZero();
            b(zero_at, j) = 1.0;
            continue;
        }
        for (int i = 0; i < m; ++i) t(i) = std::pow(d2(i, j), -p);
        // Normalizing by the max keeps the ratios inside double range even
        // for sharp fuzzifiers.
        t /= t.maxCoeff();
        b.col(j) = t / t.sum();
    }
    return b;
}

std::vector<Point2D> centers_from(const Eigen::MatrixXd& b, double gamma,
                                  const std::vector<Point2D>& points,
                                  const std::vector<Point2D>& previous) {
    const int m = static_cast<int>(b.rows());
    const int n = static_cast<int>(b.cols());
    std::vector<Point2D> centers(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        Point2D num(0.0, 0.0);
        double den = 0.0;
        for (int j = 0; j < n; ++j) {
            const double w = std::pow(b(i, j), gamma);
            num += w * points[static_cast<std::size_t>(j)];
            den += w;
        }
        // A cluster that lost all membership mass keeps its previous center.
        centers[static_cast<std::size_t>(i)] =
            den > 1e-300 ? Point2D(num / den) : previous[static_cast<std::size_t>(i)];
    }
    return centers;
}

double objective_squared(const Eigen::MatrixXd& b, const Eigen::MatrixXd& d2, double gamma) {
    double obj = 0.0;
    for (int i = 0; i < b.rows(); ++i) {
        for (int j = 0; j < b.cols(); ++j) {
            obj += std::pow(b(i, j), gamma) * d2(i, j);
        }
    }
    return obj;
}

double objective_unsquared(const Eigen::MatrixXd& b, const Eigen::MatrixXd& d2, double gamma) {
    double obj = 0.0;
    for (int i = 0; i < b.rows(); ++i) {
        for (int j = 0; j < b.cols(); ++j) {
            obj += std::pow(b(i, j), gamma) * std::sqrt(d2(i, j));
        }
    }
    return obj;
}

// Greedy farthest-point seeding; the first pick is uniform from the seed.
std::vector<Point2D> seed_centers(const std::vector<Point2D>& points, int m, std::uint64_t seed) {
    const int n = static_cast<int>(points.size());
    auto rng = rng_stream(seed, stream::kFcmInit);
    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(m));
    chosen.push_back(static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n))));

    std::vector<double> min_d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    while (static_cast<int>(chosen.size()) < m) {
        const Point2D& last = points[static_cast<std::size_t>(chosen.back())];
        int best = -1;
        double best_d2 = -1.0;
        for (int j = 0; j < n; ++j) {
            auto& slot = min_d2[static_cast<std::size_t>(j)];
            slot = std::min(slot, (points[static_cast<std::size_t>(j)] - last).squaredNorm());
            if (slot > best_d2) {
                best_d2 = slot;
                best = j;
            }
        }
        chosen.push_back(best);
    }

    std::vector<Point2D> centers;
    centers.reserve(static_cast<std::size_t>(m));
    for (int idx : chosen) centers.push_back(points[static_cast<std::size_t>(idx)]);
    return centers;
}

}  // namespace

MembershipMatrix fcm_cluster(const std::vector<Point2D>& tasks, int m, const FcmConfig& cfg) {
    const int n = static_cast<int>(tasks.size());
    if (m < 1) throw std::invalid_argument("fcm_cluster: cluster count must be >= 1");
    if (n < m) throw std::invalid_argument("fcm_cluster: need at least as many tasks as clusters");
    if (!(cfg.gamma > 1.0)) throw std::invalid_argument("fcm_cluster: gamma must be > 1");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("fcm_cluster: tol must be positive");
    if (cfg.max_iters < 1) throw std::invalid_argument("fcm_cluster: max_iters must be >= 1");

    MembershipMatrix mm;
    mm.gamma = cfg.gamma;

    bool all_coincident = true;
    for (int j = 1; j < n; ++j) {
        if ((tasks[static_cast<std::size_t>(j)] - tasks[0]).squaredNorm() >= kCoincident2) {
            all_coincident = false;
            break;
        }
    }
    if (all_coincident) {
        mm.b = Eigen::MatrixXd::Constant(m, n, 1.0 / m);
        mm.centers.assign(static_cast<std::size_t>(m), tasks[0]);
        mm.degenerate_input = true;
        mm.objective = 0.0;
        mm.objective_history = {0.0};
        return mm;
    }

    std::vector<Point2D> centers = seed_centers(tasks, m, cfg.seed);
    Eigen::MatrixXd b;
    double prev_obj = std::numeric_limits<double>::infinity();
    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        const Eigen::MatrixXd d2 = squared_distances(tasks, centers);
        b = memberships_from(d2, cfg.gamma);
        const double obj = objective_squared(b, d2, cfg.gamma);
        mm.objective_history.push_back(obj);
        if (std::abs(prev_obj - obj) < cfg.tol) break;
        prev_obj = obj;
        centers = centers_from(b, cfg.gamma, tasks, centers);
    }

    // Settle on an exact fixed point of the final centers: one closing center
    // update followed by one membership refresh.
    centers = centers_from(b, cfg.gamma, tasks, centers);
    const Eigen::MatrixXd d2 = squared_distances(tasks, centers);
    b = memberships_from(d2, cfg.gamma);
    mm.objective_history.push_back(objective_squared(b, d2, cfg.gamma));

    mm.b = b;
    mm.centers = centers;
    mm.objective = objective_unsquared(b, d2, cfg.gamma);
    mm.iterations = iter + 1;
    return mm;
}

double membership_of(const MembershipMatrix& mm, int cluster, int task_index) {
    if (cluster < 0 || cluster >= mm.cluster_count()) {
        throw std::out_of_range("membership_of: cluster index out of range");
    }
    if (task_index < 0 || task_index >= mm.task_count()) {
        throw std::out_of_range("membership_of: task index out of range");
    }
    return mm.b(cluster, task_index);
}

void write_membership_csv(const MembershipMatrix& mm, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "cluster";
    for (int j = 0; j < mm.task_count(); ++j) out << ",t" << (j + 1);
    out << "\n";
    out.precision(17);
    for (int i = 0; i < mm.cluster_count(); ++i) {
        out << i;
        for (int j = 0; j < mm.task_count(); ++j) out << "," << mm.b(i, j);
        out << "\n";
    }
    if (!out) throw IoError("failed while writing " + path.string());
}

}  // namespace decmata
