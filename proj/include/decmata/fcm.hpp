#pragma once

#include "decmata/types.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <vector>

namespace decmata {

struct FcmConfig {
    double gamma = 2.0;  // fuzzifier, strictly > 1
    double tol = 1e-5;
    int max_iters = 300;
    std::uint64_t seed = 0;
};

/// Soft clustering result: row i = cluster, column j = task. Columns sum to 1.
struct MembershipMatrix {
    Eigen::MatrixXd b;            // m x n membership degrees in [0, 1]
    std::vector<Point2D> centers; // m cluster centers
    double gamma = 2.0;
    /// Diagnostic value sum_ij b_ij^gamma * ||x_j - r_i|| (unsquared distances).
    double objective = 0.0;
    /// Alternating-minimization objective (squared distances), one entry per
    /// iteration; non-increasing.
    std::vector<double> objective_history;
    int iterations = 0;
    bool degenerate_input = false;

    int cluster_count() const { return static_cast<int>(b.rows()); }
    int task_count() const { return static_cast<int>(b.cols()); }
};

/// Fuzzy c-means over task locations: alternating membership/center updates
/// until the objective change drops below cfg.tol or cfg.max_iters is hit.
/// Centers are seeded greedily (farthest point first) from cfg.seed.
/// Coincident whole input yields uniform 1/m memberships with
/// degenerate_input set; a task coincident with one center gets a one-hot
/// column.
MembershipMatrix fcm_cluster(const std::vector<Point2D>& tasks, int m, const FcmConfig& cfg);

/// b(cluster, task_index) with range checking (std::out_of_range).
double membership_of(const MembershipMatrix& mm, int cluster, int task_index);

/// CSV dump: one row per cluster, one column per task.
void write_membership_csv(const MembershipMatrix& mm, const std::filesystem::path& path);

}  // namespace decmata
