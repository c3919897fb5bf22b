#pragma once

#include "decmata/bigraph.hpp"

#include <utility>
#include <vector>

namespace decmata {

/// Conflict-free assignment for one decision round.
struct Matching {
    std::vector<std::pair<int, int>> pairs;  // (robot_id, node_id), sorted
    double total_weight = 0.0;
};

/// Exact matcher: maximum cardinality on the robot side, maximum total
/// weight among those, and the lexicographically smallest pair sequence
/// among equal-weight optima. Polynomial time (successive shortest
/// augmenting paths with potentials).
Matching max_weight_matching(const Bigraph& g);

/// Exhaustive reference matcher with the same objective and tie-breaking.
/// Requires |robot_vertices| + |task_vertices| <= 16.
Matching max_weight_matching_bruteforce(const Bigraph& g);

}  // namespace decmata
