#pragma once

#include "decmata/types.hpp"

#include <filesystem>

namespace decmata {

/// Per-robot task cap: round(n/m) + 2, rounding half away from zero.
int max_tasks_per_robot(int n, int m);

/// Depot and n task locations drawn i.i.d. uniform over [0, extent]^2.
/// Deterministic for a fixed seed; task_cap comes from max_tasks_per_robot.
Scenario generate_scenario(std::uint64_t seed, int m, int n, double extent);

/// Symmetric Euclidean costs over nodes {0 = depot, 1..n = task ids}.
CostMatrix cost_matrix(const Scenario& s);

/// Throws std::invalid_argument when a scenario invariant is broken
/// (m < 1, n < m, h*m < n, non-contiguous ids, non-finite coordinates).
void validate_scenario(const Scenario& s);

void save_scenario(const Scenario& s, const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace decmata
