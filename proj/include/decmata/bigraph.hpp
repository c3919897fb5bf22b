#pragma once

#include "decmata/types.hpp"

#include <filesystem>
#include <functional>
#include <vector>

namespace decmata {

struct WeightParams {
    double k_b = 1000.0;  // overall scale of the relevance weights
};

struct BigraphEdge {
    int robot_id = 0;
    int node_id = 0;  // 0 = depot, otherwise a task id
    double weight = 0.0;
};

/// Weighted bipartite graph for one decision round: active robots on one
/// side, remaining task nodes (plus depot node 0 when enabled) on the other.
struct Bigraph {
    std::vector<int> robot_vertices;
    std::vector<int> task_vertices;
    std::vector<BigraphEdge> edges;
};

/// Relevance weight of a robot-node edge:
///   k_b * b_star * (c_cum + 1) / (c_ij + 1)^2
/// Rewards membership and accumulated cost, penalizes travel distance.
double edge_weight(double b_star, double c_cum, double c_ij, double k_b);

/// Membership strength of a task for a robot, given the robot's current
/// association. Throws StateError when the association is undefined.
using MembershipFn = std::function<double(const RobotState&, int task_id)>;

/// One edge per (active robot, remaining task). Robots at the task cap keep
/// only their depot edge. When the depot is enabled, every eligible robot
/// gets an edge to node 0 with membership depot_b_star and the plain return
/// distance as cost. depot_allowed (indexed like `robots`) restricts depot
/// eligibility; the depot vertex itself stays listed whenever enabled.
Bigraph build_bigraph(const std::vector<RobotState>& robots,
                      const std::vector<int>& remaining,
                      const MembershipFn& b_star,
                      const CostMatrix& costs,
                      const WeightParams& params,
                      int task_cap,
                      bool depot_enabled,
                      double depot_b_star = 1.0,
                      const std::vector<bool>* depot_allowed = nullptr);

/// CSV edge list "robot_id,node_id,weight".
void write_bigraph_csv(const Bigraph& g, const std::filesystem::path& path);

}  // namespace decmata
