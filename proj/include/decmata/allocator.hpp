#pragma once

#include "decmata/bigraph.hpp"
#include "decmata/fcm.hpp"
#include "decmata/matching.hpp"
#include "decmata/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace decmata {

/// One robot's closed tour: depot, tasks in visit order, depot.
struct Route {
    int robot_id = 0;
    std::vector<int> nodes;
    std::vector<double> per_leg;
    double cost = 0.0;
};

struct Plan {
    std::vector<Route> routes;
    double overall_cost = 0.0;
    double agent_cost_stddev = 0.0;
};

enum class MembershipMode { kFcm, kConstant };

struct DecMataParams {
    WeightParams weights{};
    FcmConfig fcm{};
    /// Mission seed; clustering init and the randomized first assignment
    /// draw from sub-streams derived from it.
    std::uint64_t seed = 0;
    MembershipMode mode = MembershipMode::kFcm;
    double constant_membership = 1.0;  // used when mode == kConstant
};

struct IterationRecord {
    int iteration = 0;
    Bigraph graph;  // empty for the randomized iteration 0
    Matching matching;
    std::vector<RobotState> states;  // after applying the matching
    int remaining_tasks = 0;
};

struct AllocationTrace {
    std::optional<MembershipMatrix> memberships;
    std::vector<IterationRecord> iterations;
};

struct AllocationResult {
    Plan plan;
    AllocationTrace trace;
};

/// Runs the full decentralized allocation: cluster once, randomize the first
/// assignment, then alternate bigraph construction and maximum-weight
/// matching until every task is routed and every robot is back at the depot.
AllocationResult allocate(const Scenario& s, const DecMataParams& p);

/// One synchronized decision round, pure in its arguments. The depot node
/// joins the graph from iteration 2 onwards.
Matching decision_step(const std::vector<RobotState>& robots,
                       const std::vector<int>& remaining,
                       const MembershipFn& b_star,
                       const CostMatrix& costs,
                       const WeightParams& params,
                       int task_cap,
                       int iteration,
                       double depot_b_star = 1.0,
                       const std::vector<bool>* depot_allowed = nullptr);

struct Violation {
    std::string code;
    std::string message;
};

/// Checks partition, cap, depot endpoints, minimum work and cost
/// consistency. Violations are data, not errors; empty means the plan is
/// feasible.
std::vector<Violation> verify_plan(const Scenario& s, const Plan& plan);

}  // namespace decmata
