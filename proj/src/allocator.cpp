#include "decmata/allocator.hpp"

#include "decmata/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace decmata {

namespace {

double population_stddev(const std::vector<double>& xs) {
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    return std::sqrt(var / static_cast<double>(xs.size()));
}

// Robot -> membership lookup. A robot's cluster is the argmax-membership
// cluster of the task it currently occupies; node 0 (the depot) carries full
// membership by convention.
MembershipFn fcm_lookup(const MembershipMatrix& mm) {
    return [&mm](const RobotState& r, int task_id) -> double {
        if (task_id == 0) return 1.0;
        if (r.current_node == 0) {
            throw StateError("robot " + std::to_string(r.robot_id) +
                             " is at the depot and has no cluster association");
        }
        const int own_col = r.current_node - 1;
        if (own_col < 0 || own_col >= mm.task_count()) {
            throw StateError("robot " + std::to_string(r.robot_id) + " sits on unknown task " +
                             std::to_string(r.current_node));
        }
        int cluster = 0;
        for (int i = 1; i < mm.cluster_count(); ++i) {
            if (mm.b(i, own_col) > mm.b(cluster, own_col)) cluster = i;
        }
        const int col = task_id - 1;
        if (col < 0 || col >= mm.task_count()) {
            throw StateError("membership requested for unknown task " + std::to_string(task_id));
        }
        return mm.b(cluster, col);
    };
}

MembershipFn constant_lookup(double value) {
    return [value](const RobotState&, int) { return value; };
}

// Retiring robot `idx` must leave the rest of the team enough residual
// capacity for every remaining task, otherwise tasks could be stranded.
std::vector<bool> depot_eligibility(const std::vector<RobotState>& robots, int task_cap,
                                    int remaining_tasks) {
    long long total = 0;
    for (const RobotState& r : robots) {
        if (!r.finished) total += std::max(0, task_cap - r.tasks_done);
    }
    std::vector<bool> allowed(robots.size(), false);
    for (std::size_t i = 0; i < robots.size(); ++i) {
        if (robots[i].finished) continue;
        const long long others = total - std::max(0, task_cap - robots[i].tasks_done);
        allowed[i] = others >= remaining_tasks;
    }
    return allowed;
}

struct StepOutcome {
    Bigraph graph;
    Matching matching;
};

StepOutcome run_step(const std::vector<RobotState>& robots, const std::vector<int>& remaining,
                     const MembershipFn& b_star, const CostMatrix& costs,
                     const WeightParams& params, int task_cap, int iteration, double depot_b_star,
                     const std::vector<bool>* depot_allowed) {
    StepOutcome out;
    out.graph = build_bigraph(robots, remaining, b_star, costs, params, task_cap, iteration >= 2,
                              depot_b_star, depot_allowed);
    out.matching = max_weight_matching(out.graph);
    return out;
}

}  // namespace

Matching decision_step(const std::vector<RobotState>& robots, const std::vector<int>& remaining,
                       const MembershipFn& b_star, const CostMatrix& costs,
                       const WeightParams& params, int task_cap, int iteration,
                       double depot_b_star, const std::vector<bool>* depot_allowed) {
    return run_step(robots, remaining, b_star, costs, params, task_cap, iteration, depot_b_star,
                    depot_allowed)
        .matching;
}

AllocationResult allocate(const Scenario& s, const DecMataParams& p) {
    validate_scenario(s);
    const int n = s.task_count();
    const int m = s.robot_count;
    const int h = s.task_cap;
    if (p.mode == MembershipMode::kConstant &&
        (!(p.constant_membership > 0.0) || p.constant_membership > 1.0)) {
        throw std::invalid_argument("allocate: constant membership must lie in (0, 1]");
    }

    const CostMatrix costs = cost_matrix(s);

    AllocationResult result;
    MembershipFn b_star;
    double depot_b_star = 1.0;
    if (p.mode == MembershipMode::kFcm) {
        std::vector<Point2D> points(static_cast<std::size_t>(n));
        for (const Task& t : s.tasks) points[static_cast<std::size_t>(t.id - 1)] = t.location;
        FcmConfig cfg = p.fcm;
        cfg.seed = split_seed(p.seed, stream::kFcmInit);
        result.trace.memberships = fcm_cluster(points, m, cfg);
        b_star = fcm_lookup(*result.trace.memberships);
    } else {
        b_star = constant_lookup(p.constant_membership);
        // The constant replaces every membership, the depot's included, so
        // the whole weight field scales uniformly.
        depot_b_star = p.constant_membership;
    }

    // Iteration 0: uniformly draw m distinct tasks, assigned in robot order.
    auto rng = rng_stream(p.seed, stream::kInitialAssignment);
    std::vector<int> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 1);
    for (int i = 0; i < m; ++i) {
        const auto j = static_cast<std::size_t>(i) +
                       uniform_index(rng, static_cast<std::uint64_t>(n - i));
        std::swap(ids[static_cast<std::size_t>(i)], ids[j]);
    }

    std::vector<RobotState> robots(static_cast<std::size_t>(m));
    std::vector<Route> routes(static_cast<std::size_t>(m));
    IterationRecord initial;
    initial.iteration = 0;
    for (int i = 0; i < m; ++i) {
        const int task = ids[static_cast<std::size_t>(i)];
        auto& r = robots[static_cast<std::size_t>(i)];
        r.robot_id = i;
        r.current_node = task;
        r.cumulative_cost = costs(0, task);
        r.tasks_done = 1;
        auto& route = routes[static_cast<std::size_t>(i)];
        route.robot_id = i;
        route.nodes = {0, task};
        route.per_leg = {costs(0, task)};
        initial.graph.robot_vertices.push_back(i);
        initial.matching.pairs.push_back({i, task});
    }
    std::vector<int> remaining(ids.begin() + m, ids.end());
    std::sort(remaining.begin(), remaining.end());
    initial.states = robots;
    initial.remaining_tasks = static_cast<int>(remaining.size());
    result.trace.iterations.push_back(std::move(initial));

    const int iteration_limit = n + 2 * m + 16;
    int iteration = 1;
    while (!remaining.empty()) {
        if (iteration > iteration_limit) {
            throw StateError("allocate: iteration limit exceeded");
        }
        const auto allowed =
            depot_eligibility(robots, h, static_cast<int>(remaining.size()));
        StepOutcome step = run_step(robots, remaining, b_star, costs, p.weights, h, iteration,
                                    depot_b_star, &allowed);

        for (const auto& [robot_id, node] : step.matching.pairs) {
            auto& r = robots[static_cast<std::size_t>(robot_id)];
            auto& route = routes[static_cast<std::size_t>(robot_id)];
            const double leg = costs(r.current_node, node);
            r.cumulative_cost += leg;
            route.nodes.push_back(node);
            route.per_leg.push_back(leg);
            if (node == 0) {
                r.finished = true;
                r.current_node = 0;
            } else {
                r.tasks_done += 1;
                r.current_node = node;
                remaining.erase(std::find(remaining.begin(), remaining.end(), node));
            }
        }

        IterationRecord rec;
        rec.iteration = iteration;
        rec.graph = std::move(step.graph);
        rec.matching = std::move(step.matching);
        rec.states = robots;
        rec.remaining_tasks = static_cast<int>(remaining.size());
        result.trace.iterations.push_back(std::move(rec));
        ++iteration;
    }

    // All tasks routed: close every open tour.
    for (int i = 0; i < m; ++i) {
        auto& r = robots[static_cast<std::size_t>(i)];
        if (r.finished) continue;
        auto& route = routes[static_cast<std::size_t>(i)];
        const double leg = costs(r.current_node, 0);
        r.cumulative_cost += leg;
        r.finished = true;
        r.current_node = 0;
        route.nodes.push_back(0);
        route.per_leg.push_back(leg);
    }

    std::vector<double> agent_costs;
    agent_costs.reserve(static_cast<std::size_t>(m));
    for (auto& route : routes) {
        route.cost = std::accumulate(route.per_leg.begin(), route.per_leg.end(), 0.0);
        agent_costs.push_back(route.cost);
    }
    result.plan.routes = std::move(routes);
    result.plan.overall_cost =
        std::accumulate(agent_costs.begin(), agent_costs.end(), 0.0);
    result.plan.agent_cost_stddev = population_stddev(agent_costs);
    return result;
}

std::vector<Violation> verify_plan(const Scenario& s, const Plan& plan) {
    std::vector<Violation> out;
    const auto flag = [&out](const std::string& code, const std::string& message) {
        out.push_back({code, message});
    };

    const int n = s.task_count();
    const int m = s.robot_count;
    if (static_cast<int>(plan.routes.size()) != m) {
        flag("route_count", "plan has " + std::to_string(plan.routes.size()) + " routes for " +
                                std::to_string(m) + " robots");
        return out;
    }

    CostMatrix costs;
    try {
        costs = cost_matrix(s);
    } catch (const std::invalid_argument& e) {
        flag("bad_scenario", e.what());
        return out;
    }

    constexpr double kTol = 1e-9;
    std::vector<int> visits(static_cast<std::size_t>(n) + 1, 0);
    double recomputed_overall = 0.0;
    std::vector<double> agent_costs;

    for (const Route& route : plan.routes) {
        const std::string tag = "robot " + std::to_string(route.robot_id);
        if (route.nodes.size() < 2 || route.nodes.front() != 0 || route.nodes.back() != 0) {
            flag("route_endpoints", tag + ": route must start and end at the depot");
            continue;
        }
        const std::size_t interior = route.nodes.size() - 2;
        if (static_cast<int>(interior) > s.task_cap) {
            flag("cap_exceeded", tag + ": " + std::to_string(interior) + " tasks exceed cap " +
                                     std::to_string(s.task_cap));
        }
        if (interior == 0 && n >= m) {
            flag("no_task", tag + ": no task assigned although tasks outnumber robots");
        }
        bool nodes_ok = true;
        for (std::size_t k = 1; k + 1 < route.nodes.size(); ++k) {
            const int node = route.nodes[k];
            if (node < 1 || node > n) {
                flag("bad_node", tag + ": node " + std::to_string(node) + " is not a task id");
                nodes_ok = false;
            } else {
                visits[static_cast<std::size_t>(node)] += 1;
            }
        }
        if (!nodes_ok) continue;

        double total = 0.0;
        bool legs_ok = true;
        for (std::size_t k = 0; k + 1 < route.nodes.size(); ++k) {
            const double leg = costs(route.nodes[k], route.nodes[k + 1]);
            total += leg;
            if (!route.per_leg.empty()) {
                if (route.per_leg.size() != route.nodes.size() - 1) {
                    flag("cost_mismatch", tag + ": per-leg list length does not match the route");
                    legs_ok = false;
                    break;
                }
                if (std::abs(route.per_leg[k] - leg) > kTol * std::max(1.0, leg)) {
                    flag("cost_mismatch", tag + ": stored leg " + std::to_string(k) +
                                              " differs from the recomputed distance");
                    legs_ok = false;
                }
            }
        }
        if (legs_ok && std::abs(route.cost - total) > kTol * std::max(1.0, total)) {
            flag("cost_mismatch", tag + ": stored route cost differs from recomputed " +
                                      std::to_string(total));
        }
        recomputed_overall += total;
        agent_costs.push_back(total);
    }

    for (int id = 1; id <= n; ++id) {
        const int count = visits[static_cast<std::size_t>(id)];
        if (count == 0) flag("task_missing", "task " + std::to_string(id) + " is not visited");
        if (count > 1) {
            flag("task_duplicated",
                 "task " + std::to_string(id) + " visited " + std::to_string(count) + " times");
        }
    }

    if (agent_costs.size() == plan.routes.size()) {
        if (std::abs(plan.overall_cost - recomputed_overall) >
            kTol * std::max(1.0, recomputed_overall)) {
            flag("cost_mismatch", "overall cost differs from the recomputed total");
        }
        const double sigma = population_stddev(agent_costs);
        if (std::abs(plan.agent_cost_stddev - sigma) > kTol * std::max(1.0, sigma)) {
            flag("cost_mismatch", "agent cost stddev differs from the recomputed value");
        }
    }
    return out;
}

}  // namespace decmata
