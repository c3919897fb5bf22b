#include "decmata/bigraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace decmata {

double edge_weight(double b_star, double c_cum, double c_ij, double k_b) {
    if (!(b_star >= 0.0) || b_star > 1.0 + 1e-12 || !std::isfinite(b_star)) {
        throw std::invalid_argument("edge_weight: b_star must lie in [0, 1]");
    }
    if (!(c_cum >= 0.0) || !std::isfinite(c_cum)) {
        throw std::invalid_argument("edge_weight: cumulative cost must be nonnegative");
    }
    if (!(c_ij >= 0.0) || !std::isfinite(c_ij)) {
        throw std::invalid_argument("edge_weight: travel cost must be nonnegative");
    }
    if (!(k_b > 0.0) || !std::isfinite(k_b)) {
        throw std::invalid_argument("edge_weight: k_b must be positive");
    }
    b_star = std::min(b_star, 1.0);
    const double denom = (c_ij + 1.0) * (c_ij + 1.0);
    return k_b * b_star * (c_cum + 1.0) / denom;
}

Bigraph build_bigraph(const std::vector<RobotState>& robots,
                      const std::vector<int>& remaining,
                      const MembershipFn& b_star,
                      const CostMatrix& costs,
                      const WeightParams& params,
                      int task_cap,
                      bool depot_enabled,
                      double depot_b_star,
                      const std::vector<bool>* depot_allowed) {
    if (remaining.empty() && !depot_enabled) {
        throw std::invalid_argument("build_bigraph: no remaining tasks and depot disabled");
    }
    if (task_cap < 1) throw std::invalid_argument("build_bigraph: task cap must be >= 1");
    if (depot_allowed && depot_allowed->size() != robots.size()) {
        throw std::invalid_argument("build_bigraph: depot_allowed size mismatch");
    }

    const int node_count = static_cast<int>(costs.rows());
    Bigraph g;
    g.task_vertices = remaining;
    std::sort(g.task_vertices.begin(), g.task_vertices.end());
    if (depot_enabled) g.task_vertices.insert(g.task_vertices.begin(), 0);
    for (int node : g.task_vertices) {
        if (node < 0 || node >= node_count) {
            throw std::invalid_argument("build_bigraph: node id out of range of the cost matrix");
        }
    }

    for (std::size_t idx = 0; idx < robots.size(); ++idx) {
        const RobotState& r = robots[idx];
        if (r.finished) continue;
        g.robot_vertices.push_back(r.robot_id);
        if (r.current_node < 0 || r.current_node >= node_count) {
            throw std::invalid_argument("build_bigraph: robot current node out of range");
        }

        const bool at_cap = r.tasks_done >= task_cap;
        const bool depot_ok =
            depot_enabled && (!depot_allowed || (*depot_allowed)[idx]);

        if (!at_cap) {
            for (int node : g.task_vertices) {
                if (node == 0) continue;
                const double membership = b_star(r, node);
                const double c = costs(r.current_node, node);
                g.edges.push_back(
                    {r.robot_id, node, edge_weight(membership, r.cumulative_cost, c, params.k_b)});
            }
        }
        if (depot_ok) {
            const double back = costs(r.current_node, 0);
            g.edges.push_back(
                {r.robot_id, 0, edge_weight(depot_b_star, r.cumulative_cost, back, params.k_b)});
        }
    }

    std::sort(g.edges.begin(), g.edges.end(), [](const BigraphEdge& a, const BigraphEdge& b) {
        return a.robot_id != b.robot_id ? a.robot_id < b.robot_id : a.node_id < b.node_id;
    });
    return g;
}

void write_bigraph_csv(const Bigraph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "robot_id,node_id,weight\n";
    out.precision(17);
    for (const BigraphEdge& e : g.edges) {
        out << e.robot_id << "," << e.node_id << "," << e.weight << "\n";
    }
    if (!out) throw IoError("failed while writing " + path.string());
}

}  // namespace decmata
