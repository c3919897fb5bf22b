#include "decmata/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace decmata {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bigraph re-indexed to contiguous robot/node indices, ids sorted ascending.
struct Instance {
    std::vector<int> robot_ids;
    std::vector<int> node_ids;
    // adj[r] = (node index, weight), node-index ascending.
    std::vector<std::vector<std::pair<int, double>>> adj;
    double max_abs_weight = 1.0;

    int robots() const { return static_cast<int>(robot_ids.size()); }
    int nodes() const { return static_cast<int>(node_ids.size()); }
};

int index_of(const std::vector<int>& sorted_ids, int id) {
    auto it = std::lower_bound(sorted_ids.begin(), sorted_ids.end(), id);
    if (it == sorted_ids.end() || *it != id) return -1;
    return static_cast<int>(it - sorted_ids.begin());
}

Instance make_instance(const Bigraph& g) {
    Instance inst;
    inst.robot_ids = g.robot_vertices;
    inst.node_ids = g.task_vertices;
    std::sort(inst.robot_ids.begin(), inst.robot_ids.end());
    std::sort(inst.node_ids.begin(), inst.node_ids.end());
    if (std::adjacent_find(inst.robot_ids.begin(), inst.robot_ids.end()) != inst.robot_ids.end()) {
        throw std::invalid_argument("matching: duplicate robot vertex");
    }
    if (std::adjacent_find(inst.node_ids.begin(), inst.node_ids.end()) != inst.node_ids.end()) {
        throw std::invalid_argument("matching: duplicate task vertex");
    }
    inst.adj.assign(static_cast<std::size_t>(inst.robots()), {});
    for (const BigraphEdge& e : g.edges) {
        const int r = index_of(inst.robot_ids, e.robot_id);
        const int n = index_of(inst.node_ids, e.node_id);
        if (r < 0 || n < 0) {
            throw std::invalid_argument("matching: edge references an unknown vertex");
        }
        if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
            throw std::invalid_argument("matching: edge weights must be finite and nonnegative");
        }
        inst.adj[static_cast<std::size_t>(r)].push_back({n, e.weight});
        inst.max_abs_weight = std::max(inst.max_abs_weight, e.weight);
    }
    for (auto& list : inst.adj) {
        std::sort(list.begin(), list.end());
        for (std::size_t k = 1; k < list.size(); ++k) {
            if (list[k].first == list[k - 1].first) {
                throw std::invalid_argument("matching: duplicate edge for one robot/node pair");
            }
        }
    }
    return inst;
}

double tie_eps(const Instance& inst) { return 1e-9 * std::max(1.0, inst.max_abs_weight); }

// Unit-capacity flow network: S -> robots -> nodes -> T. Vertex layout is
// fixed regardless of which robots/nodes are switched on, so sub-solves
// share index arithmetic with the full solve.
struct FlowNet {
    struct Arc {
        int to;
        int cap;
        int flow;
        double cost;
        int rev;
    };

    int R = 0;
    int N = 0;
    std::vector<std::vector<Arc>> adj;
    std::vector<double> pot;

    int source() const { return 0; }
    int robot_vertex(int r) const { return 1 + r; }
    int node_vertex(int n) const { return 1 + R + n; }
    int sink() const { return 1 + R + N; }
    int vertex_count() const { return R + N + 2; }

    void add_arc(int u, int v, int cap, double cost) {
        adj[static_cast<std::size_t>(u)].push_back(
            {v, cap, 0, cost, static_cast<int>(adj[static_cast<std::size_t>(v)].size())});
        adj[static_cast<std::size_t>(v)].push_back(
            {u, 0, 0, -cost, static_cast<int>(adj[static_cast<std::size_t>(u)].size()) - 1});
    }

    double reduced_cost(int u, const Arc& a) const {
        const double rc = a.cost + pot[static_cast<std::size_t>(u)] - pot[static_cast<std::size_t>(a.to)];
        return rc < 0.0 ? 0.0 : rc;  // clamp float drift
    }
};

FlowNet build_net(const Instance& inst, int first_robot, const std::vector<char>& node_active) {
    FlowNet net;
    net.R = inst.robots();
    net.N = inst.nodes();
    net.adj.assign(static_cast<std::size_t>(net.vertex_count()), {});
    net.pot.assign(static_cast<std::size_t>(net.vertex_count()), 0.0);

    for (int r = first_robot; r < inst.robots(); ++r) {
        net.add_arc(net.source(), net.robot_vertex(r), 1, 0.0);
    }
    std::vector<double> node_best(static_cast<std::size_t>(net.N), kInf);
    for (int r = first_robot; r < inst.robots(); ++r) {
        for (const auto& [n, w] : inst.adj[static_cast<std::size_t>(r)]) {
            if (!node_active[static_cast<std::size_t>(n)]) continue;
            net.add_arc(net.robot_vertex(r), net.node_vertex(n), 1, -w);
            node_best[static_cast<std::size_t>(n)] = std::min(node_best[static_cast<std::size_t>(n)], -w);
        }
    }
    for (int n = 0; n < net.N; ++n) {
        if (node_active[static_cast<std::size_t>(n)]) {
            net.add_arc(net.node_vertex(n), net.sink(), 1, 0.0);
        }
    }

    // Exact shortest distances of the initial layered DAG seed the potentials
    // so every later Dijkstra runs on nonnegative reduced costs.
    double sink_pot = 0.0;
    bool any_reachable = false;
    for (int n = 0; n < net.N; ++n) {
        if (node_best[static_cast<std::size_t>(n)] == kInf) continue;
        net.pot[static_cast<std::size_t>(net.node_vertex(n))] = node_best[static_cast<std::size_t>(n)];
        sink_pot = any_reachable ? std::min(sink_pot, node_best[static_cast<std::size_t>(n)])
                                 : node_best[static_cast<std::size_t>(n)];
        any_reachable = true;
    }
    net.pot[static_cast<std::size_t>(net.sink())] = any_reachable ? sink_pot : 0.0;
    return net;
}

struct SolveOutcome {
    int card = 0;
    double weight = 0.0;
    std::vector<int> robot_match;  // node index or -1, per robot index
};

// Successive shortest augmenting paths; optimal for every intermediate flow
// value, so the terminal flow is the min-cost (max-weight) one among all
// maximum-cardinality matchings.
SolveOutcome ssp_solve(const Instance& inst, FlowNet& net) {
    const int V = net.vertex_count();
    const int S = net.source();
    const int T = net.sink();
    SolveOutcome out;
    out.robot_match.assign(static_cast<std::size_t>(inst.robots()), -1);

    std::vector<double> dist(static_cast<std::size_t>(V));
    std::vector<std::pair<int, int>> parent(static_cast<std::size_t>(V));  // (vertex, arc index)

    while (true) {
        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(parent.begin(), parent.end(), std::make_pair(-1, -1));
        dist[static_cast<std::size_t>(S)] = 0.0;
        std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                            std::greater<>>
            pq;
        pq.push({0.0, S});
        while (!pq.empty()) {
            const auto [d, u] = pq.top();
            pq.pop();
            if (d > dist[static_cast<std::size_t>(u)]) continue;
            const auto& arcs = net.adj[static_cast<std::size_t>(u)];
            for (std::size_t k = 0; k < arcs.size(); ++k) {
                const auto& a = arcs[k];
                if (a.cap - a.flow <= 0) continue;
                const double nd = d + net.reduced_cost(u, a);
                if (nd < dist[static_cast<std::size_t>(a.to)]) {
                    dist[static_cast<std::size_t>(a.to)] = nd;
                    parent[static_cast<std::size_t>(a.to)] = {u, static_cast<int>(k)};
                    pq.push({nd, a.to});
                }
            }
        }
        if (dist[static_cast<std::size_t>(T)] == kInf) break;

        for (int v = 0; v < V; ++v) {
            net.pot[static_cast<std::size_t>(v)] +=
                std::min(dist[static_cast<std::size_t>(v)], dist[static_cast<std::size_t>(T)]);
        }
        for (int v = T; v != S;) {
            const auto [u, k] = parent[static_cast<std::size_t>(v)];
            auto& a = net.adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(k)];
            a.flow += 1;
            net.adj[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.rev)].flow -= 1;
            v = u;
        }
        out.card += 1;
    }

    for (int r = 0; r < inst.robots(); ++r) {
        for (const auto& a : net.adj[static_cast<std::size_t>(net.robot_vertex(r))]) {
            if (a.flow > 0 && a.to != S) {
                out.robot_match[static_cast<std::size_t>(r)] = a.to - 1 - net.R;
                out.weight += -a.cost;
            }
        }
    }
    return out;
}

// Shortest residual reduced-cost distances INTO `target`: dist[x] is the
// cheapest x -> target path. Walks arcs backwards via their reverse pairing.
std::vector<double> reverse_distances(const FlowNet& net, int target) {
    const int V = net.vertex_count();
    std::vector<double> dist(static_cast<std::size_t>(V), kInf);
    dist[static_cast<std::size_t>(target)] = 0.0;
    std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>, std::greater<>>
        pq;
    pq.push({0.0, target});
    while (!pq.empty()) {
        const auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[static_cast<std::size_t>(v)]) continue;
        for (const auto& a : net.adj[static_cast<std::size_t>(v)]) {
            // Partner arc runs a.to -> v; usable backwards when it has residual.
            const auto& partner = net.adj[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.rev)];
            if (partner.cap - partner.flow <= 0) continue;
            const double nd = d + net.reduced_cost(a.to, partner);
            if (nd < dist[static_cast<std::size_t>(a.to)]) {
                dist[static_cast<std::size_t>(a.to)] = nd;
                pq.push({nd, a.to});
            }
        }
    }
    return dist;
}

// Extra cost of forcing edge (r, n) into an optimal solution of the solved
// net; ~0 means the edge belongs to some optimum.
double forcing_cost(const FlowNet& net, const std::vector<double>& dist_to_r, int r, int n,
                    double w) {
    const int rv = net.robot_vertex(r);
    const int nv = net.node_vertex(n);
    const double rc =
        std::max(0.0, -w + net.pot[static_cast<std::size_t>(rv)] - net.pot[static_cast<std::size_t>(nv)]);
    return rc + dist_to_r[static_cast<std::size_t>(nv)];
}

// True when some alternative optimum exists (an unused edge can be forced in
// at zero extra cost). Exactly these are the cases where tie-breaking shows.
bool has_equal_weight_alternative(const Instance& inst, const FlowNet& net,
                                  const SolveOutcome& out) {
    const double eps = tie_eps(inst);
    for (int r = 0; r < inst.robots(); ++r) {
        if (inst.adj[static_cast<std::size_t>(r)].empty()) continue;
        const auto dist_to_r = reverse_distances(net, net.robot_vertex(r));
        for (const auto& [n, w] : inst.adj[static_cast<std::size_t>(r)]) {
            if (out.robot_match[static_cast<std::size_t>(r)] == n) continue;
            if (forcing_cost(net, dist_to_r, r, n, w) <= eps) return true;
        }
    }
    return false;
}

double weight_of(const Instance& inst, int r, int n) {
    for (const auto& [cand, w] : inst.adj[static_cast<std::size_t>(r)]) {
        if (cand == n) return w;
    }
    throw StateError("matching: missing edge weight");
}

// Greedy prefix fixing: position by position, pick the smallest (robot, node)
// pair that still extends to a (card0, weight0) matching whose remaining
// robots all have larger indices.
std::vector<std::pair<int, int>> canonical_pairs(const Instance& inst, int card0, double weight0) {
    const double eps = tie_eps(inst);
    std::vector<char> node_active(static_cast<std::size_t>(inst.nodes()), 1);
    std::vector<std::pair<int, int>> fixed;
    double wfix = 0.0;
    int rmin = 0;

    while (static_cast<int>(fixed.size()) < card0) {
        const int crem = card0 - static_cast<int>(fixed.size());
        const double wrem = weight0 - wfix;
        bool placed = false;
        for (int r = rmin; r < inst.robots() && !placed; ++r) {
            FlowNet net = build_net(inst, r, node_active);
            const SolveOutcome sub = ssp_solve(inst, net);
            if (sub.card != crem || sub.weight < wrem - eps) {
                break;  // dropping robots < r already lost value; no later r can work
            }
            if (inst.adj[static_cast<std::size_t>(r)].empty()) continue;
            const auto dist_to_r = reverse_distances(net, net.robot_vertex(r));
            for (const auto& [n, w] : inst.adj[static_cast<std::size_t>(r)]) {
                if (!node_active[static_cast<std::size_t>(n)]) continue;
                const bool feasible = sub.robot_match[static_cast<std::size_t>(r)] == n ||
                                      forcing_cost(net, dist_to_r, r, n, w) <= eps;
                if (feasible) {
                    fixed.push_back({r, n});
                    wfix += w;
                    node_active[static_cast<std::size_t>(n)] = 0;
                    rmin = r + 1;
                    placed = true;
                    break;
                }
            }
        }
        if (!placed) throw StateError("matching: canonicalization found no feasible pair");
    }
    return fixed;
}

Matching to_matching(const Instance& inst, const std::vector<std::pair<int, int>>& index_pairs) {
    Matching m;
    for (const auto& [r, n] : index_pairs) {
        m.pairs.push_back({inst.robot_ids[static_cast<std::size_t>(r)],
                           inst.node_ids[static_cast<std::size_t>(n)]});
        m.total_weight += weight_of(inst, r, n);
    }
    std::sort(m.pairs.begin(), m.pairs.end());
    return m;
}

}  // namespace

Matching max_weight_matching(const Bigraph& g) {
    const Instance inst = make_instance(g);
    if (inst.robots() == 0 || inst.nodes() == 0) return {};

    std::vector<char> node_active(static_cast<std::size_t>(inst.nodes()), 1);
    FlowNet net = build_net(inst, 0, node_active);
    const SolveOutcome out = ssp_solve(inst, net);
    if (out.card == 0) return {};

    if (has_equal_weight_alternative(inst, net, out)) {
        return to_matching(inst, canonical_pairs(inst, out.card, out.weight));
    }

    std::vector<std::pair<int, int>> pairs;
    for (int r = 0; r < inst.robots(); ++r) {
        const int n = out.robot_match[static_cast<std::size_t>(r)];
        if (n >= 0) pairs.push_back({r, n});
    }
    return to_matching(inst, pairs);
}

Matching max_weight_matching_bruteforce(const Bigraph& g) {
    const Instance inst = make_instance(g);
    const int R = inst.robots();
    const int N = inst.nodes();
    if (R + N > 16) {
        throw std::invalid_argument("bruteforce matcher limited to 16 vertices total");
    }
    if (R == 0 || N == 0) return {};

    struct Value {
        int card = 0;
        double weight = 0.0;
    };
    const auto better = [](const Value& a, const Value& b) {
        return a.card != b.card ? a.card > b.card : a.weight > b.weight;
    };

    const int masks = 1 << N;
    // dp[i][mask]: best value achievable with robots i..R-1 and free nodes `mask`.
    std::vector<std::vector<Value>> dp(static_cast<std::size_t>(R) + 1,
                                       std::vector<Value>(static_cast<std::size_t>(masks)));
    for (int i = R - 1; i >= 0; --i) {
        for (int mask = 0; mask < masks; ++mask) {
            Value best = dp[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(mask)];
            for (const auto& [n, w] : inst.adj[static_cast<std::size_t>(i)]) {
                if (!(mask & (1 << n))) continue;
                const Value sub =
                    dp[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(mask ^ (1 << n))];
                const Value cand{sub.card + 1, sub.weight + w};
                if (better(cand, best)) best = cand;
            }
            dp[static_cast<std::size_t>(i)][static_cast<std::size_t>(mask)] = best;
        }
    }

    // Matching an earlier robot always beats skipping it in sequence order,
    // so walk robots ascending and take the smallest feasible node.
    const double eps = tie_eps(inst);
    std::vector<std::pair<int, int>> pairs;
    int mask = masks - 1;
    Value target = dp[0][static_cast<std::size_t>(mask)];
    for (int i = 0; i < R; ++i) {
        bool matched = false;
        for (const auto& [n, w] : inst.adj[static_cast<std::size_t>(i)]) {
            if (!(mask & (1 << n))) continue;
            const Value sub =
                dp[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(mask ^ (1 << n))];
            if (sub.card + 1 == target.card && std::abs(sub.weight + w - target.weight) <= eps) {
                pairs.push_back({i, n});
                mask ^= 1 << n;
                target = sub;
                matched = true;
                break;
            }
        }
        if (!matched) {
            target = dp[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(mask)];
        }
    }
    return to_matching(inst, pairs);
}

}  // namespace decmata
