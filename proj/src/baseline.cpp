#include "decmata/baseline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace decmata {

namespace {

std::string zvar(int i, int j) { return "z_" + std::to_string(i) + "_" + std::to_string(j); }
std::string uvar(int i) { return "u_" + std::to_string(i); }

std::string format_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

MilpModel build_milp(const CostMatrix& costs, int m, int h) {
    const int n_nodes = static_cast<int>(costs.rows());
    const int n_tasks = n_nodes - 1;
    if (costs.rows() != costs.cols() || n_nodes < 2) {
        throw std::invalid_argument("build_milp: cost matrix must be square with >= 2 nodes");
    }
    if (m < 1 || n_tasks < m) {
        throw std::invalid_argument("build_milp: need 1 <= m <= task count");
    }
    if (h < 1 || static_cast<long long>(h) * m < n_tasks) {
        throw std::invalid_argument("build_milp: task cap infeasible for this size");
    }

    MilpModel model;
    model.n_nodes = n_nodes;
    model.m = m;
    model.h = h;
    model.costs = costs;

    ConstraintRow depart{"depart", {}, '=', static_cast<double>(m)};
    ConstraintRow ret{"ret", {}, '=', static_cast<double>(m)};
    for (int j = 1; j < n_nodes; ++j) {
        depart.terms.push_back({1.0, zvar(0, j)});
        ret.terms.push_back({1.0, zvar(j, 0)});
    }
    model.depot_degree = {std::move(depart), std::move(ret)};

    for (int j = 1; j < n_nodes; ++j) {
        ConstraintRow in{"in_" + std::to_string(j), {}, '=', 1.0};
        for (int i = 0; i < n_nodes; ++i) {
            if (i != j) in.terms.push_back({1.0, zvar(i, j)});
        }
        model.assignment.push_back(std::move(in));
    }
    for (int i = 1; i < n_nodes; ++i) {
        ConstraintRow out{"out_" + std::to_string(i), {}, '=', 1.0};
        for (int j = 0; j < n_nodes; ++j) {
            if (j != i) out.terms.push_back({1.0, zvar(i, j)});
        }
        model.assignment.push_back(std::move(out));
    }

    for (int i = 1; i < n_nodes; ++i) {
        for (int j = 1; j < n_nodes; ++j) {
            if (i == j) continue;
            ConstraintRow row{"mtz_" + std::to_string(i) + "_" + std::to_string(j),
                              {{1.0, uvar(i)}, {-1.0, uvar(j)}, {static_cast<double>(h), zvar(i, j)}},
                              '<',
                              static_cast<double>(h) - 1.0};
            model.mtz.push_back(std::move(row));
        }
    }
    return model;
}

double evaluate_objective(const MilpModel& model, const Eigen::MatrixXd& z) {
    if (z.rows() != model.n_nodes || z.cols() != model.n_nodes) {
        throw std::invalid_argument("evaluate_objective: z has the wrong shape");
    }
    double total = 0.0;
    for (int i = 0; i < model.n_nodes; ++i) {
        for (int j = 0; j < model.n_nodes; ++j) {
            if (i != j) total += model.costs(i, j) * z(i, j);
        }
    }
    return total;
}

double evaluate_row(const ConstraintRow& row,
                    const std::function<double(const std::string&)>& value_of) {
    double lhs = 0.0;
    for (const LinearTerm& t : row.terms) lhs += t.coeff * value_of(t.var);
    return lhs;
}

namespace {

// Branch-and-bound over tour construction. Tours are built one robot at a
// time; canonical form (strictly increasing first tasks across tours) prunes
// robot relabelings.
class TourSearch {
public:
    TourSearch(const CostMatrix& c, int m, int h, std::chrono::duration<double> budget)
        : c_(c),
          n_(static_cast<int>(c.rows()) - 1),
          m_(m),
          h_(h),
          deadline_(std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(budget)) {
        min_in_.assign(static_cast<std::size_t>(n_) + 1, std::numeric_limits<double>::infinity());
        min_ret_ = std::numeric_limits<double>::infinity();
        for (int t = 1; t <= n_; ++t) {
            for (int u = 0; u <= n_; ++u) {
                if (u != t) {
                    min_in_[static_cast<std::size_t>(t)] =
                        std::min(min_in_[static_cast<std::size_t>(t)], c_(u, t));
                }
            }
            min_ret_ = std::min(min_ret_, c_(t, 0));
        }
        visited_.assign(static_cast<std::size_t>(n_) + 1, false);
        current_.resize(static_cast<std::size_t>(m_));
    }

    ExactSolution run() {
        for (const auto& [cost, t] : ordered_from(0)) {
            begin_tour(0, t, cost);
            if (budget_hit_) break;
        }
        ExactSolution sol;
        sol.nodes_explored = nodes_;
        sol.proven_optimal = !budget_hit_;
        if (best_cost_ == std::numeric_limits<double>::infinity()) {
            throw TimeoutError("solve_exact: budget exhausted before any feasible solution");
        }
        sol.objective = best_cost_;
        sol.tours = best_tours_;
        return sol;
    }

private:
    std::vector<std::pair<double, int>> ordered_from(int node) const {
        std::vector<std::pair<double, int>> out;
        for (int t = 1; t <= n_; ++t) {
            if (!visited_[static_cast<std::size_t>(t)]) out.push_back({c_(node, t), t});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    void begin_tour(int k, int first, double leg) {
        visited_[static_cast<std::size_t>(first)] = true;
        ++visited_count_;
        current_[static_cast<std::size_t>(k)].push_back(first);
        dfs(k, first, 1, cost_ + leg);
        current_[static_cast<std::size_t>(k)].pop_back();
        --visited_count_;
        visited_[static_cast<std::size_t>(first)] = false;
    }

    void dfs(int k, int cur, int len, double cost) {
        if (budget_hit_) return;
        if ((++nodes_ & 0xFFF) == 0 && std::chrono::steady_clock::now() > deadline_) {
            budget_hit_ = true;
            return;
        }
        const int remaining = n_ - visited_count_;
        const double lb = cost + pending_bound(k) ;
        if (lb > best_cost_ + 1e-12) return;

        const double saved_cost = cost_;
        cost_ = cost;

        if (len < h_) {
            for (const auto& [leg, t] : ordered_from(cur)) {
                visited_[static_cast<std::size_t>(t)] = true;
                ++visited_count_;
                current_[static_cast<std::size_t>(k)].push_back(t);
                dfs(k, t, len + 1, cost + leg);
                current_[static_cast<std::size_t>(k)].pop_back();
                --visited_count_;
                visited_[static_cast<std::size_t>(t)] = false;
                if (budget_hit_) break;
            }
        }

        if (!budget_hit_) {
            const double closed = cost + c_(cur, 0);
            if (k == m_ - 1) {
                if (remaining == 0) offer(closed);
            } else {
                const int future = m_ - k - 1;
                if (remaining >= future && remaining <= static_cast<long long>(future) * h_) {
                    const int floor_task = current_[static_cast<std::size_t>(k)].front();
                    for (const auto& [leg, t] : ordered_from(0)) {
                        if (t <= floor_task) continue;
                        cost_ = closed;
                        begin_tour(k + 1, t, leg);
                        if (budget_hit_) break;
                    }
                }
            }
        }
        cost_ = saved_cost;
    }

    // Admissible completion bound: every unvisited task still needs an
    // incoming edge, and m - k tours still need a return leg.
    double pending_bound(int k) const {
        double bound = static_cast<double>(m_ - k) * min_ret_;
        for (int t = 1; t <= n_; ++t) {
            if (!visited_[static_cast<std::size_t>(t)]) bound += min_in_[static_cast<std::size_t>(t)];
        }
        return bound;
    }

    void offer(double total) {
        if (total > best_cost_ + 1e-9) return;
        std::vector<std::vector<int>> tours;
        tours.reserve(static_cast<std::size_t>(m_));
        for (const auto& interior : current_) {
            std::vector<int> tour;
            tour.reserve(interior.size() + 2);
            tour.push_back(0);
            tour.insert(tour.end(), interior.begin(), interior.end());
            tour.push_back(0);
            tours.push_back(std::move(tour));
        }
        if (total < best_cost_ - 1e-9 || tours < best_tours_) {
            best_cost_ = std::min(best_cost_, total);
            best_tours_ = std::move(tours);
        }
    }

    const CostMatrix& c_;
    int n_;
    int m_;
    int h_;
    std::chrono::steady_clock::time_point deadline_;
    std::vector<double> min_in_;
    double min_ret_ = 0.0;
    std::vector<bool> visited_;
    int visited_count_ = 0;
    std::vector<std::vector<int>> current_;
    double cost_ = 0.0;
    double best_cost_ = std::numeric_limits<double>::infinity();
    std::vector<std::vector<int>> best_tours_;
    long long nodes_ = 0;
    bool budget_hit_ = false;
};

}  // namespace

ExactSolution solve_exact(const MilpModel& model, std::chrono::duration<double> budget) {
    TourSearch search(model.costs, model.m, model.h, budget);
    return search.run();
}

void emit_lp(const MilpModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");

    const int n = model.n_nodes;
    out << "\\ multi-tour routing model: nodes=" << n << " m=" << model.m << " h=" << model.h
        << "\n";
    out << "Minimize\n obj:";
    bool first = true;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            out << (first ? " " : " + ") << format_num(model.costs(i, j)) << " " << zvar(i, j);
            first = false;
        }
    }
    out << "\nSubject To\n";

    const auto write_row = [&out](const ConstraintRow& row) {
        out << " " << row.name << ":";
        bool lead = true;
        for (const LinearTerm& t : row.terms) {
            if (t.coeff < 0.0) {
                out << " - " << format_num(-t.coeff);
            } else {
                out << (lead ? " " : " + ") << format_num(t.coeff);
            }
            out << " " << t.var;
            lead = false;
        }
        out << " " << (row.sense == '<' ? "<=" : row.sense == '>' ? ">=" : "=") << " "
            << format_num(row.rhs) << "\n";
    };
    for (const auto& row : model.depot_degree) write_row(row);
    for (const auto& row : model.assignment) write_row(row);
    for (const auto& row : model.mtz) write_row(row);

    out << "Bounds\n";
    for (int i = 1; i < n; ++i) {
        out << " 1 <= " << uvar(i) << " <= " << model.h << "\n";
    }
    out << "Binaries\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) out << " " << zvar(i, j) << "\n";
        }
    }
    out << "Generals\n";
    for (int i = 1; i < n; ++i) out << " " << uvar(i) << "\n";
    out << "End\n";
    if (!out) throw IoError("failed while writing " + path.string());
}

namespace {

bool is_number_token(const std::string& tok) {
    return !tok.empty() && (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '.' ||
                            ((tok[0] == '-' || tok[0] == '+') && tok.size() > 1));
}

bool is_section_token(const std::string& tok) {
    return tok == "Subject" || tok == "Bounds" || tok == "Binaries" || tok == "Generals" ||
           tok == "End" || tok == "Minimize" || tok == "Maximize";
}

}  // namespace

ParsedLp read_lp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '\\') continue;
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }

    ParsedLp lp;
    std::size_t i = 0;
    const auto expect = [&](const std::string& what) {
        if (i >= tokens.size() || tokens[i] != what) {
            throw ParseError(what, "expected token missing in LP file");
        }
        ++i;
    };

    const auto parse_terms = [&](std::vector<LinearTerm>& terms) {
        double sign = 1.0;
        while (i < tokens.size()) {
            const std::string& tok = tokens[i];
            if (tok == "+") {
                sign = 1.0;
                ++i;
            } else if (tok == "-") {
                sign = -1.0;
                ++i;
            } else if (is_number_token(tok)) {
                const double coeff = std::stod(tok);
                ++i;
                if (i >= tokens.size()) throw ParseError("terms", "dangling coefficient");
                terms.push_back({sign * coeff, tokens[i]});
                ++i;
                sign = 1.0;
            } else {
                break;  // sense token or next section
            }
        }
    };

    expect("Minimize");
    expect("obj:");
    parse_terms(lp.objective);
    expect("Subject");
    expect("To");

    while (i < tokens.size() && !is_section_token(tokens[i])) {
        ConstraintRow row;
        if (tokens[i].empty() || tokens[i].back() != ':') {
            throw ParseError("constraint", "expected a row name ending in ':'");
        }
        row.name = tokens[i].substr(0, tokens[i].size() - 1);
        ++i;
        parse_terms(row.terms);
        if (i >= tokens.size()) throw ParseError(row.name, "missing constraint sense");
        const std::string sense = tokens[i];
        row.sense = sense == "<=" ? '<' : sense == ">=" ? '>' : '=';
        if (sense != "<=" && sense != ">=" && sense != "=") {
            throw ParseError(row.name, "unknown sense '" + sense + "'");
        }
        ++i;
        if (i >= tokens.size() || !is_number_token(tokens[i])) {
            throw ParseError(row.name, "missing right-hand side");
        }
        row.rhs = std::stod(tokens[i]);
        ++i;
        lp.constraints.push_back(std::move(row));
    }

    while (i < tokens.size()) {
        const std::string section = tokens[i];
        ++i;
        if (section == "End") break;
        if (section == "Bounds") {
            while (i < tokens.size() && !is_section_token(tokens[i])) {
                // pattern: lo <= var <= hi
                if (i + 4 >= tokens.size()) throw ParseError("Bounds", "truncated bound row");
                lp.bounded_vars.push_back(tokens[i + 2]);
                i += 5;
            }
        } else if (section == "Binaries" || section == "Generals") {
            auto& sink = section == "Binaries" ? lp.binaries : lp.generals;
            while (i < tokens.size() && !is_section_token(tokens[i])) {
                sink.push_back(tokens[i]);
                ++i;
            }
        } else {
            throw ParseError(section, "unknown LP section");
        }
    }
    return lp;
}

double tour_cost(const std::vector<int>& nodes, const CostMatrix& costs) {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const int a = nodes[k];
        const int b = nodes[k + 1];
        if (a < 0 || a >= costs.rows() || b < 0 || b >= costs.rows()) {
            throw std::invalid_argument("tour_cost: node id outside the cost matrix");
        }
        total += costs(a, b);
    }
    return total;
}

double overall_cost(const std::vector<std::vector<int>>& tours, const CostMatrix& costs) {
    double total = 0.0;
    for (const auto& t : tours) total += tour_cost(t, costs);
    return total;
}

double overall_cost(const Plan& plan, const CostMatrix& costs) {
    double total = 0.0;
    for (const Route& r : plan.routes) total += tour_cost(r.nodes, costs);
    return total;
}

}  // namespace decmata
