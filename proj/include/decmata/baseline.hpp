#pragma once

#include "decmata/allocator.hpp"
#include "decmata/types.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace decmata {

struct LinearTerm {
    double coeff = 0.0;
    std::string var;
};

struct ConstraintRow {
    std::string name;
    std::vector<LinearTerm> terms;
    char sense = '=';  // '<' means <=, '>' means >=, '=' equality
    double rhs = 0.0;
};

/// Mixed-integer model of the centralized routing problem: binary arc
/// variables z_i_j, integer position variables u_i, depot-degree and
/// assignment constraints plus MTZ subtour elimination.
struct MilpModel {
    int n_nodes = 0;  // tasks + depot
    int m = 0;
    int h = 0;
    CostMatrix costs;
    std::vector<ConstraintRow> depot_degree;  // exactly 2
    std::vector<ConstraintRow> assignment;    // 2 * (n_nodes - 1)
    std::vector<ConstraintRow> mtz;           // (n_nodes - 1) * (n_nodes - 2)

    std::size_t constraint_count() const {
        return depot_degree.size() + assignment.size() + mtz.size();
    }
};

struct ExactSolution {
    std::vector<std::vector<int>> tours;  // each [0, tasks..., 0]
    double objective = 0.0;
    bool proven_optimal = false;
    long long nodes_explored = 0;
};

MilpModel build_milp(const CostMatrix& costs, int m, int h);

/// Objective sum c_ij z_ij for a dense 0/1 arc matrix (diagonal ignored).
double evaluate_objective(const MilpModel& model, const Eigen::MatrixXd& z);

/// Left-hand side of one row under a variable assignment.
double evaluate_row(const ConstraintRow& row,
                    const std::function<double(const std::string&)>& value_of);

/// Depth-first branch and bound over tour construction, admissible bound
/// from each unvisited node's cheapest incoming edge. Returns the proven
/// optimum when the search completes within the budget, otherwise the best
/// incumbent with proven_optimal = false. No incumbent in time -> TimeoutError.
ExactSolution solve_exact(const MilpModel& model, std::chrono::duration<double> budget);

void emit_lp(const MilpModel& model, const std::filesystem::path& path);

/// Parsed-back content of an emitted LP file.
struct ParsedLp {
    std::vector<LinearTerm> objective;
    std::vector<ConstraintRow> constraints;
    std::vector<std::string> bounded_vars;
    std::vector<std::string> binaries;
    std::vector<std::string> generals;
};

ParsedLp read_lp(const std::filesystem::path& path);

double tour_cost(const std::vector<int>& nodes, const CostMatrix& costs);
double overall_cost(const std::vector<std::vector<int>>& tours, const CostMatrix& costs);
double overall_cost(const Plan& plan, const CostMatrix& costs);

}  // namespace decmata
