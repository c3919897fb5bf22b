#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace decmata {

/// 2D location in arena units.
using Point2D = Eigen::Vector2d;

/// A task to be visited. Id 0 is reserved for the depot and never appears here.
struct Task {
    int id = 0;
    Point2D location{0.0, 0.0};
};

inline bool operator==(const Task& a, const Task& b) {
    return a.id == b.id && a.location == b.location;
}

/// Mission world: one depot, n tasks, m robots, per-robot task cap h.
/// Task ids are 1..n; the depot is node 0 everywhere.
struct Scenario {
    std::uint64_t seed = 0;
    double extent = 10.0;
    Point2D depot{0.0, 0.0};
    std::vector<Task> tasks;
    int robot_count = 1;  // m
    int task_cap = 1;     // h

    int task_count() const { return static_cast<int>(tasks.size()); }
};

inline bool operator==(const Scenario& a, const Scenario& b) {
    return a.seed == b.seed && a.extent == b.extent && a.depot == b.depot &&
           a.tasks == b.tasks && a.robot_count == b.robot_count && a.task_cap == b.task_cap;
}

/// Travel costs between nodes; row/column 0 is the depot, k >= 1 is task id k.
using CostMatrix = Eigen::MatrixXd;

/// One robot's view of its own progress during a mission.
struct RobotState {
    int robot_id = 0;
    int current_node = 0;         // 0 = depot, otherwise a task id
    double cumulative_cost = 0.0; // nondecreasing over the mission
    int tasks_done = 0;
    bool finished = false;
};

/// Malformed input file; carries the offending field name.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& field, const std::string& what)
        : std::runtime_error("field '" + field + "': " + what), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class TimeoutError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace decmata
