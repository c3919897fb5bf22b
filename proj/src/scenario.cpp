#include "decmata/scenario.hpp"

#include "decmata/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace decmata {

int max_tasks_per_robot(int n, int m) {
    if (m < 1 || n < 1) {
        throw std::invalid_argument("max_tasks_per_robot: need n >= 1 and m >= 1");
    }
    return static_cast<int>(std::llround(static_cast<double>(n) / m)) + 2;
}

Scenario generate_scenario(std::uint64_t seed, int m, int n, double extent) {
    if (m < 1) throw std::invalid_argument("generate_scenario: robot count must be >= 1");
    if (n < m) throw std::invalid_argument("generate_scenario: need at least as many tasks as robots");
    if (!(extent > 0.0)) throw std::invalid_argument("generate_scenario: extent must be positive");

    auto rng = rng_stream(seed, stream::kScenario);
    Scenario s;
    s.seed = seed;
    s.extent = extent;
    s.robot_count = m;
    s.task_cap = max_tasks_per_robot(n, m);
    s.depot = Point2D(uniform_double(rng, extent), uniform_double(rng, extent));
    s.tasks.reserve(n);
    for (int k = 1; k <= n; ++k) {
        const double x = uniform_double(rng, extent);
        const double y = uniform_double(rng, extent);
        s.tasks.push_back(Task{k, Point2D(x, y)});
    }
    return s;
}

void validate_scenario(const Scenario& s) {
    const int n = s.task_count();
    const int m = s.robot_count;
    if (m < 1) throw std::invalid_argument("scenario: robot count must be >= 1");
    if (n < m) throw std::invalid_argument("scenario: need at least as many tasks as robots");
    if (s.task_cap < 1) throw std::invalid_argument("scenario: task cap must be >= 1");
    if (static_cast<long long>(s.task_cap) * m < n) {
        throw std::invalid_argument("scenario: task cap times robot count below task count (infeasible)");
    }
    if (!(s.extent > 0.0)) throw std::invalid_argument("scenario: extent must be positive");
    if (!s.depot.allFinite()) throw std::invalid_argument("scenario: depot coordinates must be finite");

    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (const Task& t : s.tasks) {
        if (t.id < 1 || t.id > n) {
            throw std::invalid_argument("scenario: task ids must be 1..n contiguous");
        }
        if (seen[static_cast<std::size_t>(t.id)]) {
            throw std::invalid_argument("scenario: duplicate task id " + std::to_string(t.id));
        }
        seen[static_cast<std::size_t>(t.id)] = true;
        if (!t.location.allFinite()) {
            throw std::invalid_argument("scenario: task " + std::to_string(t.id) +
                                        " has non-finite coordinates");
        }
    }
}

CostMatrix cost_matrix(const Scenario& s) {
    validate_scenario(s);
    const int n = s.task_count();
    std::vector<Point2D> pos(static_cast<std::size_t>(n) + 1);
    pos[0] = s.depot;
    for (const Task& t : s.tasks) pos[static_cast<std::size_t>(t.id)] = t.location;

    CostMatrix c(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
        c(i, i) = 0.0;
        for (int j = i + 1; j <= n; ++j) {
            const double d = (pos[static_cast<std::size_t>(i)] - pos[static_cast<std::size_t>(j)]).norm();
            c(i, j) = d;
            c(j, i) = d;
        }
    }
    return c;
}

}  // namespace decmata
