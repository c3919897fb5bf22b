#include "decmata/json_io.hpp"

#include "decmata/scenario.hpp"

#include <json.hpp>

#include <fstream>
#include <numeric>
#include <sstream>

namespace decmata {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key) {
    if (!j.contains(key)) throw ParseError(key, "missing");
    return j.at(key);
}

Point2D parse_point(const json& j, const char* key) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ParseError(key, "expected [x, y]");
    }
    return Point2D(j[0].get<double>(), j[1].get<double>());
}

json point_to_json(const Point2D& p) { return json::array({p.x(), p.y()}); }

json parse_text(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError(what, "not valid JSON");
    return j;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("failed while writing " + path.string());
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
    json tasks = json::array();
    for (const Task& t : s.tasks) {
        tasks.push_back({{"id", t.id}, {"loc", point_to_json(t.location)}});
    }
    const json j = {{"seed", s.seed},
                    {"extent", s.extent},
                    {"depot", point_to_json(s.depot)},
                    {"robots", s.robot_count},
                    {"task_cap", s.task_cap},
                    {"tasks", tasks}};
    return j.dump(2) + "\n";
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
    spill(scenario_to_json(s), path);
}

Scenario load_scenario(const std::filesystem::path& path) {
    const json j = parse_text(slurp(path), "scenario");
    if (!j.is_object()) throw ParseError("scenario", "expected a JSON object");

    Scenario s;
    const json& seed = require(j, "seed");
    if (!seed.is_number_integer() && !seed.is_number_unsigned()) {
        throw ParseError("seed", "expected an integer");
    }
    s.seed = seed.get<std::uint64_t>();

    const json& extent = require(j, "extent");
    if (!extent.is_number()) throw ParseError("extent", "expected a number");
    s.extent = extent.get<double>();

    s.depot = parse_point(require(j, "depot"), "depot");

    const json& robots = require(j, "robots");
    if (!robots.is_number_integer()) throw ParseError("robots", "expected an integer");
    s.robot_count = robots.get<int>();

    const json& cap = require(j, "task_cap");
    if (!cap.is_number_integer()) throw ParseError("task_cap", "expected an integer");
    s.task_cap = cap.get<int>();

    const json& tasks = require(j, "tasks");
    if (!tasks.is_array()) throw ParseError("tasks", "expected an array");
    for (const json& tj : tasks) {
        if (!tj.is_object()) throw ParseError("tasks", "expected task objects");
        const json& id = require(tj, "id");
        if (!id.is_number_integer()) throw ParseError("id", "expected an integer");
        Task t;
        t.id = id.get<int>();
        t.location = parse_point(require(tj, "loc"), "loc");
        s.tasks.push_back(t);
    }

    try {
        validate_scenario(s);
    } catch (const std::invalid_argument& e) {
        throw ParseError("scenario", e.what());
    }
    return s;
}

namespace {

json plan_to_json_value(const Plan& plan) {
    json routes = json::array();
    for (const Route& r : plan.routes) {
        routes.push_back({{"robot", r.robot_id}, {"nodes", r.nodes}, {"cost", r.cost}});
    }
    return {{"routes", routes},
            {"overall_cost", plan.overall_cost},
            {"agent_cost_stddev", plan.agent_cost_stddev}};
}

}  // namespace

std::string plan_to_json(const Plan& plan) { return plan_to_json_value(plan).dump(2) + "\n"; }

Plan plan_from_json(const std::string& text) {
    const json j = parse_text(text, "plan");
    if (!j.is_object()) throw ParseError("plan", "expected a JSON object");

    Plan plan;
    const json& routes = require(j, "routes");
    if (!routes.is_array()) throw ParseError("routes", "expected an array");
    for (const json& rj : routes) {
        Route r;
        const json& robot = require(rj, "robot");
        if (!robot.is_number_integer()) throw ParseError("robot", "expected an integer");
        r.robot_id = robot.get<int>();
        const json& nodes = require(rj, "nodes");
        if (!nodes.is_array()) throw ParseError("nodes", "expected an array");
        for (const json& nj : nodes) {
            if (!nj.is_number_integer()) throw ParseError("nodes", "expected integer node ids");
            r.nodes.push_back(nj.get<int>());
        }
        const json& cost = require(rj, "cost");
        if (!cost.is_number()) throw ParseError("cost", "expected a number");
        r.cost = cost.get<double>();
        plan.routes.push_back(std::move(r));
    }
    const json& overall = require(j, "overall_cost");
    if (!overall.is_number()) throw ParseError("overall_cost", "expected a number");
    plan.overall_cost = overall.get<double>();
    const json& sigma = require(j, "agent_cost_stddev");
    if (!sigma.is_number()) throw ParseError("agent_cost_stddev", "expected a number");
    plan.agent_cost_stddev = sigma.get<double>();
    return plan;
}

void save_plan(const Plan& plan, const std::filesystem::path& path) {
    spill(plan_to_json(plan), path);
}

Plan load_plan(const std::filesystem::path& path) { return plan_from_json(slurp(path)); }

std::string solution_to_json(const ExactSolution& sol, const CostMatrix& costs) {
    json routes = json::array();
    std::vector<double> agent_costs;
    for (std::size_t k = 0; k < sol.tours.size(); ++k) {
        const double c = tour_cost(sol.tours[k], costs);
        agent_costs.push_back(c);
        routes.push_back({{"robot", static_cast<int>(k)}, {"nodes", sol.tours[k]}, {"cost", c}});
    }
    double mean = 0.0;
    for (double c : agent_costs) mean += c;
    mean /= agent_costs.empty() ? 1.0 : static_cast<double>(agent_costs.size());
    double var = 0.0;
    for (double c : agent_costs) var += (c - mean) * (c - mean);
    const double sigma =
        agent_costs.empty() ? 0.0 : std::sqrt(var / static_cast<double>(agent_costs.size()));

    const json j = {{"routes", routes},
                    {"overall_cost", sol.objective},
                    {"agent_cost_stddev", sigma},
                    {"proven_optimal", sol.proven_optimal},
                    {"nodes_explored", sol.nodes_explored}};
    return j.dump(2) + "\n";
}

void write_trace_jsonl(const AllocationTrace& trace, std::ostream& out) {
    for (const IterationRecord& rec : trace.iterations) {
        json pairs = json::array();
        for (const auto& [r, n] : rec.matching.pairs) pairs.push_back(json::array({r, n}));
        json states = json::array();
        for (const RobotState& st : rec.states) {
            states.push_back({{"robot", st.robot_id},
                              {"node", st.current_node},
                              {"cumulative_cost", st.cumulative_cost},
                              {"tasks_done", st.tasks_done},
                              {"finished", st.finished}});
        }
        const json j = {{"iteration", rec.iteration},
                        {"robot_side", rec.graph.robot_vertices},
                        {"task_side", rec.graph.task_vertices},
                        {"edge_count", rec.graph.edges.size()},
                        {"matching", {{"pairs", pairs}, {"total_weight", rec.matching.total_weight}}},
                        {"remaining_tasks", rec.remaining_tasks},
                        {"states", states}};
        out << j.dump() << "\n";
    }
}

void write_trace_jsonl(const AllocationTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_trace_jsonl(trace, out);
    if (!out) throw IoError("failed while writing " + path.string());
}

}  // namespace decmata
