#include "decmata/harness.hpp"

#include "decmata/json_io.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace decmata {

namespace {

constexpr std::pair<int, int> kCaseSizes[] = {
    {10, 2}, {12, 4}, {24, 8}, {20, 10}, {60, 20}, {80, 4}, {100, 50}};

double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

std::string format_cell(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string algo_name(Algo a) {
    switch (a) {
        case Algo::kCentralized: return "CNT";
        case Algo::kDecMata: return "DM";
        case Algo::kNoFcm1: return "DMNF_1";
        case Algo::kNoFcm001: return "DMNF_001";
    }
    return "?";
}

std::optional<Algo> algo_from_name(const std::string& name) {
    if (name == "CNT" || name == "cnt") return Algo::kCentralized;
    if (name == "DM" || name == "dm") return Algo::kDecMata;
    if (name == "DMNF_1" || name == "dmnf1") return Algo::kNoFcm1;
    if (name == "DMNF_001" || name == "dmnf001") return Algo::kNoFcm001;
    return std::nullopt;
}

std::vector<CaseSpec> table_cases(std::uint64_t base_seed) {
    std::vector<CaseSpec> cases;
    int id = 1;
    for (const auto& [n, m] : kCaseSizes) {
        CaseSpec spec;
        spec.case_id = id++;
        spec.n = n;
        spec.m = m;
        spec.h = max_tasks_per_robot(n, m);
        spec.base_seed = base_seed;
        cases.push_back(spec);
    }
    return cases;
}

double agent_cost_stddev(const std::vector<double>& costs) {
    if (costs.empty()) throw std::invalid_argument("agent_cost_stddev: empty cost list");
    const double mean = mean_of(costs);
    double var = 0.0;
    for (double c : costs) var += (c - mean) * (c - mean);
    return std::sqrt(var / static_cast<double>(costs.size()));
}

namespace {

RunResult run_decentralized(const Scenario& scenario, Algo algo, const HarnessConfig& cfg) {
    DecMataParams params;
    params.weights.k_b = cfg.k_b;
    params.fcm.gamma = cfg.gamma;
    params.seed = scenario.seed;
    switch (algo) {
        case Algo::kDecMata: params.mode = MembershipMode::kFcm; break;
        case Algo::kNoFcm1:
            params.mode = MembershipMode::kConstant;
            params.constant_membership = 1.0;
            break;
        case Algo::kNoFcm001:
            params.mode = MembershipMode::kConstant;
            params.constant_membership = 0.01;
            break;
        default: throw std::invalid_argument("run_decentralized: not a decentralized algorithm");
    }

    const auto t0 = std::chrono::steady_clock::now();
    const AllocationResult result = allocate(scenario, params);
    const auto t1 = std::chrono::steady_clock::now();

    RunResult run;
    run.algo = algo;
    run.overall_cost = result.plan.overall_cost;
    for (const Route& r : result.plan.routes) run.agent_costs.push_back(r.cost);
    run.wall_time_s = cfg.record_timing ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
    return run;
}

RunResult run_centralized(const CaseSpec& spec, int rep, const Scenario& scenario,
                          const HarnessConfig& cfg) {
    const CostMatrix costs = cost_matrix(scenario);
    RunResult run;
    run.algo = Algo::kCentralized;

    if (scenario.task_count() > cfg.exact_max_tasks) {
        if (!cfg.external_cnt_dir) {
            throw std::invalid_argument(
                "centralized solve unsupported at n=" + std::to_string(scenario.task_count()) +
                ": exceeds the exact-solver size limit and no external result directory is set");
        }
        const auto path = *cfg.external_cnt_dir /
                          ("case" + std::to_string(spec.case_id) + "_rep" + std::to_string(rep) +
                           ".json");
        const Plan plan = load_plan(path);
        run.overall_cost = overall_cost(plan, costs);
        for (const Route& r : plan.routes) run.agent_costs.push_back(tour_cost(r.nodes, costs));
        run.proven_optimal = false;
        return run;
    }

    const MilpModel model = build_milp(costs, scenario.robot_count, scenario.task_cap);
    const auto t0 = std::chrono::steady_clock::now();
    const ExactSolution sol =
        solve_exact(model, std::chrono::duration<double>(cfg.solver_budget_s));
    const auto t1 = std::chrono::steady_clock::now();

    run.overall_cost = sol.objective;
    for (const auto& tour : sol.tours) run.agent_costs.push_back(tour_cost(tour, costs));
    run.proven_optimal = sol.proven_optimal;
    run.wall_time_s = cfg.record_timing ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
    return run;
}

}  // namespace

RepetitionResult run_repetition(const CaseSpec& spec, int rep, const std::vector<Algo>& algos,
                                const HarnessConfig& cfg) {
    RepetitionResult out;
    out.scenario = generate_scenario(spec.base_seed + static_cast<std::uint64_t>(rep), spec.m,
                                     spec.n, spec.extent);
    for (Algo algo : algos) {
        if (algo == Algo::kCentralized) {
            out.results.push_back(run_centralized(spec, rep, out.scenario, cfg));
        } else {
            out.results.push_back(run_decentralized(out.scenario, algo, cfg));
        }
    }
    return out;
}

std::vector<SummaryRow> run_case(const CaseSpec& spec, const std::vector<Algo>& algos,
                                 const HarnessConfig& cfg) {
    if (spec.repetitions < 1) throw std::invalid_argument("run_case: repetitions must be >= 1");

    std::vector<std::vector<double>> costs(algos.size());
    std::vector<std::vector<double>> sigmas(algos.size());
    std::vector<std::vector<double>> times(algos.size());
    for (int rep = 0; rep < spec.repetitions; ++rep) {
        const RepetitionResult rr = run_repetition(spec, rep, algos, cfg);
        for (std::size_t a = 0; a < algos.size(); ++a) {
            costs[a].push_back(rr.results[a].overall_cost);
            sigmas[a].push_back(agent_cost_stddev(rr.results[a].agent_costs));
            times[a].push_back(rr.results[a].wall_time_s);
        }
    }

    std::optional<double> cnt_mean;
    for (std::size_t a = 0; a < algos.size(); ++a) {
        if (algos[a] == Algo::kCentralized) cnt_mean = mean_of(costs[a]);
    }

    std::vector<SummaryRow> rows;
    for (std::size_t a = 0; a < algos.size(); ++a) {
        SummaryRow row;
        row.case_id = spec.case_id;
        row.n = spec.n;
        row.m = spec.m;
        row.h = spec.h;
        row.algo = algos[a];
        row.mean_cost = mean_of(costs[a]);
        row.mean_sigma = mean_of(sigmas[a]);
        row.mean_time_s = mean_of(times[a]);
        if (cnt_mean) row.gap_vs_cnt = row.mean_cost / *cnt_mean - 1.0;
        rows.push_back(row);
    }
    return rows;
}

void emit_report_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
    out << "case,n,m,h,algorithm,mean_cost,mean_sigma,mean_time_s,gap_vs_cnt\n";
    for (const SummaryRow& r : rows) {
        out << r.case_id << "," << r.n << "," << r.m << "," << r.h << "," << algo_name(r.algo)
            << "," << format_cell(r.mean_cost) << "," << format_cell(r.mean_sigma) << ","
            << format_cell(r.mean_time_s) << ",";
        if (r.gap_vs_cnt) out << format_cell(*r.gap_vs_cnt);
        out << "\n";
    }
}

void emit_report_json(const std::vector<SummaryRow>& rows, std::ostream& out) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SummaryRow& r : rows) {
        nlohmann::json j = {{"case", r.case_id},     {"n", r.n},
                            {"m", r.m},              {"h", r.h},
                            {"algorithm", algo_name(r.algo)}, {"mean_cost", r.mean_cost},
                            {"mean_sigma", r.mean_sigma},     {"mean_time_s", r.mean_time_s}};
        j["gap_vs_cnt"] = r.gap_vs_cnt ? nlohmann::json(*r.gap_vs_cnt) : nlohmann::json();
        arr.push_back(j);
    }
    out << arr.dump(2) << "\n";
}

}  // namespace decmata
