#include "decmata/harness.hpp"
#include "decmata/json_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace decmata;

void write_output(const std::string& text, const std::string& target) {
    if (target == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(target);
    if (!out) throw IoError("cannot open " + target + " for writing");
    out << text;
    if (!out) throw IoError("failed while writing " + target);
}

DecMataParams make_params(const std::string& mode, double k_b, double gamma,
                          std::uint64_t seed) {
    DecMataParams params;
    params.weights.k_b = k_b;
    params.fcm.gamma = gamma;
    params.seed = seed;
    if (mode == "fcm") {
        params.mode = MembershipMode::kFcm;
    } else if (mode.rfind("const:", 0) == 0) {
        params.mode = MembershipMode::kConstant;
        try {
            params.constant_membership = std::stod(mode.substr(6));
        } catch (const std::exception&) {
            throw std::invalid_argument("--mode const:<v> needs a numeric value");
        }
    } else {
        throw std::invalid_argument("--mode must be 'fcm' or 'const:<v>'");
    }
    return params;
}

std::vector<Algo> parse_algos(const std::string& csv) {
    std::vector<Algo> algos;
    std::istringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto algo = algo_from_name(item);
        if (!algo) throw std::invalid_argument("unknown algorithm '" + item + "'");
        algos.push_back(*algo);
    }
    if (algos.empty()) throw std::invalid_argument("--algos must name at least one algorithm");
    return algos;
}

std::vector<int> parse_cases(const std::string& csv) {
    std::vector<int> ids;
    if (csv == "all") {
        for (int k = 1; k <= 7; ++k) ids.push_back(k);
        return ids;
    }
    std::istringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const int id = std::stoi(item);
        if (id < 1 || id > 7) throw std::invalid_argument("case ids run from 1 to 7");
        ids.push_back(id);
    }
    if (ids.empty()) throw std::invalid_argument("--cases must name at least one case");
    return ids;
}

int report_error(const std::string& type, const std::string& message) {
    const nlohmann::json j = {{"error", {{"type", type}, {"message", message}}}};
    std::cerr << j.dump() << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decentralized multi-robot task allocation toolkit"};
    app.require_subcommand(1);

    // gen
    std::uint64_t gen_seed = 0;
    int gen_m = 2;
    int gen_n = 10;
    double gen_extent = 10.0;
    std::string gen_out = "-";
    auto* gen = app.add_subcommand("gen", "generate a random scenario as JSON");
    gen->add_option("--seed", gen_seed, "scenario seed");
    gen->add_option("-m,--robots", gen_m, "number of robots")->required();
    gen->add_option("-n,--tasks", gen_n, "number of tasks")->required();
    gen->add_option("--extent", gen_extent, "arena side length")->capture_default_str();
    gen->add_option("-o,--out", gen_out, "output file or - for stdout")->capture_default_str();

    // allocate
    std::string alloc_scenario;
    std::string alloc_mode = "fcm";
    double alloc_kb = 1000.0;
    double alloc_gamma = 2.0;
    std::optional<std::uint64_t> alloc_seed;
    std::string alloc_out = "-";
    std::string alloc_trace;
    std::string alloc_memberships;
    std::string alloc_bigraphs;
    auto* alloc = app.add_subcommand("allocate", "run the decentralized allocation");
    alloc->add_option("scenario", alloc_scenario, "scenario JSON file")->required();
    alloc->add_option("--mode", alloc_mode, "fcm or const:<v>")->capture_default_str();
    alloc->add_option("--kb", alloc_kb, "edge weight scale")->capture_default_str();
    alloc->add_option("--gamma", alloc_gamma, "clustering fuzzifier")->capture_default_str();
    alloc->add_option("--seed", alloc_seed, "override the scenario seed");
    alloc->add_option("--trace", alloc_trace, "write a JSONL decision trace here");
    alloc->add_option("--dump-memberships", alloc_memberships, "write the membership matrix CSV");
    alloc->add_option("--dump-bigraphs", alloc_bigraphs,
                      "prefix for per-iteration edge list CSVs");
    alloc->add_option("-o,--out", alloc_out, "plan output file or - for stdout")->capture_default_str();

    // baseline
    std::string base_scenario;
    double base_budget = 10.0;
    std::string base_out = "-";
    auto* base = app.add_subcommand("baseline", "solve the centralized model exactly");
    base->add_option("scenario", base_scenario, "scenario JSON file")->required();
    base->add_option("--budget-s", base_budget, "search budget in seconds")->capture_default_str();
    base->add_option("-o,--out", base_out, "solution output file or - for stdout")->capture_default_str();

    // emit-lp
    std::string lp_scenario;
    std::string lp_out;
    auto* lp = app.add_subcommand("emit-lp", "write the centralized model as an LP file");
    lp->add_option("scenario", lp_scenario, "scenario JSON file")->required();
    lp->add_option("-o,--out", lp_out, "LP output path")->required();

    // bench
    std::string bench_cases = "all";
    int bench_reps = 10;
    std::string bench_algos = "dm,dmnf1,dmnf001";
    std::uint64_t bench_seed = 42;
    std::string bench_format = "csv";
    double bench_budget = 10.0;
    int bench_exact_cap = 12;
    std::string bench_cnt_dir;
    bool bench_no_timing = false;
    std::string bench_out = "-";
    auto* bench = app.add_subcommand("bench", "run the benchmark case table");
    bench->add_option("--cases", bench_cases, "comma-separated case ids or 'all'")->capture_default_str();
    bench->add_option("--reps", bench_reps, "repetitions per case")->capture_default_str();
    bench->add_option("--algos", bench_algos, "cnt,dm,dmnf1,dmnf001")->capture_default_str();
    bench->add_option("--base-seed", bench_seed, "seed of repetition 0")->capture_default_str();
    bench->add_option("--format", bench_format, "csv or json")->capture_default_str();
    bench->add_option("--budget-s", bench_budget, "exact-solver budget per instance")->capture_default_str();
    bench->add_option("--exact-max-tasks", bench_exact_cap,
                      "largest n the internal exact solver accepts")->capture_default_str();
    bench->add_option("--cnt-dir", bench_cnt_dir,
                      "directory of external centralized solutions (case<k>_rep<r>.json)");
    bench->add_flag("--no-timing", bench_no_timing, "report zero wall times (stable output)");
    bench->add_option("-o,--out", bench_out, "report output file or - for stdout")->capture_default_str();

    // verify
    std::string verify_scenario;
    std::string verify_plan_path;
    auto* verify = app.add_subcommand("verify", "check a plan against a scenario");
    verify->add_option("scenario", verify_scenario, "scenario JSON file")->required();
    verify->add_option("plan", verify_plan_path, "plan JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const Scenario s = generate_scenario(gen_seed, gen_m, gen_n, gen_extent);
            write_output(scenario_to_json(s), gen_out);
        } else if (alloc->parsed()) {
            const Scenario s = load_scenario(alloc_scenario);
            const DecMataParams params =
                make_params(alloc_mode, alloc_kb, alloc_gamma, alloc_seed.value_or(s.seed));
            const AllocationResult result = allocate(s, params);
            write_output(plan_to_json(result.plan), alloc_out);
            if (!alloc_trace.empty()) write_trace_jsonl(result.trace, alloc_trace);
            if (!alloc_memberships.empty()) {
                if (!result.trace.memberships) {
                    throw std::invalid_argument(
                        "--dump-memberships requires --mode fcm (no clustering was run)");
                }
                write_membership_csv(*result.trace.memberships, alloc_memberships);
            }
            if (!alloc_bigraphs.empty()) {
                for (const IterationRecord& rec : result.trace.iterations) {
                    if (rec.iteration == 0) continue;
                    write_bigraph_csv(rec.graph, alloc_bigraphs + "iter" +
                                                     std::to_string(rec.iteration) + ".csv");
                }
            }
        } else if (base->parsed()) {
            const Scenario s = load_scenario(base_scenario);
            const CostMatrix costs = cost_matrix(s);
            const MilpModel model = build_milp(costs, s.robot_count, s.task_cap);
            const ExactSolution sol =
                solve_exact(model, std::chrono::duration<double>(base_budget));
            write_output(solution_to_json(sol, costs), base_out);
        } else if (lp->parsed()) {
            const Scenario s = load_scenario(lp_scenario);
            const MilpModel model = build_milp(cost_matrix(s), s.robot_count, s.task_cap);
            emit_lp(model, lp_out);
        } else if (bench->parsed()) {
            HarnessConfig cfg;
            cfg.solver_budget_s = bench_budget;
            cfg.exact_max_tasks = bench_exact_cap;
            cfg.record_timing = !bench_no_timing;
            if (!bench_cnt_dir.empty()) cfg.external_cnt_dir = bench_cnt_dir;
            const std::vector<Algo> algos = parse_algos(bench_algos);
            const std::vector<int> ids = parse_cases(bench_cases);
            const std::vector<CaseSpec> all = table_cases(bench_seed);
            std::vector<SummaryRow> rows;
            for (int id : ids) {
                CaseSpec spec = all[static_cast<std::size_t>(id - 1)];
                spec.repetitions = bench_reps;
                const auto case_rows = run_case(spec, algos, cfg);
                rows.insert(rows.end(), case_rows.begin(), case_rows.end());
            }
            std::ostringstream report;
            if (bench_format == "csv") {
                emit_report_csv(rows, report);
            } else if (bench_format == "json") {
                emit_report_json(rows, report);
            } else {
                throw std::invalid_argument("--format must be csv or json");
            }
            write_output(report.str(), bench_out);
        } else if (verify->parsed()) {
            const Scenario s = load_scenario(verify_scenario);
            const Plan plan = load_plan(verify_plan_path);
            const std::vector<Violation> violations = verify_plan(s, plan);
            nlohmann::json arr = nlohmann::json::array();
            for (const Violation& v : violations) {
                arr.push_back({{"code", v.code}, {"message", v.message}});
            }
            std::cout << nlohmann::json{{"violations", arr}}.dump(2) << "\n";
            if (!violations.empty()) {
                const nlohmann::json err = {
                    {"error",
                     {{"type", "plan_violations"},
                      {"message", std::to_string(violations.size()) + " violation(s) found"}}}};
                std::cerr << err.dump() << "\n";
                return 2;
            }
        }
    } catch (const ParseError& e) {
        return report_error("parse_error", e.what());
    } catch (const TimeoutError& e) {
        return report_error("timeout", e.what());
    } catch (const IoError& e) {
        return report_error("io_error", e.what());
    } catch (const StateError& e) {
        return report_error("state_error", e.what());
    } catch (const std::out_of_range& e) {
        return report_error("index_error", e.what());
    } catch (const std::invalid_argument& e) {
        return report_error("invalid_parameter", e.what());
    } catch (const std::exception& e) {
        return report_error("internal", e.what());
    }
    return 0;
}
