#pragma once

#include "decmata/allocator.hpp"
#include "decmata/baseline.hpp"
#include "decmata/scenario.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace decmata {

enum class Algo { kCentralized, kDecMata, kNoFcm1, kNoFcm001 };

std::string algo_name(Algo a);                 // CNT, DM, DMNF_1, DMNF_001
std::optional<Algo> algo_from_name(const std::string& name);

struct CaseSpec {
    int case_id = 0;
    int n = 0;
    int m = 0;
    int h = 0;
    int repetitions = 10;
    std::uint64_t base_seed = 0;
    double extent = 10.0;
};

/// The seven benchmark size classes (n, m) with h from max_tasks_per_robot.
std::vector<CaseSpec> table_cases(std::uint64_t base_seed);

struct RunResult {
    Algo algo = Algo::kDecMata;
    double overall_cost = 0.0;
    std::vector<double> agent_costs;
    double wall_time_s = 0.0;
    bool proven_optimal = false;  // meaningful for the centralized solver only
};

struct SummaryRow {
    int case_id = 0;
    int n = 0;
    int m = 0;
    int h = 0;
    Algo algo = Algo::kDecMata;
    double mean_cost = 0.0;
    double mean_sigma = 0.0;
    double mean_time_s = 0.0;
    std::optional<double> gap_vs_cnt;
};

struct HarnessConfig {
    double solver_budget_s = 10.0;
    int exact_max_tasks = 12;  // centralized runs refuse larger n without external results
    bool record_timing = true;
    std::optional<std::filesystem::path> external_cnt_dir;  // case<k>_rep<r>.json solutions
    double k_b = 1000.0;
    double gamma = 2.0;
};

struct RepetitionResult {
    Scenario scenario;
    std::vector<RunResult> results;
};

/// Runs every requested algorithm on the identical scenario of one
/// repetition (seed = base_seed + rep). Wall time covers the allocation or
/// solve call only.
RepetitionResult run_repetition(const CaseSpec& spec, int rep, const std::vector<Algo>& algos,
                                const HarnessConfig& cfg = {});

std::vector<SummaryRow> run_case(const CaseSpec& spec, const std::vector<Algo>& algos,
                                 const HarnessConfig& cfg = {});

/// Population standard deviation; empty input is a parameter error.
double agent_cost_stddev(const std::vector<double>& costs);

void emit_report_csv(const std::vector<SummaryRow>& rows, std::ostream& out);
void emit_report_json(const std::vector<SummaryRow>& rows, std::ostream& out);

}  // namespace decmata
