#pragma once

#include "decmata/allocator.hpp"
#include "decmata/baseline.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace decmata {

std::string scenario_to_json(const Scenario& s);

std::string plan_to_json(const Plan& plan);
Plan plan_from_json(const std::string& text);
void save_plan(const Plan& plan, const std::filesystem::path& path);
Plan load_plan(const std::filesystem::path& path);

std::string solution_to_json(const ExactSolution& sol, const CostMatrix& costs);

/// One JSON record per decision iteration.
void write_trace_jsonl(const AllocationTrace& trace, std::ostream& out);
void write_trace_jsonl(const AllocationTrace& trace, const std::filesystem::path& path);

}  // namespace decmata
