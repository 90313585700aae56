#pragma once

#include <iosfwd>
#include <string>

#include "eax/solver.hpp"

namespace eax {

/// JSON-lines run log: one `"type":"generation"` record per generation and a
/// final `"type":"summary"` record. Timing fields end in `_us` or `_seconds`.
std::string generation_json(const GenerationReport& report);
std::string summary_json(const Instance& inst, const SolverConfig& cfg, const RunResult& result);

/// Drops timing fields from every record of a log, for reproducibility diffs.
std::string strip_timing_fields(const std::string& jsonl);

}  // namespace eax
