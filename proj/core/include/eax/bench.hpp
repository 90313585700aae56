#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eax/instrumentation.hpp"
#include "eax/solver.hpp"

namespace eax {

struct RunTime {
    bool solved = false;
    double seconds = 0.0;
};

/// Mean runtime with every unsolved run charged 10 x cutoff.
/// Throws std::invalid_argument on an empty list.
double par10(std::span<const RunTime> runs, double cutoff_seconds);

struct GridConfig {
    std::vector<std::string> instance_globs;  // relative to base_dir
    std::vector<Variant> variants;
    std::vector<std::uint64_t> seeds;
    double cutoff_seconds = 60.0;
    std::filesystem::path output_dir = "bench_out";
    bool instrument = false;
    std::optional<std::filesystem::path> ratio_mask_file;
    int workers = 1;
    std::filesystem::path base_dir = ".";
    /// Population size, offspring counts etc.; variant, seed, cutoff and
    /// target are filled in per run.
    SolverConfig solver;

    /// Keys: instances, variants, seeds, cutoff, output_dir, instrument,
    /// ratio_mask, workers, population, children_s1, children_s2,
    /// stagnation, max_generations, restart. Relative paths resolve
    /// against `base_dir`.
    static GridConfig from_json(std::string_view text, const std::filesystem::path& base_dir = ".");
};

struct RunRow {
    std::string instance;
    Variant variant = Variant::Vanilla;
    std::uint64_t seed = 0;
    std::string status;  // solved | timeout | converged | no_target | error
    bool solved = false;
    Length found_length = 0;
    std::optional<Length> target;
    std::int64_t generations = 0;
    int restarts = 0;
    std::int64_t stage1_attempts = 0;
    std::int64_t stage1_repairs = 0;
    double wall_seconds = 0.0;
    std::string error;
};

struct Par10Cell {
    std::string instance;
    Variant variant = Variant::Vanilla;
    int runs = 0;
    int solved = 0;
    double par10_seconds = 0.0;
};

struct BenchResult {
    std::vector<RunRow> rows;  // sorted by (instance, variant, seed)
    std::vector<Par10Cell> par10;
    std::map<Variant, double> grand_mean_par10;
    std::map<Variant, TypeHistogram> histograms;
    std::map<Variant, TimingSample> check_times;
    std::map<Variant, TimingSample> repair_times;
    std::vector<std::string> parse_failures;

    int exit_code() const { return parse_failures.empty() ? 0 : 1; }
};

/// Expands the grid, runs every (instance, variant, seed) job on a bounded
/// worker pool and writes runs.csv (appended as runs finish, rewritten
/// sorted at the end), par10.csv, histogram.csv, timing.csv and, when
/// instrumenting, derived_mask.json into output_dir.
BenchResult run_grid(const GridConfig& config);

/// Sorted list of files matching a path whose last component may hold
/// shell wildcards.
std::vector<std::filesystem::path> expand_glob(const std::filesystem::path& pattern);

}  // namespace eax
