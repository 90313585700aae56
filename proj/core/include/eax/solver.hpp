#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eax/ab_cycle.hpp"
#include "eax/instance.hpp"
#include "eax/instrumentation.hpp"
#include "eax/tour.hpp"
#include "eax/validity.hpp"

namespace eax {

enum class Variant { Vanilla, OnlyComplete, RatioBased };

std::string_view to_string(Variant v);
/// Accepts "vanilla", "only_complete", "ratio_based" (and '-' for '_').
std::optional<Variant> parse_variant(std::string_view name);

/// Stage-I admission table over (portals, subtours) AB-cycle types. Cells
/// without an explicit entry follow default_rule().
class RatioMask {
public:
    using Key = std::pair<int, int>;

    /// Accept iff subtours == 1 or subtours <= max(1, portals / 4).
    static bool default_rule(int portals, int subtours);

    bool accepts(int portals, int subtours) const;
    /// Throws std::invalid_argument when rejecting a single-subtour type.
    void set(int portals, int subtours, bool accept);
    const std::map<Key, bool>& entries() const noexcept { return entries_; }

    /// JSON object mapping "portals,subtours" to booleans.
    static RatioMask from_json(std::string_view text);
    std::string to_json() const;

    /// Keeps the types whose summed optimal edges gained exceed those lost;
    /// types without instrumented attempts keep the default rule.
    static RatioMask from_histogram(const TypeHistogram& histogram);

private:
    std::map<Key, bool> entries_;
};

struct SolverConfig {
    int population_size = 100;
    int n_children_stage1 = 30;
    int n_children_stage2 = 20;
    Variant variant = Variant::Vanilla;
    RatioMask ratio_mask;
    int stagnation_generations = 50;
    bool restart = true;
    std::chrono::duration<double> cutoff{60.0};
    std::optional<Length> target;
    std::uint64_t seed = 1;
    /// Neighbour list size used when the harness loads instances.
    int neighbor_k = kDefaultNeighborCount;
    /// Hard cap on generations over all restarts.
    std::optional<std::int64_t> max_generations;
    /// Record optimal-edge ledgers (requires an optimal tour on the instance).
    bool instrument = false;
    bool keep_offspring_records = false;
    int tabu_tenure = 3;

    /// Throws std::invalid_argument on non-positive counts.
    void validate() const;
};

struct GenerationReport {
    std::int64_t generation = 0;
    int restart = 0;
    int stage = 1;
    Length best = 0;
    double mean = 0.0;
    Length worst = 0;
    int attempts = 0;
    int offspring = 0;
    int selected = 0;
    int repairs = 0;
    std::chrono::nanoseconds elapsed{0};
    std::vector<OffspringRecord> records;
};

struct RunResult {
    Tour best;
    bool target_hit = false;
    bool timed_out = false;
    std::string termination;  // target | cutoff | converged | max_generations
    double wall_seconds = 0.0;
    std::int64_t generations = 0;
    int restarts = 0;
    std::int64_t stage1_attempts = 0;
    std::int64_t stage1_repairs = 0;
    std::int64_t stage2_repairs = 0;
    TypeHistogram histogram;
    TimingSample check_times;
    TimingSample repair_times;

    Length best_length() const noexcept { return best.length(); }
};

struct StageOneOutcome {
    bool no_offspring = false;  // parents share every edge
    std::optional<Tour> best_child;
    int best_record = -1;       // index into records
    std::vector<OffspringRecord> records;
};

/// Generates up to n_children_stage1 offspring from (a, b), each by applying
/// one AB-cycle drawn without replacement from one random decomposition.
/// Gated variants skip cycles rejected by their gate; rejected attempts are
/// recorded with accepted = false.
StageOneOutcome stage1_offspring(const Instance& inst, const Tour& a, const Tour& b, const SolverConfig& cfg,
                                 Rng& rng, ValidityChecker& checker, const std::optional<Tour>& optimal = {});

struct StageTwoSearch {
    ESet eset;
    int combined_portals = 0;
    int iterations = 0;
};

/// Tabu search over unions of `pool` cycles minimising #C, starting from one
/// random cycle; at most 20 iterations, stops early at #C <= 2.
class StageTwoSearcher {
public:
    StageTwoSearcher(std::span<const ABCycle> pool, int dimension, int tabu_tenure = 3);
    StageTwoSearch run(Rng& rng);

    static constexpr int kMaxIterations = 20;

private:
    int toggle_delta(int cycle, bool adding) const;
    void toggle(int cycle);

    std::span<const ABCycle> pool_;
    int tenure_;
    std::vector<std::vector<std::pair<Vertex, int>>> members_;  // (vertex, multiplicity)
    std::vector<std::array<int, 2>> cycles_at_;                 // per vertex, -1 padded
    std::vector<std::uint8_t> degree_;                          // occurrences in current union
    std::vector<char> in_set_;
    int set_size_ = 0;
    int c_count_ = 0;
};

StageTwoSearch stage2_eset(std::span<const ABCycle> pool, int dimension, Rng& rng, int tabu_tenure = 3);

struct StageTwoOutcome {
    bool no_offspring = false;
    std::optional<Tour> best_child;
    int offspring = 0;
    int repairs = 0;
};

StageTwoOutcome stage2_offspring(const Instance& inst, const Tour& a, const Tour& b, const SolverConfig& cfg,
                                 Rng& rng, TimingSample* repair_times = nullptr);

using GenerationCallback = std::function<void(const GenerationReport&)>;

/// Runs the generational GA. Deterministic in (inst, cfg) apart from where a
/// wall-clock cutoff interrupts the run.
RunResult evolve(const Instance& inst, const SolverConfig& cfg, const GenerationCallback& on_generation = {});

}  // namespace eax
