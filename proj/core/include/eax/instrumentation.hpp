#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "eax/ab_cycle.hpp"
#include "eax/repair.hpp"
#include "eax/tour.hpp"

namespace eax {

struct OptimalEdgeCounts {
    int gained_cycle = 0;
    int lost_cycle = 0;
    int gained_repair = 0;
    int lost_repair = 0;

    friend bool operator==(const OptimalEdgeCounts&, const OptimalEdgeCounts&) = default;
};

/// One stage-I offspring attempt.
struct OffspringRecord {
    int portals = 0;
    int subtours = 1;
    bool accepted = false;  // passed the variant gate
    bool selected = false;  // replaced parent A
    bool repaired = false;
    Length length = 0;      // offspring length; 0 when not accepted
    std::optional<OptimalEdgeCounts> optimal_edges;
    std::chrono::nanoseconds check_time{0};
    std::chrono::nanoseconds repair_time{0};
};

/// Optimal-edge bookkeeping for one offspring, computed from the parent and
/// the pre-repair offspring structure: cycle counts are |(E_C \ E_A) ∩ E_opt|
/// and |(E_A \ E_C) ∩ E_opt|, repair counts come from the repair ledger only.
/// Returns nullopt when no optimal tour is known.
std::optional<OptimalEdgeCounts> optimal_edge_ledger(const std::optional<Tour>& optimal, const Tour& parent_a,
                                                     const VertexDegreeStructure& offspring_pre_repair,
                                                     const RepairOutcome* repair);

/// Same counts from the applied E-set directly; O(E-set + ledger).
OptimalEdgeCounts optimal_edge_counts(const Tour& optimal, const ESet& e, const RepairOutcome* repair);

struct TypeCell {
    std::int64_t attempts = 0;
    std::int64_t accepted = 0;
    std::int64_t selected = 0;
    std::int64_t repairs = 0;
    std::int64_t opt_gained_cycle = 0;
    std::int64_t opt_lost_cycle = 0;
    std::int64_t opt_gained_repair = 0;
    std::int64_t opt_lost_repair = 0;
    std::int64_t instrumented = 0;  // attempts carrying optimal-edge counts

    TypeCell& operator+=(const TypeCell& o);
};

/// Stage-I AB-cycle types keyed by (portals, subtours).
class TypeHistogram {
public:
    using Key = std::pair<int, int>;

    void record(const OffspringRecord& r);
    void merge(const TypeHistogram& other);

    const std::map<Key, TypeCell>& cells() const noexcept { return cells_; }
    std::int64_t total_attempts() const;

private:
    std::map<Key, TypeCell> cells_;
};

/// Median and mean over recorded durations (microseconds).
class TimingSample {
public:
    void add(std::chrono::nanoseconds d);
    void merge(const TimingSample& other);
    std::size_t count() const noexcept { return count_; }
    double mean_us() const;
    double median_us() const;

private:
    static constexpr std::size_t kMaxSamples = 200000;
    std::vector<std::int64_t> samples_ns_;
    std::size_t count_ = 0;
    std::int64_t total_ns_ = 0;
};

}  // namespace eax
