#include "eax/instrumentation.hpp"

#include <algorithm>
#include <stdexcept>

namespace eax {

std::optional<OptimalEdgeCounts> optimal_edge_ledger(const std::optional<Tour>& optimal, const Tour& parent_a,
                                                     const VertexDegreeStructure& offspring_pre_repair,
                                                     const RepairOutcome* repair) {
    if (!optimal) return std::nullopt;
    if (optimal->size() != parent_a.size() || offspring_pre_repair.size() != parent_a.size()) {
        throw std::invalid_argument("optimal_edge_ledger: dimension mismatch");
    }
    OptimalEdgeCounts out;
    for (const auto& e : offspring_pre_repair.edges()) {
        if (!parent_a.contains_edge(e) && optimal->contains_edge(e)) ++out.gained_cycle;
    }
    for (const auto& e : parent_a.edges()) {
        if (!offspring_pre_repair.has_edge(e.u, e.v) && optimal->contains_edge(e)) ++out.lost_cycle;
    }
    if (repair) {
        for (const auto& e : repair->edges_added) out.gained_repair += optimal->contains_edge(e);
        for (const auto& e : repair->edges_removed) out.lost_repair += optimal->contains_edge(e);
    }
    return out;
}

OptimalEdgeCounts optimal_edge_counts(const Tour& optimal, const ESet& e, const RepairOutcome* repair) {
    OptimalEdgeCounts out;
    for (const auto* cycle : e.cycles) {
        for (int i = 0; i < cycle->length(); ++i) {
            if (!optimal.contains_edge(cycle->edge(i))) continue;
            if (cycle->label(i) == EdgeLabel::A) {
                ++out.lost_cycle;
            } else {
                ++out.gained_cycle;
            }
        }
    }
    if (repair) {
        for (const auto& edge : repair->edges_added) out.gained_repair += optimal.contains_edge(edge);
        for (const auto& edge : repair->edges_removed) out.lost_repair += optimal.contains_edge(edge);
    }
    return out;
}

TypeCell& TypeCell::operator+=(const TypeCell& o) {
    attempts += o.attempts;
    accepted += o.accepted;
    selected += o.selected;
    repairs += o.repairs;
    opt_gained_cycle += o.opt_gained_cycle;
    opt_lost_cycle += o.opt_lost_cycle;
    opt_gained_repair += o.opt_gained_repair;
    opt_lost_repair += o.opt_lost_repair;
    instrumented += o.instrumented;
    return *this;
}

void TypeHistogram::record(const OffspringRecord& r) {
    auto& cell = cells_[{r.portals, r.subtours}];
    ++cell.attempts;
    cell.accepted += r.accepted;
    cell.selected += r.selected;
    cell.repairs += r.repaired;
    if (r.optimal_edges) {
        ++cell.instrumented;
        cell.opt_gained_cycle += r.optimal_edges->gained_cycle;
        cell.opt_lost_cycle += r.optimal_edges->lost_cycle;
        cell.opt_gained_repair += r.optimal_edges->gained_repair;
        cell.opt_lost_repair += r.optimal_edges->lost_repair;
    }
}

void TypeHistogram::merge(const TypeHistogram& other) {
    for (const auto& [key, cell] : other.cells_) cells_[key] += cell;
}

std::int64_t TypeHistogram::total_attempts() const {
    std::int64_t total = 0;
    for (const auto& [key, cell] : cells_) total += cell.attempts;
    return total;
}

void TimingSample::add(std::chrono::nanoseconds d) {
    ++count_;
    total_ns_ += d.count();
    if (samples_ns_.size() < kMaxSamples) samples_ns_.push_back(d.count());
}

void TimingSample::merge(const TimingSample& other) {
    count_ += other.count_;
    total_ns_ += other.total_ns_;
    for (const auto s : other.samples_ns_) {
        if (samples_ns_.size() >= kMaxSamples) break;
        samples_ns_.push_back(s);
    }
}

double TimingSample::mean_us() const {
    return count_ == 0 ? 0.0 : static_cast<double>(total_ns_) / static_cast<double>(count_) / 1000.0;
}

double TimingSample::median_us() const {
    if (samples_ns_.empty()) return 0.0;
    auto copy = samples_ns_;
    const auto mid = copy.begin() + static_cast<std::ptrdiff_t>(copy.size() / 2);
    std::nth_element(copy.begin(), mid, copy.end());
    return static_cast<double>(*mid) / 1000.0;
}

}  // namespace eax
