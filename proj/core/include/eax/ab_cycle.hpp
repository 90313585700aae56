#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "eax/instance.hpp"
#include "eax/tour.hpp"

namespace eax {

using Rng = std::mt19937_64;

enum class EdgeLabel : std::uint8_t { A, B };

/// G_AB with edges present in both parents already cancelled. Each vertex
/// keeps up to two A-labeled and two B-labeled incident edges.
class UnionGraph {
public:
    UnionGraph(const Tour& a, const Tour& b);

    int size() const noexcept { return static_cast<int>(a_adj_.size()); }

    std::span<const Vertex> links(Vertex v, EdgeLabel label) const {
        const auto& adj = label == EdgeLabel::A ? a_adj_[v] : b_adj_[v];
        const auto deg = label == EdgeLabel::A ? a_deg_[v] : b_deg_[v];
        return {adj.data(), deg};
    }

    /// Number of uncancelled labeled edges (A and B together).
    int edge_count() const noexcept { return edge_count_; }
    bool empty() const noexcept { return edge_count_ == 0; }

private:
    friend class CycleTracer;
    std::vector<std::array<Vertex, 2>> a_adj_;
    std::vector<std::array<Vertex, 2>> b_adj_;
    std::vector<std::uint8_t> a_deg_;
    std::vector<std::uint8_t> b_deg_;
    int edge_count_ = 0;
};

/// Alternating cycle over G_AB. `chain()[i] -- chain()[i+1]` is an A edge for
/// even i and a B edge for odd i; the closing edge is a B edge.
class ABCycle {
public:
    explicit ABCycle(std::vector<Vertex> chain);

    const std::vector<Vertex>& chain() const noexcept { return chain_; }
    int length() const noexcept { return static_cast<int>(chain_.size()); }

    EdgeKey edge(int i) const { return {chain_[i], chain_[(i + 1) % length()]}; }
    EdgeLabel label(int i) const { return i % 2 == 0 ? EdgeLabel::A : EdgeLabel::B; }

    std::vector<EdgeKey> a_edges() const;
    std::vector<EdgeKey> b_edges() const;

    /// Vertices appearing once in the chain (two internal edges), sorted by id.
    std::vector<Vertex> portals() const;
    /// Vertices appearing twice (four internal edges), sorted by id.
    std::vector<Vertex> b_vertices() const;

    /// Length change when applied alone to parent A (sum B - sum A).
    Length gain_delta(const Instance& inst) const;

    /// `1 -A- 5 -B- 3 -A- ...` with 1-based ids, closing back to the first vertex.
    std::string dump() const;

private:
    std::vector<Vertex> chain_;
};

/// AB-cycles applied jointly. Refers to cycles owned elsewhere (typically
/// the traced pool of a parent pair), which must outlive the E-set.
struct ESet {
    std::vector<const ABCycle*> cycles;

    ESet() = default;
    explicit ESet(const ABCycle& single) : cycles{&single} {}

    bool empty() const noexcept { return cycles.empty(); }
    /// #C of the union: vertices covered by exactly two internal edges.
    int combined_portal_count() const;
    Length gain_delta(const Instance& inst) const;
};

/// Traces a complete AB-cycle decomposition by random alternating walks.
std::vector<ABCycle> trace_ab_cycles(const UnionGraph& g, Rng& rng);
std::vector<ABCycle> trace_ab_cycles(const UnionGraph& g, std::uint64_t seed);

/// 2-regular edge structure that may consist of several cycles.
class VertexDegreeStructure {
public:
    static constexpr Vertex kNone = -1;

    VertexDegreeStructure() = default;
    explicit VertexDegreeStructure(int n) : adj_(n, {kNone, kNone}) {}
    static VertexDegreeStructure from_tour(const Tour& t);
    /// Throws std::invalid_argument if an edge would exceed degree 2.
    static VertexDegreeStructure from_edges(int n, std::span<const EdgeKey> edges);

    int size() const noexcept { return static_cast<int>(adj_.size()); }
    const std::array<Vertex, 2>& neighbors(Vertex v) const { return adj_[v]; }
    bool has_edge(Vertex u, Vertex v) const { return adj_[u][0] == v || adj_[u][1] == v; }

    /// Removes {u,v}; returns false if absent.
    bool remove_edge(Vertex u, Vertex v);
    /// Adds {u,v}; returns false if either endpoint already has degree 2.
    bool add_edge(Vertex u, Vertex v);

    bool is_two_regular() const;
    std::vector<EdgeKey> edges() const;

private:
    std::vector<std::array<Vertex, 2>> adj_;
};

/// E_C = (E_A \ E_A∩E_cAB) ∪ (E_B ∩ E_cAB). Throws std::invalid_argument if
/// an A-labeled edge is not in `a` or a B-labeled edge is not in `b`.
VertexDegreeStructure apply_eset(const Tour& a, const Tour& b, const ESet& e);

/// Connected components as vertex cycles, each starting at its lowest id,
/// ordered by that id. Throws std::invalid_argument if `s` is not 2-regular.
std::vector<std::vector<Vertex>> enumerate_subtours(const VertexDegreeStructure& s);

/// Component count only; same contract as enumerate_subtours.
int count_subtours(const VertexDegreeStructure& s);

/// Throws std::invalid_argument unless `s` is a single Hamiltonian cycle.
Tour tour_from_structure(const Instance& inst, const VertexDegreeStructure& s);

}  // namespace eax
