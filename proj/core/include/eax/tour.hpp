#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eax/instance.hpp"

namespace eax {

/// Hamiltonian cycle stored as a visit order plus its inverse position index.
class Tour {
public:
    Tour() = default;
    /// Validates `order` as a permutation of the instance's vertices and
    /// computes the length. Throws std::invalid_argument otherwise.
    Tour(const Instance& inst, std::vector<Vertex> order);

    int size() const noexcept { return static_cast<int>(order_.size()); }
    Length length() const noexcept { return length_; }
    const std::vector<Vertex>& order() const noexcept { return order_; }
    const std::vector<int>& positions() const noexcept { return pos_; }

    Vertex at(int i) const noexcept { return order_[i]; }
    int pos(Vertex v) const noexcept { return pos_[v]; }
    Vertex next(Vertex v) const noexcept {
        const int i = pos_[v] + 1;
        return order_[i == size() ? 0 : i];
    }
    Vertex prev(Vertex v) const noexcept {
        const int i = pos_[v];
        return order_[i == 0 ? size() - 1 : i - 1];
    }

    /// Constant-time edge membership via the position index.
    bool contains_edge(Vertex u, Vertex v) const noexcept { return next(u) == v || prev(u) == v; }
    bool contains_edge(EdgeKey e) const noexcept { return contains_edge(e.u, e.v); }

    std::vector<EdgeKey> edges() const;

    /// Same tour traversed in the opposite direction, starting at the same vertex.
    Tour reversed() const;

    bool same_edges(const Tour& other) const;

    friend bool operator==(const Tour& a, const Tour& b) {
        return a.length_ == b.length_ && a.order_ == b.order_;
    }

private:
    std::vector<Vertex> order_;
    std::vector<int> pos_;
    Length length_ = 0;
};

/// Sum of consecutive distances including the closing edge.
/// Throws std::invalid_argument if `order` is not a permutation.
Length tour_length(const Instance& inst, std::span<const Vertex> order);

/// Randomized nearest-neighbor construction followed by neighbor-list 2-opt
/// until no improving move remains.
Tour greedy_2opt_init(const Instance& inst, std::uint64_t seed);

/// Runs neighbor-list 2-opt on an existing order in place.
void two_opt(const Instance& inst, std::vector<Vertex>& order);

struct EdgePartition {
    std::vector<EdgeKey> shared;
    std::vector<EdgeKey> only_a;
    std::vector<EdgeKey> only_b;
};

EdgePartition shared_and_distinct_edges(const Tour& a, const Tour& b);

/// One line of space-separated 1-based ids.
std::string format_tour(const Tour& tour);
std::vector<Vertex> parse_tour_line(std::string_view line);

}  // namespace eax
