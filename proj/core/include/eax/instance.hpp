#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eax {

using Vertex = std::int32_t;
using Length = std::int64_t;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Undirected edge, normalized so that `u < v`.
struct EdgeKey {
    Vertex u = 0;
    Vertex v = 0;

    EdgeKey() = default;
    EdgeKey(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
    friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& e) const noexcept {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(e.u) << 32) |
                                          static_cast<std::uint32_t>(e.v));
    }
};

enum class ParseErrorKind {
    MalformedHeader,
    UnsupportedWeightType,
    CoordinateCountMismatch,
    NonNumericCoordinate,
};

class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorKind kind, std::size_t line, const std::string& what);

    ParseErrorKind kind() const noexcept { return kind_; }
    /// 1-based line number in the parsed text; 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    ParseErrorKind kind_;
    std::size_t line_;
};

inline constexpr int kDefaultNeighborCount = 10;

/// Immutable symmetric EUC_2D instance. Distances are computed on demand;
/// only the k-nearest-neighbor lists are stored.
class Instance {
public:
    Instance(std::string name, std::vector<Point> coords, int neighbor_k = kDefaultNeighborCount);

    const std::string& name() const noexcept { return name_; }
    int dimension() const noexcept { return static_cast<int>(coords_.size()); }
    const std::vector<Point>& coords() const noexcept { return coords_; }
    int neighbor_k() const noexcept { return neighbor_k_; }

    /// TSPLIB nint(euclidean distance). Throws std::out_of_range on bad ids.
    Length distance(Vertex u, Vertex v) const;

    /// Unchecked variant for hot loops.
    Length dist(Vertex u, Vertex v) const noexcept {
        const double dx = coords_[u].x - coords_[v].x;
        const double dy = coords_[u].y - coords_[v].y;
        return static_cast<Length>(std::sqrt(dx * dx + dy * dy) + 0.5);
    }

    const std::vector<Vertex>& neighbors(Vertex v) const { return neighbors_[v]; }

    const std::optional<Length>& known_optimum() const noexcept { return known_optimum_; }
    const std::optional<std::vector<Vertex>>& optimal_tour() const noexcept { return optimal_tour_; }

    /// Attaches optimum metadata. Throws std::invalid_argument if the tour is
    /// not a permutation or its length disagrees with `optimum`.
    void set_optimum(Length optimum, std::optional<std::vector<Vertex>> tour = std::nullopt);

private:
    std::string name_;
    std::vector<Point> coords_;
    int neighbor_k_;
    std::vector<std::vector<Vertex>> neighbors_;
    std::optional<Length> known_optimum_;
    std::optional<std::vector<Vertex>> optimal_tour_;
};

Instance parse_tsplib(std::string_view text, int neighbor_k = kDefaultNeighborCount);

/// Reads a TSPLIB file and, if present, its optimum sidecar
/// (`<stem>.opt`, falling back to `<file>.opt`).
Instance load_instance(const std::filesystem::path& path, int neighbor_k = kDefaultNeighborCount);

struct OptimumSidecar {
    Length optimum = 0;
    std::optional<std::vector<Vertex>> tour;  // 0-based
};

OptimumSidecar parse_optimum_sidecar(std::string_view text);
std::string format_optimum_sidecar(const OptimumSidecar& sidecar);

/// Uniform random points on [0, side]^2; deterministic in (n, side, seed).
Instance generate_rue(int n, int side, std::uint64_t seed, int neighbor_k = kDefaultNeighborCount);

std::string to_tsplib(const Instance& inst);

}  // namespace eax
