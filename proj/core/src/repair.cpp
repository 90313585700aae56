#include "eax/repair.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <tuple>

namespace eax {

namespace {

struct Candidate {
    Length delta;
    EdgeKey small_edge;
    EdgeKey other_edge;
    EdgeKey added_first;  // the lower of the two added edges
    EdgeKey added_second;

    auto key() const { return std::tie(delta, small_edge, other_edge, added_first); }
};

void consider(const Instance& inst, Vertex u, Vertex v, Vertex w, Vertex x, std::optional<Candidate>& best) {
    const Length removed = inst.dist(u, v) + inst.dist(w, x);
    for (int o = 0; o < 2; ++o) {
        const Length added = o == 0 ? inst.dist(u, w) + inst.dist(v, x) : inst.dist(u, x) + inst.dist(v, w);
        EdgeKey e1 = o == 0 ? EdgeKey(u, w) : EdgeKey(u, x);
        EdgeKey e2 = o == 0 ? EdgeKey(v, x) : EdgeKey(v, w);
        if (e2 < e1) std::swap(e1, e2);
        Candidate c{added - removed, EdgeKey(u, v), EdgeKey(w, x), e1, e2};
        if (!best || c.key() < best->key()) best = c;
    }
}

}  // namespace

RepairOutcome repair(const Instance& inst, VertexDegreeStructure s) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = s.size();
    if (n != inst.dimension()) throw std::invalid_argument("structure size does not match instance");

    auto comps = enumerate_subtours(s);
    std::vector<int> comp_of(n);
    for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
        for (const Vertex v : comps[c]) comp_of[v] = c;
    }
    // Lowest vertex of each component; components are enumerated from their lowest id.
    std::vector<Vertex> min_vertex(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) min_vertex[c] = comps[c].front();
    std::vector<char> alive(comps.size(), 1);

    RepairOutcome out;
    out.initial_subtours = static_cast<int>(comps.size());

    for (int remaining = out.initial_subtours; remaining > 1; --remaining) {
        int small = -1;
        for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
            if (!alive[c]) continue;
            if (small < 0 || comps[c].size() < comps[small].size() ||
                (comps[c].size() == comps[small].size() && min_vertex[c] < min_vertex[small])) {
                small = c;
            }
        }

        std::optional<Candidate> best;
        for (const Vertex u : comps[small]) {
            for (const Vertex v : s.neighbors(u)) {
                for (const Vertex w : inst.neighbors(u)) {
                    if (comp_of[w] == small) continue;
                    for (const Vertex x : s.neighbors(w)) consider(inst, u, v, w, x, best);
                }
            }
        }
        bool widened = false;
        if (!best) {
            // Join the component holding the vertex closest to the small one.
            widened = true;
            Vertex near_u = -1;
            Vertex near_w = -1;
            Length near_d = std::numeric_limits<Length>::max();
            for (const Vertex u : comps[small]) {
                for (Vertex w = 0; w < n; ++w) {
                    if (comp_of[w] == small) continue;
                    const Length d = inst.dist(u, w);
                    if (d < near_d || (d == near_d && std::tie(u, w) < std::tie(near_u, near_w))) {
                        near_d = d;
                        near_u = u;
                        near_w = w;
                    }
                }
            }
            const int target = comp_of[near_w];
            for (const Vertex u : comps[small]) {
                for (const Vertex v : s.neighbors(u)) {
                    for (const Vertex w : comps[target]) {
                        for (const Vertex x : s.neighbors(w)) consider(inst, u, v, w, x, best);
                    }
                }
            }
        }

        const auto& c = *best;
        const auto add1 = c.added_first;
        const auto add2 = c.added_second;
        s.remove_edge(c.small_edge.u, c.small_edge.v);
        s.remove_edge(c.other_edge.u, c.other_edge.v);
        s.add_edge(add1.u, add1.v);
        s.add_edge(add2.u, add2.v);
        out.edges_removed.push_back(c.small_edge);
        out.edges_removed.push_back(c.other_edge);
        out.edges_added.push_back(add1);
        out.edges_added.push_back(add2);
        out.steps.push_back({c.small_edge, c.other_edge, add1, add2, c.delta, widened});

        const int into = comp_of[c.other_edge.u];
        for (const Vertex v : comps[small]) comp_of[v] = into;
        comps[into].insert(comps[into].end(), comps[small].begin(), comps[small].end());
        comps[small].clear();
        min_vertex[into] = std::min(min_vertex[into], min_vertex[small]);
        alive[small] = 0;
        ++out.merges;
    }

    out.tour = tour_from_structure(inst, s);
    out.elapsed = std::chrono::steady_clock::now() - t0;
    return out;
}

}  // namespace eax
