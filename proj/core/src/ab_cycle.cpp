#include "eax/ab_cycle.hpp"

#include <algorithm>
#include <stdexcept>

namespace eax {

namespace {

void drop(std::array<Vertex, 2>& adj, std::uint8_t& deg, Vertex w) {
    for (std::uint8_t i = 0; i < deg; ++i) {
        if (adj[i] == w) {
            adj[i] = adj[deg - 1];
            --deg;
            return;
        }
    }
}

}  // namespace

UnionGraph::UnionGraph(const Tour& a, const Tour& b) {
    if (a.size() != b.size()) throw std::invalid_argument("tours have different dimensions");
    const int n = a.size();
    a_adj_.resize(n);
    b_adj_.resize(n);
    a_deg_.assign(n, 0);
    b_deg_.assign(n, 0);
    for (Vertex v = 0; v < n; ++v) {
        for (const Vertex w : {a.prev(v), a.next(v)}) {
            if (!b.contains_edge(v, w)) a_adj_[v][a_deg_[v]++] = w;
        }
        for (const Vertex w : {b.prev(v), b.next(v)}) {
            if (!a.contains_edge(v, w)) b_adj_[v][b_deg_[v]++] = w;
        }
        edge_count_ += a_deg_[v] + b_deg_[v];
    }
    edge_count_ /= 2;
}

ABCycle::ABCycle(std::vector<Vertex> chain) : chain_(std::move(chain)) {
    if (chain_.size() < 4 || chain_.size() % 2 != 0) {
        throw std::invalid_argument("AB-cycle chain must have even length >= 4");
    }
}

std::vector<EdgeKey> ABCycle::a_edges() const {
    std::vector<EdgeKey> out;
    out.reserve(chain_.size() / 2);
    for (int i = 0; i < length(); i += 2) out.push_back(edge(i));
    return out;
}

std::vector<EdgeKey> ABCycle::b_edges() const {
    std::vector<EdgeKey> out;
    out.reserve(chain_.size() / 2);
    for (int i = 1; i < length(); i += 2) out.push_back(edge(i));
    return out;
}

namespace {

std::vector<Vertex> vertices_with_multiplicity(std::vector<Vertex> all, int wanted) {
    std::sort(all.begin(), all.end());
    std::vector<Vertex> out;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j] == all[i]) ++j;
        if (static_cast<int>(j - i) == wanted) out.push_back(all[i]);
        i = j;
    }
    return out;
}

}  // namespace

std::vector<Vertex> ABCycle::portals() const { return vertices_with_multiplicity(chain_, 1); }

std::vector<Vertex> ABCycle::b_vertices() const { return vertices_with_multiplicity(chain_, 2); }

Length ABCycle::gain_delta(const Instance& inst) const {
    Length delta = 0;
    for (int i = 0; i < length(); ++i) {
        const Length d = inst.dist(chain_[i], chain_[(i + 1) % length()]);
        delta += i % 2 == 0 ? -d : d;
    }
    return delta;
}

std::string ABCycle::dump() const {
    std::string out;
    for (int i = 0; i < length(); ++i) {
        out += std::to_string(chain_[i] + 1);
        out += i % 2 == 0 ? " -A- " : " -B- ";
    }
    out += std::to_string(chain_.front() + 1);
    return out;
}

int ESet::combined_portal_count() const {
    std::vector<Vertex> all;
    for (const auto* c : cycles) all.insert(all.end(), c->chain().begin(), c->chain().end());
    return static_cast<int>(vertices_with_multiplicity(std::move(all), 1).size());
}

Length ESet::gain_delta(const Instance& inst) const {
    Length delta = 0;
    for (const auto* c : cycles) delta += c->gain_delta(inst);
    return delta;
}

class CycleTracer {
public:
    CycleTracer(const UnionGraph& g, Rng& rng)
        : adj_{g.a_adj_, g.b_adj_}, deg_{g.a_deg_, g.b_deg_}, rng_(rng), occ_(g.size()) {
        const int n = g.size();
        slot_.assign(n, -1);
        for (Vertex v = 0; v < n; ++v) {
            if (deg_[0][v] + deg_[1][v] > 0) {
                slot_[v] = static_cast<int>(active_.size());
                active_.push_back(v);
            }
        }
    }

    std::vector<ABCycle> run() {
        std::vector<ABCycle> cycles;
        std::vector<Vertex> walk;
        while (true) {
            if (walk.empty()) {
                if (active_.empty()) break;
                const auto pick = std::uniform_int_distribution<std::size_t>(0, active_.size() - 1)(rng_);
                start_walk(walk, active_[pick]);
            }
            const int idx = static_cast<int>(walk.size()) - 1;
            const Vertex cur = walk.back();
            const int label = idx % 2;  // 0 = A, 1 = B
            if (deg_[label][cur] == 0) {
                // Only a bare start vertex can run dry: every other walk
                // endpoint has one more unused edge of the needed label.
                if (idx != 0) throw std::logic_error("AB-cycle tracing reached a dead end");
                clear_occurrence(cur, 0);
                walk.clear();
                continue;
            }
            const auto choice = deg_[label][cur] == 1
                                    ? 0
                                    : std::uniform_int_distribution<int>(0, deg_[label][cur] - 1)(rng_);
            const Vertex next = adj_[label][cur][choice];
            remove_edge(label, cur, next);

            const int k = idx + 1;
            const int j = closing_index(next, k);
            if (j < 0) {
                walk.push_back(next);
                occ_[next].push(k);
                continue;
            }
            // Closed an alternating cycle walk[j..k-1]; normalize so it
            // starts with an A edge.
            std::vector<Vertex> chain;
            chain.reserve(k - j);
            if (j % 2 == 0) {
                chain.assign(walk.begin() + j, walk.end());
            } else {
                chain.assign(walk.begin() + j + 1, walk.end());
                chain.push_back(walk[j]);
            }
            for (int i = k - 1; i > j; --i) clear_occurrence(walk[i], i);
            walk.resize(j + 1);
            cycles.emplace_back(std::move(chain));
        }
        return cycles;
    }

private:
    struct Occurrences {
        std::array<int, 3> idx{};
        int count = 0;
        void push(int i) { idx[count++] = i; }
    };

    void start_walk(std::vector<Vertex>& walk, Vertex v) {
        walk.push_back(v);
        occ_[v].push(0);
    }

    void clear_occurrence(Vertex v, int index) {
        auto& o = occ_[v];
        for (int i = 0; i < o.count; ++i) {
            if (o.idx[i] == index) {
                o.idx[i] = o.idx[o.count - 1];
                --o.count;
                return;
            }
        }
    }

    int closing_index(Vertex v, int k) const {
        const auto& o = occ_[v];
        for (int i = 0; i < o.count; ++i) {
            if (o.idx[i] % 2 == k % 2) return o.idx[i];
        }
        return -1;
    }

    void remove_edge(int label, Vertex u, Vertex v) {
        drop(adj_[label][u], deg_[label][u], v);
        drop(adj_[label][v], deg_[label][v], u);
        deactivate_if_done(u);
        deactivate_if_done(v);
    }

    void deactivate_if_done(Vertex v) {
        if (deg_[0][v] + deg_[1][v] != 0 || slot_[v] < 0) return;
        const int s = slot_[v];
        const Vertex last = active_.back();
        active_[s] = last;
        slot_[last] = s;
        active_.pop_back();
        slot_[v] = -1;
    }

    std::array<std::vector<std::array<Vertex, 2>>, 2> adj_;
    std::array<std::vector<std::uint8_t>, 2> deg_;
    Rng& rng_;
    std::vector<Occurrences> occ_;
    std::vector<Vertex> active_;
    std::vector<int> slot_;
};

std::vector<ABCycle> trace_ab_cycles(const UnionGraph& g, Rng& rng) {
    if (g.empty()) return {};
    return CycleTracer(g, rng).run();
}

std::vector<ABCycle> trace_ab_cycles(const UnionGraph& g, std::uint64_t seed) {
    Rng rng(seed);
    return trace_ab_cycles(g, rng);
}

VertexDegreeStructure VertexDegreeStructure::from_tour(const Tour& t) {
    VertexDegreeStructure s(t.size());
    for (Vertex v = 0; v < t.size(); ++v) s.adj_[v] = {t.prev(v), t.next(v)};
    return s;
}

VertexDegreeStructure VertexDegreeStructure::from_edges(int n, std::span<const EdgeKey> edges) {
    VertexDegreeStructure s(n);
    for (const auto& e : edges) {
        if (!s.add_edge(e.u, e.v)) throw std::invalid_argument("edge list exceeds degree 2");
    }
    return s;
}

bool VertexDegreeStructure::remove_edge(Vertex u, Vertex v) {
    auto& au = adj_[u];
    auto& av = adj_[v];
    const int iu = au[0] == v ? 0 : (au[1] == v ? 1 : -1);
    const int iv = av[0] == u ? 0 : (av[1] == u ? 1 : -1);
    if (iu < 0 || iv < 0) return false;
    au[iu] = kNone;
    av[iv] = kNone;
    return true;
}

bool VertexDegreeStructure::add_edge(Vertex u, Vertex v) {
    auto& au = adj_[u];
    auto& av = adj_[v];
    const int iu = au[0] == kNone ? 0 : (au[1] == kNone ? 1 : -1);
    const int iv = av[0] == kNone ? 0 : (av[1] == kNone ? 1 : -1);
    if (iu < 0 || iv < 0 || u == v) return false;
    au[iu] = v;
    av[iv] = u;
    return true;
}

bool VertexDegreeStructure::is_two_regular() const {
    for (Vertex v = 0; v < size(); ++v) {
        const auto [x, y] = adj_[v];
        if (x == kNone || y == kNone || x == v || y == v) return false;
        if (!has_edge(x, v) || !has_edge(y, v)) return false;
        // A doubled edge is only legal when it is the whole (2-vertex) cycle.
        if (x == y) return false;
    }
    return true;
}

std::vector<EdgeKey> VertexDegreeStructure::edges() const {
    std::vector<EdgeKey> out;
    for (Vertex v = 0; v < size(); ++v) {
        for (const Vertex w : adj_[v]) {
            if (w != kNone && v < w) out.emplace_back(v, w);
        }
    }
    return out;
}

VertexDegreeStructure apply_eset(const Tour& a, const Tour& b, const ESet& e) {
    if (a.size() != b.size()) throw std::invalid_argument("tours have different dimensions");
    auto s = VertexDegreeStructure::from_tour(a);
    for (const auto* cycle : e.cycles) {
        for (int i = 0; i < cycle->length(); i += 2) {
            const auto edge = cycle->edge(i);
            if (!a.contains_edge(edge) || !s.remove_edge(edge.u, edge.v)) {
                throw std::invalid_argument("E-set A edge is not in parent A");
            }
        }
    }
    for (const auto* cycle : e.cycles) {
        for (int i = 1; i < cycle->length(); i += 2) {
            const auto edge = cycle->edge(i);
            if (!b.contains_edge(edge) || !s.add_edge(edge.u, edge.v)) {
                throw std::invalid_argument("E-set B edge is not in parent B");
            }
        }
    }
    return s;
}

namespace {

template <typename Visit>
int walk_components(const VertexDegreeStructure& s, Visit&& visit) {
    if (!s.is_two_regular()) throw std::invalid_argument("structure is not 2-regular");
    const int n = s.size();
    std::vector<char> seen(n, 0);
    int count = 0;
    for (Vertex start = 0; start < n; ++start) {
        if (seen[start]) continue;
        ++count;
        Vertex prev = VertexDegreeStructure::kNone;
        Vertex cur = start;
        do {
            seen[cur] = 1;
            visit(count - 1, cur);
            const auto& nb = s.neighbors(cur);
            const Vertex nxt = nb[0] != prev ? nb[0] : nb[1];
            prev = cur;
            cur = nxt;
        } while (cur != start);
    }
    return count;
}

}  // namespace

std::vector<std::vector<Vertex>> enumerate_subtours(const VertexDegreeStructure& s) {
    std::vector<std::vector<Vertex>> out;
    walk_components(s, [&](int comp, Vertex v) {
        if (comp == static_cast<int>(out.size())) out.emplace_back();
        out[comp].push_back(v);
    });
    return out;
}

int count_subtours(const VertexDegreeStructure& s) {
    return walk_components(s, [](int, Vertex) {});
}

Tour tour_from_structure(const Instance& inst, const VertexDegreeStructure& s) {
    auto comps = enumerate_subtours(s);
    if (comps.size() != 1) {
        throw std::invalid_argument("structure has " + std::to_string(comps.size()) + " subtours");
    }
    return Tour(inst, std::move(comps.front()));
}

}  // namespace eax
