#include "eax/validity.hpp"

#include <algorithm>
#include <stdexcept>

namespace eax {

namespace {

struct Occurrence {
    Vertex v;
    Vertex a_nb;  // chain neighbour over the A-labeled edge
    Vertex b_nb;  // chain neighbour over the B-labeled edge
};

PortalLink link(Vertex p, Vertex q) { return p < q ? PortalLink{p, q} : PortalLink{q, p}; }

struct Positioned {
    int pos;
    Vertex v;
    PortalKind kind;
};

void split_by_position(std::vector<Positioned>& ps, std::vector<Vertex>& inner, std::vector<Vertex>& outer,
                       PortalKind& first) {
    std::sort(ps.begin(), ps.end(), [](const Positioned& x, const Positioned& y) { return x.pos < y.pos; });
    inner.clear();
    outer.clear();
    for (const auto& p : ps) (p.kind == PortalKind::Inner ? inner : outer).push_back(p.v);
    if (inner.size() != outer.size()) {
        throw std::invalid_argument("E-set portals do not alternate along the parent tour");
    }
    first = ps.empty() ? PortalKind::Inner : ps.front().kind;
}

PortalKind kind_at(const Tour& t, Vertex p, Vertex internal_nb) {
    if (t.next(p) == internal_nb) return PortalKind::Inner;
    if (t.prev(p) == internal_nb) return PortalKind::Outer;
    throw std::invalid_argument("E-set internal edge is not in the parent tour");
}

}  // namespace

std::string PortalProfile::dump() const {
    auto list = [](const std::vector<Vertex>& vs) {
        std::string s = "[";
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i) s += ' ';
            s += std::to_string(vs[i] + 1);
        }
        return s + "]";
    };
    auto kind = [](PortalKind k) { return k == PortalKind::Inner ? "inner" : "outer"; };
    return "portals=" + list(portals) + " b_vertices=" + list(b_vertices) + " inner_a=" + list(inner_a) +
           " outer_a=" + list(outer_a) + " first_a=" + kind(first_portal_kind_a) + " inner_b=" + list(inner_b) +
           " outer_b=" + list(outer_b) + " first_b=" + kind(first_portal_kind_b);
}

std::vector<PortalLink> inner_links(const std::vector<Vertex>& inner, const std::vector<Vertex>& outer,
                                    PortalKind first_kind) {
    const std::size_t n = inner.size();
    std::vector<PortalLink> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Inner-first order is I1 O1 I2 O2 ...; outer-first is O1 I1 O2 I2 ...
        out.push_back(first_kind == PortalKind::Inner ? link(inner[i], outer[i])
                                                      : link(inner[i], outer[(i + 1) % n]));
    }
    return out;
}

std::vector<PortalLink> outer_links(const std::vector<Vertex>& inner, const std::vector<Vertex>& outer,
                                    PortalKind first_kind) {
    const std::size_t n = inner.size();
    std::vector<PortalLink> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(first_kind == PortalKind::Inner ? link(outer[i], inner[(i + 1) % n])
                                                      : link(outer[i], inner[i]));
    }
    return out;
}

void classify_vertices(const Tour& a, const Tour& b, const ESet& e, PortalProfile& out) {
    std::vector<Occurrence> occ;
    for (const auto* cycle : e.cycles) {
        const auto& c = cycle->chain();
        const int len = cycle->length();
        for (int i = 0; i < len; ++i) {
            const Vertex before = c[(i + len - 1) % len];
            const Vertex after = c[(i + 1) % len];
            occ.push_back(i % 2 == 0 ? Occurrence{c[i], after, before} : Occurrence{c[i], before, after});
        }
    }
    std::sort(occ.begin(), occ.end(), [](const Occurrence& x, const Occurrence& y) { return x.v < y.v; });

    out.portals.clear();
    out.b_vertices.clear();
    std::vector<Positioned> along_a;
    std::vector<Positioned> along_b;
    for (std::size_t i = 0; i < occ.size();) {
        std::size_t j = i;
        while (j < occ.size() && occ[j].v == occ[i].v) ++j;
        const Vertex v = occ[i].v;
        if (j - i == 1) {
            out.portals.push_back(v);
            along_a.push_back({a.pos(v), v, kind_at(a, v, occ[i].a_nb)});
            along_b.push_back({b.pos(v), v, kind_at(b, v, occ[i].b_nb)});
        } else if (j - i == 2) {
            out.b_vertices.push_back(v);
        } else {
            throw std::invalid_argument("E-set covers vertex " + std::to_string(v + 1) +
                                        " with more than four internal edges");
        }
        i = j;
    }
    split_by_position(along_a, out.inner_a, out.outer_a, out.first_portal_kind_a);
    split_by_position(along_b, out.inner_b, out.outer_b, out.first_portal_kind_b);
}

PortalProfile classify_vertices(const Tour& a, const Tour& b, const ESet& e) {
    PortalProfile p;
    classify_vertices(a, b, e, p);
    return p;
}

ValidityVerdict count_subtours_fast(const PortalProfile& profile, TraceStats* stats) {
    const int n = profile.pair_count();
    if (n < 1) throw std::invalid_argument("count_subtours_fast needs at least one portal pair");
    const auto& ids = profile.portals;
    auto slot = [&ids](Vertex v) {
        return static_cast<int>(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin());
    };

    std::vector<int> b_inner(2 * n, -1);
    std::vector<int> a_outer(2 * n, -1);
    for (const auto& [p, q] : inner_links(profile.inner_b, profile.outer_b, profile.first_portal_kind_b)) {
        b_inner[slot(p)] = slot(q);
        b_inner[slot(q)] = slot(p);
    }
    for (const auto& [p, q] : outer_links(profile.inner_a, profile.outer_a, profile.first_portal_kind_a)) {
        a_outer[slot(p)] = slot(q);
        a_outer[slot(q)] = slot(p);
    }

    std::vector<char> visited(2 * n, 0);
    int subtours = 0;
    int records = 0;
    // Every subtour holds at least one B inner link, hence one inner portal of B.
    for (const Vertex start_v : profile.inner_b) {
        const int start = slot(start_v);
        if (visited[start]) continue;
        ++subtours;
        int p = start;
        do {
            visited[p] = 1;
            const int q = b_inner[p];
            visited[q] = 1;
            records += 2;
            p = a_outer[q];
        } while (p != start);
    }
    if (stats) stats->visited_records = records;
    return {subtours, subtours == 1, FastPath::FullTrace};
}

std::optional<ValidityVerdict> sufficient_two_portals(const PortalProfile& profile) {
    if (profile.pair_count() == 1) return ValidityVerdict{1, true, FastPath::TwoPortals};
    return std::nullopt;
}

namespace {

std::vector<PortalLink> sorted(std::vector<PortalLink> links) {
    std::sort(links.begin(), links.end());
    return links;
}

bool intersects(const std::vector<PortalLink>& x, const std::vector<PortalLink>& y) {
    auto i = x.begin();
    auto j = y.begin();
    while (i != x.end() && j != y.end()) {
        if (*i == *j) return true;
        if (*i < *j) {
            ++i;
        } else {
            ++j;
        }
    }
    return false;
}

}  // namespace

std::optional<ValidityVerdict> sufficient_same_internal_graph(const PortalProfile& profile) {
    if (profile.pair_count() < 1) return std::nullopt;
    const auto la = sorted(inner_links(profile.inner_a, profile.outer_a, profile.first_portal_kind_a));
    const auto lb = sorted(inner_links(profile.inner_b, profile.outer_b, profile.first_portal_kind_b));
    if (la == lb) return ValidityVerdict{1, true, FastPath::SameInternalGraph};
    return std::nullopt;
}

MirrorResult mirror_test(const PortalProfile& profile) {
    // With a single pair the inner and outer link coincide by construction.
    if (profile.pair_count() <= 1) return MirrorResult::Pass;
    const auto out_a = sorted(outer_links(profile.inner_a, profile.outer_a, profile.first_portal_kind_a));
    const auto in_b = sorted(inner_links(profile.inner_b, profile.outer_b, profile.first_portal_kind_b));
    return intersects(in_b, out_a) ? MirrorResult::Fail : MirrorResult::Pass;
}

ValidityVerdict ValidityChecker::check(const Tour& a, const Tour& b, const ESet& e) {
    classify_vertices(a, b, e, profile_);
    if (profile_.pair_count() == 0) {
        const int m = count_subtours(apply_eset(a, b, e));
        return {m, m == 1, FastPath::Degenerate};
    }
    if (auto v = sufficient_two_portals(profile_)) return *v;
    if (auto v = sufficient_same_internal_graph(profile_)) return *v;
    return count_subtours_fast(profile_);
}

}  // namespace eax
