#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eax/ab_cycle.hpp"
#include "eax/tour.hpp"

namespace eax {

enum class PortalKind { Inner, Outer };

/// Portals of an E-set split per parent into the positions where that
/// parent's tour enters (inner) or leaves (outer) the E-set, each array
/// sorted by position in the parent's stored order.
struct PortalProfile {
    std::vector<Vertex> portals;     // sorted by id
    std::vector<Vertex> b_vertices;  // sorted by id
    std::vector<Vertex> inner_a, outer_a;
    std::vector<Vertex> inner_b, outer_b;
    PortalKind first_portal_kind_a = PortalKind::Inner;
    PortalKind first_portal_kind_b = PortalKind::Inner;

    /// Number of portal pairs, |V_p| / 2.
    int pair_count() const noexcept { return static_cast<int>(inner_a.size()); }
    int portal_count() const noexcept { return static_cast<int>(portals.size()); }

    std::string dump() const;
};

using PortalLink = std::pair<Vertex, Vertex>;  // normalized first < second

/// Links between portals formed by a parent's internal (`inner`) or external
/// (`outer`) tour paths. Index i corresponds to the i-th connection.
std::vector<PortalLink> inner_links(const std::vector<Vertex>& inner, const std::vector<Vertex>& outer,
                                    PortalKind first_kind);
std::vector<PortalLink> outer_links(const std::vector<Vertex>& inner, const std::vector<Vertex>& outer,
                                    PortalKind first_kind);

enum class FastPath { TwoPortals, SameInternalGraph, FullTrace, Degenerate };

struct ValidityVerdict {
    int subtour_count = 1;
    bool is_valid = true;
    FastPath fast_path = FastPath::FullTrace;
};

/// Throws std::invalid_argument for a corrupt E-set (a vertex covered more
/// than twice, or an internal edge missing from its parent).
PortalProfile classify_vertices(const Tour& a, const Tour& b, const ESet& e);
/// Reuses `out`'s storage.
void classify_vertices(const Tour& a, const Tour& b, const ESet& e, PortalProfile& out);

struct TraceStats {
    int visited_records = 0;
};

/// Counts the subtours of A ⊕ E by alternately following B's inner
/// connections and A's outer connections over the portals only.
/// Requires pair_count() >= 1.
ValidityVerdict count_subtours_fast(const PortalProfile& profile, TraceStats* stats = nullptr);

std::optional<ValidityVerdict> sufficient_two_portals(const PortalProfile& profile);
std::optional<ValidityVerdict> sufficient_same_internal_graph(const PortalProfile& profile);

enum class MirrorResult { Pass, Fail };

/// Fails iff some portal link is formed both by B's internal paths and by
/// A's external paths, i.e. the offspring closes a two-portal subtour.
/// Passing does not imply validity.
MirrorResult mirror_test(const PortalProfile& profile);

/// Full decision procedure: two-portal shortcut, identical internal graphs,
/// then the portal trace. E-sets without portals fall back to applying the
/// E-set and counting components.
class ValidityChecker {
public:
    ValidityVerdict check(const Tour& a, const Tour& b, const ESet& e);
    const PortalProfile& last_profile() const noexcept { return profile_; }

private:
    PortalProfile profile_;
};

}  // namespace eax
