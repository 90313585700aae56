#pragma once

#include <chrono>
#include <vector>

#include "eax/ab_cycle.hpp"
#include "eax/instance.hpp"
#include "eax/tour.hpp"

namespace eax {

/// One 2-exchange joining the smallest subtour to another one.
struct MergeStep {
    EdgeKey removed_small;  // edge of the smallest subtour
    EdgeKey removed_other;  // edge of the subtour it is joined to
    EdgeKey added_first;
    EdgeKey added_second;
    Length delta = 0;       // added - removed
    bool widened = false;   // neighbour lists produced no candidate
};

struct RepairOutcome {
    Tour tour;
    int initial_subtours = 1;
    int merges = 0;
    std::vector<EdgeKey> edges_added;
    std::vector<EdgeKey> edges_removed;
    std::vector<MergeStep> steps;
    std::chrono::nanoseconds elapsed{0};
};

/// Merges the subtours of `s` into one Hamiltonian cycle, always joining the
/// smallest subtour (lowest vertex id on ties) by the cheapest 2-exchange
/// whose partner edge touches a k-nearest neighbour of the small edge.
RepairOutcome repair(const Instance& inst, VertexDegreeStructure s);

}  // namespace eax
