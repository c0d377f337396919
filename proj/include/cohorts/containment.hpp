#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cohorts/arch_system.hpp"

namespace cohorts {

// Substructure order: P fits in X when deleting arches of X can leave P.
bool contains(const ArchSystem& host, const ArchSystem& pattern);
bool avoids(const ArchSystem& host, const ArchSystem& pattern);

// Preorder arch ids: top-level atoms left to right, each root before its
// contents.  This matches left-endpoint order in the word.
std::vector<std::pair<int, int>> arch_spans(const ArchSystem& sys);
const Atom& atom_at(const ArchSystem& sys, int arch_id);

// Calls f once per occurrence: the strictly increasing list of host arch ids
// matched by the pattern arches, pattern preorder position by position.
void for_each_occurrence(const ArchSystem& host, const ArchSystem& pattern,
                         const std::function<void(const std::vector<int>&)>& f);

// Extreme occurrences under the endpoint order.  The leftmost one minimizes
// its endpoint list read right to left; the rightmost maximizes it read left
// to right.  Either way the winner hugs its end of the word.
std::optional<std::vector<int>> leftmost_occurrence(const ArchSystem& host,
                                                    const ArchSystem& pattern);
std::optional<std::vector<int>> rightmost_occurrence(const ArchSystem& host,
                                                     const ArchSystem& pattern);

// Ascending word positions of all endpoints of the given arches.
std::vector<int> occurrence_endpoints(const std::vector<std::pair<int, int>>& spans,
                                      const std::vector<int>& arch_ids);

// Deletes every arch not listed; contents of a deleted arch splice upward.
ArchSystem induced_subsystem(const ArchSystem& host, const std::vector<int>& arch_ids);

// Number of size-n systems with no occurrence of the pattern.
std::uint64_t count_avoiders(const ArchSystem& pattern, int n);
std::uint64_t count_avoiders_serial(const ArchSystem& pattern, int n);

}  // namespace cohorts
