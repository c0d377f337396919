#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cohorts/arch_system.hpp"
#include "cohorts/canonical.hpp"
#include "cohorts/series.hpp"

namespace cohorts {

// One elementary equivalence step.
//
// A swap exchanges two adjacent atoms of the forest reached by `path` (atom
// indices from the top; the path descends into contents).  A rotation applies
// only when that forest is exactly an optional atom next to a wrapped pair:
// forward turns [a, (w)] with w = b c into [(a b), c], backward turns
// [(w), c] with w = a b into [a, (b c)], where each of a, b, c is a single
// atom or empty.  `split` says how many leading atoms of w (0 or 1) go to the
// first slot.
struct Move {
    enum class Kind { swap_atoms, rotate };
    Kind kind = Kind::swap_atoms;
    std::vector<int> path;
    int pos = 0;        // swap: left index of the pair
    bool forward = true;  // rotation direction
    int split = 0;      // rotation: leading atoms of w kept by the first slot
    bool operator==(const Move&) const = default;
};

std::string move_to_string(const Move& m);
Move move_from_string(std::string_view text);

// Applies m to x; std::invalid_argument when the move does not fit x.
ArchSystem apply_move(const ArchSystem& x, const Move& m);

// All moves applicable to x, with their results.  bijective_only drops the
// rotations whose three slots are all nonempty.
std::vector<std::pair<Move, ArchSystem>> moves_from(const ArchSystem& x,
                                                    bool bijective_only = false);

// Distinct results of moves, x itself excluded.
std::vector<ArchSystem> neighbors(const ArchSystem& x, bool bijective_only = false);

// A cohort is singleton when no move changes the system.
bool is_singleton(const ArchSystem& x);

// ---- census --------------------------------------------------------------

struct CohortRow {
    AtomicForm key;
    std::string rep;       // lexicographically least member word
    std::uint64_t count = 0;
};

// All cohorts at size n, sorted by key.  Member counts total catalan(n).
std::vector<CohortRow> census(int n);

// Number-of-cohorts series: coefficient n + 1 counts the cohorts of size n.
// (Keys of size-n systems are forms of size n + 1.)
Series cohort_count_series(int degree);

// The same computation exposing both layers: atomic forms and large forms by
// form size.
std::pair<Series, Series> cohort_series_pair(int degree);

// Members of the cohort of the nested chain, by system size: coefficient
// n + 1 counts them at size n.
Series main_cohort_series(int degree);
mpz_class main_cohort_size(int n);

// Singleton cohorts by system size.
Series singleton_series(int degree);

}  // namespace cohorts
