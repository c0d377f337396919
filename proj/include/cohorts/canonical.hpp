#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cohorts/arch_system.hpp"

namespace cohorts {

// Design notes
//
// The canonical form of a single atom alternates two layers.  An atomic form
// is u surplus units plus a multiset of "large" leaves; a large form is an
// unordered list of at least three atomic children.  Wrapping adds a unit,
// joining two atoms merges their leaf multisets, and three or more atoms in a
// row freeze into a large form.  Two systems are equivalent exactly when the
// atoms over them canonicalize identically, so the key of a system is the
// canonical form of the atom wrapping it (one size larger).

struct LargeForm;

struct AtomicForm {
    int u = 0;
    std::vector<LargeForm> leaves;  // sorted ascending, ties allowed
    bool operator==(const AtomicForm&) const;
};

struct LargeForm {
    std::vector<AtomicForm> children;  // >= 3, sorted ascending
    bool operator==(const LargeForm&) const;
};

int form_size(const AtomicForm& f);
int form_size(const LargeForm& f);

// Total order: by size, then structure.  Used for the sorted multisets and
// for deterministic census listings.
bool form_less(const AtomicForm& a, const AtomicForm& b);
bool form_less(const LargeForm& a, const LargeForm& b);

struct FormLess {
    bool operator()(const AtomicForm& a, const AtomicForm& b) const {
        return form_less(a, b);
    }
};

AtomicForm canonical_atom(const Atom& atom);
AtomicForm cohort_key(const ArchSystem& sys);

// The key of the cohort holding the fully nested chain, u = n + 1.
AtomicForm main_key(int n);
bool is_main_key(const AtomicForm& key);

// S-expression text, e.g. "(u 3)" or "(u 0 (L (u 1) (u 1) (u 1)))".
std::string form_to_string(const AtomicForm& f);
AtomicForm form_from_string(std::string_view text);

// A member of the keyed cohort, built directly from the form.
ArchSystem representative(const AtomicForm& key);

}  // namespace cohorts
