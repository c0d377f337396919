#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cohorts {

// Design notes
//
// An arch system is stored as its recursive atom sequence: an atom is one arch
// drawn over the (possibly empty) system of its contents, and a system is the
// ordered sequence of its outermost atoms.  The word form writes an atom as
// '(' contents ')'.  Size counts arches, not atoms.  Every other
// representation (Dyck path, plane forest, 231-avoiding permutation) converts
// through this one; none of them is ever the working form.

struct Atom;
using ArchSystem = std::vector<Atom>;

struct Atom {
    ArchSystem contents;
    bool operator==(const Atom&) const = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t offset);
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

ArchSystem parse(std::string_view word);
std::string render(const ArchSystem& sys);
std::string render(const Atom& atom);

int system_size(const ArchSystem& sys) noexcept;
int atom_size(const Atom& atom) noexcept;

// Single chain of n nested arches; nest(0) is the empty system.
ArchSystem nest(int n);
// The atom whose contents are exactly `sys`.
Atom wrap(const ArchSystem& sys);
ArchSystem concat(const ArchSystem& a, const ArchSystem& b);
ArchSystem as_system(const Atom& atom);

// ---- alternative representations ----------------------------------------

struct DyckPath {
    std::string steps;  // 'u' / 'd'
    bool operator==(const DyckPath&) const = default;
};

struct ForestNode {
    std::vector<ForestNode> children;
    bool operator==(const ForestNode&) const = default;
};

struct PlaneForest {
    std::vector<ForestNode> trees;
    bool operator==(const PlaneForest&) const = default;
};

// One-based values; avoids the pattern 231.
struct Perm231 {
    std::vector<int> values;
    bool operator==(const Perm231&) const = default;
};

DyckPath to_dyck(const ArchSystem& sys);
ArchSystem from_dyck(const DyckPath& path);  // ParseError on invalid steps

PlaneForest to_forest(const ArchSystem& sys);
ArchSystem from_forest(const PlaneForest& forest);

// Arch labels: nested arches increase outward, disjoint arches increase
// rightward; the permutation reads labels in left-endpoint order.
Perm231 to_perm(const ArchSystem& sys);
ArchSystem from_perm(const Perm231& perm);  // invalid_argument unless 231-avoiding

// Textual forms used by the CLI.  Forests serialize as preorder child counts,
// ','-separated within a tree and ';'-separated between trees ("2,0,1,0;0").
// Permutations of length <= 9 serialize as digit strings, longer ones
// comma-separated.
std::string forest_to_string(const PlaneForest& forest);
PlaneForest forest_from_string(std::string_view text);
std::string perm_to_string(const Perm231& perm);
Perm231 perm_from_string(std::string_view text);

// ---- enumeration ---------------------------------------------------------

// Exact for n <= 35 (fits in 64 bits); invalid_argument beyond.
std::uint64_t catalan_u64(int n);

// Streams the balanced words of n arches in ascending lexicographic order
// ('(' < ')'); restartable at any rank, so scans can be partitioned.
class WordStream {
public:
    explicit WordStream(int n);
    WordStream(int n, std::uint64_t rank);
    bool done() const noexcept { return done_; }
    const std::string& word() const noexcept { return word_; }
    std::uint64_t rank() const noexcept { return rank_; }
    void advance();

private:
    std::string word_;
    std::uint64_t rank_ = 0;
    bool done_ = false;
};

std::uint64_t word_rank(std::string_view word);
std::string word_unrank(int n, std::uint64_t rank);

std::vector<std::string> enumerate_all(int n);

template <class F>
void for_each_word(int n, F&& f) {
    for (WordStream s(n); !s.done(); s.advance()) f(s.word());
}

}  // namespace cohorts
