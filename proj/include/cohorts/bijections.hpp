#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cohorts/arch_system.hpp"
#include "cohorts/census.hpp"

namespace cohorts {

// Design notes
//
// A Bijection maps the avoiders of its source pattern onto the avoiders of
// its target pattern, size by size.  The primitive maps below mirror the
// elementary pattern rewrites: swapping two adjacent pattern atoms, absorbing
// a pattern atom into its wrapped neighbor, applying a map inside every top
// atom, and applying a map slotwise between pinned occurrences of a context.
// Composites chain them along a rewrite path, so every path between
// equivalent patterns compiles into an explicit size-preserving bijection.

class Bijection {
public:
    virtual ~Bijection() = default;
    const ArchSystem& source() const { return src_; }
    const ArchSystem& target() const { return tgt_; }
    // check: reject inputs containing the source pattern.
    ArchSystem apply(const ArchSystem& x, bool check = true) const;
    ArchSystem unapply(const ArchSystem& y, bool check = true) const;
    virtual std::string describe() const = 0;

protected:
    Bijection(ArchSystem src, ArchSystem tgt);
    virtual ArchSystem map(const ArchSystem& x) const = 0;
    virtual ArchSystem unmap(const ArchSystem& y) const = 0;

private:
    ArchSystem src_, tgt_;
};

using BijPtr = std::shared_ptr<const Bijection>;

// Av(p) -> Av(p), the identity.
BijPtr bij_identity(ArchSystem pattern);

// Av(P a b Q) -> Av(P b a Q) for atoms a, b in an arbitrary context.
BijPtr bij_swap(ArchSystem P, ArchSystem Q, Atom a, Atom b);

// Av(a (b)) -> Av((b a)): the loose atom moves inside the wrap.  Absent b
// reads as the empty wrap, so Av(a ()) -> Av((a)).
BijPtr bij_absorb(Atom a, std::optional<Atom> b);

BijPtr bij_inverse(BijPtr inner);

// Av((A)) -> Av((B)) from inner: Av(A) -> Av(B), applied to the contents of
// every top atom.
BijPtr bij_wrap_lift(BijPtr inner);

// Av(P a Q) -> Av(P b Q) from inner: Av(a) -> Av(b) on single-atom patterns,
// applied slotwise between the pinned context occurrences.
BijPtr bij_context(ArchSystem P, ArchSystem Q, BijPtr inner);

// Chains steps[0], steps[1], ... whose patterns must line up.
BijPtr bij_compose(std::vector<BijPtr> steps);

// The bijection attached to one move on the pattern `state`, from Av(state)
// to Av(apply_move(state, m)).  Rotations with all three slots full have no
// attached bijection: invalid_argument.
BijPtr move_bijection(const ArchSystem& state, const Move& m);

// ---- paths ---------------------------------------------------------------

struct BijectionPath {
    std::string start, end;
    std::vector<Move> moves;
    std::vector<std::string> states;  // states[0] = start, one more per move
};

// Breadth-first search through moves; empty path when A == B, nullopt when no
// route exists.  bijective_only keeps the search inside compilable moves.
std::optional<BijectionPath> find_path(const ArchSystem& A, const ArchSystem& B,
                                       bool bijective_only = true);

BijPtr path_bijection(const BijectionPath& path);
ArchSystem apply_path(const BijectionPath& path, const ArchSystem& x);

// ---- exhaustive verification ---------------------------------------------

struct SizeCheck {
    int host_size = 0;
    std::uint64_t domain_count = 0;
    std::uint64_t image_count = 0;
    bool total = false;
    bool image_ok = false;
    bool injective = false;
    bool counts_equal = false;
    std::string witness;  // first failure, empty when clean
    bool pass() const { return total && image_ok && injective && counts_equal; }
};

struct PathVerification {
    bool pass = false;
    std::vector<SizeCheck> sizes;
};

// Runs the compiled path bijection over every host up to max_host_size and
// checks totality, image avoidance, injectivity, and matching counts
// (together: bijectivity).  Per-move tables are cached across calls.
PathVerification verify_path(const BijectionPath& path, int max_host_size);

// Drops the cached pools and tables; call between unrelated verification
// sweeps to bound memory.
void clear_verification_caches();

}  // namespace cohorts
