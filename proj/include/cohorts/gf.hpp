#pragma once

#include "cohorts/arch_system.hpp"
#include "cohorts/series.hpp"

namespace cohorts {

// Generating function of the systems avoiding the pattern, truncated at
// `degree`.  Coefficient n counts the size-n avoiders.  The pattern must be
// nonempty.  Results are memoized per (pattern, degree); safe under
// concurrent callers.
Series gf_avoid(const ArchSystem& pattern, int degree);

// Common avoider series of the patterns a.(bc), (ab).c and their relatives
// built from three atoms, in closed form over the single-atom series.
Series gf_rotation_class(const Atom& a, const Atom& b, const Atom& c, int degree);

}  // namespace cohorts
