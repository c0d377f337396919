#include "cohorts/gf.hpp"

#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace cohorts {

namespace {

// Design notes
//
// The avoider series of a pattern with atoms a_1..a_m satisfies a linear
// relation whose other terms only involve contiguous subpatterns (fewer
// atoms) and the contents of a_1 (smaller size), so recursion terminates.
// For a single atom, an avoider of (X) is a row of atoms whose contents each
// avoid X, giving the geometric form directly.  The m >= 2 relation tracks
// whether a prefix of the pattern is completed before the last atom can
// start; its divisor has constant term 1, so dividing is exact.

struct GFCache {
    std::mutex mu;
    std::unordered_map<std::string, Series> map;
};

GFCache& cache() {
    static GFCache c;
    return c;
}

Series gf_system(const ArchSystem& p, int degree);

Series gf_sub(const ArchSystem& p, std::size_t i, std::size_t j, int degree) {
    return gf_system(ArchSystem(p.begin() + static_cast<std::ptrdiff_t>(i),
                                p.begin() + static_cast<std::ptrdiff_t>(j)),
                     degree);
}

Series gf_compute(const ArchSystem& p, int degree) {
    Series one = Series::one(degree);
    if (p.size() == 1) {
        Series fx = gf_system(p[0].contents, degree);
        return one.divided_by(one - fx.times_t(1));
    }
    std::size_t m = p.size();
    Series f_inner = gf_system(p[0].contents, degree);     // contents of a_1
    Series f_first = gf_sub(p, 0, 1, degree);              // a_1 alone
    Series f_last = gf_sub(p, m - 1, m, degree);           // a_m alone
    Series rhs = one + ((f_first - f_inner) * gf_sub(p, 1, m, degree)).times_t(1);
    for (std::size_t k = 2; k + 1 <= m; ++k) {
        Series step = gf_sub(p, 0, k, degree) - gf_sub(p, 0, k - 1, degree);
        rhs += (step * gf_sub(p, k - 1, m, degree)).times_t(1);
    }
    rhs -= (gf_sub(p, 0, m - 1, degree) * f_last).times_t(1);
    Series divisor = one - f_inner.times_t(1) - f_last.times_t(1);
    return rhs.divided_by(divisor);
}

Series gf_system(const ArchSystem& p, int degree) {
    if (p.empty()) return Series(degree);
    std::string key = render(p) + '#' + std::to_string(degree);
    {
        std::lock_guard<std::mutex> lock(cache().mu);
        if (auto it = cache().map.find(key); it != cache().map.end()) return it->second;
    }
    Series result = gf_compute(p, degree);
    std::lock_guard<std::mutex> lock(cache().mu);
    return cache().map.emplace(key, std::move(result)).first->second;
}

}  // namespace

Series gf_avoid(const ArchSystem& pattern, int degree) {
    if (pattern.empty())
        throw std::invalid_argument("pattern must be nonempty");
    return gf_system(pattern, degree);
}

Series gf_rotation_class(const Atom& a, const Atom& b, const Atom& c, int degree) {
    Series one = Series::one(degree);
    Series fa = gf_avoid(as_system(a), degree);
    Series fb = gf_avoid(as_system(b), degree);
    Series fc = gf_avoid(as_system(c), degree);
    Series num = one - (fa * fb + fb * fc + fc * fa - fa * fb * fc).times_t(1);
    Series den =
        one - (fa + fb + fc).times_t(1) + (fa * fb * fc).times_t(2);
    return num.divided_by(den);
}

}  // namespace cohorts
