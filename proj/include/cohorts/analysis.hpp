#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cohorts/arch_system.hpp"
#include "cohorts/series.hpp"

namespace cohorts {

// One named check inside a harness run.  A failing check carries enough to
// replay it: the offending pair of systems and the degree where they part.
struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
    std::string witness_a;
    std::string witness_b;
    int witness_degree = -1;
};

struct VerificationReport {
    std::string harness;
    int n = 0;
    int degree = 0;
    std::vector<CheckResult> checks;
    bool pass = true;

    void add(CheckResult c);
};

// Every member of every cohort at size n has the same avoider counts up to
// degree D.  D < 0 means 2n.
VerificationReport verify_refinement(int n, int D = -1);

// Distinct cohorts at size n have avoider counts that first differ at degree
// at most 2n - 2.  Requires n >= 3.
VerificationReport verify_strong_conjecture(int n);

// The pair (A_n, B_n), size n each, lying in distinct cohorts whose avoider
// counts agree through degree 2n - 3 and part at 2n - 2.  Requires n >= 4.
std::pair<ArchSystem, ArchSystem> counterexample_family(int n);

// Avoider counts of every cohort at size n sit coefficientwise below the
// nest-avoider ladder h_truncation(n, .) up to degree D, strictly so at some
// reported index for every class outside the main one.  Side checks cover the
// main class count and two single-step comparison rules on sampled instances.
// Requires D >= 2n.
VerificationReport verify_dominance(int n, int D = 24);

struct GrowthEstimate {
    double gamma = 0;
    double c = 0;
    int window_lo = 0;
    int window_hi = 0;
};

// Estimates gamma and c in (cohorts of size n) ~ c n^{-3/2} gamma^n from the
// count series truncated at D, by Richardson-extrapolated ratios.  D >= 100.
GrowthEstimate growth_rate_estimate(int D);

struct RadiusEstimate {
    double rho = 0;
    double inv_rho = 0;
    double fyy_at_root = 0;
};

// Dominant singularity of the atomic count series, located as the root in
// (0.3, 0.5) of the saddle condition with series data capped at
// approx_degree.  The second-derivative value at the root is reported so a
// degenerate saddle would be visible.  approx_degree in [50, 800].
RadiusEstimate radius_estimate(int approx_degree);

std::string report_to_json(const VerificationReport& r);
std::string report_to_csv(const VerificationReport& r);

}  // namespace cohorts
