#include "doctest.h"

#include <gmpxx.h>

#include <vector>

#include "cohorts/series.hpp"

using namespace cohorts;

namespace {

mpz_class binom(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// Oracle: direct multiset counting by part size, optionally split by how many
// objects were taken (0, 1, 2, or >= 3).
std::vector<std::vector<mpz_class>> multiset_by_count(const Series& z) {
    int D = z.degree();
    std::vector<std::vector<mpz_class>> dp(
        4, std::vector<mpz_class>(static_cast<std::size_t>(D) + 1));
    dp[0][0] = 1;
    for (int i = 1; i <= D; ++i) {
        if (z.coeff(i) == 0) continue;
        unsigned long zi = z.coeff(i).get_ui();
        auto next = std::vector<std::vector<mpz_class>>(
            4, std::vector<mpz_class>(static_cast<std::size_t>(D) + 1));
        for (int cat = 0; cat < 4; ++cat)
            for (int x = 0; x <= D; ++x) {
                if (dp[static_cast<std::size_t>(cat)][static_cast<std::size_t>(x)] == 0)
                    continue;
                for (int j = 0; x + i * j <= D; ++j) {
                    int ncat = std::min(cat + j, 3);
                    next[static_cast<std::size_t>(ncat)][static_cast<std::size_t>(x + i * j)] +=
                        dp[static_cast<std::size_t>(cat)][static_cast<std::size_t>(x)] *
                        binom(zi + static_cast<unsigned long>(j) - 1,
                              static_cast<unsigned long>(j));
                }
            }
        dp = std::move(next);
    }
    return dp;
}

std::vector<Series> sample_inputs(int D) {
    std::vector<Series> zs;
    zs.push_back(Series::monomial(D, 1));                          // t
    zs.push_back(Series::monomial(D, 1, 2));                       // 2t
    zs.push_back(Series(D, {0, 1, 1}));                            // t + t^2
    zs.push_back(Series(D, {0, 3, 2, 1}));                         // 3t + 2t^2 + t^3
    zs.push_back(Series(D, {0, 0, 1, 0, 5}));                      // t^2 + 5t^4
    zs.push_back(Series(D, {0, 1, 2, 4, 9, 21, 51, 127, 323}));    // generic growth
    return zs;
}

}  // namespace

TEST_CASE("series arithmetic") {
    const int D = 10;
    Series one = Series::one(D);
    Series t = Series::monomial(D, 1);
    Series geo = one.divided_by(one - t);
    for (int i = 0; i <= D; ++i) CHECK(geo.coeff(i) == 1);
    CHECK((one - t) * geo == one);
    Series f(D, {3, 1, 4, 1, 5, 9, 2, 6});
    Series d(D, {1, 2, 7, 1, 8});
    CHECK(f.divided_by(d) * d == f);
    CHECK_THROWS_AS(f.divided_by(t), std::invalid_argument);
    CHECK_THROWS_AS(f + Series::one(9), std::invalid_argument);
    CHECK(f.truncated(3).degree() == 3);
    CHECK(f.times_t(2).coeff(2) == 3);
    CHECK(f.times_t(2).coeff(0) == 0);
    CHECK(f.of_t_power(3).coeff(3) == 1);
    CHECK(f.of_t_power(3).coeff(6) == 4);
    CHECK(f.of_t_power(3).coeff(4) == 0);
    CHECK((mpz_class(5) * t).coeff(1) == 5);
    CHECK(f.coeff(-1) == 0);
    CHECK(f.coeff(99) == 0);
    CHECK(Series::one(5).coeff_strings() ==
          std::vector<std::string>{"1", "0", "0", "0", "0", "0"});
}

TEST_CASE("multiset counts match direct enumeration") {
    const int D = 12;
    for (const Series& z : sample_inputs(D)) {
        auto by_count = multiset_by_count(z);
        Series m = multiset(z);
        Series m2 = multiset_min2(z);
        Series m3 = multiset_min3(z);
        for (int n = 0; n <= D; ++n) {
            mpz_class total = by_count[0][static_cast<std::size_t>(n)] +
                              by_count[1][static_cast<std::size_t>(n)] +
                              by_count[2][static_cast<std::size_t>(n)] +
                              by_count[3][static_cast<std::size_t>(n)];
            CHECK(m.coeff(n) == total);
            CHECK(m2.coeff(n) == by_count[2][static_cast<std::size_t>(n)] +
                                     by_count[3][static_cast<std::size_t>(n)]);
            CHECK(m3.coeff(n) == by_count[3][static_cast<std::size_t>(n)]);
        }
    }
    CHECK_THROWS_AS(multiset(Series::one(4)), std::invalid_argument);
}

TEST_CASE("multiset closed cases") {
    const int D = 8;
    Series m = multiset(Series::monomial(D, 1));  // 1/(1-t)
    Series m2 = multiset_min2(Series::monomial(D, 1));
    Series m3 = multiset_min3(Series::monomial(D, 1));
    for (int n = 0; n <= D; ++n) {
        CHECK(m.coeff(n) == 1);
        CHECK(m2.coeff(n) == ((n >= 2) ? 1 : 0));
        CHECK(m3.coeff(n) == ((n >= 3) ? 1 : 0));
    }
    Series pairs = multiset(Series::monomial(D, 1, 2));  // 1/(1-t)^2
    for (int n = 0; n <= D; ++n) CHECK(pairs.coeff(n) == n + 1);
}

TEST_CASE("multiset equals exp of its log") {
    const int D = 12;
    for (const Series& z : sample_inputs(D)) {
        std::vector<mpq_class> w = multiset_log_tail(z);
        CHECK(w[0] == 0);
        CHECK(w[1] == 0);
        // f = z + w, then e = exp(f) via n e_n = sum k f_k e_{n-k}.
        std::vector<mpq_class> f(static_cast<std::size_t>(D) + 1);
        for (int i = 0; i <= D; ++i)
            f[static_cast<std::size_t>(i)] = mpq_class(z.coeff(i)) + w[static_cast<std::size_t>(i)];
        std::vector<mpq_class> e(static_cast<std::size_t>(D) + 1);
        e[0] = 1;
        for (int n = 1; n <= D; ++n) {
            mpq_class s = 0;
            for (int k = 1; k <= n; ++k)
                s += mpq_class(k) * f[static_cast<std::size_t>(k)] *
                     e[static_cast<std::size_t>(n - k)];
            e[static_cast<std::size_t>(n)] = s / n;
        }
        Series m = multiset(z);
        for (int n = 0; n <= D; ++n)
            CHECK(e[static_cast<std::size_t>(n)] == mpq_class(m.coeff(n)));
    }
    std::vector<mpq_class> w = multiset_log_tail(Series::monomial(6, 1));
    for (int k = 2; k <= 6; ++k) CHECK(w[static_cast<std::size_t>(k)] == mpq_class(1, k));
}

TEST_CASE("reciprocal inverts units") {
    const int D = 10;
    Series geom = reciprocal(Series::one(D) - Series::monomial(D, 1));
    for (int n = 0; n <= D; ++n) CHECK(geom.coeff(n) == 1);
    for (const Series& z : sample_inputs(D)) {
        Series a = Series::one(D) + z;
        CHECK(a * reciprocal(a) == Series::one(D));
        Series b = mpz_class(-1) * a;
        CHECK(b * reciprocal(b) == Series::one(D));
    }
    CHECK_THROWS_AS(reciprocal(Series::monomial(D, 1)), std::invalid_argument);
    CHECK_THROWS_AS(reciprocal(mpz_class(2) * Series::one(D)), std::invalid_argument);
}

TEST_CASE("catalan and motzkin truncations") {
    const int D = 8;
    Series c = catalan_series(D);
    const long cat[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430};
    for (int n = 0; n <= D; ++n) CHECK(c.coeff(n) == cat[n]);
    CHECK(c == Series::one(D) + (c * c).times_t(1));

    Series m = motzkin_atom_series(D);
    const long motz[] = {0, 1, 1, 2, 4, 9, 21, 51, 127};
    for (int n = 0; n <= D; ++n) CHECK(m.coeff(n) == motz[n]);
    CHECK(m == Series::monomial(D, 1) + m.times_t(1) + (m * m).times_t(1));
}

TEST_CASE("nest-avoider ladder") {
    const int D = 6;
    CHECK(h_truncation(1, D) == Series::one(D));
    for (int n = 0; n <= D; ++n) CHECK(h_truncation(2, D).coeff(n) == 1);
    const long h3[] = {1, 1, 2, 4, 8, 16, 32};
    for (int n = 0; n <= D; ++n) CHECK(h_truncation(3, D).coeff(n) == h3[n]);

    Series c = catalan_series(D);
    for (int n = 1; n <= 6; ++n) {
        Series h = h_truncation(n, D);
        for (int m2 = 0; m2 < n && m2 <= D; ++m2) CHECK(h.coeff(m2) == c.coeff(m2));
        if (n > 1)
            CHECK(h == reciprocal(Series::one(D) - h_truncation(n - 1, D).times_t(1)));
    }
    CHECK_THROWS_AS(h_truncation(0, D), std::invalid_argument);
}
