#include "doctest.h"

#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "cohorts/arch_system.hpp"
#include "cohorts/canonical.hpp"
#include "cohorts/census.hpp"

using namespace cohorts;

namespace {

std::set<std::string> component_of(const std::string& start, bool bijective_only) {
    std::set<std::string> seen{start};
    std::queue<std::string> todo;
    todo.push(start);
    while (!todo.empty()) {
        std::string w = todo.front();
        todo.pop();
        for (const ArchSystem& y : neighbors(parse(w), bijective_only)) {
            std::string yw = render(y);
            if (seen.insert(yw).second) todo.push(yw);
        }
    }
    return seen;
}

// Oracle for the nested chain's cohort size.
std::vector<std::uint64_t> motzkin_table(int n) {
    std::vector<std::uint64_t> m(static_cast<std::size_t>(n) + 1);
    m[0] = 1;
    for (int i = 1; i <= n; ++i) {
        m[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i - 1)];
        for (int k = 0; k <= i - 2; ++k)
            m[static_cast<std::size_t>(i)] += m[static_cast<std::size_t>(k)] *
                                              m[static_cast<std::size_t>(i - 2 - k)];
    }
    return m;
}

}  // namespace

TEST_CASE("elementary moves on tiny systems") {
    Move open{Move::Kind::rotate, {}, 0, true, 0};
    CHECK(render(apply_move(parse("(())"), open)) == "()()");
    Move close{Move::Kind::rotate, {}, 0, true, 0};
    CHECK(render(apply_move(parse("()()"), close)) == "(())");
    Move swap0{Move::Kind::swap_atoms, {}, 0, true, 0};
    CHECK(render(apply_move(parse("()(())"), swap0)) == "(())()");
    Move deep{Move::Kind::rotate, {0}, 0, true, 0};
    CHECK(render(apply_move(parse("((()))"), deep)) == "(()())");
    Move back{Move::Kind::rotate, {}, 0, false, 1};
    CHECK(render(apply_move(parse("((())())"), back)) == "(())(())");
    CHECK_THROWS_AS(apply_move(parse("()"), swap0), std::invalid_argument);
    CHECK_THROWS_AS(apply_move(parse("()()()"), open), std::invalid_argument);
    Move bad_path{Move::Kind::swap_atoms, {3}, 0, true, 0};
    CHECK_THROWS_AS(apply_move(parse("()()"), bad_path), std::invalid_argument);
}

TEST_CASE("move text round trips") {
    for (int n = 1; n <= 5; ++n)
        for (const std::string& w : enumerate_all(n))
            for (auto& [m, y] : moves_from(parse(w))) {
                Move back = move_from_string(move_to_string(m));
                CHECK(back == m);
                CHECK(render(apply_move(parse(w), back)) == render(y));
            }
    CHECK(move_to_string(Move{Move::Kind::rotate, {0, 2}, 0, false, 1}) == "r:0,2:b:1");
    CHECK(move_from_string("s:1,0:2") ==
          Move{Move::Kind::swap_atoms, {1, 0}, 2, true, 0});
    CHECK_THROWS_AS(move_from_string("x::1"), std::invalid_argument);
    CHECK_THROWS_AS(move_from_string("r::x:0"), std::invalid_argument);
    CHECK_THROWS_AS(move_from_string("s::"), std::invalid_argument);
}

TEST_CASE("moves preserve the key") {
    for (int n = 1; n <= 6; ++n)
        for (const std::string& w : enumerate_all(n)) {
            ArchSystem x = parse(w);
            AtomicForm key = cohort_key(x);
            for (auto& [m, y] : moves_from(x)) {
                CAPTURE(w);
                CAPTURE(move_to_string(m));
                CHECK(system_size(y) == n);
                CHECK(cohort_key(y) == key);
            }
        }
}

TEST_CASE("neighborhood facts") {
    CHECK(neighbors(parse("()()()")).empty());
    auto nb = neighbors(parse("(())"));
    REQUIRE(nb.size() == 1);
    CHECK(render(nb[0]) == "()()");
    auto nb2 = neighbors(parse("()()"));
    REQUIRE(nb2.size() == 1);
    CHECK(render(nb2[0]) == "(())");
    CHECK(is_singleton(parse("()()()")));
    CHECK(is_singleton(parse("()")));
    CHECK_FALSE(is_singleton(parse("(())")));
    CHECK(is_singleton(parse("(()()())")));
    CHECK_FALSE(is_singleton(parse("((()()()))")));
}

TEST_CASE("key classes are exactly the move components") {
    for (int n = 1; n <= 6; ++n) {
        std::map<std::string, std::set<std::string>> classes;
        for (const std::string& w : enumerate_all(n))
            classes[form_to_string(cohort_key(parse(w)))].insert(w);
        for (auto& [key, members] : classes) {
            std::set<std::string> comp = component_of(*members.begin(), false);
            CHECK(comp == members);
        }
    }
}

TEST_CASE("census counts and structure") {
    std::vector<std::uint64_t> expect = {1, 1, 2, 4, 8, 16, 32, 67, 142, 307};
    for (int n = 1; n <= 10; ++n) {
        std::vector<CohortRow> rows = census(n);
        CHECK(rows.size() == expect[static_cast<std::size_t>(n - 1)]);
        std::uint64_t total = 0;
        bool sorted = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            total += rows[i].count;
            if (i && !form_less(rows[i - 1].key, rows[i].key)) sorted = false;
            if (n <= 7) {
                ArchSystem rep = parse(rows[i].rep);
                CHECK(system_size(rep) == n);
                CHECK(cohort_key(rep) == rows[i].key);
            }
        }
        CHECK(total == catalan_u64(n));
        CHECK(sorted);
    }
    CHECK(census(2)[0].rep == "(())");
    CHECK_THROWS_AS(census(0), std::invalid_argument);
}

TEST_CASE("cohort count series matches the census") {
    Series a = cohort_count_series(12);
    std::vector<long> first = {0, 1, 1, 1, 2, 4, 8};
    for (int i = 0; i <= 6; ++i) CHECK(a.coeff(i) == first[static_cast<std::size_t>(i)]);
    for (int n = 1; n <= 9; ++n) CHECK(a.coeff(n + 1) == mpz_class(census(n).size()));
}

TEST_CASE("main cohort counts are motzkin numbers") {
    auto mz = motzkin_table(12);
    for (int n = 1; n <= 12; ++n)
        CHECK(main_cohort_size(n) == mpz_class(mz[static_cast<std::size_t>(n)]));
    for (int n = 1; n <= 9; ++n) {
        std::uint64_t main_count = 0;
        for (const CohortRow& row : census(n))
            if (is_main_key(row.key)) main_count += row.count;
        CHECK(main_cohort_size(n) == mpz_class(main_count));
    }
}

TEST_CASE("singleton series matches the census") {
    Series s = singleton_series(13);
    std::vector<long> expect = {0, 1, 0, 1, 2, 2, 3};
    for (int i = 0; i <= 6; ++i) CHECK(s.coeff(i) == expect[static_cast<std::size_t>(i)]);
    for (int n = 1; n <= 9; ++n) {
        std::uint64_t ones = 0;
        for (const CohortRow& row : census(n))
            if (row.count == 1) ++ones;
        CHECK(s.coeff(n) == mpz_class(ones));
    }
    for (int n = 1; n <= 7; ++n)
        for (const CohortRow& row : census(n))
            CHECK(is_singleton(parse(row.rep)) == (row.count == 1));
}
