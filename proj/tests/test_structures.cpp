#include "doctest.h"

#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "cohorts/arch_system.hpp"

using namespace cohorts;

TEST_CASE("parse and render round trip") {
    for (const char* w : {"", "()", "(())", "()()", "(()(()))((()))()"}) {
        CHECK(render(parse(w)) == w);
    }
    for (int n = 0; n <= 6; ++n)
        for (const std::string& w : enumerate_all(n)) CHECK(render(parse(w)) == w);
}

TEST_CASE("parse errors carry offsets") {
    CHECK_THROWS_AS(parse("(a)"), ParseError);
    try {
        parse("(a)");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 1);
    }
    try {
        parse("())");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
    }
    try {
        parse("(()");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 0);
    }
    try {
        parse("((()");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 1);
    }
    try {
        parse(")");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 0);
    }
}

TEST_CASE("sizes and builders") {
    CHECK(system_size(parse("")) == 0);
    CHECK(system_size(parse("(()(()))((()))()")) == 8);
    CHECK(atom_size(wrap(parse("()()"))) == 3);
    CHECK(render(nest(0)) == "");
    CHECK(render(nest(3)) == "((()))");
    CHECK(render(concat(parse("()"), parse("(())"))) == "()(())");
    CHECK(render(as_system(wrap(parse("()")))) == "(())");
    CHECK(parse("(())") == parse("(())"));
    CHECK(parse("(())") != parse("()()"));
}

TEST_CASE("dyck path conversion") {
    CHECK(to_dyck(parse("(()(()))((()))()")).steps == "uuduuddduuudddud");
    CHECK(render(from_dyck(DyckPath{"uuduuddduuudddud"})) == "(()(()))((()))()");
    for (int n = 0; n <= 6; ++n)
        for (const std::string& w : enumerate_all(n)) {
            ArchSystem s = parse(w);
            CHECK(from_dyck(to_dyck(s)) == s);
        }
    CHECK_THROWS_AS(from_dyck(DyckPath{"uxd"}), ParseError);
    CHECK_THROWS_AS(from_dyck(DyckPath{"du"}), ParseError);
}

TEST_CASE("forest conversion and text form") {
    ArchSystem s = parse("(()(()))((()))()");
    PlaneForest f = to_forest(s);
    CHECK(forest_to_string(f) == "2,0,1,0;1,1,0;0");
    CHECK(from_forest(forest_from_string("2,0,1,0;1,1,0;0")) == s);
    for (int n = 0; n <= 6; ++n)
        for (const std::string& w : enumerate_all(n)) {
            ArchSystem x = parse(w);
            CHECK(from_forest(to_forest(x)) == x);
            CHECK(forest_from_string(forest_to_string(to_forest(x))) == to_forest(x));
        }
    CHECK(forest_to_string(to_forest(parse(""))) == "");
    CHECK(from_forest(forest_from_string("")) == parse(""));
    CHECK_THROWS_AS(forest_from_string("2,0"), std::invalid_argument);
    CHECK_THROWS_AS(forest_from_string("0,0"), std::invalid_argument);
    CHECK_THROWS_AS(forest_from_string("x"), std::invalid_argument);
}

TEST_CASE("permutation conversion") {
    CHECK(perm_to_string(to_perm(parse("(()(()))((()))()"))) == "41327658");
    CHECK(perm_to_string(to_perm(nest(3))) == "321");
    CHECK(perm_to_string(to_perm(parse("()()()"))) == "123");
    CHECK(render(from_perm(perm_from_string("41327658"))) == "(()(()))((()))()");
    for (int n = 0; n <= 7; ++n)
        for (const std::string& w : enumerate_all(n)) {
            ArchSystem x = parse(w);
            CHECK(from_perm(to_perm(x)) == x);
        }
    CHECK_THROWS_AS(from_perm(Perm231{{2, 3, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(from_perm(Perm231{{1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(from_perm(Perm231{{0, 1}}), std::invalid_argument);
}

TEST_CASE("permutations of distinct systems are distinct") {
    std::set<std::vector<int>> seen;
    for (const std::string& w : enumerate_all(6)) seen.insert(to_perm(parse(w)).values);
    CHECK(seen.size() == enumerate_all(6).size());
}

TEST_CASE("perm text forms") {
    Perm231 big;
    big.values.resize(11);
    std::iota(big.values.begin(), big.values.end(), 1);
    CHECK(perm_to_string(big) == "1,2,3,4,5,6,7,8,9,10,11");
    CHECK(perm_from_string("1,2,3,4,5,6,7,8,9,10,11") == big);
    CHECK(perm_from_string("321") == Perm231{{3, 2, 1}});
    CHECK_THROWS_AS(perm_from_string("332"), std::invalid_argument);
    CHECK_THROWS_AS(perm_from_string("1,x"), std::invalid_argument);
}

TEST_CASE("catalan numbers") {
    CHECK(catalan_u64(0) == 1);
    CHECK(catalan_u64(1) == 1);
    CHECK(catalan_u64(5) == 42);
    CHECK(catalan_u64(10) == 16796);
    CHECK(catalan_u64(12) == 208012);
    CHECK(catalan_u64(15) == 9694845);
    CHECK_NOTHROW(catalan_u64(35));
    CHECK_THROWS_AS(catalan_u64(36), std::invalid_argument);
    CHECK_THROWS_AS(catalan_u64(-1), std::invalid_argument);
}

TEST_CASE("word enumeration order and count") {
    std::vector<std::string> w3 = enumerate_all(3);
    std::vector<std::string> expect = {"((()))", "(()())", "(())()", "()(())", "()()()"};
    CHECK(w3 == expect);
    for (int n = 0; n <= 8; ++n) {
        std::vector<std::string> all = enumerate_all(n);
        CHECK(all.size() == catalan_u64(n));
        CHECK(std::is_sorted(all.begin(), all.end()));
        std::set<std::string> uniq(all.begin(), all.end());
        CHECK(uniq.size() == all.size());
    }
    CHECK(enumerate_all(0) == std::vector<std::string>{""});
}

TEST_CASE("rank and unrank agree with enumeration") {
    for (int n = 0; n <= 6; ++n) {
        std::vector<std::string> all = enumerate_all(n);
        for (std::size_t i = 0; i < all.size(); ++i) {
            CHECK(word_rank(all[i]) == i);
            CHECK(word_unrank(n, i) == all[i]);
        }
        CHECK_THROWS_AS(word_unrank(n, all.size()), std::invalid_argument);
    }
}

TEST_CASE("word stream resumes at a rank") {
    const int n = 6;
    std::vector<std::string> all = enumerate_all(n);
    WordStream s(n, 40);
    for (std::size_t i = 40; i < all.size(); ++i, s.advance()) {
        REQUIRE_FALSE(s.done());
        CHECK(s.word() == all[i]);
        CHECK(s.rank() == i);
    }
    CHECK(s.done());
    CHECK(WordStream(n, catalan_u64(n)).done());
}
