#include "doctest.h"

#include <set>
#include <string>

#include "cohorts/arch_system.hpp"
#include "cohorts/canonical.hpp"

using namespace cohorts;

namespace {

std::string key_str(const std::string& word) {
    return form_to_string(cohort_key(parse(word)));
}

}  // namespace

TEST_CASE("canonical forms of small systems") {
    CHECK(key_str("(())") == "(u 3)");
    CHECK(key_str("()()") == "(u 3)");
    CHECK(key_str("()") == "(u 2)");
    CHECK(key_str("") == "(u 1)");
    for (const char* w : {"((()))", "(()())", "(())()", "()(())"})
        CHECK(key_str(w) == "(u 4)");
    CHECK(key_str("()()()") == "(u 0 (L (u 1) (u 1) (u 1)))");
    CHECK(key_str("(()()())") == "(u 1 (L (u 1) (u 1) (u 1)))");
}

TEST_CASE("form sizes trail the system by one") {
    for (int n = 0; n <= 7; ++n)
        for (const std::string& w : enumerate_all(n))
            CHECK(form_size(cohort_key(parse(w))) == n + 1);
}

TEST_CASE("wrap and join worked examples") {
    // One extra atom next to a frozen block only adds units.
    Atom joined = wrap(parse("(()()())()"));
    CHECK(form_to_string(canonical_atom(joined)) == "(u 2 (L (u 1) (u 1) (u 1)))");
    // Two frozen blocks side by side keep both leaves.
    Atom twins = wrap(parse("(()()())(()()())"));
    AtomicForm k = canonical_atom(twins);
    CHECK(k.u == 0);
    CHECK(k.leaves.size() == 2);
    CHECK(form_size(k) == 9);
}

TEST_CASE("main keys") {
    CHECK(main_key(3) == cohort_key(nest(3)));
    CHECK(main_key(3) == cohort_key(parse("(())()")));
    CHECK(is_main_key(main_key(7)));
    CHECK_FALSE(is_main_key(cohort_key(parse("()()()"))));
}

TEST_CASE("form text round trips and rejects malformed input") {
    std::set<std::string> keys;
    for (int n = 1; n <= 8; ++n)
        for (const std::string& w : enumerate_all(n)) keys.insert(key_str(w));
    for (const std::string& ks : keys) {
        AtomicForm f = form_from_string(ks);
        CHECK(form_to_string(f) == ks);
    }
    CHECK_THROWS_AS(form_from_string("(u -1)"), std::invalid_argument);
    CHECK_THROWS_AS(form_from_string("(u 0)"), std::invalid_argument);
    CHECK_THROWS_AS(form_from_string("(u 0 (L (u 1) (u 1)))"), std::invalid_argument);
    CHECK_THROWS_AS(form_from_string("(u 1) junk"), std::invalid_argument);
    CHECK_THROWS_AS(form_from_string("(v 1)"), std::invalid_argument);
    CHECK_THROWS_AS(form_from_string("(u 1"), std::invalid_argument);
    // Children must arrive sorted.
    CHECK_THROWS_AS(form_from_string("(u 0 (L (u 2) (u 1) (u 1)))"), std::invalid_argument);
    CHECK_NOTHROW(form_from_string("(u 0 (L (u 1) (u 1) (u 2)))"));
}

TEST_CASE("form order is a strict total order on small keys") {
    std::set<std::string> strs;
    for (const std::string& w : enumerate_all(6)) strs.insert(key_str(w));
    std::vector<AtomicForm> forms;
    for (const std::string& s : strs) forms.push_back(form_from_string(s));
    for (const AtomicForm& a : forms)
        for (const AtomicForm& b : forms) {
            int rel = form_less(a, b) + 2 * form_less(b, a);
            if (a == b)
                CHECK(rel == 0);
            else
                CHECK((rel == 1 || rel == 2));
        }
}

TEST_CASE("representatives reproduce their keys") {
    CHECK(representative(main_key(5)) == nest(5));
    CHECK(render(representative(form_from_string("(u 0 (L (u 1) (u 1) (u 1)))"))) ==
          "()()()");
    std::set<std::string> keys;
    for (int n = 1; n <= 8; ++n)
        for (const std::string& w : enumerate_all(n)) keys.insert(key_str(w));
    for (const std::string& ks : keys) {
        AtomicForm key = form_from_string(ks);
        ArchSystem rep = representative(key);
        CHECK(cohort_key(rep) == key);
        CHECK(system_size(rep) == form_size(key) - 1);
    }
}
