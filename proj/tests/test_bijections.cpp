#include "doctest.h"

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cohorts/arch_system.hpp"
#include "cohorts/bijections.hpp"
#include "cohorts/census.hpp"
#include "cohorts/containment.hpp"

using namespace cohorts;

namespace {

Atom at(const std::string& w) { return parse(w).front(); }

// Checks bijectivity of b between its avoidance classes at every host size
// up to max_n: image avoidance, injectivity, matching counts, and that
// unapply undoes apply.
void sweep(const BijPtr& b, int max_n) {
    for (int n = 0; n <= max_n; ++n) {
        std::vector<std::string> dom;
        std::set<std::string> img;
        for (const std::string& w : enumerate_all(n)) {
            if (avoids(parse(w), b->source())) dom.push_back(w);
            if (avoids(parse(w), b->target())) img.insert(w);
        }
        REQUIRE(dom.size() == img.size());
        std::set<std::string> seen;
        for (const std::string& w : dom) {
            CAPTURE(n);
            CAPTURE(w);
            const std::string y = render(b->apply(parse(w)));
            CAPTURE(y);
            CHECK(img.count(y) == 1);
            CHECK(seen.insert(y).second);
            CHECK(render(b->unapply(parse(y))) == w);
        }
    }
}

}  // namespace

TEST_CASE("swap reverses the gap around the carrier") {
    BijPtr sw = bij_swap({}, {}, at("(())"), at("()"));
    CHECK(render(sw->source()) == "(())()");
    CHECK(render(sw->target()) == "()(())");
    CHECK(render(sw->apply(parse("(())()"), false)) == "()(())");
    CHECK(render(sw->unapply(parse("()(())"), false)) == "(())()");
    // a host avoiding the middle pattern sits still
    CHECK(render(sw->apply(parse("()()()"), false)) == "()()()");
    CHECK(render(sw->apply(parse("(())"), false)) == "(())");
    sweep(sw, 8);
}

TEST_CASE("swap respects surrounding context patterns") {
    BijPtr sw = bij_swap(parse("()"), parse("()"), at("(())"), at("()"));
    CHECK(render(sw->source()) == "()(())()()");
    CHECK(render(sw->target()) == "()()(())()");
    sweep(sw, 8);
}

TEST_CASE("absorb moves the loose atom into the wrap") {
    BijPtr ab = bij_absorb(at("()"), at("()"));
    CHECK(render(ab->source()) == "()(())");
    CHECK(render(ab->target()) == "(()())");
    CHECK(render(ab->apply(parse("()(())"), false)) == "(()())");
    CHECK(render(ab->unapply(parse("(()())"), false)) == "()(())");
    sweep(ab, 8);
    sweep(bij_absorb(at("(())"), at("()")), 8);
}

TEST_CASE("absorb with an empty wrap unrolls the nesting") {
    BijPtr ab = bij_absorb(at("()"), std::nullopt);
    CHECK(render(ab->source()) == "()()");
    CHECK(render(ab->target()) == "(())");
    CHECK(render(ab->apply(parse("((()))"), false)) == "()()()");
    CHECK(render(ab->unapply(parse("()()()"), false)) == "((()))");
    sweep(ab, 8);
    sweep(bij_absorb(at("(())"), std::nullopt), 8);
}

TEST_CASE("wrap lifting maps every top atom") {
    BijPtr lifted = bij_wrap_lift(bij_swap({}, {}, at("()"), at("(())")));
    CHECK(render(lifted->source()) == "(()(()))");
    CHECK(render(lifted->target()) == "((())())");
    sweep(lifted, 8);
}

TEST_CASE("context lifting applies the inner map slotwise") {
    BijPtr inner = bij_wrap_lift(bij_absorb(at("()"), std::nullopt));
    CHECK(render(inner->source()) == "(()())");
    CHECK(render(inner->target()) == "((()))");
    sweep(bij_context(parse("()"), parse("()"), inner), 8);
    sweep(bij_context(parse("()"), {}, inner), 8);
    sweep(bij_context({}, {}, inner), 7);
}

TEST_CASE("inverse and composition chain cleanly") {
    BijPtr ab = bij_absorb(at("()"), at("()"));
    BijPtr inv = bij_inverse(ab);
    CHECK(render(inv->source()) == "(()())");
    CHECK(render(inv->target()) == "()(())");
    BijPtr round = bij_compose({ab, inv});
    for (const std::string& w : enumerate_all(6))
        if (avoids(parse(w), ab->source()))
            CHECK(render(round->apply(parse(w))) == w);
}

TEST_CASE("every bijective move compiles to a bijection") {
    for (const std::string& sw : enumerate_all(4)) {
        const ArchSystem x = parse(sw);
        for (const auto& [m, y] : moves_from(x, true)) {
            CAPTURE(sw);
            CAPTURE(move_to_string(m));
            BijPtr b = move_bijection(x, m);
            CHECK(render(b->source()) == sw);
            CHECK(render(b->target()) == render(y));
            sweep(b, 6);
        }
    }
}

TEST_CASE("construction guards") {
    CHECK_THROWS_AS(bij_compose({}), std::invalid_argument);
    CHECK_THROWS_AS(bij_compose({bij_identity(parse("()")), bij_identity(parse("(())"))}),
                    std::invalid_argument);
    // two-atom inner patterns cannot ride through a context
    CHECK_THROWS_AS(bij_context({}, {}, bij_swap({}, {}, at("()"), at("(())"))),
                    std::invalid_argument);
    Move all_full{Move::Kind::rotate, {}, 0, true, 1};
    CHECK_THROWS_AS(move_bijection(parse("()(()())"), all_full), std::invalid_argument);
    BijPtr sw = bij_swap({}, {}, at("(())"), at("()"));
    CHECK_THROWS_AS(sw->apply(parse("(())()")), std::invalid_argument);
    CHECK_THROWS_AS(sw->unapply(parse("()(())")), std::invalid_argument);
}

TEST_CASE("descriptions name their pieces") {
    CHECK(bij_swap({}, {}, at("()"), at("(())"))->describe() == "swap(;;();(()))");
    CHECK(bij_absorb(at("()"), std::nullopt)->describe() == "absorb(();-)");
    CHECK(bij_absorb(at("()"), at("(())"))->describe() == "absorb(();(()))");
    const std::string c =
        bij_compose({bij_absorb(at("()"), at("()")),
                     bij_inverse(bij_absorb(at("()"), at("()")))})
            ->describe();
    CHECK(c.find("compose[") == 0);
    CHECK(c.find("inv[") != std::string::npos);
}

TEST_CASE("paths between equivalent systems verify exhaustively") {
    auto p = find_path(parse("(())"), parse("()()"));
    REQUIRE(p);
    CHECK(p->start == "(())");
    CHECK(p->end == "()()");
    CHECK(p->states.size() == p->moves.size() + 1);
    PathVerification v = verify_path(*p, 9);
    CHECK(v.pass);
    for (const SizeCheck& sc : v.sizes) {
        // exactly one flat word and one nested chain per size
        CHECK(sc.domain_count == 1);
        CHECK(sc.image_count == 1);
        CHECK(sc.witness.empty());
    }

    auto q = find_path(parse("()(())"), parse("((()))"));
    REQUIRE(q);
    PathVerification vq = verify_path(*q, 9);
    CHECK(vq.pass);

    ArchSystem img = apply_path(*q, parse("()()()"));
    CHECK(avoids(img, parse("((()))")));
    CHECK(render(path_bijection(*q)->unapply(img)) == "()()()");
    clear_verification_caches();
}

TEST_CASE("paths stop at cohort borders") {
    CHECK(!find_path(parse("()()()"), parse("((()))")));
    CHECK(!find_path(parse("()"), parse("()()")));
    auto self = find_path(parse("(()())"), parse("(()())"));
    REQUIRE(self);
    CHECK(self->moves.empty());
    CHECK(verify_path(*self, 6).pass);
    CHECK(render(apply_path(*self, parse("()()"))) == "()()");
    clear_verification_caches();
}
