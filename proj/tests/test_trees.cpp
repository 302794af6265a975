#include <map>
#include <set>
#include <string>

#include "doctest.h"
#include "postlr/errors.hpp"
#include "postlr/trees.hpp"

using namespace postlr;

namespace {

// Every string over {o,[,]} up to the given length that parses, grouped by vertex count.
std::map<int, std::set<std::string>> brute_force_trees(int max_len) {
    std::map<int, std::set<std::string>> out;
    const std::string alphabet = "o[]";
    std::set<std::string> frontier{""};
    for (int len = 1; len <= max_len; ++len) {
        std::set<std::string> next;
        for (const auto& s : frontier) {
            for (char c : alphabet) next.insert(s + c);
        }
        for (const auto& s : next) {
            try {
                const PlanarTree t = parse_tree(s);
                out[t.vertex_count()].insert(t.code());
            } catch (const ParseError&) {
            }
        }
        frontier = std::move(next);
    }
    return out;
}

}  // namespace

TEST_CASE("parse and format") {
    CHECK(format(parse_tree("o")) == "o");
    CHECK(parse_tree("o").vertex_count() == 1);
    const PlanarTree chain = parse_tree("[o]");
    CHECK(chain.vertex_count() == 2);
    REQUIRE(chain.children().size() == 1);
    CHECK(chain.children()[0].code() == "o");

    const PlanarTree t = parse_tree("[o[o]]");
    const auto kids = t.children();
    REQUIRE(kids.size() == 2);
    CHECK(kids[0].code() == "o");
    CHECK(kids[1].code() == "[o]");
    CHECK(t.vertex_count() == 4);

    CHECK(parse_tree("[]").code() == "o");
    CHECK(parse_tree("[[][]]").code() == "[oo]");
}

TEST_CASE("parse errors carry offsets") {
    auto offset_of = [](const char* s) {
        try {
            parse_tree(s);
        } catch (const ParseError& e) {
            return static_cast<long>(e.offset());
        }
        return -1L;
    };
    CHECK(offset_of("") == 0);
    CHECK(offset_of("x") == 0);
    CHECK(offset_of("[o") == 2);
    CHECK(offset_of("oo") == 1);
    CHECK(offset_of("[o]]") == 3);
    CHECK_THROWS_AS(parse_forest("o  o"), ParseError);
    CHECK_THROWS_AS(parse_forest(""), ParseError);
}

TEST_CASE("forest grammar") {
    CHECK(parse_forest("1").empty());
    const Forest f = parse_forest("o [o] [[o]o]");
    CHECK(f.length() == 3);
    CHECK(f.grade() == 1 + 2 + 4);
    CHECK(format(f) == "o [o] [[o]o]");
    CHECK(format(Forest()) == "1");
}

TEST_CASE("canonical form is idempotent on all trees up to grade 5") {
    for (int n = 1; n <= 5; ++n) {
        for (const auto& t : enumerate_trees(n)) {
            CHECK(format(parse_tree(format(t))) == format(t));
            CHECK(parse_tree(format(t)) == t);
            CHECK(PlanarTree::graft_root(t.children()) == t);
        }
    }
}

TEST_CASE("tree counts match a brute-force oracle") {
    const auto oracle = brute_force_trees(10);
    const int catalan[] = {1, 1, 2, 5, 14};
    for (int n = 1; n <= 5; ++n) {
        const auto trees = enumerate_trees(n);
        CHECK(static_cast<int>(trees.size()) == catalan[n - 1]);
        std::set<std::string> codes;
        for (const auto& t : trees) codes.insert(t.code());
        CHECK(codes == oracle.at(n));
    }
}

TEST_CASE("forest enumeration") {
    const auto one = enumerate_forests(1);
    REQUIRE(one.size() == 2);
    CHECK(format(one[0]) == "1");
    CHECK(format(one[1]) == "o");

    const auto three = enumerate_forests(3);
    REQUIRE(three.size() == 9);
    const char* expected[] = {"1", "o", "[o]", "o o", "[[o]]", "[o] o", "[oo]", "o [o]", "o o o"};
    for (std::size_t i = 0; i < 9; ++i) CHECK(format(three[i]) == expected[i]);

    // Forests of grade n are counted by Catalan(n): a forest is the child list of a root.
    const std::size_t catalan[] = {1, 1, 2, 5, 14, 42, 132};
    for (int n = 0; n <= 6; ++n) CHECK(forests_of_grade(n).size() == catalan[n]);

    for (std::size_t i = 1; i < three.size(); ++i) CHECK(three[i - 1] < three[i]);

    CHECK_THROWS_AS(enumerate_forests(7), CapacityError);
    CHECK(enumerate_forests(7, 7).size() == 1 + 1 + 2 + 5 + 14 + 42 + 132 + 429);
}

TEST_CASE("left grafting") {
    const PlanarTree o;
    const auto chain = parse_tree("[o]");

    auto g = left_graft(o, o);
    REQUIRE(g.size() == 1);
    CHECK(g.begin()->first.code() == "[o]");

    g = left_graft(o, chain);
    CHECK(g == std::map<PlanarTree, long>{{parse_tree("[oo]"), 1}, {parse_tree("[[o]]"), 1}});

    g = left_graft(chain, o);
    CHECK(g == std::map<PlanarTree, long>{{parse_tree("[[o]]"), 1}});

    // Grafting o onto [oo]: root gets a new leftmost child, each leaf becomes [o].
    g = left_graft(o, parse_tree("[oo]"));
    CHECK(g == std::map<PlanarTree, long>{{parse_tree("[ooo]"), 1}, {parse_tree("[[o]o]"), 1}, {parse_tree("[o[o]]"), 1}});
}

TEST_CASE("left grafting mass and grade") {
    for (int a = 1; a <= 3; ++a) {
        for (int b = 1; b <= 3; ++b) {
            for (const auto& tau : enumerate_trees(a)) {
                for (const auto& sigma : enumerate_trees(b)) {
                    long mass = 0;
                    for (const auto& [t, m] : left_graft(tau, sigma)) {
                        mass += m;
                        CHECK(t.vertex_count() == a + b);
                    }
                    CHECK(mass == sigma.vertex_count());
                }
            }
        }
    }
}

TEST_CASE("forest concatenation") {
    const Forest a = parse_forest("o [o]");
    const Forest b = parse_forest("[[o]]");
    const Forest c = parse_forest("o");
    CHECK(a.concat(b).concat(c) == a.concat(b.concat(c)));
    CHECK(a.concat(Forest()) == a);
    CHECK(Forest().concat(a) == a);
    CHECK(format(a.reversed()) == "[o] o");
    CHECK(format(a.concat(b).slice(1, 3)) == "[o] [[o]]");
}

TEST_CASE("forest grafting") {
    const PlanarTree o;
    // A single tree on a single tree is left grafting.
    for (const auto& tau : enumerate_trees(2)) {
        for (const auto& sigma : enumerate_trees(3)) {
            std::map<Forest, long> expected;
            for (const auto& [t, m] : left_graft(tau, sigma)) expected[Forest(t)] += m;
            CHECK(graft_forest(Forest(tau), Forest(sigma)) == expected);
        }
    }
    // Both letters of "o o" at the root of "o" keep their order: [oo].
    CHECK(graft_forest(parse_forest("o o"), parse_forest("o")) == std::map<Forest, long>{{parse_forest("[oo]"), 1}});
    // "o" on a two-letter word acts letter by letter.
    CHECK(graft_forest(parse_forest("o"), parse_forest("o o")) ==
          std::map<Forest, long>{{parse_forest("[o] o"), 1}, {parse_forest("o [o]"), 1}});
    CHECK(graft_forest(Forest(), parse_forest("o [o]")) == std::map<Forest, long>{{parse_forest("o [o]"), 1}});
    CHECK(graft_forest(parse_forest("o"), Forest()).empty());
    // Mass is (vertices of b)^(letters of a).
    for (const auto& a : enumerate_forests(3)) {
        for (const auto& b : enumerate_forests(3)) {
            long mass = 0;
            for (const auto& [f, m] : graft_forest(a, b)) {
                mass += m;
                CHECK(f.grade() == a.grade() + b.grade());
                CHECK(f.length() == b.length());
            }
            long expected = 1;
            for (std::size_t i = 0; i < a.length(); ++i) expected *= b.grade();
            CHECK(mass == expected);
        }
    }
}
