#include "support.hpp"

#include "opac/error.hpp"
#include "opac/lasso.hpp"

#include <doctest.h>

using namespace opac;
using namespace opac::testing;

TEST_CASE("rendering and parsing round trip") {
    Model m = corpus_model("fig4");
    const auto& labels = m.alphabet();
    for (const char* text : {"bcax", "ca(b)*x", "ca(b)*x⊥*", "(ab|c)*x", "x"}) {
        CAPTURE(text);
        auto e = parse_lasso(text, labels);
        bool verbose = std::string(text).find("⊥*") != std::string::npos;
        CHECK(render(e, labels, verbose) == text);
    }
    CHECK(parse_lasso("ca(b)*x⊥*", labels).suffix_bot);
    CHECK_THROWS_AS(parse_lasso("cz", labels), SyntaxError);
    CHECK_THROWS_AS(parse_lasso("c(a", labels), SyntaxError);
}

TEST_CASE("longest label names are matched first") {
    Model m = corpus_model("location");
    auto e = parse_lasso("stationtravelbankBairportL1", m.alphabet());
    CHECK(e.items.size() == 5);
    CHECK(render_obs(e, m.observations()) == "sba");
}

TEST_CASE("observation rendering drops hidden labels and empty cycles") {
    Model m = corpus_model("fig4");
    CHECK(render_obs(parse_lasso("ca(b)*x", m.alphabet()), m.observations()) == "ca");
    CHECK(render_obs(parse_lasso("bcax", m.alphabet()), m.observations()) == "ca");
    CHECK(render_obs(parse_lasso("(ac)*x", m.alphabet()), m.observations()) == "(ac)*");
}

TEST_CASE("expression probabilities on the running example") {
    Model m = corpus_model("fig4");
    auto s0 = m.initial();
    CHECK(expr_probability(parse_lasso("bcax⊥*", m.alphabet()), m, s0) == Rational(1, 96));
    CHECK(expr_probability(parse_lasso("ca(b)*x⊥*", m.alphabet()), m, s0) == Rational(1, 64));
    // without the suffix the final ⊥ step is not counted: x leads to a state whose ⊥ loop has probability 1
    CHECK(expr_probability(parse_lasso("ca(b)*x", m.alphabet()), m, s0) == Rational(1, 64));
    CHECK(expr_probability(parse_lasso("x⊥*", m.alphabet()), m, s0) == Rational(5, 8));
    CHECK_THROWS_AS(expr_probability(parse_lasso("a", m.alphabet()), m, s0), InvalidWalk);

    Model f3 = corpus_model("fig3");
    CHECK(expr_probability(parse_lasso("ac(b)*a⊥*", f3.alphabet()), f3, f3.initial()) == Rational(1, 3));
    CHECK(expr_probability(parse_lasso("aba(c)*⊥*", f3.alphabet()), f3, f3.initial()) == Rational(2, 3));
}

TEST_CASE("expressions as automata") {
    Model m = corpus_model("fig4");
    auto nfa = expr_to_nfa(parse_lasso("ca(b)*x⊥*", m.alphabet()), m.alphabet());
    auto w = [&](const std::string& s) {
        auto l = labels_of(m, s);
        return Word(l.begin(), l.end());
    };
    CHECK(accepts(nfa, w("c a x")));
    CHECK(accepts(nfa, w("c a b b x bot bot")));
    CHECK_FALSE(accepts(nfa, w("c a b")));
    CHECK_FALSE(accepts(nfa, w("c x")));
}
