#include "support.hpp"

#include "opac/error.hpp"
#include "opac/ldtmc.hpp"

#include <doctest.h>

#include <map>

using namespace opac;
using namespace opac::testing;

namespace {

const char* kCorpus[] = {"fig2a", "fig2b", "fig3", "fig4", "fig6a", "location", "dining", "ni_five"};

std::string wrap(const std::string& body, const std::string& obs = "a->a") {
    return "ldtmc\nobservations " + obs + " endobservations\nmodule m\n" + body + "\nendmodule\n";
}

// Same shape up to state numbering: walk both models from the initial state in
// label order and compare what is seen.
bool isomorphic(const Model& a, const Model& b) {
    if (a.num_states() != b.num_states()) return false;
    std::map<std::uint32_t, std::uint32_t> map = {{a.initial().index, b.initial().index}};
    std::vector<StateId> work = {a.initial()};
    while (!work.empty()) {
        auto s = work.back();
        work.pop_back();
        auto t = StateId{map[s.index]};
        if (a.props(s) != b.props(t) || a.meta(s).valuation != b.meta(t).valuation) return false;
        auto ea = a.out(s);
        auto eb = b.out(t);
        if (ea.size() != eb.size()) return false;
        for (std::size_t i = 0; i < ea.size(); ++i) {
            if (a.alphabet().name(ea[i].label) != b.alphabet().name(eb[i].label) || ea[i].prob != eb[i].prob)
                return false;
            auto [it, fresh] = map.emplace(ea[i].target.index, eb[i].target.index);
            if (!fresh && it->second != eb[i].target.index) return false;
            if (fresh) work.push_back(ea[i].target);
        }
    }
    return map.size() == a.num_states();
}

}  // namespace

TEST_CASE("the running example parses to two variables and six commands") {
    auto src = parse_model(corpus_text("fig4.ldtmc"));
    CHECK(src.module_name == "fig4");
    REQUIRE(src.variables.size() == 2);
    CHECK(src.variables[0].name == "s");
    CHECK(src.variables[1].name == "t");
    CHECK(src.commands.size() == 6);
    CHECK(src.observations.size() == 4);
    CHECK_FALSE(src.observations[1].observable.has_value());
    CHECK(src.commands[0].updates.size() == 3);
    CHECK(src.commands[0].updates[0].label == "x");
}

TEST_CASE("expansion of the running example") {
    Model m = corpus_model("fig4");
    CHECK(m.num_states() == 12);
    CHECK(m.finals().size() == 6);
    CHECK(validate_model(m).empty());
    auto x = *m.alphabet().find("x");
    CHECK(m.find(m.initial(), x)->prob == Rational(5, 8));
    CHECK(m.meta(m.initial()).name == "(s=0,t=0)");
}

TEST_CASE("observation block and empty module") {
    auto src = parse_model("ldtmc\nobservations a->a, b->null endobservations\nmodule m\nendmodule\n");
    REQUIRE(src.observations.size() == 2);
    CHECK(*src.observations[0].observable == "a");
    CHECK_FALSE(src.observations[1].observable.has_value());
    CHECK(src.commands.empty());

    Model one = load_model(wrap("x : [0..0];"));
    CHECK(one.num_states() == 1);
    CHECK(one.is_terminal(one.initial()));
    CHECK(validate_model(one).empty());
}

TEST_CASE("every corpus model expands to a valid, reachable model") {
    for (const char* name : kCorpus) {
        CAPTURE(name);
        Model m = corpus_model(name);
        CHECK(validate_model(m).empty());
        auto reach = reachable_from(m, m.initial());
        for (auto s : m.states()) {
            CHECK(reach[s.index]);
            // parent pointers lead back to the initial state
            StateId cur = s;
            std::size_t steps = 0;
            while (cur != m.initial() && steps++ <= m.num_states() && m.meta(cur).parent) cur = *m.meta(cur).parent;
            CHECK(cur == m.initial());
        }
    }
}

TEST_CASE("printing the source and reading it back gives the same model") {
    for (const char* name : kCorpus) {
        CAPTURE(name);
        auto text = corpus_text(std::string(name) + ".ldtmc");
        auto printed = render_source(parse_model(text));
        CHECK(isomorphic(load_model(text), load_model(printed)));
        CHECK(render_source(parse_model(printed)) == printed);
    }
}

TEST_CASE("state counts of the larger models") {
    CHECK(corpus_model("location").num_states() == 12);
    CHECK(corpus_model("dining").num_states() == 67);
}

TEST_CASE("syntax errors name the position and what was expected") {
    try {
        parse_model("ldtmc\nobservations a->a endobservations\nmodule m\n  x : [0..1];\n  [] x=0 -> 1:a(x'=1);\nendmodule\n");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 5);
        CHECK(std::string(e.what()).find("expected") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_model("dtmc\nmodule m\nendmodule\n"), SyntaxError);
    CHECK_THROWS_AS(parse_model(wrap("x : [0..1];\n[go] x=0 -> 1:a:(x'=1);")), SyntaxError);
    CHECK_THROWS_AS(parse_model(wrap("x : [0..1];\n[] x=0 -> 1:(x'=1);")), SyntaxError);
    CHECK_THROWS_AS(parse_model(wrap("x : [0..1];") + "module n\nendmodule\n"), SyntaxError);
}

TEST_CASE("declaration and expansion errors") {
    CHECK_THROWS_AS(parse_model(wrap("x : [0..1];\nx : [0..2];")), DuplicateDeclaration);
    CHECK_THROWS_AS(load_model(wrap("x : [0..1];\n[] y=0 -> 1:a:(x'=1);")), UndeclaredIdentifier);
    CHECK_THROWS_AS(load_model(wrap("x : [0..1];\n[] x=0 -> 1:a:(z'=1);")), UndeclaredIdentifier);
    CHECK_THROWS_AS(load_model(wrap("x : [0..1];\n[] x=0 -> 1:a:(x'=1);\n[] x<1 -> 1:a:(x'=0);")),
                    OverlappingGuards);
    CHECK_THROWS_AS(load_model(wrap("x : [0..2];\n[] x=0 -> 1/2:a:(x'=1) + 1/2:a:(x'=2);")),
                    LabelDeterminismViolation);
    CHECK_THROWS_AS(load_model(wrap("x : [0..1];\n[] x=0 -> 1/2:a:(x'=1);")), ModelError);
    CHECK_THROWS_AS(load_model(wrap("x : [0..1];\n[] x=0 -> 1:b:(x'=1);")), ModelError);
    CHECK_THROWS_AS(load_model(wrap("x : [0..1];\n[] x=0 -> 1:a:(x'=2);")), ModelError);
    ExpandOptions tight;
    tight.state_cap = 3;
    CHECK_THROWS_AS(load_model(wrap("x : [0..9];\n[] x<9 -> 1:a:(x'=x+1);"), tight), StateCapExceeded);
}

TEST_CASE("exact probabilities, constants and arithmetic") {
    Model m = load_model("ldtmc\nconst int k = 2;\nobservations a->a, b->null endobservations\n"
                         "module m\n x : [0..4] init 1;\n"
                         " [] x=1 -> 5/8:a:(x'=x*k) + 3/8:b:(x'=k+2-1);\nendmodule\n"
                         "label \"big\" = x>=3;\n");
    CHECK(m.num_states() == 3);
    auto a = *m.alphabet().find("a");
    const Transition* t = m.find(m.initial(), a);
    REQUIRE(t);
    CHECK(t->prob == Rational(5, 8));
    CHECK(m.meta(t->target).valuation == std::vector<std::int64_t>{2});
    CHECK(m.constants().at("k") == 2);
    std::size_t big = 0;
    for (auto s : m.states()) big += m.has_prop(s, "big");
    CHECK(big == 1);
}
