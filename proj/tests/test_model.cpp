#include "opac/error.hpp"
#include "opac/model.hpp"

#include <doctest.h>

using namespace opac;

namespace {

// s0 -a-> s1 -b-> s2 -⊥-> s2
ModelBuilder chain() {
    ModelBuilder b;
    auto s0 = b.add_state(), s1 = b.add_state(), s2 = b.add_state();
    b.transition(s0, "a", s1).transition(s1, "b", s2).transition(s2, "bot", s2);
    b.initial(s0).final_state(s2).observe("a", "a").hide("b");
    return b;
}

bool has_violation(const Model& m, ViolationKind k) {
    for (const auto& v : validate_model(m))
        if (v.kind == k) return true;
    return false;
}

}  // namespace

TEST_CASE("alphabet keeps ⊥ at id 0 under both spellings") {
    Alphabet a;
    CHECK(a.size() == 1);
    CHECK(a.find("bot") == kBot);
    CHECK(a.find("⊥") == kBot);
    CHECK(a.add("bot") == kBot);
    auto x = a.add("x");
    CHECK(x == 1);
    CHECK(a.add("x") == x);
    CHECK(a.name(x) == "x");
    CHECK(a[kBot].is_bot);
    CHECK_FALSE(a.find("y").has_value());
}

TEST_CASE("observation map") {
    Alphabet a;
    auto x = a.add("x"), y = a.add("y"), z = a.add("z");
    ObservationMap obs;
    obs.set_visible(x, "o");
    obs.set_hidden(y);
    CHECK(obs.image(kBot) == kObsBot);
    CHECK(obs.image(x).has_value());
    CHECK_FALSE(obs.image(y).has_value());
    CHECK_THROWS_AS(obs.image(z), UnknownLabel);
    CHECK_THROWS(obs.set_visible(z, "⊥"));
    CHECK_THROWS(obs.set_hidden(kBot));

    std::vector<LabelId> word = {x, y, x, kBot};
    auto seen = observe_string(obs, word);
    REQUIRE(seen.size() == 3);
    CHECK(obs.observable_name(seen[0]) == "o");
    CHECK(seen[2] == kObsBot);
}

TEST_CASE("builder produces sorted adjacency and terminal states") {
    Model m = chain().build();
    CHECK(m.num_states() == 3);
    CHECK(m.initial() == StateId{0});
    CHECK(m.is_terminal(StateId{2}));
    CHECK_FALSE(m.is_terminal(StateId{0}));
    CHECK(m.bot_edge(StateId{2}) != nullptr);
    CHECK(m.find(StateId{0}, *m.alphabet().find("a"))->target == StateId{1});
    CHECK(m.in(StateId{1}).size() == 1);
    CHECK(validate_model(m).empty());
    CHECK(post_states(m, StateId{0}) == std::set<StateId>{StateId{1}});
    CHECK(pre_states(m, StateId{2}) == std::set<StateId>{StateId{1}, StateId{2}});
    auto reach = reachable_from(m, StateId{1});
    CHECK_FALSE(reach[0]);
    CHECK(reach[1]);
    CHECK(reach[2]);
}

TEST_CASE("builder rejects bad probabilities and dangling ids") {
    ModelBuilder b;
    auto s = b.add_state();
    b.transition(s, "a", StateId{5});
    CHECK_THROWS_AS(b.build(), ModelError);

    ModelBuilder c;
    auto t = c.add_state();
    c.transition(t, "a", t, Rational(3, 2));
    CHECK_THROWS_AS(c.build(), ModelError);

    CHECK_THROWS_AS(ModelBuilder().build(), ModelError);
}

TEST_CASE("validation reports each assumption") {
    SUBCASE("nondeterministic") {
        auto b = chain();
        b.transition(StateId{0}, "a", StateId{2});
        CHECK(has_violation(b.build(), ViolationKind::Nondeterministic));
    }
    SUBCASE("not circular") {
        ModelBuilder b;
        auto s0 = b.add_state(), s1 = b.add_state();
        b.transition(s0, "a", s1).observe("a", "a");
        CHECK(has_violation(b.build(), ViolationKind::NotCircular));
    }
    SUBCASE("not well-structured") {
        ModelBuilder b;
        auto s0 = b.add_state(), s1 = b.add_state();
        b.transition(s0, "bot", s1).transition(s1, "a", s1, Rational(1, 2)).transition(s1, "bot", s1, Rational(1, 2));
        b.observe("a", "a");
        CHECK(has_violation(b.build(), ViolationKind::NotWellStructured));
    }
    SUBCASE("not stochastic") {
        ModelBuilder b;
        auto s0 = b.add_state();
        b.transition(s0, "a", s0, Rational(1, 3)).transition(s0, "bot", s0, Rational(1, 3)).observe("a", "a");
        CHECK(has_violation(b.build(), ViolationKind::NotStochastic));
    }
    SUBCASE("missing observation") {
        ModelBuilder b;
        auto s0 = b.add_state();
        b.transition(s0, "a", s0, Rational(1, 2)).transition(s0, "bot", s0, Rational(1, 2));
        CHECK(has_violation(b.build(), ViolationKind::MissingObservation));
    }
    SUBCASE("undeclared proposition") {
        auto b = chain();
        b.mark(StateId{1}, "secret");
        CHECK(has_violation(b.build(), ViolationKind::UndeclaredProposition));
        b.declare("secret");
        CHECK(validate_model(b.build()).empty());
    }
}

TEST_CASE("violation kinds have stable names") {
    CHECK(to_string(ViolationKind::NotWellStructured) != to_string(ViolationKind::NotCircular));
    CHECK(to_string(ViolationKind::MissingObservation) == "missing-observation");
}
