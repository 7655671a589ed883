#include "support.hpp"

#include "opac/error.hpp"

#include <doctest.h>

using namespace opac;
using namespace opac::testing;

namespace {

std::vector<std::string> rendered(const Model& m, const std::vector<LassoExpr>& exprs) {
    std::vector<std::string> out;
    for (const auto& e : exprs) out.push_back(render(e, m.alphabet()));
    return out;
}

PathPtr path_of(const std::string& text) { return parse_property(text)->path; }

using Strings = std::vector<std::string>;

}  // namespace

TEST_CASE("Sat sets of propositions, predicates and opacity") {
    Model m = corpus_model("fig4");
    Checker c(m);
    auto dest = c.sat_states(parse_property("(s=2|s=3|s=5) & t=1"));
    CHECK(dest.size() == 3);
    auto none = c.sat_states(parse_property("s>5"));
    CHECK(none.empty());
    CHECK_THROWS_AS(c.sat(parse_property("nosuchvar=1")), UnknownAtom);
    CHECK_THROWS_AS(c.sat(parse_property("\"nolabel\"")), UnknownAtom);

    Model f3 = corpus_model("fig3");
    Checker c3(f3);
    auto opaque_states = c3.sat_states(parse_property("opacity[F s3]"));
    CHECK_FALSE(opaque_states.count(f3.initial()));
    CHECK(c3.sat_states(parse_property("!opacity[F s3]")).count(f3.initial()));
}

TEST_CASE("trace expressions of the two-branch example") {
    Model m = corpus_model("fig2a");
    Checker c(m);
    auto sets = c.trace_sets(m.initial(), path_of("opacity[F s3]"));
    CHECK(rendered(m, sets.sat_exprs) == Strings{"ac(b)*a"});
    CHECK(rendered(m, sets.unsat_exprs) == Strings{"aba(c)*"});
    CHECK(sets.sat_exprs[0].suffix_bot);
    auto s3 = parse_property("s3");
    auto u = c.comp_u(m.initial(), f::tru(), s3);
    CHECK(rendered(m, u) == Strings{"ac(b)*a"});
    auto r = c.comp_r(m.initial(), f::fls(), f::neg(s3));
    CHECK(rendered(m, r) == Strings{"aba(c)*"});
}

TEST_CASE("semantic and per-expression opacity on the small figures") {
    Model a = corpus_model("fig2a");
    CHECK(Checker(a).check_opacity(a.initial(), path_of("opacity[F s3]")).verdict);
    CHECK(Checker(a, {OpacityMode::PerExpression}).check_opacity(a.initial(), path_of("opacity[F s3]")).verdict);

    Model b = corpus_model("fig2b");
    auto rep = Checker(b).check_opacity(b.initial(), path_of("opacity[F s2]"));
    CHECK(rep.verdict);

    Model f3 = corpus_model("fig3");
    auto bad = Checker(f3).check_opacity(f3.initial(), path_of("opacity[F s3]"));
    CHECK_FALSE(bad.verdict);
    REQUIRE(bad.counterexample.has_value());
    CHECK(*bad.counterexample == "aa");
    auto lit = Checker(f3, {OpacityMode::PerExpression}).check_opacity(f3.initial(), path_of("opacity[F s3]"));
    CHECK_FALSE(lit.verdict);
    REQUIRE(lit.uncovered.has_value());
    CHECK(render(*lit.uncovered, f3.alphabet()) == "ac(b)*a");
}

TEST_CASE("per-expression coverage is stricter than set inclusion") {
    // ψ-paths x(b)*y are covered only by the union of the ¬ψ-expressions wy and wb(b)*y
    ModelBuilder bld;
    auto s0 = bld.add_state(), s1 = bld.add_state(), s2 = bld.add_state(), s3 = bld.add_state();
    auto t0 = bld.add_state(), t1 = bld.add_state(), t2 = bld.add_state(), t3 = bld.add_state();
    auto sec = bld.add_state(), pub = bld.add_state();
    bld.initial(s0).declare("secret").mark(sec, "secret");
    bld.transition(s0, "x", s1, Rational(1, 2)).transition(s0, "w", t0, Rational(1, 2));
    bld.transition(s1, "b", s1, Rational(1, 2)).transition(s1, "y", s2, Rational(1, 2));
    bld.transition(s2, "bot", sec);
    bld.transition(t0, "y", t3, Rational(1, 2)).transition(t0, "b", t1, Rational(1, 2));
    bld.transition(t1, "b", t1, Rational(1, 2)).transition(t1, "y", t2, Rational(1, 2));
    bld.transition(t2, "bot", pub).transition(t3, "bot", pub);
    bld.transition(sec, "bot", sec).transition(pub, "bot", pub).transition(s3, "bot", s3);
    bld.observe("x", "o").observe("w", "o").observe("b", "b").observe("y", "y");
    Model m = bld.build();
    REQUIRE(validate_model(m).empty());
    auto psi = path_of("opacity[F secret]");
    CHECK(Checker(m).check_opacity(m.initial(), psi).verdict);
    CHECK(Checker(m).degree_of_opacity(m.initial(), psi).degree == Rational(0));
    CHECK_FALSE(Checker(m, {OpacityMode::PerExpression}).check_opacity(m.initial(), psi).verdict);
}

TEST_CASE("degree of opacity with its witnesses") {
    Model f3 = corpus_model("fig3");
    Checker c3(f3);
    auto rep = c3.degree_of_opacity(f3.initial(), path_of("opacity[F s3]"));
    CHECK(*rep.degree == Rational(1, 4));
    REQUIRE(rep.witnesses.size() == 2);
    CHECK(rep.witnesses[0].trace == "aca");
    CHECK(rep.witnesses[0].prob == Rational(1, 6));
    CHECK(rep.witnesses[1].trace == "acbb(b)*a");
    CHECK(rep.witnesses[1].prob == Rational(1, 12));
    CHECK(std::get<bool>(c3.eval_prob_query(f3.initial(), *parse_property("P<=0.1 [opacity F s3]"))) == false);
    CHECK(std::get<bool>(c3.eval_prob_query(f3.initial(), *parse_property("P>=1/4 [opacity F s3]"))) == true);

    Model f4 = corpus_model("fig4");
    Checker c4(f4);
    auto traces = c4.non_opaque_traces(f4.initial(), path_of("opacity[F ((s=2|s=3|s=5) & t=1)]"));
    REQUIRE(traces.size() == 2);
    CHECK(render(traces[0].tr, f4.alphabet()) == "bcax");
    CHECK(traces[0].pr == Rational(1, 96));
    CHECK(render(traces[1].tr, f4.alphabet()) == "ca(b)*x");
    CHECK(traces[1].pr == Rational(1, 64));
}

TEST_CASE("vacuous and trivially false opacity") {
    Model a = corpus_model("fig2a");
    Checker c(a);
    // every path passes s=1, so no path can cover another
    auto all = c.check_opacity(a.initial(), path_of("opacity[F s=1]"));
    CHECK_FALSE(all.verdict);
    CHECK(*c.degree_of_opacity(a.initial(), path_of("opacity[F s=1]")).degree == 1);
    auto none = c.degree_of_opacity(a.initial(), path_of("opacity[F s>6]"));
    CHECK(none.verdict);
    CHECK(*none.degree == 0);
    CHECK(none.witnesses.empty());
}

TEST_CASE("plain PCTL probabilities") {
    Model f3 = corpus_model("fig3");
    Checker c(f3);
    auto s0 = f3.initial();
    CHECK(c.prob_path_formula(s0, desugar(path_of("P=? [F s3]"))) == Rational(1, 3));
    CHECK(c.prob_path_formula(s0, desugar(path_of("P=? [F s6]"))) == Rational(2, 3));
    CHECK(c.prob_path_formula(s0, path_of("P=? [X true]")) == 1);
    CHECK(c.prob_path_formula(s0, path_of("P=? [X s=1]")) == 1);
    CHECK(c.prob_path_formula(s0, path_of("P=? [false R !s3]")) == Rational(2, 3));
    // true R φ is decided by the first state
    CHECK(c.prob_path_formula(s0, path_of("P=? [true R !s3]")) == 1);
    CHECK(std::get<Rational>(c.eval_prob_query(s0, *parse_property("P=? [F s3]"))) == Rational(1, 3));
    CHECK(std::get<bool>(c.eval_prob_query(s0, *parse_property("P>=0 [F s3]"))));
    CHECK(std::get<bool>(c.eval_prob_query(s0, *parse_property("P>=0 [opacity F s3]"))));

    Model loc = corpus_model("location");
    Checker cl(loc);
    auto dest = cl.eval_prob_query(loc.initial(), *parse_property("P=? [opacity F dest]"));
    CHECK(std::get<Rational>(dest) == Rational(1, 3));
}

TEST_CASE("transparent language routes agree") {
    for (const char* name : {"fig2a", "fig3", "fig6a"}) {
        CAPTURE(name);
        Model m = corpus_model(name);
        Checker c(m);
        auto psi = path_of("opacity[F s3]");
        CHECK(language_equal(c.transparent_language(m.initial(), psi),
                             c.transparent_product_language(m.initial(), psi)));
    }
    Model a = corpus_model("fig2a");
    CHECK(is_empty(Checker(a).transparent_language(a.initial(), path_of("opacity[F s3]"))));
}

TEST_CASE("caps surface as resource limits") {
    Model m = corpus_model("dining");
    CheckOptions opts;
    opts.product_cap = 5;
    Checker c(m, opts);
    CHECK_THROWS_AS(c.degree_of_opacity(m.initial(), path_of("P=? [opacity X (payer=c1)]")), ResourceLimit);
}

TEST_CASE("non-interference on the five-trace tree") {
    Model m = corpus_model("ni_five");
    std::set<LabelId> high, low;
    for (const char* h : {"h1", "h2", "h3"}) high.insert(*m.alphabet().find(h));
    for (const char* l : {"l1", "l2"}) low.insert(*m.alphabet().find(l));
    auto r = check_noninterference(m, high, low, 10);
    CHECK_FALSE(r.holds);
    REQUIRE(r.witness.has_value());
    CHECK(render_labels(m, r.witness->first) == "l2");
    CHECK(render_labels(m, r.witness->second) == "h1");
    CHECK(Checker(m).check_opacity(m.initial(), path_of("opacity[X secret]")).verdict);

    std::set<LabelId> partial = {*m.alphabet().find("h1")};
    CHECK_THROWS_AS(check_noninterference(m, partial, low, 10), std::invalid_argument);
}

TEST_CASE("non-interference holds on full products and on low-only systems") {
    ModelBuilder b;
    auto s0 = b.add_state(), end = b.add_state();
    std::vector<StateId> mid;
    for (const char* h : {"h1", "h2"}) {
        auto s = b.add_state();
        mid.push_back(s);
        b.transition(s0, h, s, Rational(1, 2));
        b.transition(s, "l1", end, Rational(1, 2)).transition(s, "l2", end, Rational(1, 2));
    }
    b.transition(end, "bot", end).initial(s0);
    for (const char* l : {"h1", "h2", "l1", "l2"}) b.observe(l, l);
    Model m = b.build();
    std::set<LabelId> high = {*m.alphabet().find("h1"), *m.alphabet().find("h2")};
    std::set<LabelId> low = {*m.alphabet().find("l1"), *m.alphabet().find("l2")};
    CHECK(check_noninterference(m, high, low, 6).holds);

    ModelBuilder lb;
    auto t0 = lb.add_state(), t1 = lb.add_state();
    lb.transition(t0, "l", t1).transition(t1, "bot", t1).observe("l", "l");
    Model lm = lb.build();
    CHECK(check_noninterference(lm, {}, {*lm.alphabet().find("l")}, 4).holds);
}
