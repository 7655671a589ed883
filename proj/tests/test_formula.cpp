#include "opac/error.hpp"
#include "opac/formula.hpp"

#include <doctest.h>

using namespace opac;
using K = StateFormula::Kind;
using PK = PathFormula::Kind;

TEST_CASE("opacity operator in both spellings") {
    auto a = parse_property("opacity[F s3]");
    auto b = parse_property("⊙[F s3]");
    REQUIRE(a->kind == K::Opacity);
    CHECK(equal(a, b));
    CHECK(a->path->kind == PK::Until);
    CHECK(a->path->lhs->kind == K::True);
    CHECK(a->path->rhs->atom.name == "s3");
}

TEST_CASE("probability queries") {
    auto q = parse_property("P=? [ opacity F ((s=2|s=3|s=5) & (t=1)) ]");
    REQUIRE(q->kind == K::Prob);
    CHECK(q->cmp == Comparator::Query);
    CHECK(q->opacity_body);
    CHECK(q->path->rhs->kind == K::And);

    auto b = parse_property("P<=0.1 [opacity F s3]");
    CHECK(b->cmp == Comparator::Le);
    CHECK(b->threshold == Rational(1, 10));

    auto c = parse_property("P>=5/8 [ a U b ]");
    CHECK(c->cmp == Comparator::Ge);
    CHECK(c->threshold == Rational(5, 8));
    CHECK_FALSE(c->opacity_body);
    CHECK(c->path->kind == PK::Until);

    auto d = parse_property("P=? [ opacity X (payer=c1) ]");
    CHECK(d->path->kind == PK::Next);
    const auto& atom = d->path->lhs->atom;
    CHECK(atom.is_predicate());
    CHECK(atom.name == "payer");
    CHECK(std::get<std::string>(atom.rhs) == "c1");
}

TEST_CASE("atoms, quoted labels and boolean structure") {
    auto f = parse_property("\"done\" & !(x != 3 | y<2) && true");
    CHECK(f->kind == K::And);
    auto g = parse_property("a ∧ ¬b ∨ c");
    CHECK(g->kind == K::Or);
    CHECK(g->lhs->kind == K::And);
    auto h = parse_property("opacity[ a R b ]");
    CHECK(h->path->kind == PK::Release);
    auto p = parse_property("opacity[(a U b)]");
    CHECK(p->path->kind == PK::Until);
}

TEST_CASE("syntax errors carry a position") {
    CHECK_THROWS_AS(parse_property("opacity[F ]"), SyntaxError);
    CHECK_THROWS_AS(parse_property("P=? [ a U ]"), SyntaxError);
    CHECK_THROWS_AS(parse_property("a &"), SyntaxError);
    CHECK_THROWS_AS(parse_property("opacity[F opacity[F a]]"), SyntaxError);
    try {
        parse_property("a & $");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 5);
    }
}

TEST_CASE("positive normal form") {
    auto f = to_pnf(parse_property("!(a & !b)"));
    REQUIRE(f->kind == K::Or);
    CHECK(f->lhs->kind == K::Not);
    CHECK(f->lhs->lhs->kind == K::Atom);
    CHECK(f->rhs->kind == K::Atom);

    // negated bounded probability flips its comparator
    auto g = to_pnf(parse_property("!P<=0.1 [opacity F s3]"));
    CHECK(g->kind == K::Prob);
    CHECK(g->cmp == Comparator::Gt);

    // ⊙ keeps its negation on top
    auto h = to_pnf(parse_property("!opacity[F s3]"));
    CHECK(h->kind == K::Not);
    CHECK(h->lhs->kind == K::Opacity);
}

TEST_CASE("path negation swaps until and release") {
    auto u = f::until(f::prop("a"), f::prop("b"));
    auto r = negate_path(u);
    REQUIRE(r->kind == PK::Release);
    CHECK(equal(r->lhs, to_pnf(f::neg(f::prop("a")))));
    CHECK(equal(negate_path(r), to_pnf(u)));
    auto x = negate_path(f::next(f::prop("a")));
    CHECK(x->kind == PK::Next);
    CHECK(x->lhs->kind == K::Not);
    auto ev = negate_path(f::eventually(f::prop("a")));
    CHECK(ev->kind == PK::Release);
    CHECK(ev->lhs->kind == K::False);
    CHECK_THROWS_AS(negate_path(f::bot()), UnsupportedPathForm);
}

TEST_CASE("printing parses back to the same formula") {
    for (const char* text : {"opacity[F s3]", "P=? [ opacity X (payer=c1) ]", "P<=0.1 [opacity F s3]",
                             "(a | !b) & \"done\"", "P>0 [ a R (b & c) ]", "x <= 4"}) {
        CAPTURE(text);
        auto f = parse_property(text);
        CHECK(equal(parse_property(to_string(*f)), f));
    }
}

TEST_CASE("contains_opacity") {
    CHECK(contains_opacity(parse_property("a & opacity[F b]")));
    CHECK_FALSE(contains_opacity(parse_property("P=? [F b]")));
}
