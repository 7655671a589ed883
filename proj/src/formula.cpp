#include "opac/formula.hpp"

#include "opac/error.hpp"

#include <cctype>
#include <vector>

namespace opac {

namespace f {

namespace {
std::shared_ptr<StateFormula> make_state(StateFormula::Kind k) {
    auto s = std::make_shared<StateFormula>();
    s->kind = k;
    return s;
}
std::shared_ptr<PathFormula> make_path(PathFormula::Kind k) {
    auto p = std::make_shared<PathFormula>();
    p->kind = k;
    return p;
}
}  // namespace

StatePtr tru() { return make_state(StateFormula::Kind::True); }
StatePtr fls() { return make_state(StateFormula::Kind::False); }

StatePtr atom(Atom a) {
    auto s = make_state(StateFormula::Kind::Atom);
    s->atom = std::move(a);
    return s;
}

StatePtr prop(std::string name) { return atom(Atom{std::move(name), std::nullopt, std::int64_t{0}}); }

StatePtr pred(std::string var, RelOp op, std::int64_t value) { return atom(Atom{std::move(var), op, value}); }

StatePtr neg(StatePtr a) {
    auto s = make_state(StateFormula::Kind::Not);
    s->lhs = std::move(a);
    return s;
}

StatePtr conj(StatePtr a, StatePtr b) {
    auto s = make_state(StateFormula::Kind::And);
    s->lhs = std::move(a);
    s->rhs = std::move(b);
    return s;
}

StatePtr disj(StatePtr a, StatePtr b) {
    auto s = make_state(StateFormula::Kind::Or);
    s->lhs = std::move(a);
    s->rhs = std::move(b);
    return s;
}

StatePtr opacity(PathPtr p) {
    auto s = make_state(StateFormula::Kind::Opacity);
    s->path = std::move(p);
    return s;
}

StatePtr prob(Comparator cmp, Rational threshold, PathPtr body, bool opacity_body) {
    auto s = make_state(StateFormula::Kind::Prob);
    s->cmp = cmp;
    s->threshold = std::move(threshold);
    s->path = std::move(body);
    s->opacity_body = opacity_body;
    return s;
}

PathPtr next(StatePtr a) {
    auto p = make_path(PathFormula::Kind::Next);
    p->lhs = std::move(a);
    return p;
}

PathPtr until(StatePtr a, StatePtr b) {
    auto p = make_path(PathFormula::Kind::Until);
    p->lhs = std::move(a);
    p->rhs = std::move(b);
    return p;
}

PathPtr release(StatePtr a, StatePtr b) {
    auto p = make_path(PathFormula::Kind::Release);
    p->lhs = std::move(a);
    p->rhs = std::move(b);
    return p;
}

PathPtr eventually(StatePtr a) {
    auto p = make_path(PathFormula::Kind::Eventually);
    p->lhs = std::move(a);
    return p;
}

PathPtr bot() { return make_path(PathFormula::Kind::Bot); }

PathPtr pneg(PathPtr inner) {
    auto p = make_path(PathFormula::Kind::Not);
    p->inner = std::move(inner);
    return p;
}

}  // namespace f

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Ident, Int, Number, String, Sym, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_'; }

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t bytes) {
        for (std::size_t k = 0; k < bytes; ++k) {
            unsigned char c = static_cast<unsigned char>(s[i]);
            if (c == '\n') {
                ++line;
                col = 1;
            } else if ((c & 0xC0) != 0x80) {
                ++col;
            }
            ++i;
        }
    };
    static const std::pair<std::string_view, std::string_view> unicode[] = {
        {"⊙", "opacity"}, {"¬", "!"}, {"∧", "&"}, {"∨", "|"}, {"≤", "<="}, {"≥", ">="}, {"≠", "!="}};
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (std::isspace(c)) {
            advance(1);
            continue;
        }
        if (s.substr(i, 2) == "//") {
            while (i < s.size() && s[i] != '\n') advance(1);
            continue;
        }
        int l = line;
        int cc = col;
        bool matched = false;
        for (auto [u, repl] : unicode) {
            if (s.substr(i, u.size()) == u) {
                out.push_back({repl == "opacity" ? Tok::Ident : Tok::Sym, std::string(repl), l, cc});
                advance(u.size());
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < s.size() && is_ident_char(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), l, cc});
            advance(j - i);
            continue;
        }
        if (std::isdigit(c)) {
            std::size_t j = i;
            bool rational = false;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j + 1 < s.size() && (s[j] == '.' || s[j] == '/') &&
                std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
                rational = true;
                ++j;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            }
            out.push_back({rational ? Tok::Number : Tok::Int, std::string(s.substr(i, j - i)), l, cc});
            advance(j - i);
            continue;
        }
        if (c == '"') {
            std::size_t j = i + 1;
            while (j < s.size() && s[j] != '"' && s[j] != '\n') ++j;
            if (j >= s.size() || s[j] != '"') throw SyntaxError("unterminated string", l, cc);
            out.push_back({Tok::String, std::string(s.substr(i + 1, j - i - 1)), l, cc});
            advance(j + 1 - i);
            continue;
        }
        static const std::string_view two[] = {"=?", "<=", ">=", "!=", "&&", "||"};
        for (auto t : two) {
            if (s.substr(i, 2) == t) {
                std::string text(t);
                if (text == "&&") text = "&";
                if (text == "||") text = "|";
                out.push_back({Tok::Sym, text, l, cc});
                advance(2);
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string_view("()[]!&|=<>-").find(static_cast<char>(c)) != std::string_view::npos) {
            out.push_back({Tok::Sym, std::string(1, static_cast<char>(c)), l, cc});
            advance(1);
            continue;
        }
        throw SyntaxError(std::string("unexpected character '") + static_cast<char>(c) + "'", l, cc);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

bool reserved(const std::string& w) {
    return w == "X" || w == "F" || w == "U" || w == "R" || w == "P" || w == "true" || w == "false" ||
           w == "opacity";
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

    StatePtr parse() {
        auto f = state();
        if (peek().kind != Tok::End) fail("expected end of property");
        return f;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool is_sym(std::string_view s, std::size_t k = 0) const {
        return peek(k).kind == Tok::Sym && peek(k).text == s;
    }
    bool is_word(std::string_view s, std::size_t k = 0) const {
        return peek(k).kind == Tok::Ident && peek(k).text == s;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        const auto& t = peek();
        std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw SyntaxError(msg + ", found " + found, t.line, t.col);
    }
    void expect_sym(std::string_view s) {
        if (!is_sym(s)) fail("expected '" + std::string(s) + "'");
        ++pos_;
    }

    StatePtr state() {
        auto lhs = conjunction();
        while (is_sym("|")) {
            ++pos_;
            lhs = f::disj(lhs, conjunction());
        }
        return lhs;
    }

    StatePtr conjunction() {
        auto lhs = unary();
        while (is_sym("&")) {
            ++pos_;
            lhs = f::conj(lhs, unary());
        }
        return lhs;
    }

    StatePtr unary() {
        if (is_sym("!")) {
            ++pos_;
            return f::neg(unary());
        }
        return primary();
    }

    StatePtr primary() {
        const auto& t = peek();
        if (is_sym("(")) {
            ++pos_;
            auto inner = state();
            expect_sym(")");
            return inner;
        }
        if (t.kind == Tok::String) {
            ++pos_;
            if (t.text.empty()) throw SyntaxError("empty label name", t.line, t.col);
            return f::prop(t.text);
        }
        if (t.kind != Tok::Ident) fail("expected a state formula");
        if (t.text == "true") {
            ++pos_;
            return f::tru();
        }
        if (t.text == "false") {
            ++pos_;
            return f::fls();
        }
        if (t.text == "opacity") {
            if (in_opacity_) throw SyntaxError("nested opacity operator is not supported", t.line, t.col);
            ++pos_;
            expect_sym("[");
            auto p = opacity_path();
            expect_sym("]");
            return f::opacity(p);
        }
        if (t.text == "P") return query();
        if (reserved(t.text)) fail("unexpected keyword");
        ++pos_;
        std::optional<RelOp> op;
        if (is_sym("=")) op = RelOp::Eq;
        else if (is_sym("!=")) op = RelOp::Ne;
        else if (is_sym("<")) op = RelOp::Lt;
        else if (is_sym("<=")) op = RelOp::Le;
        else if (is_sym(">")) op = RelOp::Gt;
        else if (is_sym(">=")) op = RelOp::Ge;
        if (!op) return f::prop(t.text);
        ++pos_;
        Atom a{t.text, op, std::int64_t{0}};
        bool negative = false;
        if (is_sym("-")) {
            negative = true;
            ++pos_;
        }
        const auto& v = peek();
        if (v.kind == Tok::Int) {
            std::int64_t value = std::stoll(v.text);
            a.rhs = negative ? -value : value;
        } else if (v.kind == Tok::Ident && !negative && !reserved(v.text)) {
            a.rhs = v.text;
        } else {
            fail("expected an integer or constant name");
        }
        ++pos_;
        return f::atom(std::move(a));
    }

    PathPtr opacity_path() {
        in_opacity_ = true;
        auto p = path();
        in_opacity_ = false;
        return p;
    }

    StatePtr query() {
        ++pos_;  // P
        Comparator cmp;
        if (is_sym("=?")) cmp = Comparator::Query;
        else if (is_sym("<=")) cmp = Comparator::Le;
        else if (is_sym("<")) cmp = Comparator::Lt;
        else if (is_sym(">=")) cmp = Comparator::Ge;
        else if (is_sym(">")) cmp = Comparator::Gt;
        else if (is_sym("=") && is_sym("?", 1)) cmp = Comparator::Query;
        else fail("expected '=?' or a comparison after P");
        ++pos_;
        Rational threshold = 0;
        if (cmp != Comparator::Query) {
            const auto& t = peek();
            if (t.kind != Tok::Int && t.kind != Tok::Number) fail("expected a probability bound");
            threshold = parse_rational(t.text);
            if (threshold < 0 || threshold > 1)
                throw SyntaxError("probability bound outside [0, 1]", t.line, t.col);
            ++pos_;
        }
        expect_sym("[");
        bool opacity_body = false;
        PathPtr body;
        if (is_word("opacity")) {
            if (in_opacity_) fail("nested opacity operator is not supported");
            opacity_body = true;
            ++pos_;
            // Both `opacity F φ` and `opacity[F φ]` are accepted.
            if (is_sym("[")) {
                ++pos_;
                body = opacity_path();
                expect_sym("]");
            } else {
                body = opacity_path();
            }
        } else {
            body = path();
        }
        expect_sym("]");
        return f::prob(cmp, std::move(threshold), std::move(body), opacity_body);
    }

    PathPtr path() {
        if (is_word("X")) {
            ++pos_;
            return f::next(state());
        }
        if (is_word("F")) {
            ++pos_;
            return f::until(f::tru(), state());
        }
        if (is_sym("(")) {
            // A parenthesised path such as `(a U b)`; fall back to a state operand.
            auto saved = pos_;
            try {
                ++pos_;
                auto p = path();
                expect_sym(")");
                return p;
            } catch (const SyntaxError&) {
                pos_ = saved;
            }
        }
        auto lhs = state();
        if (is_word("U")) {
            ++pos_;
            return f::until(lhs, state());
        }
        if (is_word("R")) {
            ++pos_;
            return f::release(lhs, state());
        }
        fail("expected 'U' or 'R' in path formula");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    bool in_opacity_ = false;
};

}  // namespace

StatePtr parse_property(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Normal forms

namespace {

using SK = StateFormula::Kind;
using PK = PathFormula::Kind;

StatePtr pnf_neg(const StatePtr& g);

Comparator flip(Comparator c) {
    switch (c) {
        case Comparator::Le: return Comparator::Gt;
        case Comparator::Lt: return Comparator::Ge;
        case Comparator::Ge: return Comparator::Lt;
        case Comparator::Gt: return Comparator::Le;
        case Comparator::Query: return Comparator::Query;
    }
    return c;
}

StatePtr pnf_pos(const StatePtr& g) {
    switch (g->kind) {
        case SK::True:
        case SK::False:
        case SK::Atom: return g;
        case SK::Not: return pnf_neg(g->lhs);
        case SK::And: return f::conj(pnf_pos(g->lhs), pnf_pos(g->rhs));
        case SK::Or: return f::disj(pnf_pos(g->lhs), pnf_pos(g->rhs));
        case SK::Opacity: return f::opacity(to_pnf(g->path));
        case SK::Prob: return f::prob(g->cmp, g->threshold, to_pnf(g->path), g->opacity_body);
    }
    return g;
}

StatePtr pnf_neg(const StatePtr& g) {
    switch (g->kind) {
        case SK::True: return f::fls();
        case SK::False: return f::tru();
        case SK::Atom: return f::neg(g);
        case SK::Not: return pnf_pos(g->lhs);
        case SK::And: return f::disj(pnf_neg(g->lhs), pnf_neg(g->rhs));
        case SK::Or: return f::conj(pnf_neg(g->lhs), pnf_neg(g->rhs));
        case SK::Opacity: return f::neg(pnf_pos(g));
        case SK::Prob:
            if (g->cmp == Comparator::Query) return f::neg(pnf_pos(g));
            return f::prob(flip(g->cmp), g->threshold, to_pnf(g->path), g->opacity_body);
    }
    return g;
}

}  // namespace

StatePtr to_pnf(const StatePtr& g) { return pnf_pos(g); }

PathPtr to_pnf(const PathPtr& p) {
    switch (p->kind) {
        case PK::Next: return f::next(to_pnf(p->lhs));
        case PK::Until: return f::until(to_pnf(p->lhs), to_pnf(p->rhs));
        case PK::Release: return f::release(to_pnf(p->lhs), to_pnf(p->rhs));
        case PK::Eventually: return f::until(f::tru(), to_pnf(p->lhs));
        case PK::Bot: return p;
        case PK::Not:
            if (p->inner->kind == PK::Bot || p->inner->kind == PK::Not) return f::pneg(to_pnf(p->inner));
            return negate_path(p->inner);
    }
    return p;
}

PathPtr desugar(const PathPtr& p) {
    if (p->kind == PK::Eventually) return f::until(f::tru(), p->lhs);
    return p;
}

PathPtr negate_path(const PathPtr& p) {
    switch (p->kind) {
        case PK::Next: return f::next(pnf_neg(p->lhs));
        case PK::Until: return f::release(pnf_neg(p->lhs), pnf_neg(p->rhs));
        case PK::Release: return f::until(pnf_neg(p->lhs), pnf_neg(p->rhs));
        case PK::Eventually: return f::release(f::fls(), pnf_neg(p->lhs));
        case PK::Bot: throw UnsupportedPathForm("path formula ⊥ has no trace construction");
        case PK::Not: throw UnsupportedPathForm("raw path negation has no trace construction");
    }
    return p;
}

bool equal(const StatePtr& a, const StatePtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case SK::True:
        case SK::False: return true;
        case SK::Atom: return a->atom == b->atom;
        case SK::Not: return equal(a->lhs, b->lhs);
        case SK::And:
        case SK::Or: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
        case SK::Opacity: return equal(a->path, b->path);
        case SK::Prob:
            return a->cmp == b->cmp && a->threshold == b->threshold && a->opacity_body == b->opacity_body &&
                   equal(a->path, b->path);
    }
    return false;
}

bool equal(const PathPtr& a, const PathPtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs) && equal(a->inner, b->inner);
}

std::string to_string(RelOp op) {
    switch (op) {
        case RelOp::Eq: return "=";
        case RelOp::Ne: return "!=";
        case RelOp::Lt: return "<";
        case RelOp::Le: return "<=";
        case RelOp::Gt: return ">";
        case RelOp::Ge: return ">=";
    }
    return "?";
}

std::string to_string(const Atom& a) {
    if (!a.op) return "\"" + a.name + "\"";
    std::string rhs = std::holds_alternative<std::int64_t>(a.rhs) ? std::to_string(std::get<std::int64_t>(a.rhs))
                                                                  : std::get<std::string>(a.rhs);
    return a.name + to_string(*a.op) + rhs;
}

namespace {

std::string paren(const StateFormula& g) {
    bool simple = g.kind == SK::True || g.kind == SK::False || g.kind == SK::Atom || g.kind == SK::Not ||
                  g.kind == SK::Opacity || g.kind == SK::Prob;
    return simple ? to_string(g) : "(" + to_string(g) + ")";
}

std::string comparator_text(Comparator c) {
    switch (c) {
        case Comparator::Le: return "<=";
        case Comparator::Lt: return "<";
        case Comparator::Ge: return ">=";
        case Comparator::Gt: return ">";
        case Comparator::Query: return "=?";
    }
    return "?";
}

}  // namespace

std::string to_string(const StateFormula& g) {
    switch (g.kind) {
        case SK::True: return "true";
        case SK::False: return "false";
        case SK::Atom: return to_string(g.atom);
        case SK::Not: return "!" + paren(*g.lhs);
        case SK::And: return paren(*g.lhs) + " & " + paren(*g.rhs);
        case SK::Or: return paren(*g.lhs) + " | " + paren(*g.rhs);
        case SK::Opacity: return "opacity[" + to_string(*g.path) + "]";
        case SK::Prob: {
            std::string out = "P" + comparator_text(g.cmp);
            if (g.cmp != Comparator::Query) out += to_decimal(g.threshold, 20);
            out += " [ ";
            if (g.opacity_body) out += "opacity ";
            return out + to_string(*g.path) + " ]";
        }
    }
    return "?";
}

std::string to_string(const PathFormula& p) {
    switch (p.kind) {
        case PK::Next: return "X " + paren(*p.lhs);
        case PK::Until: return paren(*p.lhs) + " U " + paren(*p.rhs);
        case PK::Release: return paren(*p.lhs) + " R " + paren(*p.rhs);
        case PK::Eventually: return "F " + paren(*p.lhs);
        case PK::Bot: return "⊥";
        case PK::Not: return "!(" + to_string(*p.inner) + ")";
    }
    return "?";
}

bool contains_opacity(const StatePtr& g) {
    if (!g) return false;
    if (g->kind == SK::Opacity) return true;
    if (g->kind == SK::Prob) return g->opacity_body;
    return contains_opacity(g->lhs) || contains_opacity(g->rhs);
}

}  // namespace opac
