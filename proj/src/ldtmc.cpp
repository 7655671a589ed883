#include "opac/ldtmc.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace opac {

namespace {

enum class Tok { Ident, Number, String, Sym, End };

struct Token {
    Tok kind;
    std::string text;
    SourcePos pos;
};

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
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
    static const std::string_view syms2[] = {"->", "..", "!=", "<=", ">="};
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
        SourcePos pos{line, col};
        if (s.substr(i, kBotName.size()) == kBotName) {
            out.push_back({Tok::Ident, "bot", pos});
            advance(kBotName.size());
            continue;
        }
        if (std::isalpha(c) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), pos});
            advance(j - i);
            continue;
        }
        if (std::isdigit(c)) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j + 1 < s.size() && s[j] == '.' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
                ++j;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            }
            out.push_back({Tok::Number, std::string(s.substr(i, j - i)), pos});
            advance(j - i);
            continue;
        }
        if (c == '"') {
            std::size_t j = i + 1;
            while (j < s.size() && s[j] != '"' && s[j] != '\n') ++j;
            if (j >= s.size() || s[j] != '"') throw SyntaxError("unterminated string", pos.line, pos.col);
            out.push_back({Tok::String, std::string(s.substr(i + 1, j - i - 1)), pos});
            advance(j + 1 - i);
            continue;
        }
        bool matched = false;
        for (auto t : syms2)
            if (s.substr(i, 2) == t) {
                out.push_back({Tok::Sym, std::string(t), pos});
                advance(2);
                matched = true;
                break;
            }
        if (matched) continue;
        if (std::string_view("()[];:,=<>&|!+-*/'").find(static_cast<char>(c)) != std::string_view::npos) {
            out.push_back({Tok::Sym, std::string(1, static_cast<char>(c)), pos});
            advance(1);
            continue;
        }
        throw SyntaxError(std::string("unexpected character '") + static_cast<char>(c) + "'", pos.line, pos.col);
    }
    out.push_back({Tok::End, "", {line, col}});
    return out;
}

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

class SourceParser {
public:
    explicit SourceParser(std::string_view text) : toks_(lex(text)) {}

    ModelSource parse() {
        ModelSource src;
        expect_word("ldtmc");
        bool seen_module = false;
        bool seen_obs = false;
        while (peek().kind != Tok::End) {
            if (is_word("const")) {
                src.constants.push_back(constant());
            } else if (is_word("observations")) {
                if (seen_obs) error("a second observations block", {"module", "label", "const"});
                seen_obs = true;
                observations(src);
            } else if (is_word("label")) {
                src.labels.push_back(label_decl());
            } else if (is_word("module")) {
                if (seen_module) error("a second module (only single-module models are supported)", {"label"});
                seen_module = true;
                module(src);
            } else {
                error("unexpected token", {"const", "observations", "label", "module"});
            }
        }
        if (!seen_module) error("missing module", {"module"});
        check_duplicates(src);
        return src;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool is_sym(std::string_view s, std::size_t k = 0) const {
        return peek(k).kind == Tok::Sym && peek(k).text == s;
    }
    bool is_word(std::string_view s, std::size_t k = 0) const {
        return peek(k).kind == Tok::Ident && peek(k).text == s;
    }

    [[noreturn]] void error(const std::string& what, std::initializer_list<std::string_view> expected) const {
        const auto& t = peek();
        std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        std::string msg = what + ": found " + found;
        if (expected.size() > 0) {
            msg += ", expected one of {";
            bool first = true;
            for (auto e : expected) {
                msg += (first ? "" : ", ") + std::string(e);
                first = false;
            }
            msg += "}";
        }
        throw SyntaxError(msg, t.pos.line, t.pos.col);
    }

    void expect_sym(std::string_view s) {
        if (!is_sym(s)) error("syntax error", {s});
        ++pos_;
    }
    void expect_word(std::string_view s) {
        if (!is_word(s)) error("syntax error", {s});
        ++pos_;
    }
    Token ident(std::string_view what) {
        if (peek().kind != Tok::Ident) error("syntax error", {what});
        return toks_[pos_++];
    }

    ConstDecl constant() {
        auto pos = peek().pos;
        expect_word("const");
        expect_word("int");
        auto name = ident("constant name");
        expect_sym("=");
        auto value = expr();
        expect_sym(";");
        return {name.text, value, pos};
    }

    void observations(ModelSource& src) {
        expect_word("observations");
        while (!is_word("endobservations")) {
            auto label = ident("label name");
            expect_sym("->");
            auto target = ident("observable name or null");
            std::optional<std::string> observable;
            if (target.text != "null") observable = target.text;
            src.observations.push_back({label.text, observable, label.pos});
            if (is_sym(",") || is_sym(";")) ++pos_;
            else if (!is_word("endobservations")) error("syntax error", {",", "endobservations"});
        }
        ++pos_;
    }

    LabelDecl label_decl() {
        auto pos = peek().pos;
        expect_word("label");
        if (peek().kind != Tok::String) error("syntax error", {"\"label name\""});
        auto name = toks_[pos_++].text;
        expect_sym("=");
        auto e = expr();
        expect_sym(";");
        return {name, e, pos};
    }

    void module(ModelSource& src) {
        expect_word("module");
        src.module_name = ident("module name").text;
        while (!is_word("endmodule")) {
            if (is_sym("[")) src.commands.push_back(command());
            else if (peek().kind == Tok::Ident && is_sym(":", 1)) src.variables.push_back(variable());
            else error("syntax error", {"variable declaration", "[", "endmodule"});
        }
        ++pos_;
    }

    VarDecl variable() {
        auto name = ident("variable name");
        expect_sym(":");
        expect_sym("[");
        auto lo = expr();
        expect_sym("..");
        auto hi = expr();
        expect_sym("]");
        ExprPtr init;
        if (is_word("init")) {
            ++pos_;
            init = expr();
        }
        expect_sym(";");
        return {name.text, lo, hi, init, name.pos};
    }

    GuardedCommand command() {
        auto pos = peek().pos;
        expect_sym("[");
        if (!is_sym("]")) {
            const auto& t = peek();
            throw SyntaxError("action '" + t.text +
                                  "' in command: synchronising actions are not supported; leave the slot empty",
                              t.pos.line, t.pos.col);
        }
        ++pos_;
        GuardedCommand cmd;
        cmd.pos = pos;
        cmd.guard = expr();
        expect_sym("->");
        cmd.updates.push_back(update());
        while (is_sym("+")) {
            ++pos_;
            cmd.updates.push_back(update());
        }
        expect_sym(";");
        return cmd;
    }

    Update update() {
        Update u;
        u.pos = peek().pos;
        u.prob = expr();
        if (!is_sym(":")) error("missing transition label after probability", {":"});
        ++pos_;
        if (peek().kind != Tok::Ident || peek().text == "true") error("missing transition label", {"label name"});
        u.label = toks_[pos_++].text;
        expect_sym(":");
        if (is_word("true")) {
            ++pos_;
            return u;
        }
        u.assignments.push_back(assignment());
        while (is_sym("&")) {
            ++pos_;
            u.assignments.push_back(assignment());
        }
        return u;
    }

    Assignment assignment() {
        expect_sym("(");
        auto var = ident("variable name");
        expect_sym("'");
        expect_sym("=");
        auto value = expr();
        expect_sym(")");
        return {var.text, value, var.pos};
    }

    ExprPtr expr() { return disjunction(); }

    ExprPtr binary(ExprPtr lhs, std::string op, ExprPtr rhs, SourcePos pos) {
        return make({Expr::Kind::Binary, 0, std::move(op), std::move(lhs), std::move(rhs), pos});
    }

    ExprPtr disjunction() {
        auto lhs = conjunction();
        while (is_sym("|")) {
            auto pos = peek().pos;
            ++pos_;
            lhs = binary(lhs, "|", conjunction(), pos);
        }
        return lhs;
    }

    ExprPtr conjunction() {
        auto lhs = negation();
        while (is_sym("&")) {
            auto pos = peek().pos;
            ++pos_;
            lhs = binary(lhs, "&", negation(), pos);
        }
        return lhs;
    }

    ExprPtr negation() {
        if (is_sym("!")) {
            auto pos = peek().pos;
            ++pos_;
            return make({Expr::Kind::Not, 0, "", negation(), nullptr, pos});
        }
        return relation();
    }

    ExprPtr relation() {
        auto lhs = additive();
        for (std::string_view op : {"=", "!=", "<", "<=", ">", ">="})
            if (is_sym(op)) {
                auto pos = peek().pos;
                ++pos_;
                return binary(lhs, std::string(op), additive(), pos);
            }
        return lhs;
    }

    ExprPtr additive() {
        auto lhs = multiplicative();
        while (is_sym("+") || is_sym("-")) {
            // `+` after a complete update belongs to the command, not the expression.
            auto pos = peek().pos;
            auto op = toks_[pos_++].text;
            lhs = binary(lhs, op, multiplicative(), pos);
        }
        return lhs;
    }

    ExprPtr multiplicative() {
        auto lhs = unary();
        while (is_sym("*") || is_sym("/")) {
            auto pos = peek().pos;
            auto op = toks_[pos_++].text;
            lhs = binary(lhs, op, unary(), pos);
        }
        return lhs;
    }

    ExprPtr unary() {
        if (is_sym("-")) {
            auto pos = peek().pos;
            ++pos_;
            return make({Expr::Kind::Neg, 0, "", unary(), nullptr, pos});
        }
        return primary();
    }

    ExprPtr primary() {
        const auto& t = peek();
        if (t.kind == Tok::Number) {
            ++pos_;
            return make({Expr::Kind::Number, parse_rational(t.text), "", nullptr, nullptr, t.pos});
        }
        if (is_word("true") || is_word("false")) {
            ++pos_;
            return make({Expr::Kind::Bool, t.text == "true" ? 1 : 0, "", nullptr, nullptr, t.pos});
        }
        if (t.kind == Tok::Ident) {
            ++pos_;
            return make({Expr::Kind::Ident, 0, t.text, nullptr, nullptr, t.pos});
        }
        if (is_sym("(")) {
            ++pos_;
            auto e = expr();
            expect_sym(")");
            return e;
        }
        error("syntax error in expression", {"number", "identifier", "("});
    }

    static void check_duplicates(const ModelSource& src) {
        std::map<std::string, SourcePos> names;
        auto add = [&](const std::string& name, SourcePos pos, const char* what) {
            auto [it, fresh] = names.emplace(name, pos);
            if (!fresh)
                throw DuplicateDeclaration(std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + what +
                                           " '" + name + "' already declared at " +
                                           std::to_string(it->second.line) + ":" + std::to_string(it->second.col));
        };
        for (const auto& c : src.constants) add(c.name, c.pos, "constant");
        for (const auto& v : src.variables) add(v.name, v.pos, "variable");
        std::map<std::string, SourcePos> obs, labels;
        for (const auto& o : src.observations) {
            auto [it, fresh] = obs.emplace(o.label, o.pos);
            if (!fresh)
                throw DuplicateDeclaration(std::to_string(o.pos.line) + ":" + std::to_string(o.pos.col) +
                                           ": observation for label '" + o.label + "' given twice");
        }
        for (const auto& l : src.labels) {
            auto [it, fresh] = labels.emplace(l.name, l.pos);
            if (!fresh)
                throw DuplicateDeclaration(std::to_string(l.pos.line) + ":" + std::to_string(l.pos.col) +
                                           ": label \"" + l.name + "\" declared twice");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string at(SourcePos p) { return std::to_string(p.line) + ":" + std::to_string(p.col) + ": "; }

class Evaluator {
public:
    Evaluator(const std::map<std::string, Rational>& constants, const std::unordered_map<std::string, std::size_t>& vars)
        : constants_(constants), vars_(vars) {}

    Rational eval(const Expr& e, const std::vector<std::int64_t>& val) const {
        switch (e.kind) {
            case Expr::Kind::Number:
            case Expr::Kind::Bool: return e.value;
            case Expr::Kind::Ident: {
                if (auto it = vars_.find(e.name); it != vars_.end()) return Rational(static_cast<long>(val[it->second]));
                if (auto it = constants_.find(e.name); it != constants_.end()) return it->second;
                throw UndeclaredIdentifier(at(e.pos) + "undeclared identifier '" + e.name + "'");
            }
            case Expr::Kind::Not: return eval(*e.lhs, val) == 0 ? 1 : 0;
            case Expr::Kind::Neg: return -eval(*e.lhs, val);
            case Expr::Kind::Binary: break;
        }
        const auto& op = e.name;
        Rational a = eval(*e.lhs, val);
        if (op == "&") return a != 0 && eval(*e.rhs, val) != 0 ? 1 : 0;
        if (op == "|") return a != 0 || eval(*e.rhs, val) != 0 ? 1 : 0;
        Rational b = eval(*e.rhs, val);
        if (op == "+") return a + b;
        if (op == "-") return a - b;
        if (op == "*") return a * b;
        if (op == "/") {
            if (b == 0) throw ModelError(at(e.pos) + "division by zero");
            return a / b;
        }
        if (op == "=") return a == b ? 1 : 0;
        if (op == "!=") return a != b ? 1 : 0;
        if (op == "<") return a < b ? 1 : 0;
        if (op == "<=") return a <= b ? 1 : 0;
        if (op == ">") return a > b ? 1 : 0;
        if (op == ">=") return a >= b ? 1 : 0;
        throw ModelError(at(e.pos) + "unknown operator " + op);
    }

    std::int64_t eval_int(const Expr& e, const std::vector<std::int64_t>& val) const {
        auto r = eval(e, val);
        if (r.get_den() != 1) throw ModelError(at(e.pos) + "expression is not an integer: " + to_fraction(r));
        if (!r.get_num().fits_slong_p()) throw ModelError(at(e.pos) + "integer out of range");
        return r.get_num().get_si();
    }

private:
    const std::map<std::string, Rational>& constants_;
    const std::unordered_map<std::string, std::size_t>& vars_;
};

/// Checks that every identifier in `e` names a variable or a constant.
void check_identifiers(const Expr& e, const std::map<std::string, Rational>& constants,
                       const std::unordered_map<std::string, std::size_t>& vars) {
    if (e.kind == Expr::Kind::Ident && !vars.count(e.name) && !constants.count(e.name))
        throw UndeclaredIdentifier(at(e.pos) + "undeclared identifier '" + e.name + "'");
    if (e.lhs) check_identifiers(*e.lhs, constants, vars);
    if (e.rhs) check_identifiers(*e.rhs, constants, vars);
}

struct VecHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const {
        std::size_t h = v.size();
        for (auto x : v) h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

}  // namespace

ModelSource parse_model(std::string_view text) { return SourceParser(text).parse(); }

Model expand_state_space(const ModelSource& src, const ExpandOptions& opts) {
    std::map<std::string, Rational> constants;
    std::unordered_map<std::string, std::size_t> no_vars;
    for (const auto& c : src.constants) {
        Evaluator ev(constants, no_vars);
        constants[c.name] = ev.eval(*c.value, {});
    }
    std::unordered_map<std::string, std::size_t> vars;
    for (std::size_t i = 0; i < src.variables.size(); ++i) vars[src.variables[i].name] = i;

    Evaluator cev(constants, no_vars);
    struct Bounds {
        std::int64_t lo, hi;
    };
    std::vector<Bounds> bounds;
    std::vector<std::int64_t> init;
    for (const auto& v : src.variables) {
        auto lo = cev.eval_int(*v.lower, {});
        auto hi = cev.eval_int(*v.upper, {});
        if (lo > hi) throw ModelError(at(v.pos) + "empty range for variable '" + v.name + "'");
        auto start = v.init ? cev.eval_int(*v.init, {}) : lo;
        if (start < lo || start > hi) throw ModelError(at(v.pos) + "initial value of '" + v.name + "' out of range");
        bounds.push_back({lo, hi});
        init.push_back(start);
    }
    for (const auto& cmd : src.commands) {
        check_identifiers(*cmd.guard, constants, vars);
        for (const auto& u : cmd.updates) {
            check_identifiers(*u.prob, constants, no_vars);
            for (const auto& a : u.assignments) {
                if (!vars.count(a.var))
                    throw UndeclaredIdentifier(at(a.pos) + "assignment to undeclared variable '" + a.var + "'");
                check_identifiers(*a.value, constants, vars);
            }
        }
    }
    for (const auto& l : src.labels) check_identifiers(*l.expr, constants, vars);

    ModelBuilder b;
    std::vector<std::string> var_names;
    for (const auto& v : src.variables) var_names.push_back(v.name);
    b.variables(var_names);
    for (const auto& [name, value] : constants)
        if (value.get_den() == 1 && value.get_num().fits_slong_p()) b.constant(name, value.get_num().get_si());
    std::set<std::string> observed;
    for (const auto& o : src.observations) {
        if (o.label == "bot") continue;
        observed.insert(o.label);
        if (o.observable) b.observe(o.label, *o.observable);
        else b.hide(o.label);
    }
    for (const auto& cmd : src.commands)
        for (const auto& u : cmd.updates)
            if (u.label != "bot" && !observed.count(u.label))
                throw ModelError(at(u.pos) + "label '" + u.label + "' has no entry in the observations block");
    for (const auto& l : src.labels) b.declare(l.name);

    Evaluator ev(constants, vars);
    std::unordered_map<std::vector<std::int64_t>, StateId, VecHash> index;
    std::vector<std::vector<std::int64_t>> valuations;
    std::deque<StateId> queue;
    auto state_name = [&](const std::vector<std::int64_t>& val) {
        std::string name = "(";
        for (std::size_t i = 0; i < val.size(); ++i) {
            if (i > 0) name += ",";
            name += var_names[i] + "=" + std::to_string(val[i]);
        }
        return name + ")";
    };
    auto intern = [&](const std::vector<std::int64_t>& val, std::optional<StateId> parent) {
        auto it = index.find(val);
        if (it != index.end()) return it->second;
        if (valuations.size() >= opts.state_cap)
            throw StateCapExceeded("state space exceeds " + std::to_string(opts.state_cap) + " states");
        auto id = b.add_state(state_name(val));
        b.valuation(id, val);
        if (parent) b.parent(id, *parent);
        index.emplace(val, id);
        valuations.push_back(val);
        queue.push_back(id);
        return id;
    };
    b.initial(intern(init, std::nullopt));

    while (!queue.empty()) {
        auto s = queue.front();
        queue.pop_front();
        const auto val = valuations[s.index];
        const GuardedCommand* enabled = nullptr;
        for (const auto& cmd : src.commands) {
            if (ev.eval(*cmd.guard, val) == 0) continue;
            if (enabled)
                throw OverlappingGuards(at(cmd.pos) + "command overlaps the command at line " +
                                        std::to_string(enabled->pos.line) + " in state " + state_name(val));
            enabled = &cmd;
        }
        if (!enabled) {
            b.transition(s, "bot", s, 1);
            b.final_state(s);
            continue;
        }
        std::map<std::string, std::pair<StateId, Rational>> by_label;
        std::vector<std::string> order;
        Rational total = 0;
        for (const auto& u : enabled->updates) {
            Rational p = ev.eval(*u.prob, val);
            if (p <= 0 || p > 1)
                throw ModelError(at(u.pos) + "probability " + to_fraction(p) + " outside (0, 1] in state " +
                                 state_name(val));
            auto next = val;
            for (const auto& a : u.assignments) {
                auto i = vars.at(a.var);
                auto v = ev.eval_int(*a.value, val);
                if (v < bounds[i].lo || v > bounds[i].hi)
                    throw ModelError(at(a.pos) + "value " + std::to_string(v) + " for '" + a.var +
                                     "' outside its range in state " + state_name(val));
                next[i] = v;
            }
            total += p;
            auto target = intern(next, s);
            auto [it, fresh] = by_label.emplace(u.label, std::pair{target, p});
            if (fresh) {
                order.push_back(u.label);
            } else if (it->second.first != target) {
                throw LabelDeterminismViolation(at(u.pos) + "label '" + u.label +
                                                "' leads to two different states from " + state_name(val));
            } else {
                it->second.second += p;
            }
        }
        if (total != 1)
            throw ModelError(at(enabled->pos) + "probabilities sum to " + to_fraction(total) + " in state " +
                             state_name(val));
        for (const auto& l : order) b.transition(s, l, by_label[l].first, by_label[l].second);
    }

    for (const auto& l : src.labels)
        for (std::size_t i = 0; i < valuations.size(); ++i)
            if (ev.eval(*l.expr, valuations[i]) != 0) b.mark(StateId{static_cast<std::uint32_t>(i)}, l.name);
    return b.build();
}

Model load_model(std::string_view text, const ExpandOptions& opts) {
    return expand_state_space(parse_model(text), opts);
}

std::string render_expr(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Number: return to_fraction(e.value);
        case Expr::Kind::Bool: return e.value != 0 ? "true" : "false";
        case Expr::Kind::Ident: return e.name;
        case Expr::Kind::Not: return "!(" + render_expr(*e.lhs) + ")";
        case Expr::Kind::Neg: return "-(" + render_expr(*e.lhs) + ")";
        case Expr::Kind::Binary: return "(" + render_expr(*e.lhs) + " " + e.name + " " + render_expr(*e.rhs) + ")";
    }
    return "";
}

std::string render_source(const ModelSource& src) {
    std::ostringstream out;
    out << "ldtmc\n\n";
    for (const auto& c : src.constants) out << "const int " << c.name << " = " << render_expr(*c.value) << ";\n";
    out << "observations\n";
    for (std::size_t i = 0; i < src.observations.size(); ++i) {
        const auto& o = src.observations[i];
        out << "  " << o.label << "->" << (o.observable ? *o.observable : "null")
            << (i + 1 < src.observations.size() ? ",\n" : "\n");
    }
    out << "endobservations\n\n";
    for (const auto& l : src.labels) out << "label \"" << l.name << "\" = " << render_expr(*l.expr) << ";\n";
    out << "\nmodule " << src.module_name << "\n";
    for (const auto& v : src.variables) {
        out << "  " << v.name << " : [" << render_expr(*v.lower) << ".." << render_expr(*v.upper) << "]";
        if (v.init) out << " init " << render_expr(*v.init);
        out << ";\n";
    }
    for (const auto& c : src.commands) {
        out << "  [] " << render_expr(*c.guard) << " -> ";
        for (std::size_t i = 0; i < c.updates.size(); ++i) {
            const auto& u = c.updates[i];
            if (i > 0) out << " + ";
            out << render_expr(*u.prob) << ":" << u.label << ":";
            if (u.assignments.empty()) out << "true";
            for (std::size_t j = 0; j < u.assignments.size(); ++j) {
                if (j > 0) out << "&";
                out << "(" << u.assignments[j].var << "'=" << render_expr(*u.assignments[j].value) << ")";
            }
        }
        out << ";\n";
    }
    out << "endmodule\n";
    return out.str();
}

}  // namespace opac
