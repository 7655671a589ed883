#include "opac/checker.hpp"

#include "opac/error.hpp"
#include "opac/linear.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace opac {

namespace {

bool compare(std::int64_t lhs, RelOp op, std::int64_t rhs) {
    switch (op) {
        case RelOp::Eq: return lhs == rhs;
        case RelOp::Ne: return lhs != rhs;
        case RelOp::Lt: return lhs < rhs;
        case RelOp::Le: return lhs <= rhs;
        case RelOp::Gt: return lhs > rhs;
        case RelOp::Ge: return lhs >= rhs;
    }
    return false;
}

bool compare(const Rational& value, Comparator cmp, const Rational& bound) {
    switch (cmp) {
        case Comparator::Le: return value <= bound;
        case Comparator::Lt: return value < bound;
        case Comparator::Ge: return value >= bound;
        case Comparator::Gt: return value > bound;
        case Comparator::Query: break;
    }
    throw std::logic_error("=? query has no verdict");
}

std::string render_obs_word(const ObservationMap& obs, const Word& w) {
    std::string out;
    for (auto o : w) out += obs.observable_name(o);
    return out;
}

}  // namespace

std::vector<bool> atom_states(const Model& m, const Atom& a) {
    std::vector<bool> out(m.num_states(), false);
    if (!a.is_predicate()) {
        const auto& props = m.propositions();
        if (std::find(props.begin(), props.end(), a.name) == props.end())
            throw UnknownAtom("unknown proposition " + to_string(a));
        for (auto s : m.states()) out[s.index] = m.has_prop(s, a.name);
        return out;
    }
    auto var = m.variable_index(a.name);
    if (!var) throw UnknownAtom("unknown variable " + a.name + " in " + to_string(a));
    std::int64_t value;
    if (std::holds_alternative<std::int64_t>(a.rhs)) {
        value = std::get<std::int64_t>(a.rhs);
    } else {
        const auto& name = std::get<std::string>(a.rhs);
        auto it = m.constants().find(name);
        if (it == m.constants().end()) throw UnknownAtom("unknown constant " + name + " in " + to_string(a));
        value = it->second;
    }
    for (auto s : m.states()) {
        const auto& val = m.meta(s).valuation;
        out[s.index] = *var < val.size() && compare(val[*var], *a.op, value);
    }
    return out;
}

std::vector<bool> Checker::sat(const StatePtr& f) { return sat_pnf(to_pnf(f)); }

std::set<StateId> Checker::sat_states(const StatePtr& f) {
    auto v = sat(f);
    std::set<StateId> out;
    for (auto s : m_.states())
        if (v[s.index]) out.insert(s);
    return out;
}

std::vector<bool> Checker::sat_pnf(const StatePtr& f) {
    using K = StateFormula::Kind;
    const auto n = m_.num_states();
    switch (f->kind) {
        case K::True: return std::vector<bool>(n, true);
        case K::False: return std::vector<bool>(n, false);
        case K::Atom: return atom_states(m_, f->atom);
        case K::Not: {
            auto v = sat_pnf(f->lhs);
            v.flip();
            return v;
        }
        case K::And:
        case K::Or: {
            auto a = sat_pnf(f->lhs);
            auto b = sat_pnf(f->rhs);
            for (std::size_t i = 0; i < n; ++i) a[i] = f->kind == K::And ? (a[i] && b[i]) : (a[i] || b[i]);
            return a;
        }
        case K::Opacity: {
            std::vector<bool> v(n, false);
            for (auto s : m_.states()) v[s.index] = check_opacity(s, f->path).verdict;
            return v;
        }
        case K::Prob: {
            if (f->cmp == Comparator::Query)
                throw UnsupportedPathForm("a P=? query cannot be used as a state formula");
            std::vector<bool> v(n, false);
            for (auto s : m_.states()) v[s.index] = std::get<bool>(eval_prob_query(s, *f));
            return v;
        }
    }
    return std::vector<bool>(n, false);
}

PathMonitor Checker::monitor(const PathPtr& psi) {
    auto p = to_pnf(desugar(psi));
    using K = PathFormula::Kind;
    if (p->kind == K::Bot) throw UnsupportedPathForm("path formula ⊥ is not supported by the checker");
    if (p->kind == K::Not) throw UnsupportedPathForm("raw path negation is not supported by the checker");
    PathMonitor mon;
    mon.kind = p->kind;
    mon.lhs = sat_pnf(p->lhs);
    mon.rhs = p->rhs ? sat_pnf(p->rhs) : std::vector<bool>(m_.num_states(), false);
    return mon;
}

ProductGraph Checker::product(StateId s, const PathPtr& psi, ExitKind kind, const Dfa* observer) {
    return build_product(m_, s, monitor(psi), kind, observer, opts_.product_cap);
}

std::vector<LassoExpr> Checker::comp_u(StateId s, const StatePtr& lhs, const StatePtr& rhs) {
    return decompose(product(s, f::until(lhs, rhs), ExitKind::Satisfying), opts_.expression_cap);
}

std::vector<LassoExpr> Checker::comp_r(StateId s, const StatePtr& lhs, const StatePtr& rhs) {
    return decompose(product(s, f::release(lhs, rhs), ExitKind::Satisfying), opts_.expression_cap);
}

namespace {

void sort_exprs(std::vector<LassoExpr>& exprs, const Alphabet& labels) {
    std::stable_sort(exprs.begin(), exprs.end(), [&](const LassoExpr& a, const LassoExpr& b) {
        return render(a, labels) < render(b, labels);
    });
}

}  // namespace

TraceSetPair Checker::trace_sets(StateId s, const PathPtr& psi) {
    const auto& labels = m_.alphabet();
    auto sat_g = product(s, psi, ExitKind::Satisfying);
    auto unsat_g = product(s, psi, ExitKind::Violating);
    TraceSetPair out{decompose(sat_g, opts_.expression_cap), product_language(sat_g, labels),
                     decompose(unsat_g, opts_.expression_cap), product_language(unsat_g, labels)};
    sort_exprs(out.sat_exprs, labels);
    sort_exprs(out.unsat_exprs, labels);
    return out;
}

OpacityReport Checker::check_opacity(StateId s, const PathPtr& psi) {
    const auto& labels = m_.alphabet();
    const auto& obs = m_.observations();
    OpacityReport report;
    report.mode = opts_.mode;
    if (opts_.mode == OpacityMode::Semantic) {
        auto sat_lang = product_language(product(s, psi, ExitKind::Satisfying), labels);
        auto unsat_lang = product_language(product(s, psi, ExitKind::Violating), labels);
        auto res = language_inclusion(homomorphic_image(sat_lang, obs), homomorphic_image(unsat_lang, obs),
                                      opts_.dfa_cap);
        report.verdict = res.included;
        if (res.witness) report.counterexample = render_obs_word(obs, *res.witness);
        return report;
    }
    auto sets = trace_sets(s, psi);
    std::vector<Nfa> covers;
    for (const auto& e : sets.unsat_exprs) covers.push_back(homomorphic_image(expr_to_nfa(e, labels), obs));
    for (const auto& e : sets.sat_exprs) {
        auto image = homomorphic_image(expr_to_nfa(e, labels), obs);
        bool covered = std::any_of(covers.begin(), covers.end(), [&](const Nfa& c) {
            return language_inclusion(image, c, opts_.dfa_cap).included;
        });
        if (!covered) {
            report.verdict = false;
            report.uncovered = e;
            return report;
        }
    }
    return report;
}

Dfa Checker::observer_for(StateId s, const PathPtr& psi) {
    auto unsat_lang = product_language(product(s, psi, ExitKind::Violating), m_.alphabet());
    return minimize(determinize(homomorphic_image(unsat_lang, m_.observations()), opts_.dfa_cap));
}

OpacityReport Checker::degree_of_opacity(StateId s, const PathPtr& psi) {
    const auto& labels = m_.alphabet();
    auto observer = observer_for(s, psi);
    auto g = product(s, psi, ExitKind::Transparent, &observer);
    OpacityReport report;
    report.mode = OpacityMode::Semantic;
    report.verdict = !g.productive()[0];
    report.degree = exit_probability(g);
    try {
        auto exprs = decompose(g, opts_.expression_cap);
        sort_exprs(exprs, labels);
        for (auto& e : exprs) {
            Witness w{e, render(e, labels), render_obs(e, m_.observations()), expr_probability(e, m_, s)};
            report.witnesses.push_back(std::move(w));
        }
    } catch (const ResourceLimit&) {
        report.witnesses.clear();
        report.witnesses_complete = false;
    }
    return report;
}

std::vector<PLasso> Checker::non_opaque_traces(StateId s, const PathPtr& psi) {
    auto observer = observer_for(s, psi);
    auto exprs = decompose(product(s, psi, ExitKind::Transparent, &observer), opts_.expression_cap);
    sort_exprs(exprs, m_.alphabet());
    std::vector<PLasso> out;
    for (auto& e : exprs) {
        auto p = expr_probability(e, m_, s);
        out.push_back({std::move(e), std::move(p)});
    }
    return out;
}

Rational Checker::degree_by_expressions(StateId s, const PathPtr& psi) {
    Rational total = 0;
    for (const auto& pl : non_opaque_traces(s, psi)) total += pl.pr;
    return total;
}

Nfa Checker::transparent_language(StateId s, const PathPtr& psi) {
    const auto& labels = m_.alphabet();
    const auto& obs = m_.observations();
    auto sat_lang = product_language(product(s, psi, ExitKind::Satisfying), labels);
    auto unsat_lang = product_language(product(s, psi, ExitKind::Violating), labels);
    auto covered = inverse_image(homomorphic_image(unsat_lang, obs), obs, labels, opts_.dfa_cap);
    return difference(sat_lang, covered, opts_.dfa_cap);
}

Nfa Checker::transparent_product_language(StateId s, const PathPtr& psi) {
    auto observer = observer_for(s, psi);
    return product_language(product(s, psi, ExitKind::Transparent, &observer), m_.alphabet());
}

Rational Checker::prob_path_formula(StateId s, const PathPtr& psi) {
    auto p = to_pnf(desugar(psi));
    using K = PathFormula::Kind;
    switch (p->kind) {
        case K::Next: {
            auto target = sat_pnf(p->lhs);
            Rational total = 0;
            for (const auto& t : m_.out(s))
                if (target[t.target.index]) total += t.prob;
            return total;
        }
        case K::Until: {
            auto lhs = sat_pnf(p->lhs);
            auto rhs = sat_pnf(p->rhs);
            const auto n = m_.num_states();
            // Backward reachability of Sat(φ′) through Sat(φ).
            std::vector<bool> maybe(n, false);
            std::vector<StateId> stack;
            for (auto q : m_.states())
                if (rhs[q.index]) stack.push_back(q);
            std::vector<bool> seen = rhs;
            while (!stack.empty()) {
                auto q = stack.back();
                stack.pop_back();
                for (const auto& t : m_.in(q)) {
                    auto pi = t.source.index;
                    if (!seen[pi] && lhs[pi]) {
                        seen[pi] = true;
                        maybe[pi] = true;
                        stack.push_back(t.source);
                    }
                }
            }
            if (rhs[s.index]) return 1;
            if (!maybe[s.index]) return 0;
            FixpointSystem sys(n);
            for (auto q : m_.states()) {
                if (!maybe[q.index]) continue;
                for (const auto& t : m_.out(q)) {
                    if (rhs[t.target.index]) sys.rhs[q.index] += t.prob;
                    else if (maybe[t.target.index]) sys.coeffs[q.index].emplace_back(t.target.index, t.prob);
                }
            }
            return solve_fixpoint(sys)[s.index];
        }
        case K::Release: return Rational(1) - prob_path_formula(s, negate_path(p));
        default: throw UnsupportedPathForm("probability of " + to_string(*p) + " is not supported");
    }
}

Checker::Value Checker::eval_prob_query(StateId s, const StateFormula& q) {
    if (q.kind != StateFormula::Kind::Prob) throw std::invalid_argument("not a probability query");
    Rational value = q.opacity_body ? *degree_of_opacity(s, q.path).degree : prob_path_formula(s, q.path);
    if (q.cmp == Comparator::Query) return value;
    return compare(value, q.cmp, q.threshold);
}

std::string render_labels(const Model& m, const std::vector<LabelId>& word) {
    std::string out;
    for (auto l : word) out += m.alphabet().name(l);
    return out;
}

NiResult check_noninterference(const Model& m, const std::set<LabelId>& high, const std::set<LabelId>& low,
                               std::size_t depth) {
    for (LabelId l = 1; l < m.alphabet().size(); ++l)
        if (high.count(l) == low.count(l))
            throw std::invalid_argument("high and low labels must partition the alphabet; label " +
                                        m.alphabet().name(l) + " violates this");
    using LWord = std::vector<LabelId>;
    std::set<std::pair<LWord, LWord>> realised;
    std::set<LWord> lows, highs;
    LWord word;
    std::function<void(StateId)> dfs = [&](StateId q) {
        if (m.bot_edge(q)) {
            LWord lo, hi;
            for (auto l : word) (high.count(l) ? hi : lo).push_back(l);
            lows.insert(lo);
            highs.insert(hi);
            realised.insert({lo, hi});
        }
        if (word.size() == depth) return;
        for (const auto& t : m.out(q)) {
            if (t.label == kBot) continue;
            word.push_back(t.label);
            dfs(t.target);
            word.pop_back();
        }
    };
    dfs(m.initial());
    auto shortlex = [&](const LWord& a, const LWord& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [&](LabelId x, LabelId y) {
            return m.alphabet().name(x) < m.alphabet().name(y);
        });
    };
    std::vector<LWord> lo(lows.begin(), lows.end()), hi(highs.begin(), highs.end());
    std::sort(lo.begin(), lo.end(), shortlex);
    std::sort(hi.begin(), hi.end(), shortlex);
    for (const auto& l : lo)
        for (const auto& h : hi)
            if (!realised.count({l, h})) return {false, std::pair{l, h}};
    return {};
}

}  // namespace opac
