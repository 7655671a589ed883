#include "support.hpp"

#include "opac/cli.hpp"

#include <deque>
#include <sstream>
#include <tuple>

namespace opac::testing {

std::string corpus_path(const std::string& name) { return std::string(OPAC_MODEL_DIR) + "/" + name; }

std::string corpus_text(const std::string& name) { return read_file(corpus_path(name)); }

Model corpus_model(const std::string& name) { return load_model(corpus_text(name + ".ldtmc")); }

namespace {

enum class St { Init, Pending, True, False };

St advance(const Model& m, const OracleFormula& psi, St st, StateId s) {
    if (st == St::True || st == St::False) return st;
    using K = PathFormula::Kind;
    switch (psi.kind) {
        case K::Next:
            if (st == St::Init) return St::Pending;
            return psi.lhs(m, s) ? St::True : St::False;
        case K::Until:
            if (psi.rhs(m, s)) return St::True;
            return psi.lhs(m, s) ? St::Pending : St::False;
        case K::Release:
            if (!psi.rhs(m, s)) return St::False;
            return psi.lhs(m, s) ? St::True : St::Pending;
        default: break;
    }
    throw std::logic_error("oracle: unsupported path formula");
}

// Takes the ⊥ edge out of `s` and keeps following ⊥ until the (state, status)
// pair repeats.
bool tail_verdict(const Model& m, const OracleFormula& psi, StateId s, St st) {
    std::set<std::pair<std::uint32_t, int>> seen;
    while (true) {
        const Transition* bot = m.bot_edge(s);
        if (!bot) throw std::logic_error("oracle: ⊥ chain breaks off");
        s = bot->target;
        st = advance(m, psi, st, s);
        if (!seen.insert({s.index, static_cast<int>(st)}).second) break;
    }
    if (st == St::Pending) return psi.kind == PathFormula::Kind::Release;
    return st == St::True;
}

std::vector<ObsId> observe(const Model& m, const std::vector<LabelId>& labels) {
    std::vector<ObsId> out;
    for (auto l : labels)
        if (auto img = m.observations().image(l)) out.push_back(*img);
    return out;
}

// Is there a terminating path from s whose observation is w and which violates ψ?
bool covered(const Model& m, StateId s0, const OracleFormula& psi, const std::vector<ObsId>& w) {
    using Node = std::tuple<std::uint32_t, std::size_t, int>;
    std::set<Node> seen;
    std::deque<std::tuple<StateId, std::size_t, St>> queue;
    auto push = [&](StateId s, std::size_t pos, St st) {
        if (seen.insert({s.index, pos, static_cast<int>(st)}).second) queue.emplace_back(s, pos, st);
    };
    push(s0, 0, advance(m, psi, St::Init, s0));
    while (!queue.empty()) {
        auto [s, pos, st] = queue.front();
        queue.pop_front();
        if (pos == w.size() && m.bot_edge(s) && !tail_verdict(m, psi, s, st)) return true;
        for (const auto& t : m.out(s)) {
            if (t.label == kBot) continue;
            auto img = m.observations().image(t.label);
            if (!img)
                push(t.target, pos, advance(m, psi, st, t.target));
            else if (pos < w.size() && *img == w[pos])
                push(t.target, pos + 1, advance(m, psi, st, t.target));
        }
    }
    return false;
}

void dfs(const Model& m, const OracleFormula& psi, StateId s, St st, std::vector<LabelId>& labels, const Rational& prob,
         std::size_t depth, std::vector<OraclePath>& out) {
    if (const Transition* bot = m.bot_edge(s)) out.push_back({labels, prob * bot->prob, tail_verdict(m, psi, s, st)});
    if (labels.size() == depth) return;
    for (const auto& t : m.out(s)) {
        if (t.label == kBot) continue;
        labels.push_back(t.label);
        dfs(m, psi, t.target, advance(m, psi, st, t.target), labels, prob * t.prob, depth, out);
        labels.pop_back();
    }
}

}  // namespace

bool holds_on(const Model& m, const std::vector<StateId>& states, const OracleFormula& psi) {
    St st = St::Init;
    for (auto s : states) st = advance(m, psi, st, s);
    return tail_verdict(m, psi, states.back(), st);
}

std::vector<OraclePath> enumerate_paths(const Model& m, StateId s, const OracleFormula& psi, std::size_t depth) {
    std::vector<OraclePath> out;
    std::vector<LabelId> labels;
    dfs(m, psi, s, advance(m, psi, St::Init, s), labels, Rational(1), depth, out);
    return out;
}

OracleResult opacity_oracle(const Model& m, StateId s, const OracleFormula& psi, std::size_t depth) {
    OracleResult res;
    Rational total = 0;
    std::map<std::vector<ObsId>, bool> memo;
    for (const auto& p : enumerate_paths(m, s, psi, depth)) {
        total += p.prob;
        if (!p.satisfies) continue;
        auto w = observe(m, p.labels);
        auto it = memo.find(w);
        if (it == memo.end()) it = memo.emplace(w, covered(m, s, psi, w)).first;
        if (it->second) continue;
        res.opaque = false;
        res.transparent_mass += p.prob;
        res.uncovered.push_back(p.labels);
    }
    res.unexplored_mass = Rational(1) - total;
    return res;
}

Model random_model(std::mt19937& rng, std::size_t max_states) {
    auto uniform = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };

    std::size_t n = uniform(2, max_states);
    std::size_t sinks = uniform(1, std::max<std::size_t>(1, n / 3));
    ModelBuilder b;
    std::vector<StateId> st;
    for (std::size_t i = 0; i < n; ++i) st.push_back(b.add_state());
    b.initial(st[0]).declare("p").declare("q");
    const char* observables[] = {"o1", "o2"};
    for (const char* l : {"a", "b", "c"}) {
        auto pick = uniform(0, 2);
        if (pick == 2)
            b.hide(l);
        else
            b.observe(l, observables[pick]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (coin(0.4)) b.mark(st[i], "p");
        if (coin(0.4)) b.mark(st[i], "q");
    }
    for (std::size_t i = n - sinks; i < n; ++i) b.transition(st[i], "bot", st[i], 1).final_state(st[i]);
    for (std::size_t i = 0; i + sinks < n; ++i) {
        std::vector<std::pair<std::string, StateId>> moves;
        for (const char* l : {"a", "b", "c"})
            if (coin(0.5)) moves.emplace_back(l, st[uniform(0, n - 1)]);
        if (moves.empty() || coin(0.4)) moves.emplace_back("bot", st[uniform(n - sinks, n - 1)]);
        std::vector<long> weights;
        long total = 0;
        for (std::size_t k = 0; k < moves.size(); ++k) {
            weights.push_back(static_cast<long>(uniform(1, 3)));
            total += weights.back();
        }
        for (std::size_t k = 0; k < moves.size(); ++k)
            b.transition(st[i], moves[k].first, moves[k].second, Rational(weights[k], total));
    }
    return b.build();
}

RandomProperty random_property(std::mt19937& rng) {
    struct Choice {
        std::string text;
        StatePtr f;
        std::function<bool(const Model&, StateId)> eval;
    };
    auto has = [](const char* p) { return [p](const Model& m, StateId s) { return m.has_prop(s, p); }; };
    std::vector<Choice> choices = {
        {"true", f::tru(), [](const Model&, StateId) { return true; }},
        {"p", f::prop("p"), has("p")},
        {"q", f::prop("q"), has("q")},
        {"!p", f::neg(f::prop("p")), [](const Model& m, StateId s) { return !m.has_prop(s, "p"); }},
        {"!q", f::neg(f::prop("q")), [](const Model& m, StateId s) { return !m.has_prop(s, "q"); }},
        {"(p & q)", f::conj(f::prop("p"), f::prop("q")),
         [](const Model& m, StateId s) { return m.has_prop(s, "p") && m.has_prop(s, "q"); }},
        {"(p | q)", f::disj(f::prop("p"), f::prop("q")),
         [](const Model& m, StateId s) { return m.has_prop(s, "p") || m.has_prop(s, "q"); }},
    };
    auto pick = [&]() -> const Choice& {
        return choices[std::uniform_int_distribution<std::size_t>(0, choices.size() - 1)(rng)];
    };
    RandomProperty out;
    const Choice& a = pick();
    const Choice& b = pick();
    using K = PathFormula::Kind;
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
        case 0:
            out.psi = f::next(a.f);
            out.oracle = {K::Next, a.eval, nullptr};
            out.text = "X " + a.text;
            break;
        case 1:
            out.psi = f::eventually(b.f);
            out.oracle = {K::Until, choices[0].eval, b.eval};
            out.text = "F " + b.text;
            break;
        case 2:
            out.psi = f::until(a.f, b.f);
            out.oracle = {K::Until, a.eval, b.eval};
            out.text = a.text + " U " + b.text;
            break;
        default:
            out.psi = f::release(a.f, b.f);
            out.oracle = {K::Release, a.eval, b.eval};
            out.text = a.text + " R " + b.text;
            break;
    }
    return out;
}

bool acyclic(const Model& m) {
    std::vector<int> colour(m.num_states(), 0);
    std::function<bool(StateId)> visit = [&](StateId s) {
        colour[s.index] = 1;
        for (const auto& t : m.out(s)) {
            if (t.label == kBot) continue;
            if (colour[t.target.index] == 1) return false;
            if (colour[t.target.index] == 0 && !visit(t.target)) return false;
        }
        colour[s.index] = 2;
        return true;
    };
    for (auto s : m.states())
        if (colour[s.index] == 0 && !visit(s)) return false;
    return true;
}

std::vector<LabelId> labels_of(const Model& m, const std::string& word) {
    std::vector<LabelId> out;
    std::istringstream in(word);
    std::string name;
    while (in >> name) out.push_back(*m.alphabet().find(name));
    return out;
}

}  // namespace opac::testing
