#include "opac/product.hpp"

#include "opac/error.hpp"
#include "opac/linear.hpp"

#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace opac {

Mode monitor_step(const PathMonitor& mon, Mode mode, StateId s) {
    if (mode == Mode::Accept || mode == Mode::Reject) return mode;
    const auto i = s.index;
    switch (mon.kind) {
        case PathFormula::Kind::Next:
            if (mode == Mode::Init) return Mode::Pending;
            return mon.lhs[i] ? Mode::Accept : Mode::Reject;
        case PathFormula::Kind::Until:
            if (mon.rhs[i]) return Mode::Accept;
            return mon.lhs[i] ? Mode::Pending : Mode::Reject;
        case PathFormula::Kind::Release:
            if (!mon.rhs[i]) return Mode::Reject;
            return mon.lhs[i] ? Mode::Accept : Mode::Pending;
        default:
            throw UnsupportedPathForm("path monitor needs X, U or R");
    }
}

bool monitor_verdict(const PathMonitor& mon, Mode mode) {
    if (mode == Mode::Accept) return true;
    if (mode == Mode::Reject) return false;
    return mon.kind == PathFormula::Kind::Release;
}

namespace {

/// Verdict of the path that takes ⊥ at `q` (monitor in `mode`) and loops on ⊥.
bool termination_verdict(const Model& m, const PathMonitor& mon, StateId q, Mode mode) {
    std::set<std::pair<StateId, Mode>> seen{{q, mode}};
    while (true) {
        const auto* t = m.bot_edge(q);
        if (!t) throw ModelError("state " + m.meta(q).name + " is past ⊥ but has no ⊥ transition");
        q = t->target;
        mode = monitor_step(mon, mode, q);
        if (!seen.insert({q, mode}).second) return monitor_verdict(mon, mode);
    }
}

}  // namespace

ProductGraph build_product(const Model& m, StateId start, const PathMonitor& mon, ExitKind kind,
                           const Dfa* observer, std::size_t cap) {
    if (kind == ExitKind::Transparent && !observer)
        throw std::invalid_argument("transparent product needs an observer automaton");
    const auto& obs = m.observations();
    ProductGraph g;
    std::map<std::tuple<std::uint32_t, Mode, std::int32_t>, std::uint32_t> index;
    std::deque<std::uint32_t> queue;
    auto intern = [&](StateId q, Mode mode, std::int32_t d) {
        auto [it, fresh] = index.emplace(std::tuple{q.index, mode, d}, 0);
        if (fresh) {
            if (g.nodes.size() >= cap)
                throw ResourceLimit("product exceeded " + std::to_string(cap) + " states");
            it->second = static_cast<std::uint32_t>(g.nodes.size());
            g.nodes.push_back({q, mode, d});
            g.edges.emplace_back();
            queue.push_back(it->second);
        }
        return it->second;
    };
    std::int32_t d0 = observer ? observer->initial : 0;
    intern(start, monitor_step(mon, Mode::Init, start), d0);
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        auto node = g.nodes[v];
        for (const auto& t : m.out(node.state)) {
            if (t.label == kBot) continue;
            auto d = node.obs_state;
            if (observer) {
                auto image = obs.image(t.label);
                if (image) d = observer->step(d, *image);
            }
            auto w = intern(t.target, monitor_step(mon, node.mode, t.target), d);
            g.edges[v].push_back({t.label, w, t.prob});
        }
    }
    const auto n = g.nodes.size();
    g.tail.assign(n, std::nullopt);
    g.exit.assign(n, false);
    g.exit_prob.assign(n, Rational(0));
    for (std::size_t v = 0; v < n; ++v) {
        const auto& node = g.nodes[v];
        const auto* bot = m.bot_edge(node.state);
        if (!bot) continue;
        bool verdict = termination_verdict(m, mon, node.state, node.mode);
        g.tail[v] = verdict;
        bool is_exit = false;
        switch (kind) {
            case ExitKind::Satisfying: is_exit = verdict; break;
            case ExitKind::Violating: is_exit = !verdict; break;
            case ExitKind::Transparent:
                is_exit = verdict && (node.obs_state < 0 || !observer->accepting[node.obs_state]);
                break;
        }
        if (is_exit) {
            g.exit[v] = true;
            g.exit_prob[v] = bot->prob;
        }
    }
    return g;
}

std::vector<bool> ProductGraph::productive() const {
    const auto n = nodes.size();
    std::vector<std::vector<std::uint32_t>> pred(n);
    for (std::size_t v = 0; v < n; ++v)
        for (const auto& e : edges[v]) pred[e.target].push_back(static_cast<std::uint32_t>(v));
    std::vector<bool> good(n, false);
    std::vector<std::uint32_t> stack;
    for (std::size_t v = 0; v < n; ++v)
        if (exit[v]) {
            good[v] = true;
            stack.push_back(static_cast<std::uint32_t>(v));
        }
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto p : pred[v])
            if (!good[p]) {
                good[p] = true;
                stack.push_back(p);
            }
    }
    return good;
}

Nfa product_language(const ProductGraph& g, const Alphabet& labels) {
    Nfa nfa(labels.names());
    for (std::size_t v = 0; v < g.size(); ++v) nfa.add_state(g.exit[v]);
    auto sink = nfa.add_state(true);
    nfa.add_transition(sink, kBot, sink);
    for (std::uint32_t v = 0; v < g.size(); ++v) {
        for (const auto& e : g.edges[v]) nfa.add_transition(v, e.label, e.target);
        if (g.exit[v]) nfa.add_transition(v, kBot, sink);
    }
    nfa.add_initial(0);
    return nfa;
}

Rational exit_probability(const ProductGraph& g) {
    auto good = g.productive();
    FixpointSystem sys(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (!good[v]) continue;
        sys.rhs[v] = g.exit_prob[v];
        for (const auto& e : g.edges[v])
            if (good[e.target]) sys.coeffs[v].emplace_back(e.target, e.prob);
    }
    return solve_fixpoint(sys)[0];
}

namespace {

using Alts = std::vector<ItemSeq>;

class Decomposer {
public:
    Decomposer(const ProductGraph& g, std::size_t cap) : g_(g), cap_(cap) {}

    std::vector<LassoExpr> run() {
        auto good = g_.productive();
        std::vector<LassoExpr> out;
        if (!good[0]) return out;
        for (auto& seq : walks(0, good)) out.push_back({std::move(seq), true});
        return out;
    }

private:
    void charge(std::size_t n) {
        work_ += n;
        if (work_ > cap_ * 64)
            throw ResourceLimit("trace expression enumeration exceeded its budget");
    }

    void check(const Alts& alts) const {
        if (alts.size() > cap_)
            throw ResourceLimit("more than " + std::to_string(cap_) + " trace expressions");
    }

    static Alts prefixed(const std::optional<LassoItem>& cycle, Alts tails) {
        if (!cycle) return tails;
        for (auto& t : tails) t.insert(t.begin(), *cycle);
        return tails;
    }

    /// First-return cycles at u whose interior stays in `allowed` (u excluded).
    std::optional<LassoItem> loops_at(std::uint32_t u, const std::vector<bool>& allowed) {
        Alts loops;
        for (const auto& e : g_.edges[u]) {
            if (e.target == u) {
                loops.push_back({LassoItem::step(e.label)});
            } else if (allowed[e.target]) {
                for (auto& r : returns(e.target, u, allowed)) {
                    r.insert(r.begin(), LassoItem::step(e.label));
                    loops.push_back(std::move(r));
                }
            }
            check(loops);
        }
        if (loops.empty()) return std::nullopt;
        return LassoItem::cycle(std::move(loops));
    }

    /// Paths w ⇝ u whose nodes other than u lie in `allowed`, first arrival at u.
    Alts returns(std::uint32_t w, std::uint32_t u, std::vector<bool> allowed) {
        charge(1);
        allowed[w] = false;
        auto cycle = loops_at(w, allowed);
        Alts tails;
        for (const auto& e : g_.edges[w]) {
            if (e.target == u) {
                tails.push_back({LassoItem::step(e.label)});
            } else if (e.target != w && allowed[e.target]) {
                for (auto& r : returns(e.target, u, allowed)) {
                    r.insert(r.begin(), LassoItem::step(e.label));
                    tails.push_back(std::move(r));
                }
            }
            check(tails);
        }
        return prefixed(cycle, std::move(tails));
    }

    /// Paths from u to an exit with nodes in `allowed`, ending at the exit.
    Alts walks(std::uint32_t u, std::vector<bool> allowed) {
        charge(1);
        allowed[u] = false;
        Alts tails;
        if (g_.exit[u]) tails.emplace_back();
        for (const auto& e : g_.edges[u]) {
            if (e.target == u || !allowed[e.target]) continue;
            for (auto& r : walks(e.target, allowed)) {
                r.insert(r.begin(), LassoItem::step(e.label));
                tails.push_back(std::move(r));
            }
            check(tails);
        }
        if (tails.empty()) return tails;
        return prefixed(loops_at(u, allowed), std::move(tails));
    }

    const ProductGraph& g_;
    std::size_t cap_;
    std::size_t work_ = 0;
};

}  // namespace

std::vector<LassoExpr> decompose(const ProductGraph& g, std::size_t cap) { return Decomposer(g, cap).run(); }

}  // namespace opac
