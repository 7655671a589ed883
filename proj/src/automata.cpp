#include "opac/automata.hpp"

#include "opac/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

namespace opac {

std::uint32_t Nfa::add_state(bool accepting) {
    edges_.emplace_back();
    accepting_.push_back(accepting);
    return static_cast<std::uint32_t>(accepting_.size() - 1);
}

void Nfa::add_transition(std::uint32_t from, Symbol sym, std::uint32_t to) {
    if (from >= num_states() || to >= num_states()) throw std::out_of_range("Nfa transition state");
    if (sym != kEpsilon && sym >= symbols_.size()) throw std::out_of_range("Nfa transition symbol");
    auto& e = edges_[from];
    std::pair<Symbol, std::uint32_t> edge{sym, to};
    if (std::find(e.begin(), e.end(), edge) == e.end()) e.push_back(edge);
}

std::size_t Nfa::num_transitions() const {
    std::size_t n = 0;
    for (const auto& e : edges_) n += e.size();
    return n;
}

bool Nfa::has_epsilon() const {
    for (const auto& e : edges_)
        for (auto [sym, to] : e)
            if (sym == kEpsilon) return true;
    return false;
}

Nfa Dfa::to_nfa() const {
    Nfa out(symbols);
    for (std::size_t s = 0; s < num_states(); ++s) out.add_state(accepting[s]);
    for (std::size_t s = 0; s < num_states(); ++s)
        for (Symbol a = 0; a < symbols.size(); ++a)
            if (delta[s][a] >= 0) out.add_transition(static_cast<std::uint32_t>(s), a, delta[s][a]);
    if (initial >= 0) out.add_initial(initial);
    return out;
}

void require_same_alphabet(const Nfa& a, const Nfa& b) {
    if (a.symbols() != b.symbols()) throw std::invalid_argument("automata over different alphabets");
}

namespace {

using StateSet = std::vector<std::uint32_t>;  // sorted

void close_epsilon(const Nfa& a, StateSet& set) {
    std::vector<std::uint32_t> stack(set.begin(), set.end());
    std::set<std::uint32_t> seen(set.begin(), set.end());
    while (!stack.empty()) {
        auto s = stack.back();
        stack.pop_back();
        for (auto [sym, to] : a.edges(s))
            if (sym == kEpsilon && seen.insert(to).second) stack.push_back(to);
    }
    set.assign(seen.begin(), seen.end());
}

StateSet move(const Nfa& a, const StateSet& from, Symbol sym) {
    std::set<std::uint32_t> out;
    for (auto s : from)
        for (auto [x, to] : a.edges(s))
            if (x == sym) out.insert(to);
    StateSet v(out.begin(), out.end());
    close_epsilon(a, v);
    return v;
}

bool any_accepting(const Nfa& a, const StateSet& set) {
    return std::any_of(set.begin(), set.end(), [&](auto s) { return a.accepting(s); });
}

StateSet initial_set(const Nfa& a) {
    StateSet v(a.initials().begin(), a.initials().end());
    close_epsilon(a, v);
    return v;
}

/// Symbol ids ordered by name, for shortlex tie-breaking.
std::vector<Symbol> sorted_symbols(const std::vector<std::string>& names) {
    std::vector<Symbol> order(names.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Symbol x, Symbol y) { return names[x] < names[y]; });
    return order;
}

}  // namespace

Nfa epsilon_closure_free(const Nfa& a) {
    Nfa out(a.symbols());
    for (std::size_t s = 0; s < a.num_states(); ++s) out.add_state(false);
    for (std::uint32_t s = 0; s < a.num_states(); ++s) {
        StateSet closure{s};
        close_epsilon(a, closure);
        out.set_accepting(s, any_accepting(a, closure));
        for (auto c : closure)
            for (auto [sym, to] : a.edges(c))
                if (sym != kEpsilon) out.add_transition(s, sym, to);
    }
    for (auto i : a.initials()) out.add_initial(i);
    return out;
}

Dfa determinize(const Nfa& a, std::size_t cap) {
    Dfa d;
    d.symbols = a.symbols();
    std::map<StateSet, std::int32_t> index;
    std::deque<StateSet> queue;
    auto intern = [&](StateSet set) -> std::int32_t {
        auto [it, fresh] = index.emplace(set, static_cast<std::int32_t>(d.accepting.size()));
        if (fresh) {
            if (d.accepting.size() >= cap)
                throw ResourceLimit("determinization exceeded " + std::to_string(cap) + " states");
            d.accepting.push_back(any_accepting(a, set));
            d.delta.emplace_back(a.num_symbols(), -1);
            queue.push_back(std::move(set));
        }
        return it->second;
    };
    d.initial = intern(initial_set(a));
    while (!queue.empty()) {
        StateSet cur = std::move(queue.front());
        queue.pop_front();
        auto id = index.at(cur);
        for (Symbol sym = 0; sym < a.num_symbols(); ++sym) {
            auto next = move(a, cur, sym);
            if (next.empty()) continue;
            auto t = intern(std::move(next));
            d.delta[id][sym] = t;
        }
    }
    return d;
}

Dfa complete(const Dfa& d) {
    Dfa out = d;
    if (out.initial < 0) {
        out.initial = 0;
        out.accepting = {false};
        out.delta = {std::vector<std::int32_t>(d.symbols.size(), 0)};
        return out;
    }
    bool need_sink = false;
    for (const auto& row : out.delta)
        for (auto t : row) need_sink |= t < 0;
    if (!need_sink) return out;
    auto sink = static_cast<std::int32_t>(out.num_states());
    out.accepting.push_back(false);
    out.delta.emplace_back(d.symbols.size(), sink);
    for (auto& row : out.delta)
        for (auto& t : row)
            if (t < 0) t = sink;
    return out;
}

Dfa complement(const Dfa& d) {
    Dfa out = complete(d);
    for (std::size_t i = 0; i < out.accepting.size(); ++i) out.accepting[i] = !out.accepting[i];
    return out;
}

Dfa trim(const Dfa& d) {
    Dfa out;
    out.symbols = d.symbols;
    if (d.initial < 0) return out;
    const auto n = d.num_states();
    std::vector<bool> reach(n, false);
    std::vector<std::int32_t> stack{d.initial};
    reach[d.initial] = true;
    while (!stack.empty()) {
        auto s = stack.back();
        stack.pop_back();
        for (auto t : d.delta[s])
            if (t >= 0 && !reach[t]) {
                reach[t] = true;
                stack.push_back(t);
            }
    }
    std::vector<std::vector<std::int32_t>> pred(n);
    for (std::size_t s = 0; s < n; ++s)
        for (auto t : d.delta[s])
            if (t >= 0) pred[t].push_back(static_cast<std::int32_t>(s));
    std::vector<bool> coreach(n, false);
    for (std::size_t s = 0; s < n; ++s)
        if (d.accepting[s]) {
            coreach[s] = true;
            stack.push_back(static_cast<std::int32_t>(s));
        }
    while (!stack.empty()) {
        auto s = stack.back();
        stack.pop_back();
        for (auto p : pred[s])
            if (!coreach[p]) {
                coreach[p] = true;
                stack.push_back(p);
            }
    }
    if (!coreach[d.initial]) return out;
    std::vector<std::int32_t> remap(n, -1);
    for (std::size_t s = 0; s < n; ++s)
        if (reach[s] && coreach[s]) {
            remap[s] = static_cast<std::int32_t>(out.accepting.size());
            out.accepting.push_back(d.accepting[s]);
        }
    out.delta.assign(out.accepting.size(), std::vector<std::int32_t>(d.symbols.size(), -1));
    for (std::size_t s = 0; s < n; ++s) {
        if (remap[s] < 0) continue;
        for (Symbol a = 0; a < d.symbols.size(); ++a) {
            auto t = d.delta[s][a];
            if (t >= 0 && remap[t] >= 0) out.delta[remap[s]][a] = remap[t];
        }
    }
    out.initial = remap[d.initial];
    return out;
}

Dfa minimize(const Dfa& input) {
    // Moore refinement on the reachable part of the completed automaton.
    Dfa d = complete(input);
    const auto k = d.symbols.size();
    std::vector<bool> reach(d.num_states(), false);
    std::vector<std::int32_t> stack{d.initial};
    reach[d.initial] = true;
    while (!stack.empty()) {
        auto s = stack.back();
        stack.pop_back();
        for (auto t : d.delta[s])
            if (!reach[t]) {
                reach[t] = true;
                stack.push_back(t);
            }
    }
    std::vector<std::int32_t> cls(d.num_states(), -1);
    for (std::size_t s = 0; s < d.num_states(); ++s)
        if (reach[s]) cls[s] = d.accepting[s] ? 1 : 0;
    std::size_t num_classes = 0;
    while (true) {
        std::map<std::vector<std::int32_t>, std::int32_t> sig_index;
        std::vector<std::int32_t> next(d.num_states(), -1);
        for (std::size_t s = 0; s < d.num_states(); ++s) {
            if (!reach[s]) continue;
            std::vector<std::int32_t> sig{cls[s]};
            for (Symbol a = 0; a < k; ++a) sig.push_back(cls[d.delta[s][a]]);
            auto [it, fresh] = sig_index.emplace(sig, static_cast<std::int32_t>(sig_index.size()));
            next[s] = it->second;
        }
        bool stable = sig_index.size() == num_classes;
        num_classes = sig_index.size();
        cls = std::move(next);
        if (stable) break;
    }
    // Renumber classes in BFS order from the initial state for a canonical shape.
    std::vector<std::int32_t> order(num_classes, -1);
    std::vector<std::int32_t> rep(num_classes, -1);
    for (std::size_t s = 0; s < d.num_states(); ++s)
        if (reach[s] && rep[cls[s]] < 0) rep[cls[s]] = static_cast<std::int32_t>(s);
    Dfa out;
    out.symbols = d.symbols;
    std::deque<std::int32_t> queue{cls[d.initial]};
    order[cls[d.initial]] = 0;
    std::vector<std::int32_t> by_new{cls[d.initial]};
    while (!queue.empty()) {
        auto c = queue.front();
        queue.pop_front();
        for (Symbol a = 0; a < k; ++a) {
            auto t = cls[d.delta[rep[c]][a]];
            if (order[t] < 0) {
                order[t] = static_cast<std::int32_t>(by_new.size());
                by_new.push_back(t);
                queue.push_back(t);
            }
        }
    }
    out.accepting.resize(by_new.size());
    out.delta.assign(by_new.size(), std::vector<std::int32_t>(k, -1));
    for (std::size_t i = 0; i < by_new.size(); ++i) {
        auto r = rep[by_new[i]];
        out.accepting[i] = d.accepting[r];
        for (Symbol a = 0; a < k; ++a) out.delta[i][a] = order[cls[d.delta[r][a]]];
    }
    out.initial = 0;
    return out;
}

Nfa intersection(const Nfa& a0, const Nfa& b0) {
    require_same_alphabet(a0, b0);
    Nfa a = a0.has_epsilon() ? epsilon_closure_free(a0) : a0;
    Nfa b = b0.has_epsilon() ? epsilon_closure_free(b0) : b0;
    Nfa out(a.symbols());
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> index;
    std::deque<std::pair<std::uint32_t, std::uint32_t>> queue;
    auto intern = [&](std::uint32_t x, std::uint32_t y) {
        auto [it, fresh] = index.emplace(std::pair{x, y}, 0);
        if (fresh) {
            it->second = out.add_state(a.accepting(x) && b.accepting(y));
            queue.emplace_back(x, y);
        }
        return it->second;
    };
    for (auto x : a.initials())
        for (auto y : b.initials()) out.add_initial(intern(x, y));
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        auto from = index.at({x, y});
        for (auto [s1, t1] : a.edges(x))
            for (auto [s2, t2] : b.edges(y))
                if (s1 == s2) out.add_transition(from, s1, intern(t1, t2));
    }
    return out;
}

Nfa union_of(const Nfa& a, const Nfa& b) {
    require_same_alphabet(a, b);
    Nfa out(a.symbols());
    for (std::uint32_t s = 0; s < a.num_states(); ++s) out.add_state(a.accepting(s));
    const auto off = static_cast<std::uint32_t>(a.num_states());
    for (std::uint32_t s = 0; s < b.num_states(); ++s) out.add_state(b.accepting(s));
    for (std::uint32_t s = 0; s < a.num_states(); ++s)
        for (auto [sym, t] : a.edges(s)) out.add_transition(s, sym, t);
    for (std::uint32_t s = 0; s < b.num_states(); ++s)
        for (auto [sym, t] : b.edges(s)) out.add_transition(s + off, sym, t + off);
    for (auto i : a.initials()) out.add_initial(i);
    for (auto i : b.initials()) out.add_initial(i + off);
    return out;
}

Nfa difference(const Nfa& a, const Nfa& b, std::size_t cap) {
    require_same_alphabet(a, b);
    return intersection(a, complement(determinize(b, cap)).to_nfa());
}

Nfa homomorphic_image(const Nfa& a, const ObservationMap& obs) {
    Nfa out(obs.observable_names());
    for (std::uint32_t s = 0; s < a.num_states(); ++s) out.add_state(a.accepting(s));
    for (std::uint32_t s = 0; s < a.num_states(); ++s)
        for (auto [sym, t] : a.edges(s)) {
            if (sym == kEpsilon) {
                out.add_transition(s, kEpsilon, t);
                continue;
            }
            auto image = obs.image(sym);
            out.add_transition(s, image ? *image : kEpsilon, t);
        }
    for (auto i : a.initials()) out.add_initial(i);
    return epsilon_closure_free(out);
}

Nfa inverse_image(const Nfa& b, const ObservationMap& obs, const Alphabet& labels, std::size_t cap) {
    Dfa d = determinize(b, cap);
    Nfa out(labels.names());
    for (std::size_t s = 0; s < d.num_states(); ++s) out.add_state(d.accepting[s]);
    for (std::uint32_t s = 0; s < d.num_states(); ++s)
        for (LabelId l = 0; l < labels.size(); ++l) {
            auto image = obs.image(l);
            if (!image) {
                out.add_transition(s, l, s);
            } else if (*image < d.symbols.size() && d.delta[s][*image] >= 0) {
                out.add_transition(s, l, static_cast<std::uint32_t>(d.delta[s][*image]));
            }
        }
    if (d.initial >= 0) out.add_initial(d.initial);
    return out;
}

InclusionResult language_inclusion(const Nfa& a, const Nfa& b, std::size_t cap) {
    require_same_alphabet(a, b);
    using Node = std::pair<StateSet, StateSet>;
    std::map<Node, std::pair<std::int64_t, Symbol>> parent;  // node -> (parent index, symbol)
    std::vector<Node> nodes;
    std::deque<std::size_t> queue;
    auto order = sorted_symbols(a.symbols());
    Node start{initial_set(a), initial_set(b)};
    if (start.first.empty()) return {};
    parent.emplace(start, std::pair{std::int64_t{-1}, Symbol{0}});
    nodes.push_back(start);
    queue.push_back(0);
    while (!queue.empty()) {
        auto idx = queue.front();
        queue.pop_front();
        const Node cur = nodes[idx];
        if (any_accepting(a, cur.first) && !any_accepting(b, cur.second)) {
            Word w;
            const Node* n = &nodes[idx];
            while (true) {
                auto [p, sym] = parent.at(*n);
                if (p < 0) break;
                w.push_back(sym);
                n = &nodes[static_cast<std::size_t>(p)];
            }
            std::reverse(w.begin(), w.end());
            return {false, std::move(w)};
        }
        for (auto sym : order) {
            auto na = move(a, cur.first, sym);
            if (na.empty()) continue;
            Node next{std::move(na), move(b, cur.second, sym)};
            if (parent.count(next)) continue;
            if (nodes.size() >= cap) throw ResourceLimit("inclusion check exceeded " + std::to_string(cap) + " states");
            parent.emplace(next, std::pair{static_cast<std::int64_t>(idx), sym});
            nodes.push_back(std::move(next));
            queue.push_back(nodes.size() - 1);
        }
    }
    return {};
}

bool language_equal(const Nfa& a, const Nfa& b) {
    return language_inclusion(a, b).included && language_inclusion(b, a).included;
}

bool accepts(const Nfa& a, std::span<const Symbol> word) {
    auto cur = initial_set(a);
    for (auto sym : word) {
        if (cur.empty()) return false;
        cur = move(a, cur, sym);
    }
    return any_accepting(a, cur);
}

bool is_empty(const Nfa& a) {
    std::vector<bool> seen(a.num_states(), false);
    std::vector<std::uint32_t> stack(a.initials().begin(), a.initials().end());
    for (auto s : stack) seen[s] = true;
    while (!stack.empty()) {
        auto s = stack.back();
        stack.pop_back();
        if (a.accepting(s)) return false;
        for (auto [sym, t] : a.edges(s))
            if (!seen[t]) {
                seen[t] = true;
                stack.push_back(t);
            }
    }
    return true;
}

std::vector<BigInt> count_sequence(const Nfa& a, std::size_t n_max) {
    Dfa d = trim(determinize(a));
    std::vector<BigInt> out;
    out.reserve(n_max + 1);
    if (d.initial < 0) {
        out.assign(n_max + 1, BigInt(0));
        return out;
    }
    std::vector<BigInt> v(d.num_states(), BigInt(0));
    v[d.initial] = 1;
    for (std::size_t n = 0;; ++n) {
        BigInt total = 0;
        for (std::size_t s = 0; s < d.num_states(); ++s)
            if (d.accepting[s]) total += v[s];
        out.push_back(total);
        if (n == n_max) break;
        std::vector<BigInt> w(d.num_states(), BigInt(0));
        for (std::size_t s = 0; s < d.num_states(); ++s) {
            if (v[s] == 0) continue;
            for (auto t : d.delta[s])
                if (t >= 0) w[t] += v[s];
        }
        v = std::move(w);
    }
    return out;
}

BigInt count_words(const Nfa& a, std::size_t n) { return count_sequence(a, n).back(); }

std::string render_word(const Nfa& a, std::span<const Symbol> word) {
    std::string out;
    for (auto s : word) out += a.symbol_name(s);
    return out;
}

}  // namespace opac
