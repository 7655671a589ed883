#pragma once

#include "opac/model.hpp"
#include "opac/rational.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace opac {

using Symbol = std::uint32_t;
inline constexpr Symbol kEpsilon = std::numeric_limits<Symbol>::max();
using Word = std::vector<Symbol>;

inline constexpr std::size_t kDefaultDfaCap = 1'000'000;

/// Nondeterministic automaton over a named, dense symbol alphabet. Two
/// automata can be combined only when their symbol name lists are equal.
class Nfa {
public:
    Nfa() = default;
    explicit Nfa(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {}

    std::uint32_t add_state(bool accepting = false);
    void add_transition(std::uint32_t from, Symbol sym, std::uint32_t to);
    void add_initial(std::uint32_t s) { initials_.insert(s); }
    void set_accepting(std::uint32_t s, bool value = true) { accepting_.at(s) = value; }

    std::size_t num_states() const { return accepting_.size(); }
    std::size_t num_symbols() const { return symbols_.size(); }
    const std::vector<std::string>& symbols() const { return symbols_; }
    const std::string& symbol_name(Symbol s) const { return symbols_.at(s); }
    const std::set<std::uint32_t>& initials() const { return initials_; }
    bool accepting(std::uint32_t s) const { return accepting_.at(s); }
    const std::vector<std::pair<Symbol, std::uint32_t>>& edges(std::uint32_t s) const { return edges_.at(s); }
    std::size_t num_transitions() const;
    bool has_epsilon() const;

private:
    std::vector<std::string> symbols_;
    std::vector<std::vector<std::pair<Symbol, std::uint32_t>>> edges_;
    std::vector<bool> accepting_;
    std::set<std::uint32_t> initials_;
};

/// Deterministic automaton, possibly partial (missing transitions are -1).
struct Dfa {
    std::vector<std::string> symbols;
    std::vector<std::vector<std::int32_t>> delta;
    std::vector<bool> accepting;
    std::int32_t initial = -1;  // -1: empty automaton

    std::size_t num_states() const { return accepting.size(); }
    std::int32_t step(std::int32_t s, Symbol a) const { return s < 0 ? -1 : delta[s][a]; }
    Nfa to_nfa() const;
};

Nfa epsilon_closure_free(const Nfa& a);
/// Subset construction; throws ResourceLimit past `cap` states.
Dfa determinize(const Nfa& a, std::size_t cap = kDefaultDfaCap);
/// Adds a rejecting sink so every transition is defined.
Dfa complete(const Dfa& d);
Dfa complement(const Dfa& d);
/// Removes states that are unreachable or cannot reach acceptance.
Dfa trim(const Dfa& d);
/// Minimal complete DFA.
Dfa minimize(const Dfa& d);

Nfa intersection(const Nfa& a, const Nfa& b);
Nfa union_of(const Nfa& a, const Nfa& b);
Nfa difference(const Nfa& a, const Nfa& b, std::size_t cap = kDefaultDfaCap);

/// Maps every label-edge through `obs`; hidden labels become ε and are
/// eliminated. Symbols of the result are the observables of `obs`.
Nfa homomorphic_image(const Nfa& a, const ObservationMap& obs);
/// { w over `labels` | observe_string(obs, w) ∈ L(b) }.
Nfa inverse_image(const Nfa& b, const ObservationMap& obs, const Alphabet& labels,
                  std::size_t cap = kDefaultDfaCap);

struct InclusionResult {
    bool included = true;
    std::optional<Word> witness;  // shortest, then least by symbol names
};

InclusionResult language_inclusion(const Nfa& a, const Nfa& b, std::size_t cap = kDefaultDfaCap);
bool language_equal(const Nfa& a, const Nfa& b);

bool accepts(const Nfa& a, std::span<const Symbol> word);
bool is_empty(const Nfa& a);

/// Number of distinct words of length exactly n.
BigInt count_words(const Nfa& a, std::size_t n);
/// count_words for n = 0..n_max, sharing one determinization.
std::vector<BigInt> count_sequence(const Nfa& a, std::size_t n_max);

std::string render_word(const Nfa& a, std::span<const Symbol> word);

/// Map of symbol names; throws std::invalid_argument when alphabets differ.
void require_same_alphabet(const Nfa& a, const Nfa& b);

}  // namespace opac
