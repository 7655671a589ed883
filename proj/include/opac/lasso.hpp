#pragma once

#include "opac/automata.hpp"
#include "opac/model.hpp"
#include "opac/rational.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace opac {

struct LassoItem;
using ItemSeq = std::vector<LassoItem>;

/// Step(label), or a starred cycle whose body is a choice between item
/// sequences. Single-alternative cycles render as "(ab)*", others as "(ab|c)*".
struct LassoItem {
    enum class Kind { Step, Cycle };

    Kind kind = Kind::Step;
    LabelId label = 0;
    std::vector<ItemSeq> alternatives;

    static LassoItem step(LabelId l) { return {Kind::Step, l, {}}; }
    static LassoItem cycle(std::vector<ItemSeq> alts) { return {Kind::Cycle, 0, std::move(alts)}; }

    bool operator==(const LassoItem&) const = default;
};

/// A finite stem with starred cycles, optionally followed by ⊥*.
struct LassoExpr {
    ItemSeq items;
    bool suffix_bot = false;

    bool operator==(const LassoExpr&) const = default;
};

struct PLasso {
    LassoExpr tr;
    Rational pr;
};

/// Labels concatenated, cycles as "(…)*"; "⊥*" is appended only when verbose.
std::string render(const LassoExpr& e, const Alphabet& labels, bool verbose = false);
/// Observation rendering: hidden labels vanish, empty cycles are dropped.
std::string render_obs(const LassoExpr& e, const ObservationMap& obs, bool verbose = false);

/// Reads the rendering back. Label names are matched longest first; a
/// trailing "⊥*" sets suffix_bot. Throws SyntaxError.
LassoExpr parse_lasso(std::string_view text, const Alphabet& labels);

/// Automaton over the label alphabet; ⊥* is an accepting ⊥ self-loop.
Nfa expr_to_nfa(const LassoExpr& e, const Alphabet& labels);

/// Exact probability of the paths denoted by `e` from `start`: steps
/// multiply, a cycle of total return probability p contributes 1/(1-p), and
/// the ⊥* suffix contributes the ⊥-edge probability of the final state.
/// Throws InvalidWalk or DivergentCycle.
Rational expr_probability(const LassoExpr& e, const Model& m, StateId start);

}  // namespace opac
