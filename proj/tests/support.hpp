#pragma once

// Shared test helpers: corpus loading, random models, and a brute-force
// path-enumeration oracle that does not use the checker.

#include "opac/checker.hpp"
#include "opac/ldtmc.hpp"
#include "opac/model.hpp"

#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace opac::testing {

std::string corpus_path(const std::string& name);
Model corpus_model(const std::string& name);
std::string corpus_text(const std::string& name);

// ψ for the oracle: X φ, φ U φ′ or φ R φ′ with φ, φ′ given as predicates on states.
struct OracleFormula {
    PathFormula::Kind kind = PathFormula::Kind::Until;
    std::function<bool(const Model&, StateId)> lhs;
    std::function<bool(const Model&, StateId)> rhs;
};

// One terminating path u⊥^ω with |u| ≤ depth.
struct OraclePath {
    std::vector<LabelId> labels;
    Rational prob;
    bool satisfies = false;
};

std::vector<OraclePath> enumerate_paths(const Model& m, StateId s, const OracleFormula& psi, std::size_t depth);

// Whether ψ holds on the path s0 s1 ... taken by `states`, closed by the ⊥ chain
// of the last state.
bool holds_on(const Model& m, const std::vector<StateId>& states, const OracleFormula& psi);

struct OracleResult {
    bool opaque = true;                   // no uncovered ψ-path of length ≤ depth
    Rational transparent_mass = 0;        // mass of uncovered ψ-paths of length ≤ depth
    Rational unexplored_mass = 0;         // 1 − mass of every terminating path of length ≤ depth
    std::vector<std::vector<LabelId>> uncovered;
};

// A ψ-path is covered when some terminating ¬ψ-path of any length has the
// same observation; that part is an exact search over (state, position, status).
OracleResult opacity_oracle(const Model& m, StateId s, const OracleFormula& psi, std::size_t depth);

// Random valid model: ≤ max_states states, labels among a,b,c, propositions p and q.
Model random_model(std::mt19937& rng, std::size_t max_states = 8);

struct RandomProperty {
    PathPtr psi;
    OracleFormula oracle;
    std::string text;
};

RandomProperty random_property(std::mt19937& rng);

// True when the non-⊥ transition graph has no cycle.
bool acyclic(const Model& m);

// Space-separated label names.
std::vector<LabelId> labels_of(const Model& m, const std::string& word);

}  // namespace opac::testing
