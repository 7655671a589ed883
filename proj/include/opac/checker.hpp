#pragma once

#include "opac/automata.hpp"
#include "opac/formula.hpp"
#include "opac/lasso.hpp"
#include "opac/model.hpp"
#include "opac/product.hpp"

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace opac {

enum class OpacityMode { Semantic, PerExpression };

struct CheckOptions {
    OpacityMode mode = OpacityMode::Semantic;
    std::size_t dfa_cap = kDefaultDfaCap;
    std::size_t product_cap = kDefaultProductCap;
    std::size_t expression_cap = kDefaultExpressionCap;
};

struct Witness {
    LassoExpr expr;
    std::string trace;  // rendering without ⊥*
    std::string obs;
    Rational prob;
};

struct OpacityReport {
    OpacityMode mode = OpacityMode::Semantic;
    bool verdict = true;
    std::optional<Rational> degree;
    /// Sorted by trace rendering. Probabilities sum to the degree when complete.
    std::vector<Witness> witnesses;
    bool witnesses_complete = true;
    /// Semantic mode: shortest observation of a ψ-path no ¬ψ-path shares.
    std::optional<std::string> counterexample;
    /// Per-expression mode: the first ψ-expression no ¬ψ-expression covers.
    std::optional<LassoExpr> uncovered;
};

/// Expressions plus the automaton of their union, for ψ and for ¬ψ.
struct TraceSetPair {
    std::vector<LassoExpr> sat_exprs;
    Nfa sat;
    std::vector<LassoExpr> unsat_exprs;
    Nfa unsat;
};

/// States satisfying an atom. Throws UnknownAtom.
std::vector<bool> atom_states(const Model& m, const Atom& a);

class Checker {
public:
    explicit Checker(const Model& m, CheckOptions opts = {}) : m_(m), opts_(opts) {}

    const Model& model() const { return m_; }
    const CheckOptions& options() const { return opts_; }

    /// Sat set as a membership vector; the formula is put in PNF first.
    std::vector<bool> sat(const StatePtr& f);
    std::set<StateId> sat_states(const StatePtr& f);

    /// Monitor for a path formula after desugaring and PNF.
    PathMonitor monitor(const PathPtr& psi);

    std::vector<LassoExpr> comp_u(StateId s, const StatePtr& lhs, const StatePtr& rhs);
    std::vector<LassoExpr> comp_r(StateId s, const StatePtr& lhs, const StatePtr& rhs);
    TraceSetPair trace_sets(StateId s, const PathPtr& psi);

    /// Verdict only, in the configured mode.
    OpacityReport check_opacity(StateId s, const PathPtr& psi);
    /// Degree by the product chain, with the witness breakdown.
    OpacityReport degree_of_opacity(StateId s, const PathPtr& psi);
    std::vector<PLasso> non_opaque_traces(StateId s, const PathPtr& psi);
    /// Degree as the sum of the witnesses' expression probabilities.
    Rational degree_by_expressions(StateId s, const PathPtr& psi);

    /// L_ψ ∖ obs⁻¹(obs(L_¬ψ)) over the label alphabet.
    Nfa transparent_language(StateId s, const PathPtr& psi);
    /// The same language read off the transparent product.
    Nfa transparent_product_language(StateId s, const PathPtr& psi);

    /// Standard PCTL probability over all infinite paths.
    Rational prob_path_formula(StateId s, const PathPtr& psi);

    using Value = std::variant<bool, Rational>;
    /// `=?` returns the value, bounded queries a verdict.
    Value eval_prob_query(StateId s, const StateFormula& q);

private:
    ProductGraph product(StateId s, const PathPtr& psi, ExitKind kind, const Dfa* observer = nullptr);
    Dfa observer_for(StateId s, const PathPtr& psi);
    std::vector<bool> sat_pnf(const StatePtr& f);

    const Model& m_;
    CheckOptions opts_;
};

struct NiResult {
    bool holds = true;
    /// First (low, high) projection pair no trace realises, shortlex order.
    std::optional<std::pair<std::vector<LabelId>, std::vector<LabelId>>> witness;
};

/// Bounded non-interference over complete (terminating) traces of length at
/// most `depth`. `high` and `low` must partition the non-⊥ labels.
NiResult check_noninterference(const Model& m, const std::set<LabelId>& high, const std::set<LabelId>& low,
                               std::size_t depth);

std::string render_labels(const Model& m, const std::vector<LabelId>& word);

}  // namespace opac
