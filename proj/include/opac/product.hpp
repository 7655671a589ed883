#pragma once

#include "opac/automata.hpp"
#include "opac/formula.hpp"
#include "opac/lasso.hpp"
#include "opac/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace opac {

inline constexpr std::size_t kDefaultProductCap = 100'000;
inline constexpr std::size_t kDefaultExpressionCap = 10'000;

/// Deterministic monitor for X φ, φ U φ′ and φ R φ′ reading the states of a
/// path one at a time. `lhs`/`rhs` are the Sat sets of φ and φ′ (Next uses lhs).
struct PathMonitor {
    PathFormula::Kind kind = PathFormula::Kind::Until;
    std::vector<bool> lhs;
    std::vector<bool> rhs;
};

enum class Mode : std::uint8_t { Init, Pending, Accept, Reject };

Mode monitor_step(const PathMonitor& mon, Mode mode, StateId s);
/// Verdict of a path that leaves the monitor in `mode` forever.
bool monitor_verdict(const PathMonitor& mon, Mode mode);

/// Which terminating paths a product graph accepts.
enum class ExitKind {
    Satisfying,   // paths satisfying the monitored formula
    Violating,    // paths violating it
    Transparent,  // satisfying paths whose observation the observer rejects
};

struct ProductNode {
    StateId state;
    Mode mode = Mode::Init;
    std::int32_t obs_state = 0;  // observer DFA state, -1 once it is dead
};

struct ProductEdge {
    LabelId label = 0;
    std::uint32_t target = 0;
    Rational prob;
};

/// Model × monitor (× observer) over non-⊥ labels. Node 0 is the start.
/// A node is an exit when its model state can take ⊥ here and the
/// terminated path is of the requested kind.
struct ProductGraph {
    std::vector<ProductNode> nodes;
    std::vector<std::vector<ProductEdge>> edges;
    std::vector<std::optional<bool>> tail;  // verdict if the path terminates here
    std::vector<bool> exit;
    std::vector<Rational> exit_prob;  // probability of the ⊥ edge at exits, else 0

    std::size_t size() const { return nodes.size(); }
    /// Nodes from which some exit is reachable.
    std::vector<bool> productive() const;
};

/// `observer` is a DFA over the observables of `m`; required for Transparent.
ProductGraph build_product(const Model& m, StateId start, const PathMonitor& mon, ExitKind kind,
                           const Dfa* observer = nullptr, std::size_t cap = kDefaultProductCap);

/// Words u⊥ⁿ (n ≥ 0) of the terminating paths accepted by `g`.
Nfa product_language(const ProductGraph& g, const Alphabet& labels);

/// Probability that a path from node 0 terminates at an exit.
Rational exit_probability(const ProductGraph& g);

/// Unambiguous split of the product's language into lasso expressions, one
/// per top-level alternative. Throws ResourceLimit past `cap` expressions.
std::vector<LassoExpr> decompose(const ProductGraph& g, std::size_t cap = kDefaultExpressionCap);

}  // namespace opac
