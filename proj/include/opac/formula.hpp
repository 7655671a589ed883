#pragma once

#include "opac/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace opac {

struct StateFormula;
struct PathFormula;
using StatePtr = std::shared_ptr<const StateFormula>;
using PathPtr = std::shared_ptr<const PathFormula>;

enum class RelOp { Eq, Ne, Lt, Le, Gt, Ge };

/// Either a named proposition (`"done"` or a bare identifier) or a variable
/// predicate such as `s=3` or `payer=c1`.
struct Atom {
    std::string name;
    std::optional<RelOp> op;
    std::variant<std::int64_t, std::string> rhs = std::int64_t{0};

    bool is_predicate() const { return op.has_value(); }
    bool operator==(const Atom&) const = default;
};

/// `Query` is the `=?` form and carries no threshold.
enum class Comparator { Le, Lt, Ge, Gt, Query };

struct StateFormula {
    enum class Kind { True, False, Atom, Not, And, Or, Opacity, Prob };

    Kind kind = Kind::True;
    opac::Atom atom;
    StatePtr lhs;
    StatePtr rhs;
    PathPtr path;
    Comparator cmp = Comparator::Query;
    Rational threshold = 0;
    /// Prob queries only: the body is ⊙[path] rather than a plain path.
    bool opacity_body = false;
};

struct PathFormula {
    enum class Kind { Next, Until, Release, Bot, Not, Eventually };

    Kind kind = Kind::Next;
    StatePtr lhs;  // Next / Eventually operand, or left of U / R
    StatePtr rhs;
    PathPtr inner;  // Not
};

namespace f {
StatePtr tru();
StatePtr fls();
StatePtr atom(Atom a);
StatePtr prop(std::string name);
StatePtr pred(std::string var, RelOp op, std::int64_t value);
StatePtr neg(StatePtr a);
StatePtr conj(StatePtr a, StatePtr b);
StatePtr disj(StatePtr a, StatePtr b);
StatePtr opacity(PathPtr p);
StatePtr prob(Comparator cmp, Rational threshold, PathPtr body, bool opacity_body);

PathPtr next(StatePtr a);
PathPtr until(StatePtr a, StatePtr b);
PathPtr release(StatePtr a, StatePtr b);
PathPtr eventually(StatePtr a);
PathPtr bot();
PathPtr pneg(PathPtr p);
}  // namespace f

/// Parses a property. `F φ` becomes `true U φ`. Throws SyntaxError.
StatePtr parse_property(std::string_view text);

/// Pushes negations down to atoms. Not stays above ⊙ (its Sat set is a
/// complement) and is absorbed into P⋈p by flipping the comparator.
StatePtr to_pnf(const StatePtr& f);
PathPtr to_pnf(const PathPtr& p);

/// Replaces Eventually(φ) with Until(true, φ) at the top of a path formula.
PathPtr desugar(const PathPtr& p);

/// X φ ↦ X ¬φ, φ U φ′ ↦ ¬φ R ¬φ′, φ R φ′ ↦ ¬φ U ¬φ′, all in PNF.
/// Throws UnsupportedPathForm for ⊥ and raw path negation.
PathPtr negate_path(const PathPtr& p);

bool equal(const StatePtr& a, const StatePtr& b);
bool equal(const PathPtr& a, const PathPtr& b);

std::string to_string(const StateFormula& f);
std::string to_string(const PathFormula& p);
std::string to_string(const Atom& a);
std::string to_string(RelOp op);

bool contains_opacity(const StatePtr& f);

}  // namespace opac
