#pragma once

#include "opac/error.hpp"
#include "opac/model.hpp"
#include "opac/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace opac {

class DuplicateDeclaration : public ModelError {
public:
    using ModelError::ModelError;
};

class UndeclaredIdentifier : public ModelError {
public:
    using ModelError::ModelError;
};

class OverlappingGuards : public ModelError {
public:
    using ModelError::ModelError;
};

class LabelDeterminismViolation : public ModelError {
public:
    using ModelError::ModelError;
};

class StateCapExceeded : public ResourceLimit {
public:
    using ResourceLimit::ResourceLimit;
};

struct SourcePos {
    int line = 0;
    int col = 0;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Number, Bool, Ident, Not, Neg, Binary };

    Kind kind = Kind::Number;
    Rational value = 0;  // Number; Bool uses 0/1
    std::string name;    // Ident, or the operator of Binary
    ExprPtr lhs;
    ExprPtr rhs;
    SourcePos pos;
};

struct ConstDecl {
    std::string name;
    ExprPtr value;
    SourcePos pos;
};

struct ObservationDecl {
    std::string label;
    std::optional<std::string> observable;  // nullopt for null
    SourcePos pos;
};

struct VarDecl {
    std::string name;
    ExprPtr lower;
    ExprPtr upper;
    ExprPtr init;  // may be null: defaults to the lower bound
    SourcePos pos;
};

struct Assignment {
    std::string var;
    ExprPtr value;
    SourcePos pos;
};

struct Update {
    ExprPtr prob;
    std::string label;
    std::vector<Assignment> assignments;
    SourcePos pos;
};

struct GuardedCommand {
    ExprPtr guard;
    std::vector<Update> updates;
    SourcePos pos;
};

struct LabelDecl {
    std::string name;
    ExprPtr expr;
    SourcePos pos;
};

struct ModelSource {
    std::string module_name;
    std::vector<ConstDecl> constants;
    std::vector<ObservationDecl> observations;
    std::vector<VarDecl> variables;
    std::vector<GuardedCommand> commands;
    std::vector<LabelDecl> labels;
};

/// Throws SyntaxError with the expected-token set, or DuplicateDeclaration.
ModelSource parse_model(std::string_view text);

struct ExpandOptions {
    std::size_t state_cap = 1'000'000;
};

/// Reachable valuations from the initial one; a valuation with no enabled
/// command gets a ⊥ self-loop. Throws UndeclaredIdentifier, OverlappingGuards,
/// LabelDeterminismViolation, StateCapExceeded or ModelError.
Model expand_state_space(const ModelSource& src, const ExpandOptions& opts = {});

Model load_model(std::string_view text, const ExpandOptions& opts = {});

/// Pretty-printer; parse_model(render_source(src)) reproduces `src`.
std::string render_source(const ModelSource& src);
std::string render_expr(const Expr& e);

}  // namespace opac
