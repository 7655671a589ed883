#pragma once

#include "opac/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace opac {

using LabelId = std::uint32_t;
using ObsId = std::uint32_t;

/// ⊥ always occupies label id 0 and observable id 0.
inline constexpr LabelId kBot = 0;
inline constexpr ObsId kObsBot = 0;
inline constexpr std::string_view kBotName = "⊥";

struct StateId {
    std::uint32_t index = 0;
    auto operator<=>(const StateId&) const = default;
};

struct Label {
    std::string name;
    bool is_bot = false;
};

/// Transition labels. The termination label ⊥ is created up front; "bot" and
/// "⊥" both resolve to it.
class Alphabet {
public:
    Alphabet();

    LabelId add(std::string_view name);
    std::optional<LabelId> find(std::string_view name) const;

    const Label& operator[](LabelId id) const { return labels_.at(id); }
    const std::string& name(LabelId id) const { return labels_.at(id).name; }
    std::size_t size() const { return labels_.size(); }

    /// Names indexed by id, for automata built over this alphabet.
    std::vector<std::string> names() const;

private:
    std::vector<Label> labels_;
};

/// Static label-level observation function obs': Σ → Θ ∪ {ε}, with ⊥ ↦ ⊥.
/// Observables are interned; id 0 is ⊥.
class ObservationMap {
public:
    ObservationMap();

    void set_visible(LabelId label, std::string_view observable);
    void set_hidden(LabelId label);

    bool has_entry(LabelId label) const;
    /// nullopt means ε. Throws UnknownLabel when the label has no entry.
    std::optional<ObsId> image(LabelId label) const;

    std::size_t num_observables() const { return observables_.size(); }
    const std::string& observable_name(ObsId id) const { return observables_.at(id); }
    std::optional<ObsId> find_observable(std::string_view name) const;
    const std::vector<std::string>& observable_names() const { return observables_; }

private:
    enum class Entry : std::uint8_t { Missing, Hidden, Visible };
    struct Slot {
        Entry entry = Entry::Missing;
        ObsId id = 0;
    };

    ObsId intern(std::string_view observable);

    std::vector<Slot> slots_;
    std::vector<std::string> observables_;
};

/// Pointwise image with ε deleted; ⊥ maps to ⊥.
std::vector<ObsId> observe_string(const ObservationMap& obs, std::span<const LabelId> word);

struct Transition {
    StateId source;
    LabelId label = 0;
    StateId target;
    Rational prob = 1;
};

struct StateMeta {
    std::string name;
    std::vector<std::int64_t> valuation;
    std::optional<StateId> parent;
};

/// Explicit deterministic pLTS with state labelling and an observation map.
/// Immutable once built; see ModelBuilder.
class Model {
public:
    std::size_t num_states() const { return out_.size(); }
    StateId initial() const { return initial_; }
    const std::set<StateId>& finals() const { return finals_; }

    const Alphabet& alphabet() const { return alphabet_; }
    const ObservationMap& observations() const { return obs_; }

    /// Outgoing transitions of `s`, sorted by label id.
    std::span<const Transition> out(StateId s) const { return out_.at(s.index); }
    std::span<const Transition> in(StateId s) const { return in_.at(s.index); }
    const Transition* find(StateId s, LabelId label) const;
    /// The ⊥-labelled edge leaving `s`, if any.
    const Transition* bot_edge(StateId s) const { return find(s, kBot); }
    /// True when every outgoing edge of `s` is labelled ⊥.
    bool is_terminal(StateId s) const;

    const std::vector<std::string>& propositions() const { return propositions_; }
    const std::set<std::string>& props(StateId s) const { return eta_.at(s.index); }
    bool has_prop(StateId s, const std::string& prop) const { return eta_.at(s.index).count(prop) > 0; }

    const StateMeta& meta(StateId s) const { return meta_.at(s.index); }
    const std::vector<std::string>& variables() const { return variables_; }
    std::optional<std::size_t> variable_index(std::string_view name) const;
    const std::map<std::string, std::int64_t, std::less<>>& constants() const { return constants_; }

    std::vector<StateId> states() const;

private:
    friend class ModelBuilder;

    Alphabet alphabet_;
    ObservationMap obs_;
    std::vector<std::vector<Transition>> out_;
    std::vector<std::vector<Transition>> in_;
    StateId initial_;
    std::set<StateId> finals_;
    std::vector<std::string> propositions_;
    std::vector<std::set<std::string>> eta_;
    std::vector<StateMeta> meta_;
    std::vector<std::string> variables_;
    std::map<std::string, std::int64_t, std::less<>> constants_;
};

class ModelBuilder {
public:
    StateId add_state(std::string name = {});
    LabelId label(std::string_view name) { return alphabet_.add(name); }

    ModelBuilder& transition(StateId from, std::string_view label, StateId to, Rational prob = 1);
    ModelBuilder& initial(StateId s);
    ModelBuilder& final_state(StateId s);

    ModelBuilder& declare(std::string prop);
    /// Adds `prop` to η(s). Does not declare it.
    ModelBuilder& mark(StateId s, std::string prop);

    ModelBuilder& observe(std::string_view label, std::string_view observable);
    ModelBuilder& hide(std::string_view label);

    ModelBuilder& variables(std::vector<std::string> names);
    ModelBuilder& valuation(StateId s, std::vector<std::int64_t> values);
    ModelBuilder& parent(StateId s, StateId p);
    ModelBuilder& constant(std::string name, std::int64_t value);

    std::size_t num_states() const { return meta_.size(); }

    /// Throws ModelError on dangling state ids or probabilities outside (0, 1].
    Model build() const;

private:
    Alphabet alphabet_;
    ObservationMap obs_;
    std::vector<Transition> transitions_;
    StateId initial_;
    std::set<StateId> finals_;
    std::vector<std::string> propositions_;
    std::vector<std::set<std::string>> eta_;
    std::vector<StateMeta> meta_;
    std::vector<std::string> variables_;
    std::map<std::string, std::int64_t, std::less<>> constants_;
};

enum class ViolationKind {
    Nondeterministic,
    NotCircular,
    NotWellStructured,
    NotStochastic,
    MissingObservation,
    UndeclaredProposition,
};

struct Violation {
    ViolationKind kind;
    StateId state;
    std::optional<LabelId> label;
    std::string message;

    bool operator==(const Violation&) const = default;
};

using ValidationReport = std::vector<Violation>;

std::string to_string(ViolationKind kind);

/// Checks determinism, circularity, well-structuredness (every ⊥-edge leads
/// to a state whose edges are all ⊥), exact stochasticity, observation
/// coverage and proposition declarations. Empty report means valid.
ValidationReport validate_model(const Model& m);

std::set<StateId> post_states(const Model& m, StateId s);
std::set<StateId> pre_states(const Model& m, StateId s);

/// States reachable from `from` (inclusive).
std::vector<bool> reachable_from(const Model& m, StateId from);

}  // namespace opac
