#include "opac/model.hpp"

#include "opac/error.hpp"

#include <algorithm>
#include <deque>

namespace opac {

Alphabet::Alphabet() { labels_.push_back({std::string(kBotName), true}); }

LabelId Alphabet::add(std::string_view name) {
    if (auto id = find(name)) return *id;
    labels_.push_back({std::string(name), false});
    return static_cast<LabelId>(labels_.size() - 1);
}

std::optional<LabelId> Alphabet::find(std::string_view name) const {
    if (name == kBotName || name == "bot") return kBot;
    for (std::size_t i = 1; i < labels_.size(); ++i)
        if (labels_[i].name == name) return static_cast<LabelId>(i);
    return std::nullopt;
}

std::vector<std::string> Alphabet::names() const {
    std::vector<std::string> out;
    out.reserve(labels_.size());
    for (const auto& l : labels_) out.push_back(l.name);
    return out;
}

ObservationMap::ObservationMap() {
    observables_.push_back(std::string(kBotName));
    slots_.push_back({Entry::Visible, kObsBot});
}

ObsId ObservationMap::intern(std::string_view observable) {
    if (auto id = find_observable(observable)) return *id;
    observables_.emplace_back(observable);
    return static_cast<ObsId>(observables_.size() - 1);
}

std::optional<ObsId> ObservationMap::find_observable(std::string_view name) const {
    if (name == kBotName || name == "bot") return kObsBot;
    for (std::size_t i = 1; i < observables_.size(); ++i)
        if (observables_[i] == name) return static_cast<ObsId>(i);
    return std::nullopt;
}

void ObservationMap::set_visible(LabelId label, std::string_view observable) {
    if (label == kBot) {
        if (observable != kBotName && observable != "bot")
            throw ModelError("⊥ must be observed as ⊥");
        return;
    }
    if (observable == kBotName || observable == "bot")
        throw ModelError("only ⊥ may be observed as ⊥");
    if (slots_.size() <= label) slots_.resize(label + 1);
    slots_[label] = {Entry::Visible, intern(observable)};
}

void ObservationMap::set_hidden(LabelId label) {
    if (label == kBot) throw ModelError("⊥ cannot be hidden");
    if (slots_.size() <= label) slots_.resize(label + 1);
    slots_[label] = {Entry::Hidden, 0};
}

bool ObservationMap::has_entry(LabelId label) const {
    return label < slots_.size() && slots_[label].entry != Entry::Missing;
}

std::optional<ObsId> ObservationMap::image(LabelId label) const {
    if (!has_entry(label))
        throw UnknownLabel("no observation for label id " + std::to_string(label));
    const auto& slot = slots_[label];
    if (slot.entry == Entry::Hidden) return std::nullopt;
    return slot.id;
}

std::vector<ObsId> observe_string(const ObservationMap& obs, std::span<const LabelId> word) {
    std::vector<ObsId> out;
    out.reserve(word.size());
    for (LabelId l : word)
        if (auto o = obs.image(l)) out.push_back(*o);
    return out;
}

const Transition* Model::find(StateId s, LabelId label) const {
    for (const auto& t : out_.at(s.index))
        if (t.label == label) return &t;
    return nullptr;
}

bool Model::is_terminal(StateId s) const {
    const auto& edges = out_.at(s.index);
    return !edges.empty() &&
           std::all_of(edges.begin(), edges.end(), [](const Transition& t) { return t.label == kBot; });
}

std::optional<std::size_t> Model::variable_index(std::string_view name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i)
        if (variables_[i] == name) return i;
    return std::nullopt;
}

std::vector<StateId> Model::states() const {
    std::vector<StateId> out(num_states());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = StateId{static_cast<std::uint32_t>(i)};
    return out;
}

StateId ModelBuilder::add_state(std::string name) {
    StateId id{static_cast<std::uint32_t>(meta_.size())};
    if (name.empty()) name = "s" + std::to_string(id.index);
    meta_.push_back({std::move(name), {}, std::nullopt});
    eta_.emplace_back();
    return id;
}

ModelBuilder& ModelBuilder::transition(StateId from, std::string_view label, StateId to, Rational prob) {
    prob.canonicalize();
    transitions_.push_back({from, alphabet_.add(label), to, std::move(prob)});
    return *this;
}

ModelBuilder& ModelBuilder::initial(StateId s) {
    initial_ = s;
    return *this;
}

ModelBuilder& ModelBuilder::final_state(StateId s) {
    finals_.insert(s);
    return *this;
}

ModelBuilder& ModelBuilder::declare(std::string prop) {
    if (std::find(propositions_.begin(), propositions_.end(), prop) == propositions_.end())
        propositions_.push_back(std::move(prop));
    return *this;
}

ModelBuilder& ModelBuilder::mark(StateId s, std::string prop) {
    if (s.index >= eta_.size()) throw ModelError("mark: state out of range");
    eta_[s.index].insert(std::move(prop));
    return *this;
}

ModelBuilder& ModelBuilder::observe(std::string_view label, std::string_view observable) {
    obs_.set_visible(alphabet_.add(label), observable);
    return *this;
}

ModelBuilder& ModelBuilder::hide(std::string_view label) {
    obs_.set_hidden(alphabet_.add(label));
    return *this;
}

ModelBuilder& ModelBuilder::variables(std::vector<std::string> names) {
    variables_ = std::move(names);
    return *this;
}

ModelBuilder& ModelBuilder::valuation(StateId s, std::vector<std::int64_t> values) {
    meta_.at(s.index).valuation = std::move(values);
    return *this;
}

ModelBuilder& ModelBuilder::parent(StateId s, StateId p) {
    meta_.at(s.index).parent = p;
    return *this;
}

ModelBuilder& ModelBuilder::constant(std::string name, std::int64_t value) {
    constants_[std::move(name)] = value;
    return *this;
}

Model ModelBuilder::build() const {
    const auto n = meta_.size();
    if (n == 0) throw ModelError("model has no states");
    if (initial_.index >= n) throw ModelError("initial state out of range");
    Model m;
    m.alphabet_ = alphabet_;
    m.obs_ = obs_;
    m.out_.resize(n);
    m.in_.resize(n);
    for (const auto& t : transitions_) {
        if (t.source.index >= n || t.target.index >= n)
            throw ModelError("transition references a state out of range");
        if (t.prob <= 0 || t.prob > 1)
            throw ModelError("transition probability " + to_fraction(t.prob) + " from " +
                             meta_[t.source.index].name + " is outside (0, 1]");
        m.out_[t.source.index].push_back(t);
        m.in_[t.target.index].push_back(t);
    }
    auto by_label = [](const Transition& a, const Transition& b) {
        return a.label != b.label ? a.label < b.label : a.target < b.target;
    };
    for (auto& edges : m.out_) std::stable_sort(edges.begin(), edges.end(), by_label);
    for (auto s : finals_)
        if (s.index >= n) throw ModelError("final state out of range");
    m.initial_ = initial_;
    m.finals_ = finals_;
    m.propositions_ = propositions_;
    m.eta_ = eta_;
    m.meta_ = meta_;
    m.variables_ = variables_;
    m.constants_ = constants_;
    return m;
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Nondeterministic: return "nondeterministic";
        case ViolationKind::NotCircular: return "not-circular";
        case ViolationKind::NotWellStructured: return "not-well-structured";
        case ViolationKind::NotStochastic: return "not-stochastic";
        case ViolationKind::MissingObservation: return "missing-observation";
        case ViolationKind::UndeclaredProposition: return "undeclared-proposition";
    }
    return "unknown";
}

ValidationReport validate_model(const Model& m) {
    ValidationReport report;
    const auto& names = m.alphabet();
    for (auto s : m.states()) {
        const auto& sname = m.meta(s).name;
        auto edges = m.out(s);
        if (edges.empty()) {
            report.push_back({ViolationKind::NotCircular, s, std::nullopt,
                              "state " + sname + " has no outgoing transition"});
            continue;
        }
        Rational total = 0;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const auto& t = edges[i];
            total += t.prob;
            if (i > 0 && edges[i - 1].label == t.label)
                report.push_back({ViolationKind::Nondeterministic, s, t.label,
                                  "state " + sname + " has two transitions labelled " + names.name(t.label)});
            if (t.label == kBot && !m.is_terminal(t.target))
                report.push_back({ViolationKind::NotWellStructured, s, t.label,
                                  "⊥ edge from " + sname + " reaches " + m.meta(t.target).name +
                                      ", which has non-⊥ transitions"});
        }
        if (total != 1)
            report.push_back({ViolationKind::NotStochastic, s, std::nullopt,
                              "outgoing probabilities of " + sname + " sum to " + to_fraction(total)});
        for (const auto& p : m.props(s))
            if (std::find(m.propositions().begin(), m.propositions().end(), p) == m.propositions().end())
                report.push_back({ViolationKind::UndeclaredProposition, s, std::nullopt,
                                  "proposition " + p + " on " + sname + " is not declared"});
    }
    for (LabelId l = 1; l < names.size(); ++l)
        if (!m.observations().has_entry(l))
            report.push_back({ViolationKind::MissingObservation, m.initial(), l,
                              "label " + names.name(l) + " has no observation"});
    return report;
}

std::set<StateId> post_states(const Model& m, StateId s) {
    std::set<StateId> out;
    for (const auto& t : m.out(s)) out.insert(t.target);
    return out;
}

std::set<StateId> pre_states(const Model& m, StateId s) {
    std::set<StateId> out;
    for (const auto& t : m.in(s)) out.insert(t.source);
    return out;
}

std::vector<bool> reachable_from(const Model& m, StateId from) {
    std::vector<bool> seen(m.num_states(), false);
    std::deque<StateId> queue{from};
    seen[from.index] = true;
    while (!queue.empty()) {
        auto s = queue.front();
        queue.pop_front();
        for (const auto& t : m.out(s))
            if (!seen[t.target.index]) {
                seen[t.target.index] = true;
                queue.push_back(t.target);
            }
    }
    return seen;
}

}  // namespace opac
