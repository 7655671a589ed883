#include "opac/export.hpp"

#include <json.hpp>

#include <sstream>

namespace opac {

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string export_json(const Model& m, int indent) {
    using nlohmann::json;
    json j;
    j["initial"] = m.initial().index;
    j["alphabet"] = m.alphabet().names();
    j["propositions"] = m.propositions();
    j["variables"] = m.variables();
    json obs = json::object();
    for (LabelId l = 1; l < m.alphabet().size(); ++l) {
        if (!m.observations().has_entry(l)) continue;
        auto image = m.observations().image(l);
        obs[m.alphabet().name(l)] = image ? json(m.observations().observable_name(*image)) : json(nullptr);
    }
    j["observations"] = obs;
    json states = json::array();
    json transitions = json::array();
    for (auto s : m.states()) {
        json st;
        st["id"] = s.index;
        st["name"] = m.meta(s).name;
        st["labels"] = m.props(s);
        st["final"] = m.finals().count(s) > 0;
        if (!m.variables().empty()) {
            json val = json::object();
            const auto& v = m.meta(s).valuation;
            for (std::size_t i = 0; i < v.size() && i < m.variables().size(); ++i) val[m.variables()[i]] = v[i];
            st["valuation"] = val;
        }
        states.push_back(st);
        for (const auto& t : m.out(s))
            transitions.push_back({{"source", t.source.index},
                                   {"label", m.alphabet().name(t.label)},
                                   {"target", t.target.index},
                                   {"prob", to_fraction(t.prob)}});
    }
    j["states"] = states;
    j["transitions"] = transitions;
    return j.dump(indent);
}

std::string export_dot(const Model& m, const std::set<StateId>& highlight) {
    std::ostringstream out;
    out << "digraph model {\n  rankdir=LR;\n  node [shape=circle];\n";
    out << "  init [shape=point];\n  init -> s" << m.initial().index << ";\n";
    for (auto s : m.states()) {
        out << "  s" << s.index << " [label=\"" << dot_escape(m.meta(s).name) << "\"";
        if (highlight.count(s)) out << ", style=filled, fillcolor=lightcoral";
        if (m.finals().count(s)) out << ", shape=doublecircle";
        out << "];\n";
    }
    for (auto s : m.states())
        for (const auto& t : m.out(s))
            out << "  s" << t.source.index << " -> s" << t.target.index << " [label=\""
                << dot_escape(to_fraction(t.prob) + ":" + m.alphabet().name(t.label)) << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace opac
