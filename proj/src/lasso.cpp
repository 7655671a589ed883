#include "opac/lasso.hpp"

#include "opac/error.hpp"

#include <algorithm>

namespace opac {

namespace {

void render_seq(const ItemSeq& seq, const Alphabet& labels, std::string& out) {
    for (const auto& item : seq) {
        if (item.kind == LassoItem::Kind::Step) {
            out += labels.name(item.label);
            continue;
        }
        out += '(';
        for (std::size_t i = 0; i < item.alternatives.size(); ++i) {
            if (i > 0) out += '|';
            render_seq(item.alternatives[i], labels, out);
        }
        out += ")*";
    }
}

void render_obs_seq(const ItemSeq& seq, const ObservationMap& obs, std::string& out) {
    for (const auto& item : seq) {
        if (item.kind == LassoItem::Kind::Step) {
            if (auto o = obs.image(item.label)) out += obs.observable_name(*o);
            continue;
        }
        std::vector<std::string> alts;
        for (const auto& alt : item.alternatives) {
            std::string s;
            render_obs_seq(alt, obs, s);
            if (!s.empty() && std::find(alts.begin(), alts.end(), s) == alts.end()) alts.push_back(s);
        }
        if (alts.empty()) continue;
        out += '(';
        for (std::size_t i = 0; i < alts.size(); ++i) {
            if (i > 0) out += '|';
            out += alts[i];
        }
        out += ")*";
    }
}

}  // namespace

std::string render(const LassoExpr& e, const Alphabet& labels, bool verbose) {
    std::string out;
    render_seq(e.items, labels, out);
    if (verbose && e.suffix_bot) out += std::string(kBotName) + "*";
    return out;
}

std::string render_obs(const LassoExpr& e, const ObservationMap& obs, bool verbose) {
    std::string out;
    render_obs_seq(e.items, obs, out);
    if (verbose && e.suffix_bot) out += std::string(kBotName) + "*";
    return out;
}

namespace {

class LassoParser {
public:
    LassoParser(std::string_view text, const Alphabet& labels) : text_(text), labels_(labels) {
        for (LabelId l = 1; l < labels.size(); ++l) names_.push_back(l);
        std::sort(names_.begin(), names_.end(),
                  [&](LabelId a, LabelId b) { return labels.name(a).size() > labels.name(b).size(); });
    }

    LassoExpr parse() {
        LassoExpr e;
        e.items = sequence();
        const std::string bot_star = std::string(kBotName) + "*";
        if (text_.substr(pos_) == bot_star) {
            e.suffix_bot = true;
            pos_ = text_.size();
        }
        if (pos_ != text_.size()) fail("unexpected input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw SyntaxError(msg + " in lasso expression", 1, static_cast<int>(pos_) + 1);
    }

    ItemSeq sequence() {
        ItemSeq seq;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ')' || c == '|') break;
            if (c == '(') {
                ++pos_;
                std::vector<ItemSeq> alts{sequence()};
                while (pos_ < text_.size() && text_[pos_] == '|') {
                    ++pos_;
                    alts.push_back(sequence());
                }
                if (text_.substr(pos_, 2) != ")*") fail("expected ')*'");
                pos_ += 2;
                seq.push_back(LassoItem::cycle(std::move(alts)));
                continue;
            }
            bool matched = false;
            for (auto l : names_) {
                const auto& name = labels_.name(l);
                if (text_.substr(pos_, name.size()) == name) {
                    seq.push_back(LassoItem::step(l));
                    pos_ += name.size();
                    matched = true;
                    break;
                }
            }
            if (!matched) break;
        }
        return seq;
    }

    std::string_view text_;
    const Alphabet& labels_;
    std::vector<LabelId> names_;
    std::size_t pos_ = 0;
};

/// Thompson fragment: returns the exit state after wiring `seq` from `entry`.
std::uint32_t build_seq(Nfa& nfa, const ItemSeq& seq, std::uint32_t entry) {
    auto cur = entry;
    for (const auto& item : seq) {
        if (item.kind == LassoItem::Kind::Step) {
            auto next = nfa.add_state();
            nfa.add_transition(cur, item.label, next);
            cur = next;
            continue;
        }
        auto hub = nfa.add_state();
        nfa.add_transition(cur, kEpsilon, hub);
        for (const auto& alt : item.alternatives) {
            auto start = nfa.add_state();
            nfa.add_transition(hub, kEpsilon, start);
            auto end = build_seq(nfa, alt, start);
            nfa.add_transition(end, kEpsilon, hub);
        }
        cur = hub;
    }
    return cur;
}

StateId walk(const ItemSeq& seq, const Model& m, StateId s, Rational& prob);

Rational cycle_factor(const LassoItem& item, const Model& m, StateId anchor) {
    Rational p = 0;
    for (const auto& alt : item.alternatives) {
        Rational q = 1;
        auto end = walk(alt, m, anchor, q);
        if (end != anchor)
            throw InvalidWalk("cycle body does not return to " + m.meta(anchor).name);
        p += q;
    }
    if (p >= 1) throw DivergentCycle("cycle at " + m.meta(anchor).name + " has probability 1");
    return Rational(1) / (Rational(1) - p);
}

StateId walk(const ItemSeq& seq, const Model& m, StateId s, Rational& prob) {
    for (const auto& item : seq) {
        if (item.kind == LassoItem::Kind::Step) {
            const auto* t = m.find(s, item.label);
            if (!t)
                throw InvalidWalk("no transition labelled " + m.alphabet().name(item.label) + " from " +
                                  m.meta(s).name);
            prob *= t->prob;
            s = t->target;
        } else {
            prob *= cycle_factor(item, m, s);
        }
    }
    return s;
}

}  // namespace

LassoExpr parse_lasso(std::string_view text, const Alphabet& labels) { return LassoParser(text, labels).parse(); }

Nfa expr_to_nfa(const LassoExpr& e, const Alphabet& labels) {
    Nfa nfa(labels.names());
    auto start = nfa.add_state();
    nfa.add_initial(start);
    auto end = build_seq(nfa, e.items, start);
    nfa.set_accepting(end);
    if (e.suffix_bot) nfa.add_transition(end, kBot, end);
    return epsilon_closure_free(nfa);
}

Rational expr_probability(const LassoExpr& e, const Model& m, StateId start) {
    Rational prob = 1;
    auto end = walk(e.items, m, start, prob);
    if (e.suffix_bot) {
        const auto* t = m.bot_edge(end);
        if (!t) throw InvalidWalk("no ⊥ transition from " + m.meta(end).name);
        prob *= t->prob;
    }
    return prob;
}

}  // namespace opac
