#include "opac/cli.hpp"

#include "opac/entropy.hpp"
#include "opac/error.hpp"
#include "opac/export.hpp"
#include "opac/ldtmc.hpp"

#include <json.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace opac {

namespace {

using nlohmann::json;

const char* kInitialSuffix = " (value in the initial state)";

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string property_text(const std::string& prop) {
    std::error_code ec;
    if (!prop.empty() && std::filesystem::is_regular_file(prop, ec)) return read_file(prop);
    return prop;
}

json rational_json(const Rational& r, int precision) {
    return {{"exact", to_fraction(r)}, {"decimal", to_decimal(r, precision)}};
}

std::string degree_line(const OpacityReport& rep, int precision) {
    std::string out = "Result: " + to_decimal(*rep.degree, precision) + ".{";
    for (std::size_t i = 0; i < rep.witnesses.size(); ++i) {
        const auto& w = rep.witnesses[i];
        if (i > 0) out += ",";
        out += to_decimal(w.prob, precision) + ":" + w.trace + ":" + w.obs;
    }
    return out + "}" + kInitialSuffix;
}

json degree_json(const OpacityReport& rep, int precision) {
    json j;
    j["kind"] = "degree";
    j["value"] = rational_json(*rep.degree, precision);
    j["opaque"] = rep.verdict;
    j["witnesses_complete"] = rep.witnesses_complete;
    json ws = json::array();
    for (const auto& w : rep.witnesses)
        ws.push_back({{"trace", w.trace}, {"obs", w.obs}, {"prob", rational_json(w.prob, precision)}});
    j["witnesses"] = ws;
    return j;
}

PathPtr opacity_path(const StatePtr& f) {
    if (f->kind == StateFormula::Kind::Opacity) return f->path;
    if (f->kind == StateFormula::Kind::Prob) return f->path;
    throw InputError("entropy needs an opacity property such as opacity[F s3] or P=? [opacity F s3]");
}

RunOutcome evaluate(const RunConfig& cfg, const Model& m, const StatePtr& f) {
    CheckOptions opts{cfg.mode, cfg.dfa_cap, cfg.product_cap, cfg.expression_cap};
    Checker checker(m, opts);
    auto s0 = m.initial();
    RunOutcome res;
    std::ostringstream out;
    json j;
    using K = StateFormula::Kind;
    bool want_degree = (f->kind == K::Prob && f->opacity_body && f->cmp == Comparator::Query) ||
                       (cfg.subcommand == "degree" && (f->kind == K::Opacity || (f->kind == K::Prob && f->opacity_body)));
    if (want_degree) {
        auto rep = checker.degree_of_opacity(s0, f->path);
        if (f->kind == K::Prob && f->cmp != Comparator::Query) {
            // `degree` on a bounded query still prints the value breakdown; the verdict decides the exit code.
            bool verdict = std::get<bool>(checker.eval_prob_query(s0, *f));
            res.exit_code = verdict ? 0 : 1;
        }
        out << degree_line(rep, cfg.precision) << "\n";
        j = degree_json(rep, cfg.precision);
        if (cfg.verbose && !rep.witnesses_complete)
            out << "note: witness list omitted (expression cap reached)\n";
    } else if (f->kind == K::Prob && f->cmp == Comparator::Query) {
        auto value = std::get<Rational>(checker.eval_prob_query(s0, *f));
        out << "Result: " << to_decimal(value, cfg.precision) << kInitialSuffix << "\n";
        j = {{"kind", "probability"}, {"value", rational_json(value, cfg.precision)}};
    } else {
        bool verdict;
        std::optional<OpacityReport> rep;
        if (f->kind == K::Opacity) {
            rep = checker.check_opacity(s0, f->path);
            verdict = rep->verdict;
        } else {
            verdict = checker.sat(f)[s0.index];
        }
        out << "Result: " << (verdict ? "true" : "false") << kInitialSuffix << "\n";
        j = {{"kind", "boolean"}, {"value", verdict}};
        if (rep) {
            j["mode"] = rep->mode == OpacityMode::Semantic ? "semantic" : "per-expression";
            if (rep->counterexample) j["counterexample"] = *rep->counterexample;
            if (rep->uncovered) j["uncovered"] = render(*rep->uncovered, m.alphabet(), true);
            if (cfg.verbose) {
                if (rep->counterexample) out << "uncovered observation: " << *rep->counterexample << "\n";
                if (rep->uncovered)
                    out << "uncovered expression: " << render(*rep->uncovered, m.alphabet(), true) << "\n";
            }
        }
        res.exit_code = verdict ? 0 : 1;
    }
    if (cfg.verbose && (f->kind == K::Opacity || (f->kind == K::Prob && f->opacity_body))) {
        auto sets = checker.trace_sets(s0, f->path);
        auto list = [&](const std::vector<LassoExpr>& exprs) {
            std::string s = "{";
            for (std::size_t i = 0; i < exprs.size(); ++i)
                s += (i ? "," : "") + render(exprs[i], m.alphabet(), true);
            return s + "}";
        };
        out << "traces(psi): " << list(sets.sat_exprs) << "\n";
        out << "traces(!psi): " << list(sets.unsat_exprs) << "\n";
    }
    res.out = cfg.json ? j.dump(2) + "\n" : out.str();
    return res;
}

RunOutcome entropy(const RunConfig& cfg, const Model& m, const StatePtr& f) {
    CheckOptions opts{cfg.mode, cfg.dfa_cap, cfg.product_cap, cfg.expression_cap};
    Checker checker(m, opts);
    EntropyOptions eo;
    eo.n_max = cfg.n_max;
    eo.tail_window = cfg.tail_window;
    auto rep = entropy_report(checker, m.initial(), opacity_path(f), eo);
    RunOutcome res;
    if (cfg.json) {
        json counts = json::array();
        for (std::size_t i = 0; i < rep.counts.size(); ++i)
            counts.push_back({{"n", rep.counts[i].first},
                              {"count", rep.counts[i].second.get_str()},
                              {"estimate", rep.estimates[i]}});
        json j = {{"kind", "entropy"},
                  {"counts", counts},
                  {"limsup_estimate", rep.limsup_estimate},
                  {"spectral_value", rep.spectral_value},
                  {"growth", to_string(rep.growth)},
                  {"agreement", rep.agreement},
                  {"agreement_tolerance", rep.agreement_tolerance}};
        res.out = j.dump(2) + "\n";
        return res;
    }
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(6);
    out << "n\tcount\testimate\n";
    for (std::size_t i = 0; i < rep.counts.size(); ++i)
        out << rep.counts[i].first << "\t" << rep.counts[i].second.get_str() << "\t" << rep.estimates[i] << "\n";
    out.precision(10);
    out << "limsup estimate: " << rep.limsup_estimate << "\n";
    out << "spectral value: " << rep.spectral_value << "\n";
    out << "growth: " << to_string(rep.growth) << "\n";
    out.precision(2);
    out << "agreement: " << (rep.agreement ? "true" : "false") << " (tolerance " << rep.agreement_tolerance << ")\n";
    res.out = out.str();
    return res;
}

std::set<LabelId> resolve_labels(const Model& m, const std::vector<std::string>& names) {
    std::set<LabelId> out;
    for (const auto& n : names) {
        auto id = m.alphabet().find(n);
        if (!id || *id == kBot) throw InputError("unknown label '" + n + "'");
        out.insert(*id);
    }
    return out;
}

RunOutcome noninterference(const RunConfig& cfg, const Model& m) {
    auto high = resolve_labels(m, cfg.high);
    auto low = resolve_labels(m, cfg.low);
    if (cfg.low.empty()) {
        for (LabelId l = 1; l < m.alphabet().size(); ++l)
            if (!high.count(l)) low.insert(l);
    }
    NiResult r;
    try {
        r = check_noninterference(m, high, low, cfg.depth);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    RunOutcome res;
    res.exit_code = r.holds ? 0 : 1;
    if (cfg.json) {
        json j = {{"kind", "noninterference"}, {"value", r.holds}, {"depth", cfg.depth}};
        if (r.witness) j["witness"] = {{"low", render_labels(m, r.witness->first)}, {"high", render_labels(m, r.witness->second)}};
        res.out = j.dump(2) + "\n";
        return res;
    }
    res.out = std::string("Result: ") + (r.holds ? "true" : "false") + " (non-interference up to depth " +
              std::to_string(cfg.depth) + ")\n";
    if (r.witness) {
        auto show = [&](const std::vector<LabelId>& w) { return w.empty() ? std::string("ε") : render_labels(m, w); };
        res.out += "witness: low=" + show(r.witness->first) + " high=" + show(r.witness->second) + "\n";
    }
    return res;
}

RunOutcome validate(const RunConfig& cfg, const Model& m) {
    auto report = validate_model(m);
    RunOutcome res;
    res.exit_code = report.empty() ? 0 : 1;
    if (cfg.json) {
        json vs = json::array();
        for (const auto& v : report) vs.push_back({{"kind", to_string(v.kind)}, {"state", m.meta(v.state).name}, {"message", v.message}});
        res.out = json{{"kind", "validation"}, {"valid", report.empty()}, {"states", m.num_states()}, {"violations", vs}}.dump(2) + "\n";
        return res;
    }
    std::ostringstream out;
    out << (report.empty() ? "valid" : "invalid") << ": " << m.num_states() << " states\n";
    for (const auto& v : report) out << to_string(v.kind) << ": " << v.message << "\n";
    res.out = out.str();
    return res;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunOutcome run(const RunConfig& cfg) {
    auto fail = [](std::string msg) { return RunOutcome{2, "", "error: " + std::move(msg) + "\n"}; };
    if (cfg.precision < 1) return fail("precision must be at least 1");
    if (cfg.depth < 1) return fail("depth must be at least 1");
    std::optional<Model> model;
    try {
        ExpandOptions eo;
        eo.state_cap = cfg.state_cap;
        model = load_model(read_file(cfg.model_path), eo);
    } catch (const SyntaxError& e) {
        return fail(cfg.model_path + ":" + e.what());
    } catch (const Error& e) {
        std::string msg = e.what();
        bool positioned = !msg.empty() && std::isdigit(static_cast<unsigned char>(msg[0]));
        return fail(cfg.model_path + (positioned ? ":" : ": ") + msg);
    } catch (const std::exception& e) {
        return fail(e.what());
    }
    const Model& m = *model;
    try {
        if (cfg.subcommand == "validate") return validate(cfg, m);
        if (cfg.subcommand == "export") {
            if (cfg.format == "json") return {0, export_json(m) + "\n", ""};
            if (cfg.format == "dot") return {0, export_dot(m), ""};
            return fail("unknown export format '" + cfg.format + "'");
        }
        auto report = validate_model(m);
        if (!report.empty()) {
            std::string msg = cfg.model_path + ": model is not valid";
            for (const auto& v : report) msg += "\n  " + to_string(v.kind) + ": " + v.message;
            return fail(msg);
        }
        if (cfg.subcommand == "ni") return noninterference(cfg, m);
        if (cfg.property.empty()) return fail("missing property");
        StatePtr f;
        try {
            f = parse_property(property_text(cfg.property));
        } catch (const SyntaxError& e) {
            return fail("property:" + std::string(e.what()));
        }
        if (cfg.subcommand == "check" || cfg.subcommand == "degree") return evaluate(cfg, m, f);
        if (cfg.subcommand == "entropy") return entropy(cfg, m, f);
        return fail("unknown subcommand '" + cfg.subcommand + "'");
    } catch (const InputError& e) {
        return fail(e.what());
    } catch (const Error& e) {
        return fail(e.what());
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

}  // namespace opac
