// opacheck: opacity model checker for ldtmc models.
//
//   opacheck check  MODEL PROPERTY [--mode semantic|per-expression] [--precision N] [--json] [--verbose]
//   opacheck degree MODEL PROPERTY
//   opacheck entropy MODEL PROPERTY [--n-max N] [--tail N]
//   opacheck ni MODEL --high h1,h2 [--low l1,l2] [--depth N]
//   opacheck validate MODEL
//   opacheck export MODEL [--format json|dot]

#include "opac/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

void add_query_options(CLI::App* sub, opac::RunConfig& cfg, std::string& mode) {
    sub->add_option("property", cfg.property, "Property text or a file containing it")->required();
    sub->add_option("--mode", mode, "Opacity check: semantic or per-expression")
        ->check(CLI::IsMember({"semantic", "per-expression"}));
    sub->add_option("--precision", cfg.precision, "Decimal digits in rendered values")->check(CLI::PositiveNumber);
    sub->add_option("--dfa-cap", cfg.dfa_cap, "Maximum states in a determinised automaton");
    sub->add_option("--product-cap", cfg.product_cap, "Maximum states in a product construction");
    sub->add_option("--expr-cap", cfg.expression_cap, "Maximum number of trace expressions");
    sub->add_flag("--verbose", cfg.verbose, "Also print trace sets and counterexamples");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact opacity model checker for ldtmc models"};
    app.require_subcommand(1);
    opac::RunConfig cfg;
    std::string mode = "semantic";

    std::map<std::string, CLI::App*> subs;
    subs["check"] = app.add_subcommand("check", "Evaluate a property in the initial state");
    subs["degree"] = app.add_subcommand("degree", "Degree of opacity with non-opaque traces");
    subs["entropy"] = app.add_subcommand("entropy", "Entropy of the transparent language");
    subs["ni"] = app.add_subcommand("ni", "Bounded non-interference");
    subs["validate"] = app.add_subcommand("validate", "Check the structural model assumptions");
    subs["export"] = app.add_subcommand("export", "Write the expanded model as JSON or DOT");

    for (auto& [name, sub] : subs) {
        sub->add_option("model", cfg.model_path, "ldtmc model file")->required()->check(CLI::ExistingFile);
        sub->add_option("--state-cap", cfg.state_cap, "Maximum number of expanded states");
        if (name != "export") sub->add_flag("--json", cfg.json, "Machine-readable output");
    }
    add_query_options(subs["check"], cfg, mode);
    add_query_options(subs["degree"], cfg, mode);
    add_query_options(subs["entropy"], cfg, mode);
    subs["entropy"]->add_option("--n-max", cfg.n_max, "Longest word length counted")->check(CLI::PositiveNumber);
    subs["entropy"]->add_option("--tail", cfg.tail_window, "Tail window for the limsup estimate")
        ->check(CLI::PositiveNumber);
    subs["ni"]->add_option("--high", cfg.high, "High (secret) labels")->delimiter(',')->required();
    subs["ni"]->add_option("--low", cfg.low, "Low labels; defaults to every other label")->delimiter(',');
    subs["ni"]->add_option("--depth", cfg.depth, "Maximum trace length")->check(CLI::PositiveNumber);
    subs["export"]->add_option("--format", cfg.format, "json or dot")->check(CLI::IsMember({"json", "dot"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    for (auto& [name, sub] : subs)
        if (sub->parsed()) cfg.subcommand = name;
    cfg.mode = mode == "per-expression" ? opac::OpacityMode::PerExpression : opac::OpacityMode::Semantic;
    if (cfg.tail_window > cfg.n_max) {
        std::cerr << "error: --tail must not exceed --n-max\n";
        return 2;
    }

    auto outcome = opac::run(cfg);
    std::cout << outcome.out;
    std::cerr << outcome.err;
    return outcome.exit_code;
}
