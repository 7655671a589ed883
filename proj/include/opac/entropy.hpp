#pragma once

#include "opac/automata.hpp"
#include "opac/checker.hpp"
#include "opac/model.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace opac {

enum class Growth { None, Polynomial, Exponential };

std::string to_string(Growth g);

struct EntropyOptions {
    std::size_t n_max = 64;
    std::size_t tail_window = 16;
    double tolerance = 1e-10;
    std::size_t max_iterations = 100'000;
};

struct EntropyReport {
    std::vector<std::pair<std::size_t, BigInt>> counts;  // n = 1..n_max
    std::vector<double> estimates;                       // log2(1 + count) / n
    double limsup_estimate = 0;
    double spectral_value = 0;
    Growth growth = Growth::None;
    /// 0.08 for languages with no or exponential growth; 0.12 when the
    /// count grows polynomially, where log2(1+n)/n decays slowly.
    double agreement_tolerance = 0.08;
    bool agreement = true;
};

/// Entry (s, t) counts the symbols a with s →a t.
Eigen::MatrixXd count_matrix(const Dfa& d);

struct SpectralResult {
    double radius = 0;
    std::size_t iterations = 0;
    bool used_fallback = false;
};

/// Spectral radius of a nonnegative matrix. Each irreducible block is
/// handled on its own: simple cycles give exactly 1, other cyclic blocks use
/// power iteration on (B + I) with Collatz-Wielandt bounds, falling back to a
/// dense eigensolver when the bounds do not meet. Throws NonConvergence.
SpectralResult spectral_radius(const Eigen::MatrixXd& a, double tolerance = 1e-10,
                               std::size_t max_iterations = 100'000);

/// Automaton view of the spectral computation: determinise, trim, classify.
struct SpectralAnalysis {
    Dfa dfa;  // trimmed
    Growth growth = Growth::None;
    double radius = 0;
    double value = 0;  // log2 of the radius, 0 when there is no exponential growth
};

SpectralAnalysis analyse_spectrum(const Nfa& lang, const EntropyOptions& opts = {});
double entropy_spectral(const Nfa& lang, const EntropyOptions& opts = {});

/// log2(1 + c) for a big integer c.
double log2_one_plus(const BigInt& c);

/// Counting part of the report (counts, estimates, limsup over the tail window).
EntropyReport entropy_by_counting(const Nfa& lang, std::size_t n_max, std::size_t tail_window);

/// Full report for the transparent language of ψ from s.
EntropyReport entropy_report(Checker& checker, StateId s, const PathPtr& psi, const EntropyOptions& opts = {});
/// Full report for an arbitrary language.
EntropyReport entropy_report(const Nfa& lang, const EntropyOptions& opts = {});

/// Growth rate of the model's own run language (all finite label sequences
/// from the initial state).
double run_language_entropy(const Model& m, const EntropyOptions& opts = {});

}  // namespace opac
