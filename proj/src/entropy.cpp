#include "opac/entropy.hpp"

#include "opac/error.hpp"
#include "opac/linear.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace opac {

std::string to_string(Growth g) {
    switch (g) {
        case Growth::None: return "none";
        case Growth::Polynomial: return "polynomial";
        case Growth::Exponential: return "exponential";
    }
    return "unknown";
}

Eigen::MatrixXd count_matrix(const Dfa& d) {
    const auto n = static_cast<Eigen::Index>(d.num_states());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t s = 0; s < d.num_states(); ++s)
        for (auto t : d.delta[s])
            if (t >= 0) a(static_cast<Eigen::Index>(s), t) += 1.0;
    return a;
}

namespace {

struct BlockResult {
    double radius = 0;
    std::size_t iterations = 0;
    bool fallback = false;
    bool simple_cycle = false;
    bool cyclic = false;
};

double dense_radius(const Eigen::MatrixXd& b) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(b, false);
    if (solver.info() != Eigen::Success) throw NonConvergence("eigensolver failed", 0.0);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

BlockResult block_radius(const Eigen::MatrixXd& b, double tolerance, std::size_t max_iterations) {
    const auto k = b.rows();
    BlockResult r;
    if (k == 1 && b(0, 0) == 0) return r;
    r.cyclic = true;
    bool simple = true;
    for (Eigen::Index i = 0; i < k && simple; ++i) {
        double row = b.row(i).sum();
        simple = row == 1.0;
    }
    if (simple) {
        // Irreducible with unit row sums of integer entries: a single cycle.
        r.radius = 1.0;
        r.simple_cycle = true;
        return r;
    }
    Eigen::MatrixXd shifted = b + Eigen::MatrixXd::Identity(k, k);
    Eigen::VectorXd x = Eigen::VectorXd::Ones(k);
    double lo = 0;
    double hi = 0;
    for (std::size_t it = 1; it <= max_iterations; ++it) {
        Eigen::VectorXd y = shifted * x;
        Eigen::VectorXd ratio = y.cwiseQuotient(x);
        lo = ratio.minCoeff();
        hi = ratio.maxCoeff();
        r.iterations = it;
        if (hi - lo <= tolerance) {
            r.radius = 0.5 * (lo + hi) - 1.0;
            return r;
        }
        x = y / y.maxCoeff();
    }
    r.fallback = true;
    r.radius = dense_radius(b);
    if (!std::isfinite(r.radius)) throw NonConvergence("power iteration did not converge", 0.5 * (lo + hi) - 1.0);
    return r;
}

}  // namespace

SpectralResult spectral_radius(const Eigen::MatrixXd& a, double tolerance, std::size_t max_iterations) {
    const auto n = static_cast<std::size_t>(a.rows());
    std::vector<std::vector<std::size_t>> succ(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0) succ[i].push_back(j);
    SpectralResult out;
    for (const auto& comp : strongly_connected_components(succ)) {
        const auto k = static_cast<Eigen::Index>(comp.size());
        Eigen::MatrixXd b(k, k);
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < k; ++j)
                b(i, j) = a(static_cast<Eigen::Index>(comp[i]), static_cast<Eigen::Index>(comp[j]));
        auto r = block_radius(b, tolerance, max_iterations);
        out.radius = std::max(out.radius, r.radius);
        out.iterations += r.iterations;
        out.used_fallback |= r.fallback;
    }
    return out;
}

SpectralAnalysis analyse_spectrum(const Nfa& lang, const EntropyOptions& opts) {
    SpectralAnalysis out;
    out.dfa = trim(determinize(lang));
    if (out.dfa.initial < 0) return out;
    auto a = count_matrix(out.dfa);
    const auto n = out.dfa.num_states();
    std::vector<std::vector<std::size_t>> succ(n);
    for (std::size_t s = 0; s < n; ++s)
        for (auto t : out.dfa.delta[s])
            if (t >= 0) succ[s].push_back(static_cast<std::size_t>(t));
    bool cyclic = false;
    bool all_simple = true;
    for (const auto& comp : strongly_connected_components(succ)) {
        const auto k = comp.size();
        std::size_t internal = 0;
        bool each_one = true;
        for (auto s : comp) {
            std::size_t row = 0;
            for (auto t : succ[s])
                if (std::binary_search(comp.begin(), comp.end(), t)) ++row;
            internal += row;
            each_one &= row == 1;
        }
        if (internal == 0) continue;
        cyclic = true;
        all_simple &= each_one && internal == k;
    }
    if (!cyclic) return out;
    if (all_simple) {
        out.growth = Growth::Polynomial;
        out.radius = 1.0;
        return out;
    }
    out.growth = Growth::Exponential;
    out.radius = spectral_radius(a, opts.tolerance, opts.max_iterations).radius;
    out.value = std::log2(out.radius);
    return out;
}

double entropy_spectral(const Nfa& lang, const EntropyOptions& opts) { return analyse_spectrum(lang, opts).value; }

double log2_one_plus(const BigInt& c) {
    BigInt v = c + 1;
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
    return std::log2(mant) + static_cast<double>(exp);
}

EntropyReport entropy_by_counting(const Nfa& lang, std::size_t n_max, std::size_t tail_window) {
    if (n_max < 1 || tail_window < 1 || tail_window > n_max)
        throw std::invalid_argument("entropy needs n_max >= tail_window >= 1");
    EntropyReport r;
    auto seq = count_sequence(lang, n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        r.counts.emplace_back(n, seq[n]);
        r.estimates.push_back(log2_one_plus(seq[n]) / static_cast<double>(n));
    }
    r.limsup_estimate = *std::max_element(r.estimates.end() - static_cast<std::ptrdiff_t>(tail_window),
                                          r.estimates.end());
    return r;
}

EntropyReport entropy_report(const Nfa& lang, const EntropyOptions& opts) {
    auto r = entropy_by_counting(lang, opts.n_max, opts.tail_window);
    auto spec = analyse_spectrum(lang, opts);
    r.spectral_value = spec.value;
    r.growth = spec.growth;
    r.agreement_tolerance = spec.growth == Growth::Polynomial ? 0.12 : 0.08;
    r.agreement = std::abs(r.limsup_estimate - r.spectral_value) <= r.agreement_tolerance;
    return r;
}

EntropyReport entropy_report(Checker& checker, StateId s, const PathPtr& psi, const EntropyOptions& opts) {
    return entropy_report(checker.transparent_product_language(s, psi), opts);
}

double run_language_entropy(const Model& m, const EntropyOptions& opts) {
    Nfa nfa(m.alphabet().names());
    for (std::size_t i = 0; i < m.num_states(); ++i) nfa.add_state(true);
    for (auto s : m.states())
        for (const auto& t : m.out(s)) nfa.add_transition(s.index, t.label, t.target.index);
    nfa.add_initial(m.initial().index);
    return entropy_spectral(nfa, opts);
}

}  // namespace opac
