#pragma once

#include "opac/rational.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace opac {

/// Tarjan's algorithm. Components come out in reverse topological order:
/// every component appears after all components reachable from it.
std::vector<std::vector<std::size_t>> strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& successors);

/// x_v = Σ_w coeffs[v] · x_w + rhs[v].
struct FixpointSystem {
    std::vector<std::vector<std::pair<std::size_t, Rational>>> coeffs;
    std::vector<Rational> rhs;

    explicit FixpointSystem(std::size_t n = 0) : coeffs(n), rhs(n, Rational(0)) {}
    std::size_t size() const { return rhs.size(); }
};

/// Exact solve, one strongly connected block at a time. The caller removes
/// variables that cannot reach a nonzero right-hand side, which keeps every
/// block nonsingular; a singular block throws SingularSystem.
std::vector<Rational> solve_fixpoint(const FixpointSystem& sys);

/// Dense exact Gaussian elimination of A x = b with size-aware pivoting.
std::vector<Rational> solve_dense(std::vector<std::vector<Rational>> a, std::vector<Rational> b);

}  // namespace opac
