#include "opac/linear.hpp"

#include "opac/error.hpp"

#include <algorithm>
#include <limits>

namespace opac {

std::vector<std::vector<std::size_t>> strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& succ) {
    const std::size_t n = succ.size();
    constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> out;
    std::size_t counter = 0;
    // Explicit call stack: (node, next successor position).
    std::vector<std::pair<std::size_t, std::size_t>> frames;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        frames.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            if (pos < succ[v].size()) {
                auto w = succ[v][pos++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            auto node = v;
            frames.pop_back();
            if (!frames.empty()) {
                auto parent = frames.back().first;
                low[parent] = std::min(low[parent], low[node]);
            }
            if (low[node] == index[node]) {
                std::vector<std::size_t> comp;
                while (true) {
                    auto w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                    if (w == node) break;
                }
                std::sort(comp.begin(), comp.end());
                out.push_back(std::move(comp));
            }
        }
    }
    return out;
}

namespace {

std::size_t cost(const Rational& q) {
    return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

}  // namespace

std::vector<Rational> solve_dense(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = n;
        for (std::size_t r = col; r < n; ++r)
            if (a[r][col] != 0 && (pivot == n || cost(a[r][col]) < cost(a[pivot][col]))) pivot = r;
        if (pivot == n) throw SingularSystem("singular linear system at column " + std::to_string(col));
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        Rational inv = Rational(1) / a[col][col];
        for (std::size_t c = col; c < n; ++c) a[col][c] *= inv;
        b[col] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational factor = a[r][col];
            for (std::size_t c = col; c < n; ++c)
                if (a[col][c] != 0) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    for (auto& x : b) x.canonicalize();
    return b;
}

std::vector<Rational> solve_fixpoint(const FixpointSystem& sys) {
    const std::size_t n = sys.size();
    std::vector<std::vector<std::size_t>> succ(n);
    for (std::size_t v = 0; v < n; ++v)
        for (const auto& [w, c] : sys.coeffs[v])
            if (c != 0) succ[v].push_back(w);
    auto comps = strongly_connected_components(succ);
    std::vector<Rational> x(n, Rational(0));
    std::vector<std::size_t> local(n, 0);
    std::vector<bool> in_comp(n, false);
    for (const auto& comp : comps) {
        for (std::size_t i = 0; i < comp.size(); ++i) {
            local[comp[i]] = i;
            in_comp[comp[i]] = true;
        }
        const std::size_t k = comp.size();
        bool trivial = k == 1 && std::none_of(sys.coeffs[comp[0]].begin(), sys.coeffs[comp[0]].end(),
                                              [&](const auto& e) { return e.first == comp[0] && e.second != 0; });
        if (trivial) {
            auto v = comp[0];
            Rational acc = sys.rhs[v];
            for (const auto& [w, c] : sys.coeffs[v]) acc += c * x[w];
            x[v] = acc;
        } else {
            std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k, Rational(0)));
            std::vector<Rational> b(k, Rational(0));
            for (std::size_t i = 0; i < k; ++i) {
                auto v = comp[i];
                a[i][i] = 1;
                b[i] = sys.rhs[v];
                for (const auto& [w, c] : sys.coeffs[v]) {
                    if (in_comp[w]) a[i][local[w]] -= c;
                    else b[i] += c * x[w];
                }
            }
            auto sol = solve_dense(std::move(a), std::move(b));
            for (std::size_t i = 0; i < k; ++i) x[comp[i]] = sol[i];
        }
        for (auto v : comp) in_comp[v] = false;
    }
    return x;
}

}  // namespace opac
