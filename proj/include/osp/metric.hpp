#pragma once

#include "osp/graded.hpp"
#include "osp/rational.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace osp {

// Orthosymplectic metric: even and supersymmetric, g_ba = (-1)^{[a][b]} g_ab.
// The raised companion g^ab is defined by the round-trip requirement
// sum_a g_ab g^ac = delta_b^c, not by fiat.
class Metric {
public:
    Metric() = default;
    Metric(GradedDim dim, std::map<std::pair<int, int>, Rat> lower, std::string preset)
        : dim_(dim), low_(std::move(lower)), preset_(std::move(preset)) {
        validate_lower();
        compute_raised();
    }

    const GradedDim& dim() const { return dim_; }
    const std::string& preset() const { return preset_; }

    Rat lower(int a, int b) const {
        auto it = low_.find({a, b});
        return it == low_.end() ? Rat(0) : it->second;
    }
    Rat raised(int a, int b) const {
        auto it = up_.find({a, b});
        return it == up_.end() ? Rat(0) : it->second;
    }

    const std::map<std::pair<int, int>, Rat>& lower_entries() const { return low_; }
    const std::map<std::pair<int, int>, Rat>& raised_entries() const { return up_; }

    // sum_a g_a^a = sum_{a,b} g_ab g^ba
    Rat supertrace() const {
        Rat s(0);
        for (const auto& [ab, v] : low_) s += v * raised(ab.second, ab.first);
        return s;
    }

private:
    void validate_lower() {
        for (const auto& [ab, v] : low_) {
            auto [a, b] = ab;
            if (v.is_zero()) throw std::invalid_argument("Metric: stored zero entry");
            if ((dim_.parity(a) + dim_.parity(b)) % 2 != 0)
                throw std::invalid_argument("Metric: odd entry (metric must be even)");
            Rat sym = (dim_.parity(a) && dim_.parity(b)) ? -lower(b, a) : lower(b, a);
            if (sym != v) throw std::invalid_argument("Metric: not supersymmetric");
        }
    }

    // raised = transpose-inverse of the lower matrix
    void compute_raised() {
        const int N = dim_.total();
        std::vector<std::vector<Rat>> A(N, std::vector<Rat>(N, Rat(0)));
        std::vector<std::vector<Rat>> I(N, std::vector<Rat>(N, Rat(0)));
        for (int i = 0; i < N; ++i) I[i][i] = Rat(1);
        for (const auto& [ab, v] : low_) A[ab.first - 1][ab.second - 1] = v;
        // Gauss-Jordan
        for (int col = 0; col < N; ++col) {
            int piv = -1;
            for (int r = col; r < N; ++r)
                if (!A[r][col].is_zero()) { piv = r; break; }
            if (piv < 0) throw std::invalid_argument("Metric: singular");
            std::swap(A[piv], A[col]);
            std::swap(I[piv], I[col]);
            Rat d = A[col][col].inv();
            for (int c = 0; c < N; ++c) { A[col][c] *= d; I[col][c] *= d; }
            for (int r = 0; r < N; ++r) {
                if (r == col || A[r][col].is_zero()) continue;
                Rat f = A[r][col];
                for (int c = 0; c < N; ++c) {
                    A[r][c] -= f * A[col][c];
                    I[r][c] -= f * I[col][c];
                }
            }
        }
        up_.clear();
        // I now holds inverse(G); raised^{ac} needs sum_a g_ab raised^{ac} = delta_b^c,
        // i.e. raised = (G^T)^{-1} = (G^{-1})^T.
        for (int r = 0; r < N; ++r)
            for (int c = 0; c < N; ++c)
                if (!I[r][c].is_zero()) up_[{c + 1, r + 1}] = I[r][c];
    }

    GradedDim dim_;
    std::map<std::pair<int, int>, Rat> low_, up_;
    std::string preset_;
};

namespace detail {
inline void put(std::map<std::pair<int, int>, Rat>& g, int a, int b, Rat v) {
    if (!v.is_zero()) g[{a, b}] = v;
}
// the common odd block: g_{m+i, m+n+i} = 1, g_{m+n+i, m+i} = -1
inline void odd_block(std::map<std::pair<int, int>, Rat>& g, int m, int n) {
    for (int i = 1; i <= n; ++i) {
        put(g, m + i, m + n + i, Rat(1));
        put(g, m + n + i, m + i, Rat(-1));
    }
}
}  // namespace detail

// Even block = identity.
inline Metric default_metric(const SuperDim& sd) {
    std::map<std::pair<int, int>, Rat> g;
    for (int a = 1; a <= sd.m; ++a) detail::put(g, a, a, Rat(1));
    detail::odd_block(g, sd.m, sd.n);
    return Metric(sd.graded(), std::move(g), "default");
}

namespace detail {
inline std::map<std::pair<int, int>, Rat> split_lower(int p, int n, const Rat& last) {
    std::map<std::pair<int, int>, Rat> g;
    for (int j = 1; 2 * j <= p; ++j) {
        put(g, 2 * j - 1, 2 * j, Rat(1));
        put(g, 2 * j, 2 * j - 1, Rat(1));
    }
    if (p % 2 == 1) put(g, p, p, last);
    odd_block(g, p, n);
    return g;
}
}  // namespace detail

// Even block = hyperbolic pairs (2j-1, 2j); for odd m the last even index is
// self-paired with weight `last`.  All root vectors are rational in this basis.
inline Metric split_metric(const SuperDim& sd, const Rat& last = Rat(1)) {
    return Metric(sd.graded(), detail::split_lower(sd.m, sd.n, last), "split");
}

// Split metric over an arbitrary graded space (p | 2n), p unconstrained.
inline Metric split_metric_graded(const GradedDim& gd, const Rat& last = Rat(1)) {
    return Metric(gd, detail::split_lower(gd.even_dim, gd.odd_dim / 2, last), "split");
}

// Identity even block except the first pair, which is hyperbolic (so that
// X^1 = X_2 and X^2 = X_1).
inline Metric hyperbolic_first_pair_metric(const SuperDim& sd) {
    std::map<std::pair<int, int>, Rat> g;
    detail::put(g, 1, 2, Rat(1));
    detail::put(g, 2, 1, Rat(1));
    for (int a = 3; a <= sd.m; ++a) detail::put(g, a, a, Rat(1));
    detail::odd_block(g, sd.m, sd.n);
    return Metric(sd.graded(), std::move(g), "hyperbolic");
}

// Ambient extension of h on (m-2|2n):  g = [[0,1,0],[1,0,0],[0,0,h]] with the
// h block shifted by two.
inline Metric ambient_metric(const Metric& h) {
    GradedDim hd = h.dim();
    GradedDim gd{hd.even_dim + 2, hd.odd_dim};
    std::map<std::pair<int, int>, Rat> g;
    detail::put(g, 1, 2, Rat(1));
    detail::put(g, 2, 1, Rat(1));
    for (const auto& [ab, v] : h.lower_entries()) g[{ab.first + 2, ab.second + 2}] = v;
    return Metric(gd, std::move(g), "ambient(" + h.preset() + ")");
}

inline Metric metric_by_name(const SuperDim& sd, const std::string& name) {
    if (name == "default") return default_metric(sd);
    if (name == "split") return split_metric(sd);
    if (name == "hyperbolic") return hyperbolic_first_pair_metric(sd);
    if (name == "ambient")
        return ambient_metric(split_metric_graded(GradedDim{sd.m - 2, 2 * sd.n}));
    throw std::invalid_argument("unknown metric preset: " + name);
}

}  // namespace osp
