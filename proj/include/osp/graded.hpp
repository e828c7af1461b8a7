#pragma once

#include <stdexcept>
#include <string>

namespace osp {

// Z2-graded index space with indices 1..even_dim+odd_dim; the first
// even_dim indices are even.
struct GradedDim {
    int even_dim = 0;
    int odd_dim = 0;

    int total() const { return even_dim + odd_dim; }

    // parity of a 1-based index
    int parity(int a) const {
        if (a < 1 || a > total()) throw std::out_of_range("index out of range");
        return a <= even_dim ? 0 : 1;
    }

    friend bool operator==(const GradedDim& x, const GradedDim& y) {
        return x.even_dim == y.even_dim && x.odd_dim == y.odd_dim;
    }
    friend bool operator!=(const GradedDim& x, const GradedDim& y) { return !(x == y); }
};

// Dimension data of osp(m|2n).  The engine assumes m > 4 throughout; n = 1
// is only admitted behind the relaxed flag (fast development instances).
struct SuperDim {
    int m = 0;
    int n = 0;
    bool relaxed = false;

    SuperDim() = default;
    SuperDim(int m_, int n_, bool relaxed_ = false) : m(m_), n(n_), relaxed(relaxed_) {
        if (m <= 4) throw std::invalid_argument("SuperDim: m > 4 required");
        if (n < 1) throw std::invalid_argument("SuperDim: n >= 1 required");
        if (n < 2 && !relaxed)
            throw std::invalid_argument("SuperDim: n = 1 requires the relaxed flag");
        if (m + 2 * n > 30) throw std::invalid_argument("SuperDim: total dimension too large");
    }

    int M() const { return m - 2 * n; }
    int total() const { return m + 2 * n; }
    int d() const { return m / 2; }  // number of epsilon coordinates
    GradedDim graded() const { return GradedDim{m, 2 * n}; }
    int parity(int a) const { return graded().parity(a); }

    std::string str() const { return "(" + std::to_string(m) + "|" + std::to_string(2 * n) + ")"; }

    friend bool operator==(const SuperDim& x, const SuperDim& y) {
        return x.m == y.m && x.n == y.n;
    }
};

}  // namespace osp
