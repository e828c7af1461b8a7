#pragma once

#include "osp/rational.hpp"
#include "osp/supertensor.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace osp {

// Sparse coordinate vector with sorted keys.
template <class F>
struct SVec {
    std::vector<std::pair<std::uint64_t, F>> e;  // sorted by key, no zeros

    bool is_zero() const { return e.empty(); }
    size_t nnz() const { return e.size(); }

    const std::pair<std::uint64_t, F>& leading() const { return e.front(); }

    F coeff(std::uint64_t k) const {
        auto it = std::lower_bound(e.begin(), e.end(), k,
                                   [](const auto& p, std::uint64_t key) { return p.first < key; });
        return (it != e.end() && it->first == k) ? it->second : F(0);
    }

    void set(std::uint64_t k, const F& v) {
        auto it = std::lower_bound(e.begin(), e.end(), k,
                                   [](const auto& p, std::uint64_t key) { return p.first < key; });
        if (it != e.end() && it->first == k) {
            if (v.is_zero()) e.erase(it);
            else it->second = v;
        } else if (!v.is_zero()) {
            e.insert(it, {k, v});
        }
    }

    // *this += c * o   (single merge pass)
    void axpy(const F& c, const SVec& o) {
        if (c.is_zero() || o.e.empty()) return;
        std::vector<std::pair<std::uint64_t, F>> out;
        out.reserve(e.size() + o.e.size());
        size_t i = 0, j = 0;
        while (i < e.size() || j < o.e.size()) {
            if (j >= o.e.size() || (i < e.size() && e[i].first < o.e[j].first)) {
                out.push_back(e[i++]);
            } else if (i >= e.size() || o.e[j].first < e[i].first) {
                F v = c * o.e[j].second;
                if (!v.is_zero()) out.push_back({o.e[j].first, v});
                ++j;
            } else {
                F v = e[i].second + c * o.e[j].second;
                if (!v.is_zero()) out.push_back({e[i].first, v});
                ++i; ++j;
            }
        }
        e = std::move(out);
    }

    void scale(const F& c) {
        if (c.is_zero()) { e.clear(); return; }
        for (auto& p : e) p.second = p.second * c;
    }

    friend bool operator==(const SVec& a, const SVec& b) { return a.e == b.e; }
};

template <class F>
SVec<F> svec_from_map(const std::map<std::uint64_t, F>& m) {
    SVec<F> v;
    v.e.assign(m.begin(), m.end());
    return v;
}

inline SVec<Rat> tensor_svec(const TensorQ& t) { return svec_from_map(t.coeffs()); }

inline TensorQ svec_tensor(const SVec<Rat>& v, GradedDim dim, int rank, std::uint32_t upper) {
    TensorQ t(dim, rank, upper);
    for (const auto& [k, c] : v.e) t.add(k, c);
    return t;
}

inline SVec<Fp> svec_mod(const SVec<Rat>& v) {
    SVec<Fp> r;
    r.e.reserve(v.e.size());
    for (const auto& [k, c] : v.e) {
        Fp f(c.mod(Fp::modulus()));
        if (!f.is_zero()) r.e.push_back({k, f});
    }
    return r;
}

// Incremental row echelon basis with unit leading coefficients; pivots are the
// smallest keys, which keeps the reduction deterministic.  Rows are not
// back-substituted; a stored row's keys are all >= its pivot, so one forward
// scan eliminates every pivot key.
template <class F>
class Echelon {
public:
    // reduce v against the current rows (in place)
    void reduce(SVec<F>& v) const {
        size_t i = 0;
        while (i < v.e.size()) {
            auto it = rows_.find(v.e[i].first);
            if (it == rows_.end()) { ++i; continue; }
            v.axpy(-v.e[i].second, it->second);
        }
    }

    // returns true if v was independent (and absorbed)
    bool insert(SVec<F> v) {
        reduce(v);
        if (v.is_zero()) return false;
        v.scale(v.leading().second.inv());
        std::uint64_t piv = v.leading().first;
        rows_.emplace(piv, std::move(v));
        return true;
    }

    bool contains(SVec<F> v) const {
        reduce(v);
        return v.is_zero();
    }

    size_t rank() const { return rows_.size(); }
    const std::map<std::uint64_t, SVec<F>>& rows() const { return rows_; }

private:
    std::map<std::uint64_t, SVec<F>> rows_;
};

// Tracks kernel combinations: feed images v_i; whenever a dependency appears,
// the combination sum_i c_i v_i = 0 is recorded over the tag keys.
template <class F>
class KernelSolver {
public:
    void feed(SVec<F> img, std::uint32_t tag) {
        SVec<F> combo;
        combo.set(tag, F(1));
        // reduce img, mirroring every operation on combo
        size_t i = 0;
        while (i < img.e.size()) {
            auto it = rows_.find(img.e[i].first);
            if (it == rows_.end()) { ++i; continue; }
            F c = img.e[i].second;
            img.axpy(-c, it->second.img);
            combo.axpy(-c, it->second.combo);
        }
        if (img.is_zero()) {
            kernel_.push_back(std::move(combo));
            return;
        }
        F inv = img.leading().second.inv();
        img.scale(inv);
        combo.scale(inv);
        std::uint64_t piv = img.leading().first;
        rows_.emplace(piv, Row{std::move(img), std::move(combo)});
    }

    const std::vector<SVec<F>>& kernel() const { return kernel_; }
    size_t rank() const { return rows_.size(); }

private:
    struct Row { SVec<F> img, combo; };
    std::map<std::uint64_t, Row> rows_;
    std::vector<SVec<F>> kernel_;
};

// rank over the rationals, optionally checked against a prime-field pre-pass
inline size_t rank_of(const std::vector<SVec<Rat>>& vecs, bool fp_prepass = false) {
    std::optional<size_t> fp_rank;
    if (fp_prepass) {
        Echelon<Fp> efp;
        for (const auto& v : vecs) efp.insert(svec_mod(v));
        fp_rank = efp.rank();
    }
    Echelon<Rat> e;
    for (const auto& v : vecs) e.insert(v);
    if (fp_rank && *fp_rank != e.rank())
        throw std::runtime_error("rank mismatch between prime-field pre-pass and rationals");
    return e.rank();
}

// Vectors spanning the intersection of span(A) and span(B).
inline std::vector<SVec<Rat>> intersect_spans(const std::vector<SVec<Rat>>& A,
                                              const std::vector<SVec<Rat>>& B) {
    KernelSolver<Rat> ks;
    std::uint32_t tag = 0;
    for (const auto& a : A) ks.feed(a, tag++);
    std::uint32_t b0 = tag;
    for (const auto& b : B) ks.feed(b, tag++);
    std::vector<SVec<Rat>> out;
    for (const auto& combo : ks.kernel()) {
        // combo over tags: sum over A-part gives an intersection vector
        SVec<Rat> x;
        bool hasB = false;
        for (const auto& [t, c] : combo.e) {
            if (t >= b0) { hasB = true; continue; }
            x.axpy(c, A[t]);
        }
        if (hasB && !x.is_zero()) out.push_back(std::move(x));
    }
    return out;
}

}  // namespace osp
