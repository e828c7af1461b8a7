#pragma once

#include "osp/graded.hpp"
#include "osp/metric.hpp"
#include "osp/rational.hpp"
#include "osp/scalar.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace osp {

// Packed index tuple: 5 bits per slot, slot 0 in the low bits.
using TKey = std::uint64_t;

inline int key_get(TKey k, int slot) { return static_cast<int>((k >> (5 * slot)) & 31u); }
inline TKey key_set(TKey k, int slot, int idx) {
    k &= ~(TKey(31) << (5 * slot));
    return k | (TKey(idx) << (5 * slot));
}
inline TKey key_of(const std::vector<int>& idx) {
    TKey k = 0;
    for (size_t s = 0; s < idx.size(); ++s) k = key_set(k, static_cast<int>(s), idx[s]);
    return k;
}

// Sparse graded tensor over C^{even|odd} with exact coefficients.  Slots are
// 0-based internally; the public slot arguments are 1-based to match the
// index letters used in reports.  No zero coefficient is ever stored.
template <class S>
class SuperTensor {
public:
    SuperTensor() = default;
    SuperTensor(GradedDim dim, int rank, std::uint32_t upper_mask)
        : dim_(dim), rank_(rank), upper_(upper_mask) {
        if (rank < 0 || rank > 12) throw std::invalid_argument("SuperTensor: rank out of range");
    }

    static SuperTensor all_upper(GradedDim dim, int rank) {
        return SuperTensor(dim, rank, rank >= 32 ? ~0u : ((1u << rank) - 1));
    }

    const GradedDim& dim() const { return dim_; }
    int rank() const { return rank_; }
    bool slot_upper(int slot1) const { return (upper_ >> (slot1 - 1)) & 1u; }
    std::uint32_t upper_mask() const { return upper_; }
    const std::map<TKey, S>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    size_t nnz() const { return c_.size(); }

    S at(const std::vector<int>& idx) const {
        auto it = c_.find(key_of(idx));
        return it == c_.end() ? S(0) : it->second;
    }
    S at_key(TKey k) const {
        auto it = c_.find(k);
        return it == c_.end() ? S(0) : it->second;
    }

    void add(TKey k, const S& v) {
        if (v.is_zero()) return;
        auto it = c_.find(k);
        if (it == c_.end()) {
            c_.emplace(k, v);
        } else {
            it->second += v;
            if (it->second.is_zero()) c_.erase(it);
        }
    }
    void add_at(const std::vector<int>& idx, const S& v) { add(key_of(idx), v); }

    SuperTensor& operator+=(const SuperTensor& o) {
        check_same_shape(o);
        for (const auto& [k, v] : o.c_) add(k, v);
        return *this;
    }
    SuperTensor& operator-=(const SuperTensor& o) {
        check_same_shape(o);
        for (const auto& [k, v] : o.c_) add(k, -v);
        return *this;
    }
    friend SuperTensor operator+(SuperTensor a, const SuperTensor& b) { a += b; return a; }
    friend SuperTensor operator-(SuperTensor a, const SuperTensor& b) { a -= b; return a; }

    SuperTensor operator*(const S& s) const {
        SuperTensor r(dim_, rank_, upper_);
        if (s.is_zero()) return r;
        for (const auto& [k, v] : c_) r.add(k, v * s);
        return r;
    }

    friend bool operator==(const SuperTensor& a, const SuperTensor& b) {
        return a.dim_ == b.dim_ && a.rank_ == b.rank_ && a.upper_ == b.upper_ && a.c_ == b.c_;
    }
    friend bool operator!=(const SuperTensor& a, const SuperTensor& b) { return !(a == b); }

    int key_parity_prefix(TKey k, int slot) const {  // parity of indices in slots < slot (0-based)
        int p = 0;
        for (int s = 0; s < slot; ++s) p += dim_.parity(key_get(k, s));
        return p & 1;
    }

    // --- structural operations -------------------------------------------

    SuperTensor tensor_product(const SuperTensor& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("tensor_product: dim mismatch");
        SuperTensor r(dim_, rank_ + o.rank_, upper_ | (o.upper_ << rank_));
        for (const auto& [k1, v1] : c_)
            for (const auto& [k2, v2] : o.c_) r.add(k1 | (k2 << (5 * rank_)), v1 * v2);
        return r;
    }

    // Exchange slots i, i+1 (1-based i); result(..a,b..) = (-1)^{[a][b]} T(..b,a..).
    SuperTensor swap_adjacent(int i) const {
        if (i < 1 || i >= rank_) throw std::invalid_argument("swap_adjacent: bad slot");
        std::uint32_t um = upper_;
        bool u1 = (um >> (i - 1)) & 1u, u2 = (um >> i) & 1u;
        if (u1 != u2) {
            um &= ~((1u << (i - 1)) | (1u << i));
            if (u2) um |= 1u << (i - 1);
            if (u1) um |= 1u << i;
        }
        SuperTensor r(dim_, rank_, um);
        for (const auto& [k, v] : c_) {
            int b = key_get(k, i - 1), a = key_get(k, i);
            TKey nk = key_set(key_set(k, i - 1, a), i, b);
            bool neg = dim_.parity(a) && dim_.parity(b);
            r.add(nk, neg ? -v : v);
        }
        return r;
    }

    // Apply a permutation of all slots: slot p of the result reads the index
    // that sat in slot perm[p] of the source, with the Koszul sign of the
    // rearrangement.  Requires uniform variance across moved slots.
    SuperTensor permute_slots(const std::vector<int>& perm) const {
        if (static_cast<int>(perm.size()) != rank_)
            throw std::invalid_argument("permute_slots: size mismatch");
        SuperTensor r(dim_, rank_, upper_);
        for (const auto& [k, v] : c_) {
            int sign = 0;
            TKey nk = permute_key(k, perm, sign);
            r.add(nk, sign ? -v : v);
        }
        return r;
    }

    // Koszul sign of rearranging the indices of k according to perm, counted
    // by bubbling the source sequence into target order one adjacent
    // transposition at a time.
    TKey permute_key(TKey k, const std::vector<int>& perm, int& sign_out) const {
        int sign = 0;
        std::array<int, 12> cur{}, curpar{};
        for (int s = 0; s < rank_; ++s) { cur[s] = s; curpar[s] = dim_.parity(key_get(k, s)); }
        for (int p = 0; p < rank_; ++p) {
            int q = p;
            while (cur[q] != perm[p]) ++q;
            while (q > p) {
                if (curpar[q] && curpar[q - 1]) sign ^= 1;
                std::swap(cur[q], cur[q - 1]);
                std::swap(curpar[q], curpar[q - 1]);
                --q;
            }
        }
        TKey nk = 0;
        for (int s = 0; s < rank_; ++s) nk = key_set(nk, s, key_get(k, perm[s]));
        sign_out = sign;
        return nk;
    }

    // Average over all permutations of a contiguous block of slots (1-based,
    // inclusive), each term with its Koszul sign; antisym adds the sign of the
    // permutation.  At most 4 slots.
    SuperTensor symmetrize_block(int first, int last, bool anti) const {
        int k = last - first + 1;
        if (k < 1 || k > 4) throw std::invalid_argument("symmetrize_block: 1..4 slots");
        for (int s = first; s <= last; ++s)
            if (slot_upper(s) != slot_upper(first))
                throw std::invalid_argument("symmetrize_block: variance mismatch");
        std::vector<int> perm(rank_);
        for (int s = 0; s < rank_; ++s) perm[s] = s;
        std::vector<int> block(k);
        for (int j = 0; j < k; ++j) block[j] = first - 1 + j;
        SuperTensor acc(dim_, rank_, upper_);
        std::vector<int> idxs(k);
        for (int j = 0; j < k; ++j) idxs[j] = j;
        long fact = 1;
        for (int j = 2; j <= k; ++j) fact *= j;
        do {
            int psign = perm_sign(idxs);
            for (int j = 0; j < k; ++j) perm[block[j]] = block[idxs[j]];
            SuperTensor t = permute_slots(perm);
            acc += (anti && psign) ? t * S(-1) : t;
        } while (std::next_permutation(idxs.begin(), idxs.end()));
        return acc * S(Rat(1, static_cast<int>(fact)));
    }
    SuperTensor supersymmetrize(int first, int last) const { return symmetrize_block(first, last, false); }
    SuperTensor superantisymmetrize(int first, int last) const { return symmetrize_block(first, last, true); }

    // --- metric operations ------------------------------------------------

    SuperTensor lower_slot(int slot1, const Metric& g) const {
        if (!slot_upper(slot1)) throw std::invalid_argument("lower_slot: already lower");
        SuperTensor r(dim_, rank_, upper_ & ~(1u << (slot1 - 1)));
        for (const auto& [k, v] : c_) {
            int b = key_get(k, slot1 - 1);
            for (const auto& [ab, gv] : g.lower_entries()) {
                if (ab.second != b) continue;
                r.add(key_set(k, slot1 - 1, ab.first), v * S(gv));
            }
        }
        return r;
    }

    SuperTensor raise_slot(int slot1, const Metric& g) const {
        if (slot_upper(slot1)) throw std::invalid_argument("raise_slot: already upper");
        SuperTensor r(dim_, rank_, upper_ | (1u << (slot1 - 1)));
        for (const auto& [k, v] : c_) {
            int a = key_get(k, slot1 - 1);
            for (const auto& [ac, gv] : g.raised_entries()) {
                if (ac.first != a) continue;
                r.add(key_set(k, slot1 - 1, ac.second), v * S(gv));
            }
        }
        return r;
    }

    // Contract slots i < j (1-based).  Signs follow from moving slot j next to
    // slot i by adjacent swaps; equal variances insert the metric so that
    // contracting the two slots of the raised metric yields M.
    SuperTensor contract(int i, int j, const Metric& g) const {
        if (i < 1 || j <= i || j > rank_) throw std::invalid_argument("contract: bad slots");
        SuperTensor t = *this;
        for (int s = j - 1; s > i; --s) t = t.swap_adjacent(s);
        return t.pair_adjacent(i, g);
    }

    // --- g-action -----------------------------------------------------------

    // One-slot matrix action spread over all (upper) slots with the Koszul
    // prefix sign; V must be a rank-2 upper tensor.
    SuperTensor apply_osp(const SuperTensor<Rat>& V, const Metric& g) const {
        if (V.rank() != 2 || V.upper_mask() != 3u)
            throw std::invalid_argument("apply_osp: V must be rank-2 upper");
        SuperTensor out(dim_, rank_, upper_);
        // V^a_b = sum_x g_bx V^{ax}, split by operator parity
        for (int vp = 0; vp <= 1; ++vp) {
            std::map<std::pair<int, int>, Rat> mat;
            for (const auto& [k, v] : V.coeffs()) {
                int a = key_get(k, 0), x = key_get(k, 1);
                if ((dim_.parity(a) + dim_.parity(x)) % 2 != vp) continue;
                for (const auto& [bx, gv] : g.lower_entries()) {
                    if (bx.second != x) continue;
                    Rat add = v * gv;
                    if (!add.is_zero()) {
                        auto& slot = mat[{a, bx.first}];
                        slot += add;
                    }
                }
            }
            if (mat.empty()) continue;
            for (const auto& [k, coeff] : c_) {
                for (int s = 0; s < rank_; ++s) {
                    if (!((upper_ >> s) & 1u)) throw std::invalid_argument("apply_osp: lower slot");
                    int b = key_get(k, s);
                    int pref = vp ? key_parity_prefix(k, s) : 0;
                    for (const auto& [abm, mv] : mat) {
                        if (abm.second != b) continue;
                        S term = coeff * S(mv);
                        out.add(key_set(k, s, abm.first), pref ? -term : term);
                    }
                }
            }
        }
        return out;
    }

private:
    static int perm_sign(const std::vector<int>& p) {
        int s = 0;
        for (size_t i = 0; i < p.size(); ++i)
            for (size_t j = i + 1; j < p.size(); ++j)
                if (p[i] > p[j]) s ^= 1;
        return s;
    }

    SuperTensor pair_adjacent(int i, const Metric& g) const {
        bool u1 = slot_upper(i), u2 = slot_upper(i + 1);
        std::uint32_t um = 0;
        for (int s = 1; s <= rank_; ++s) {
            if (s == i || s == i + 1) continue;
            int t = s < i ? s : s - 2;
            if (slot_upper(s)) um |= 1u << (t - 1);
        }
        SuperTensor r(dim_, rank_ - 2, um);
        for (const auto& [k, v] : c_) {
            int b = key_get(k, i - 1), a = key_get(k, i);
            S factor(0);
            if (u1 && u2) factor = S(g.lower(a, b));
            else if (!u1 && !u2) factor = S(g.raised(a, b));
            else if (!u1 && u2) factor = (a == b) ? S(1) : S(0);
            else factor = (a == b) ? (dim_.parity(a) ? S(-1) : S(1)) : S(0);
            if (factor.is_zero()) continue;
            TKey nk = 0;
            for (int s = 0; s < rank_; ++s) {
                if (s == i - 1 || s == i) continue;
                int t = s < i - 1 ? s : s - 2;
                nk = key_set(nk, t, key_get(k, s));
            }
            r.add(nk, v * factor);
        }
        return r;
    }

    void check_same_shape(const SuperTensor& o) const {
        if (dim_ != o.dim_ || rank_ != o.rank_ || upper_ != o.upper_)
            throw std::invalid_argument("SuperTensor: shape mismatch");
    }

    GradedDim dim_;
    int rank_ = 0;
    std::uint32_t upper_ = 0;
    std::map<TKey, S> c_;
};

using TensorQ = SuperTensor<Rat>;
using TensorP = SuperTensor<LinPoly>;

// metric as a rank-2 tensor
inline TensorQ metric_tensor_raised(const Metric& g) {
    TensorQ t = TensorQ::all_upper(g.dim(), 2);
    for (const auto& [ab, v] : g.raised_entries()) t.add_at({ab.first, ab.second}, v);
    return t;
}

template <class S>
SuperTensor<S> convert_tensor(const TensorQ& t) {
    SuperTensor<S> r(t.dim(), t.rank(), t.upper_mask());
    for (const auto& [k, v] : t.coeffs()) r.add(k, S(v));
    return r;
}

}  // namespace osp
