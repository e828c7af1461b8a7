#pragma once

#include "osp/linalg.hpp"
#include "osp/metric.hpp"
#include "osp/supertensor.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace osp {

enum class RootChoice { NonStandard, Standard };  // osp-side / spo-side ordering

inline const char* root_choice_name(RootChoice c) {
    return c == RootChoice::NonStandard ? "osp" : "spo";
}

// Exact weight in the eps/delta basis: first d entries are eps coordinates,
// the remaining n are delta coordinates.
struct Weight {
    std::vector<Rat> co;

    Weight() = default;
    Weight(int d, int n) : co(d + n, Rat(0)) {}

    static Weight eps(int d, int n, int j, const Rat& v = Rat(1)) {
        Weight w(d, n);
        w.co.at(j - 1) = v;
        return w;
    }
    static Weight delta(int d, int n, int i, const Rat& v = Rat(1)) {
        Weight w(d, n);
        w.co.at(d + i - 1) = v;
        return w;
    }

    bool is_zero() const {
        for (const auto& c : co) if (!c.is_zero()) return false;
        return true;
    }

    Weight& operator+=(const Weight& o) {
        for (size_t i = 0; i < co.size(); ++i) co[i] += o.co[i];
        return *this;
    }
    friend Weight operator+(Weight a, const Weight& b) { a += b; return a; }
    Weight operator-() const {
        Weight w = *this;
        for (auto& c : w.co) c = -c;
        return w;
    }
    friend Weight operator-(Weight a, const Weight& b) { a += -b; return a; }
    friend bool operator==(const Weight& a, const Weight& b) { return a.co == b.co; }
    friend bool operator!=(const Weight& a, const Weight& b) { return !(a.co == b.co); }
    friend bool operator<(const Weight& a, const Weight& b) { return a.co < b.co; }

    // e.g. "2e1+2e2", "4d1", "0"
    std::string str(int d) const {
        std::string s;
        for (size_t i = 0; i < co.size(); ++i) {
            if (co[i].is_zero()) continue;
            std::string coef = co[i].str();
            if (coef == "1") coef = "";
            else if (coef == "-1") coef = "-";
            std::string var = (static_cast<int>(i) < d)
                                  ? "e" + std::to_string(i + 1)
                                  : "d" + std::to_string(i - d + 1);
            if (!s.empty() && co[i].sign() > 0) s += "+";
            s += coef + var;
        }
        return s.empty() ? "0" : s;
    }
};

// The orthosymplectic Lie superalgebra in a fixed metric, with the standard
// pair basis.  Root data is available only for the split preset, where the
// Cartan subalgebra acts diagonally on the natural basis.
class OspAlgebra {
public:
    OspAlgebra(const SuperDim& sd, Metric g) : sd_(sd), g_(std::move(g)) {
        build_basis();
        weight_adapted_ = (g_.preset().rfind("split", 0) == 0);
    }

    const SuperDim& sdim() const { return sd_; }
    const Metric& metric() const { return g_; }
    GradedDim graded() const { return sd_.graded(); }
    int dim() const { return static_cast<int>(basis_.size()); }
    int rank() const { return sd_.d() + sd_.n; }
    bool weight_adapted() const { return weight_adapted_; }

    const std::vector<TensorQ>& basis() const { return basis_; }
    const std::vector<std::pair<int, int>>& basis_pairs() const { return pairs_; }

    int element_parity(size_t i) const {
        return (sd_.parity(pairs_[i].first) + sd_.parity(pairs_[i].second)) % 2;
    }
    Weight basis_weight(size_t i) const {
        return natural_weight(pairs_[i].first) + natural_weight(pairs_[i].second);
    }

    // e_a wedge e_b as a rank-2 upper tensor
    TensorQ pair_element(int a, int b) const {
        TensorQ t = TensorQ::all_upper(sd_.graded(), 2);
        t.add_at({a, b}, Rat(1));
        bool odd = sd_.parity(a) && sd_.parity(b);
        t.add_at({b, a}, odd ? Rat(1) : Rat(-1));
        return t;
    }

    bool is_member(const TensorQ& A) const {
        if (A.rank() != 2 || A.upper_mask() != 3u) return false;
        if (A.swap_adjacent(1) != A * Rat(-1)) return false;
        TensorQ tr = A.contract(1, 2, g_);
        return tr.is_zero();
    }

    // C^{ab} = A^a_c B^{cb} - (-1)^{[a][b]} A^b_c B^{ca}
    TensorQ bracket(const TensorQ& A, const TensorQ& B) const {
        TensorQ AB = A.lower_slot(2, g_).tensor_product(B).contract(2, 3, g_);
        return AB - AB.swap_adjacent(1);
    }

    // <U,V> = sum U_ab V^ba
    Rat killing(const TensorQ& U, const TensorQ& V) const {
        Rat s(0);
        TensorQ Ul = U.lower_slot(1, g_).lower_slot(2, g_);
        for (const auto& [k, v] : Ul.coeffs()) {
            int a = key_get(k, 0), b = key_get(k, 1);
            Rat w = V.at({b, a});
            if (!w.is_zero()) s += v * w;
        }
        return s;
    }

    TensorQ act(const TensorQ& V, const TensorQ& T) const { return T.apply_osp(V, g_); }

    // --- weights (split preset only) --------------------------------------

    Weight natural_weight(int a) const {
        require_weight_adapted();
        int d = sd_.d(), n = sd_.n, m = sd_.m;
        Weight w(d, n);
        if (a <= 2 * d) {
            w.co[(a - 1) / 2] = (a % 2 == 1) ? Rat(1) : Rat(-1);
        } else if (a == m && m % 2 == 1) {
            // zero weight
        } else if (a > m) {
            int i = a - m;
            if (i <= n) w.co[d + i - 1] = Rat(1);
            else w.co[d + (i - n) - 1] = Rat(-1);
        }
        return w;
    }

    Weight key_weight(TKey k, int rank) const {
        int d = sd_.d(), n = sd_.n;
        Weight w(d, n);
        for (int s = 0; s < rank; ++s) w += natural_weight(key_get(k, s));
        return w;
    }

    // every coefficient of a weight vector shares one key weight
    std::map<Weight, TensorQ> split_by_weight(const TensorQ& T) const {
        std::map<Weight, TensorQ> out;
        for (const auto& [k, v] : T.coeffs()) {
            Weight w = key_weight(k, T.rank());
            auto it = out.find(w);
            if (it == out.end())
                it = out.emplace(w, TensorQ(T.dim(), T.rank(), T.upper_mask())).first;
            it->second.add(k, v);
        }
        return out;
    }

    struct RootData {
        std::vector<TensorQ> cartan;                      // d eps-type then n delta-type
        std::vector<std::pair<Weight, TensorQ>> roots;    // weight-sorted
    };

    RootData root_decomposition() const {
        require_weight_adapted();
        RootData rd;
        int d = sd_.d(), n = sd_.n, m = sd_.m;
        for (int j = 1; j <= d; ++j) rd.cartan.push_back(pair_element(2 * j - 1, 2 * j));
        for (int i = 1; i <= n; ++i) rd.cartan.push_back(pair_element(m + i, m + n + i));
        std::map<Weight, std::vector<TensorQ>> by_w;
        for (size_t i = 0; i < basis_.size(); ++i) {
            Weight w = natural_weight(pairs_[i].first) + natural_weight(pairs_[i].second);
            if (w.is_zero()) continue;
            by_w[w].push_back(basis_[i]);
        }
        for (auto& [w, vs] : by_w)
            for (auto& v : vs) rd.roots.emplace_back(w, v);
        return rd;
    }

    // evaluation of a weight functional on the k-th Cartan element, fixed by
    // the natural-action eigenvalues
    Rat weight_eval(const Weight& w, int cartan_idx) const {
        require_weight_adapted();
        int d = sd_.d(), n = sd_.n, m = sd_.m;
        // eigenvalue of H_k on the + basis vector of each coordinate
        // (computed once per call; cheap)
        Rat acc(0);
        const TensorQ& H = cartan_cache(cartan_idx);
        for (int j = 1; j <= d; ++j) {
            if (w.co[j - 1].is_zero()) continue;
            acc += w.co[j - 1] * matrix_eigen(H, 2 * j - 1);
        }
        for (int i = 1; i <= n; ++i) {
            if (w.co[d + i - 1].is_zero()) continue;
            acc += w.co[d + i - 1] * matrix_eigen(H, m + i);
        }
        return acc;
    }

    std::vector<Weight> simple_roots(RootChoice c) const {
        int d = sd_.d(), n = sd_.n;
        bool even_m = (sd_.m % 2 == 0);
        std::vector<Weight> out;
        if (c == RootChoice::NonStandard) {
            for (int j = 1; j < d; ++j)
                out.push_back(Weight::eps(d, n, j) - Weight::eps(d, n, j + 1));
            out.push_back(Weight::eps(d, n, d) - Weight::delta(d, n, 1));
            for (int i = 1; i < n; ++i)
                out.push_back(Weight::delta(d, n, i) - Weight::delta(d, n, i + 1));
            out.push_back(even_m ? Weight::delta(d, n, n, Rat(2)) : Weight::delta(d, n, n));
        } else {
            for (int i = 1; i < n; ++i)
                out.push_back(Weight::delta(d, n, i) - Weight::delta(d, n, i + 1));
            out.push_back(Weight::delta(d, n, n) - Weight::eps(d, n, 1));
            for (int j = 1; j < d; ++j)
                out.push_back(Weight::eps(d, n, j) - Weight::eps(d, n, j + 1));
            out.push_back(even_m ? Weight::eps(d, n, d - 1) + Weight::eps(d, n, d)
                                 : Weight::eps(d, n, d));
        }
        return out;
    }

    // a root vector of the given root weight; simple roots have multiplicity 1
    TensorQ root_vector(const Weight& w) const {
        require_weight_adapted();
        std::optional<TensorQ> found;
        for (size_t i = 0; i < basis_.size(); ++i) {
            Weight bw = natural_weight(pairs_[i].first) + natural_weight(pairs_[i].second);
            if (bw == w) {
                if (found) throw std::runtime_error("root_vector: multiplicity > 1");
                found = basis_[i];
            }
        }
        if (!found) throw std::runtime_error("root_vector: no vector of weight " + w.str(sd_.d()));
        return *found;
    }

    std::vector<TensorQ> raising_operators(RootChoice c) const {
        std::vector<TensorQ> out;
        for (const auto& w : simple_roots(c)) out.push_back(root_vector(w));
        return out;
    }
    std::vector<TensorQ> lowering_operators(RootChoice c) const {
        std::vector<TensorQ> out;
        for (const auto& w : simple_roots(c)) out.push_back(root_vector(-w));
        return out;
    }

    // adjoint highest weight and vector for each root ordering
    Weight adjoint_highest_weight(RootChoice c) const {
        int d = sd_.d(), n = sd_.n;
        if (c == RootChoice::NonStandard)
            return Weight::eps(d, n, 1) + Weight::eps(d, n, 2);
        return Weight::delta(d, n, 1, Rat(2));
    }
    TensorQ adjoint_highest_vector(RootChoice c) const {
        return root_vector(adjoint_highest_weight(c));
    }

    // --- highest weight vectors -------------------------------------------

    // joint kernel of the simple positive root actions on the span of the
    // given weight-homogeneous vectors, grouped by weight
    std::vector<std::pair<Weight, TensorQ>> highest_weight_vectors(
        const std::vector<TensorQ>& span, RootChoice c) const {
        require_weight_adapted();
        if (span.empty()) return {};
        int rank = span.front().rank();
        std::uint32_t mask = span.front().upper_mask();
        // weight buckets
        std::map<Weight, std::vector<TensorQ>> buckets;
        for (const auto& v : span)
            for (auto& [w, part] : split_by_weight(v)) buckets[w].push_back(part);
        auto raise = raising_operators(c);
        std::vector<std::pair<Weight, TensorQ>> out;
        for (auto& [w, vecs] : buckets) {
            Echelon<Rat> dedup;
            std::vector<TensorQ> bb;
            for (auto& v : vecs)
                if (dedup.insert(tensor_svec(v))) bb.push_back(v);
            KernelSolver<Rat> ks;
            for (std::uint32_t t = 0; t < bb.size(); ++t) {
                SVec<Rat> img = stacked_raising_image(bb[t], raise);
                ks.feed(img, t);
            }
            for (const auto& combo : ks.kernel()) {
                TensorQ hw(span.front().dim(), rank, mask);
                for (const auto& [tag, cf] : combo.e)
                    hw += bb[tag] * cf;
                if (!hw.is_zero()) out.emplace_back(w, hw);
            }
        }
        return out;
    }

    SVec<Rat> stacked_raising_image(const TensorQ& v, const std::vector<TensorQ>& raise) const {
        SVec<Rat> img;
        std::map<std::uint64_t, Rat> acc;
        for (size_t a = 0; a < raise.size(); ++a) {
            TensorQ im = act(raise[a], v);
            for (const auto& [k, c] : im.coeffs())
                acc[(static_cast<std::uint64_t>(a + 1) << 56) | k] = c;
        }
        return svec_from_map(acc);
    }

    // closure of the span of seeds under the given operators
    std::vector<TensorQ> module_closure(std::vector<TensorQ> seeds,
                                        const std::vector<TensorQ>& ops,
                                        size_t dim_guard = 100000) const {
        Echelon<Rat> ech;
        std::vector<TensorQ> basis;
        std::vector<TensorQ> frontier;
        for (auto& s : seeds)
            if (ech.insert(tensor_svec(s))) { basis.push_back(s); frontier.push_back(s); }
        while (!frontier.empty()) {
            std::vector<TensorQ> next;
            for (const auto& v : frontier) {
                for (const auto& op : ops) {
                    TensorQ im = act(op, v);
                    if (im.is_zero()) continue;
                    if (ech.insert(tensor_svec(im))) {
                        basis.push_back(im);
                        next.push_back(im);
                        if (basis.size() > dim_guard)
                            throw std::runtime_error("module_closure: dimension guard exceeded");
                    }
                }
            }
            frontier = std::move(next);
        }
        return basis;
    }

    // --- Casimir ------------------------------------------------------------

    // Killing-dual basis pairs (X_i, X^i) with <X_i, X^j> = delta_i^j
    const std::vector<std::pair<TensorQ, TensorQ>>& casimir_pairs() const {
        if (cas_pairs_.empty()) {
            int N = dim();
            std::vector<std::vector<Rat>> G(N, std::vector<Rat>(N, Rat(0)));
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) G[i][j] = killing(basis_[i], basis_[j]);
            auto Ginv = invert(G);
            for (int i = 0; i < N; ++i) {
                TensorQ dual = TensorQ::all_upper(sd_.graded(), 2);
                for (int k = 0; k < N; ++k)
                    if (!Ginv[k][i].is_zero()) dual += basis_[k] * Ginv[k][i];
                cas_pairs_.emplace_back(basis_[i], dual);
            }
        }
        return cas_pairs_;
    }

    // quadratic Casimir action on a tensor-power element (k <= 3 guard);
    // the parity sign makes the element central
    TensorQ casimir_apply(const TensorQ& T) const {
        if (T.rank() > 6) throw std::invalid_argument("casimir_apply: tensor power too large");
        TensorQ out(T.dim(), T.rank(), T.upper_mask());
        const auto& cp = casimir_pairs();
        for (size_t i = 0; i < cp.size(); ++i) {
            TensorQ term = act(cp[i].first, act(cp[i].second, T));
            out += element_parity(i) ? term * Rat(-1) : term;
        }
        return out;
    }

private:
    void build_basis() {
        int m = sd_.m, n = sd_.n;
        for (int a = 1; a <= m; ++a)
            for (int b = a + 1; b <= m; ++b) push_pair(a, b);
        for (int a = m + 1; a <= m + 2 * n; ++a)
            for (int b = a; b <= m + 2 * n; ++b) push_pair(a, b);
        for (int a = 1; a <= m; ++a)
            for (int b = m + 1; b <= m + 2 * n; ++b) push_pair(a, b);
        long expect = static_cast<long>(m) * (m - 1) / 2 + n * (2 * n + 1) + 2L * m * n;
        if (static_cast<long>(basis_.size()) != expect)
            throw std::logic_error("osp basis: wrong count");
    }
    void push_pair(int a, int b) {
        pairs_.emplace_back(a, b);
        basis_.push_back(pair_element(a, b));
    }

    void require_weight_adapted() const {
        if (!weight_adapted_)
            throw std::logic_error("root data requires the split metric preset");
    }

    const TensorQ& cartan_cache(int idx) const {
        if (cartan_.empty()) {
            int d = sd_.d(), n = sd_.n, m = sd_.m;
            for (int j = 1; j <= d; ++j) cartan_.push_back(pair_element(2 * j - 1, 2 * j));
            for (int i = 1; i <= n; ++i) cartan_.push_back(pair_element(m + i, m + n + i));
        }
        return cartan_.at(idx);
    }

    // eigenvalue of the diagonal matrix H^a_b = g_bx H^{ax} on e_col
    Rat matrix_eigen(const TensorQ& H, int col) const {
        Rat v(0);
        for (const auto& [k, c] : H.coeffs()) {
            int a = key_get(k, 0), x = key_get(k, 1);
            if (a != col) continue;
            Rat gl = g_.lower(col, x);
            if (!gl.is_zero()) v += c * gl;
        }
        return v;
    }

    static std::vector<std::vector<Rat>> invert(std::vector<std::vector<Rat>> A) {
        int N = static_cast<int>(A.size());
        std::vector<std::vector<Rat>> I(N, std::vector<Rat>(N, Rat(0)));
        for (int i = 0; i < N; ++i) I[i][i] = Rat(1);
        for (int col = 0; col < N; ++col) {
            int piv = -1;
            for (int r = col; r < N; ++r)
                if (!A[r][col].is_zero()) { piv = r; break; }
            if (piv < 0) throw std::runtime_error("invert: singular (Killing form degenerate?)");
            std::swap(A[piv], A[col]);
            std::swap(I[piv], I[col]);
            Rat dd = A[col][col].inv();
            for (int c = 0; c < N; ++c) { A[col][c] *= dd; I[col][c] *= dd; }
            for (int r = 0; r < N; ++r) {
                if (r == col || A[r][col].is_zero()) continue;
                Rat f = A[r][col];
                for (int c = 0; c < N; ++c) {
                    A[r][c] -= f * A[col][c];
                    I[r][c] -= f * I[col][c];
                }
            }
        }
        return I;
    }

    SuperDim sd_;
    Metric g_;
    bool weight_adapted_ = false;
    std::vector<TensorQ> basis_;
    std::vector<std::pair<int, int>> pairs_;
    mutable std::vector<TensorQ> cartan_;
    mutable std::vector<std::pair<TensorQ, TensorQ>> cas_pairs_;
};

}  // namespace osp
