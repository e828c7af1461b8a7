#pragma once

#include "osp/tensordecomp.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace osp {

struct CartanPowerReport {
    SuperDim sd;
    RootChoice choice = RootChoice::NonStandard;
    int k = 0;
    long beta_dim = 0;
    long closure_dim = 0;
    bool closure_inside_beta = false;
    bool beta_equals_closure = false;
    int quotient_hw_count = -1;
    bool single_hw_criterion = false;
    bool casimir_eigenspace = false;
    bool ok = false;
    std::vector<std::string> extra_hw_weights;  // witnesses when the check fails
};

// The Cartan-power spaces beta_k = (beta_{k-1} (x) g)  ∩  (g (x) beta_{k-1})
// and I_k = I_{k-1} (x) g + g (x) I_{k-1}, with beta_2 the module generated by
// the square of the adjoint highest weight vector and I_2 the complement image.
class CartanPower {
public:
    CartanPower(const TensorSquare& ts, RootChoice c, bool fp_prepass = false)
        : ts_(ts), alg_(ts.algebra()), c_(c), fp_(fp_prepass) {
        if (c == RootChoice::NonStandard && ts_.M() <= 2)
            throw std::invalid_argument("cartan power (non-standard): requires M > 2");
    }

    const std::vector<TensorQ>& beta2() const {
        if (beta2_.empty()) {
            TensorQ v = alg_.adjoint_highest_vector(c_);
            TensorQ seed = v.tensor_product(v);
            beta2_ = alg_.module_closure({seed}, alg_.lowering_operators(c_));
            // the closure must coincide with the image of the Cartan projector
            for (const auto& b : beta2_)
                if (!(ts_.pi(b, c_) == b))
                    throw std::runtime_error("beta2: closure escapes the projector image");
        }
        return beta2_;
    }

    const std::vector<TensorQ>& i2() const {
        if (i2_.empty()) {
            Echelon<Rat> ech;
            for (const auto& prod : ts_.square_basis()) {
                TensorQ r = prod - ts_.pi(prod, c_);
                if (r.is_zero()) continue;
                if (ech.insert(tensor_svec(r))) i2_.push_back(r);
            }
        }
        return i2_;
    }

    // weight-bucketed spans of beta_{k-1} (x) g and g (x) beta_{k-1}
    std::vector<TensorQ> beta_k(int k) const {
        if (k == 2) return beta2();
        if (k != 3) throw std::invalid_argument("beta_k: k in {2,3} only");
        std::map<Weight, std::vector<TensorQ>> left, right;
        for (const auto& b : beta2()) {
            for (const auto& x : alg_.basis()) {
                TensorQ lt = b.tensor_product(x);
                TensorQ rt = x.tensor_product(b);
                left[weight_of(lt)].push_back(std::move(lt));
                right[weight_of(rt)].push_back(std::move(rt));
            }
        }
        std::vector<TensorQ> out;
        for (auto& [w, A] : left) {
            auto itB = right.find(w);
            if (itB == right.end()) continue;
            std::vector<SVec<Rat>> va, vb;
            for (auto& t : A) va.push_back(tensor_svec(t));
            for (auto& t : itB->second) vb.push_back(tensor_svec(t));
            for (auto& x : intersect_spans(va, vb))
                out.push_back(svec_tensor(x, alg_.graded(), 6, 63u));
        }
        return out;
    }

    std::map<Weight, Echelon<Rat>> i_k_buckets(int k) const {
        if (k != 3) throw std::invalid_argument("i_k_buckets: k = 3 only");
        std::map<Weight, Echelon<Rat>> ech;
        std::map<Weight, long> dims;
        for (const auto& b : i2()) {
            for (const auto& x : alg_.basis()) {
                for (TensorQ t : {b.tensor_product(x), x.tensor_product(b)}) {
                    if (t.is_zero()) continue;
                    ech[weight_of(t)].insert(tensor_svec(t));
                }
            }
        }
        (void)dims;
        return ech;
    }

    CartanPowerReport check(int k = 3) const {
        CartanPowerReport rep;
        rep.sd = alg_.sdim();
        rep.choice = c_;
        rep.k = k;

        auto b3 = beta_k(k);
        std::map<Weight, Echelon<Rat>> b3ech;
        long dim_b3 = 0;
        for (const auto& t : b3)
            if (b3ech[weight_of(t)].insert(tensor_svec(t))) ++dim_b3;
        rep.beta_dim = dim_b3;

        // lowering closure of the k-th power of the highest weight vector
        TensorQ v = alg_.adjoint_highest_vector(c_);
        TensorQ seed = v.tensor_product(v).tensor_product(v);
        auto closure = alg_.module_closure({seed}, alg_.lowering_operators(c_));
        rep.closure_dim = static_cast<long>(closure.size());

        rep.closure_inside_beta = true;
        for (const auto& t : closure) {
            auto it = b3ech.find(weight_of(t));
            if (it == b3ech.end() || !it->second.contains(tensor_svec(t))) {
                rep.closure_inside_beta = false;
                break;
            }
        }
        rep.beta_equals_closure = rep.closure_inside_beta && rep.closure_dim == rep.beta_dim;

        // every element of beta_3 shares the Casimir eigenvalue of the seed
        TensorQ cs = alg_.casimir_apply(seed);
        Rat lam = cs.at_key(seed.coeffs().begin()->first) / seed.coeffs().begin()->second;
        rep.casimir_eigenspace = true;
        for (const auto& t : b3)
            if (!(alg_.casimir_apply(t) == t * lam)) { rep.casimir_eigenspace = false; break; }

        // quotient criterion: tensor^k g / I_k has exactly one hw vector
        auto [count, extra] = quotient_hw_count(k);
        rep.quotient_hw_count = count;
        rep.single_hw_criterion = (count == 1);
        rep.extra_hw_weights = extra;

        rep.ok = rep.beta_equals_closure;
        if (rep.beta_equals_closure != rep.single_hw_criterion)
            throw std::runtime_error(
                "cartan power: intersection route and quotient criterion disagree");
        return rep;
    }

private:
    Weight weight_of(const TensorQ& t) const {
        return alg_.key_weight(t.coeffs().begin()->first, t.rank());
    }

    // number of highest weight vectors of tensor^k g / I_k, with the list of
    // weights beyond the expected top one
    std::pair<int, std::vector<std::string>> quotient_hw_count(int k) const {
        auto ik = i_k_buckets(k);
        // bucket the pure product basis of tensor^3 g
        std::map<Weight, std::vector<TensorQ>> buckets;
        for (const auto& x : alg_.basis())
            for (const auto& y : alg_.basis())
                for (const auto& z : alg_.basis()) {
                    TensorQ t = x.tensor_product(y).tensor_product(z);
                    buckets[weight_of(t)].push_back(std::move(t));
                }
        auto raise = alg_.raising_operators(c_);
        Weight top = alg_.adjoint_highest_weight(c_);
        Weight top3 = top + top + top;
        int total = 0;
        std::vector<std::string> extras;
        static const Echelon<Rat> empty_ech;
        for (auto& [w, bb] : buckets) {
            // constraint: raising images must land inside I_k
            KernelSolver<Rat> ks;
            for (std::uint32_t t = 0; t < bb.size(); ++t) {
                std::map<std::uint64_t, Rat> acc;
                for (size_t a = 0; a < raise.size(); ++a) {
                    TensorQ im = alg_.act(raise[a], bb[t]);
                    if (im.is_zero()) continue;
                    SVec<Rat> res = tensor_svec(im);
                    auto it = ik.find(weight_of(im));
                    const Echelon<Rat>& e = (it == ik.end()) ? empty_ech : it->second;
                    e.reduce(res);
                    for (const auto& [key, cc] : res.e)
                        acc[(static_cast<std::uint64_t>(a + 1) << 56) | key] += cc;
                }
                for (auto it2 = acc.begin(); it2 != acc.end();)
                    it2 = it2->second.is_zero() ? acc.erase(it2) : std::next(it2);
                ks.feed(svec_from_map(acc), t);
            }
            long dim_sol = static_cast<long>(bb.size() - ks.rank());
            auto iti = ik.find(w);
            long dim_ik = (iti == ik.end()) ? 0 : static_cast<long>(iti->second.rank());
            long cnt = dim_sol - dim_ik;
            if (cnt < 0)
                throw std::runtime_error("quotient_hw_count: negative multiplicity");
            total += static_cast<int>(cnt);
            if (cnt > 0 && !(w == top3))
                for (long i = 0; i < cnt; ++i) extras.push_back(w.str(alg_.sdim().d()));
        }
        return {total, extras};
    }

    const TensorSquare& ts_;
    const OspAlgebra& alg_;
    RootChoice c_;
    bool fp_;
    mutable std::vector<TensorQ> beta2_, i2_;
};

}  // namespace osp
