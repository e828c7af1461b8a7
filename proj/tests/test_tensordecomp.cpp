#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "osp/cartanpower.hpp"
#include "osp/tensordecomp.hpp"

#include <random>

using namespace osp;

namespace {

TensorQ random_square_element(const OspAlgebra& alg, std::mt19937_64& rng, bool sym = false) {
    TensorQ t = TensorQ::all_upper(alg.graded(), 4);
    for (int i = 0; i < 3; ++i) {
        size_t a = rng() % alg.basis().size(), b = rng() % alg.basis().size();
        int c = static_cast<int>(rng() % 7) - 3;
        if (c == 0) c = 1;
        t += alg.basis()[a].tensor_product(alg.basis()[b]) * Rat(c);
    }
    return sym ? pair_symmetrize(t) : t;
}

TensorQ random_rank2(const OspAlgebra& alg, std::mt19937_64& rng) {
    TensorQ t = TensorQ::all_upper(alg.graded(), 2);
    int N = alg.sdim().total();
    for (int i = 0; i < 5; ++i) {
        int a = 1 + static_cast<int>(rng() % N), b = 1 + static_cast<int>(rng() % N);
        t.add_at({a, b}, Rat(static_cast<int>(rng() % 9) - 4));
    }
    return t;
}

}  // namespace

TEST_CASE("p-phi identity triangle") {
    for (auto sdv : {SuperDim(5, 1, true), SuperDim(6, 2), SuperDim(7, 2)}) {
        for (const char* preset : {"default", "split"}) {
            Metric g = metric_by_name(sdv, preset);
            int M = sdv.M();
            TensorQ gt = metric_tensor_raised(g);
            // phi(g) is the total trace part
            CHECK(embed_phi(gt, g) == total_trace_tensor(g));
            // p(phi(g)) = (M-1)/2 g
            CHECK(trace_map(embed_phi(gt, g), g) == gt * Rat(M - 1, 2));
            CHECK(trace_map(total_trace_tensor(g), g) == gt * Rat(M - 1, 2));
            // p(phi(X)) = 1/4 ((M-2) X + g tr X) on a full rank-2 basis
            int N = sdv.total();
            for (int a = 1; a <= N; ++a)
                for (int b = 1; b <= N; ++b) {
                    TensorQ X = TensorQ::all_upper(sdv.graded(), 2);
                    X.add_at({a, b}, Rat(1));
                    TensorQ want = X * Rat(M - 2, 4) + gt * (trace2(X, g) * Rat(1, 4));
                    CHECK(trace_map(embed_phi(X, g), g) == want);
                }
        }
    }
}

TEST_CASE("phi is injective and parity-compatible") {
    SuperDim sd(6, 2);
    Metric g = split_metric(sd);
    int N = sd.total();
    std::vector<SVec<Rat>> imgs;
    for (int a = 1; a <= N; ++a)
        for (int b = 1; b <= N; ++b) {
            TensorQ X = TensorQ::all_upper(sd.graded(), 2);
            X.add_at({a, b}, Rat(1));
            imgs.push_back(tensor_svec(embed_phi(X, g)));
        }
    CHECK(rank_of(imgs) == static_cast<size_t>(N * N));

    std::mt19937_64 rng(41);
    for (int t = 0; t < 10; ++t) {
        TensorQ X = random_rank2(OspAlgebra(sd, g), rng);
        TensorQ Xs = X.supersymmetrize(1, 2), Xa = X.superantisymmetrize(1, 2);
        // symmetric tensors land in the pair-symmetric part and vice versa
        CHECK(pair_antisymmetrize(embed_phi(Xs, g)).is_zero());
        CHECK(pair_symmetrize(embed_phi(Xa, g)).is_zero());
        // each slot pair of the image is super-antisymmetric
        TensorQ V = embed_phi(X, g);
        CHECK(V.swap_adjacent(1) == V * Rat(-1));
        CHECK(V.swap_adjacent(3) == V * Rat(-1));
    }
}

TEST_CASE("q is an idempotent with trace-free image annihilating phi-sym") {
    std::mt19937_64 rng(42);
    SuperDim sd(6, 2);
    OspAlgebra alg(sd, split_metric(sd));
    const Metric& g = alg.metric();
    for (int t = 0; t < 30; ++t) {
        TensorQ V = random_square_element(alg, rng, /*sym=*/true);
        TensorQ qV = proj_q(V);
        CHECK(proj_q(qV) == qV);
        CHECK(trace_map(qV, g).is_zero());
    }
    for (int t = 0; t < 10; ++t) {
        TensorQ X = random_rank2(alg, rng).supersymmetrize(1, 2);
        CHECK(proj_q(embed_phi(X, g)).is_zero());
    }
}

TEST_CASE("cartan projectors: idempotence, orthogonality, equivariance") {
    std::mt19937_64 rng(43);
    for (auto sdv : {SuperDim(5, 1, true), SuperDim(9, 2)}) {
        OspAlgebra alg(sdv, split_metric(sdv));
        TensorSquare ts(alg);
        const Metric& g = alg.metric();
        for (int t = 0; t < 8; ++t) {
            TensorQ T = random_square_element(alg, rng);
            TensorQ P1 = ts.pi1(T), P2 = ts.pi2(T);
            CHECK(ts.pi1(P1) == P1);
            CHECK(ts.pi2(P2) == P2);
            CHECK(trace_map(P1, g).is_zero());
            CHECK(proj_q(P1).is_zero());
            CHECK(ts.pi1(P2).is_zero());
            CHECK(ts.pi2(P1).is_zero());
        }
        // equivariance under 20 random algebra elements
        for (int t = 0; t < 20; ++t) {
            size_t vi = rng() % alg.basis().size();
            const TensorQ& V = alg.basis()[vi];
            TensorQ T = random_square_element(alg, rng);
            CHECK(ts.pi1(alg.act(V, T)) == alg.act(V, ts.pi1(T)));
            CHECK(ts.pi2(alg.act(V, T)) == alg.act(V, ts.pi2(T)));
        }
    }
    // unsupported dimension error
    SuperDim sd62(6, 2);
    OspAlgebra a62(sd62, split_metric(sd62));
    TensorSquare t62(a62);
    TensorQ sample = a62.basis()[0].tensor_product(a62.basis()[1]);
    CHECK_THROWS(t62.pi1(sample));
    CHECK_NOTHROW(t62.pi2(sample));
}

TEST_CASE("pi1 of the squared highest weight vector is a 2e1+2e2 highest weight vector") {
    SuperDim sd(5, 1, true);
    OspAlgebra alg(sd, split_metric(sd));
    TensorSquare ts(alg);
    TensorQ v = alg.adjoint_highest_vector(RootChoice::NonStandard);
    TensorQ p = ts.pi1(v.tensor_product(v));
    REQUIRE(!p.is_zero());
    for (const auto& X : alg.raising_operators(RootChoice::NonStandard))
        CHECK(alg.act(X, p).is_zero());
    Weight w = alg.key_weight(p.coeffs().begin()->first, 4);
    CHECK(w == Weight::eps(2, 1, 1, Rat(2)) + Weight::eps(2, 1, 2, Rat(2)));
}

TEST_CASE("restriction behavior of the two cartan projectors") {
    // sp-block: the second projector is purely combinatorial, so it commutes
    // with the block embedding
    SuperDim sd(5, 1, true);
    OspAlgebra alg(sd, split_metric(sd));
    TensorSquare ts(alg);
    std::mt19937_64 rng(44);
    GradedDim spd{0, 2};
    Metric gsp = Metric(spd, {{{1, 2}, Rat(1)}, {{2, 1}, Rat(-1)}}, "sp-only");
    for (int t = 0; t < 6; ++t) {
        // random sp-block symmetric square element (indices 6,7 in the big space)
        TensorQ Ysmall = TensorQ::all_upper(spd, 4);
        TensorQ Ybig = TensorQ::all_upper(sd.graded(), 4);
        for (int i = 0; i < 3; ++i) {
            std::vector<int> idx(4);
            std::vector<int> big(4);
            for (int s = 0; s < 4; ++s) {
                idx[s] = 1 + static_cast<int>(rng() % 2);
                big[s] = idx[s] + 5;
            }
            Rat c(static_cast<int>(rng() % 7) - 3);
            Ysmall.add_at(idx, c);
            Ybig.add_at(big, c);
        }
        TensorQ qs = proj_q(pair_symmetrize(Ysmall));
        TensorQ qb = cartan2_projector(Ybig);
        // re-embed and compare
        TensorQ qs_big = TensorQ::all_upper(sd.graded(), 4);
        for (const auto& [k, v] : qs.coeffs()) {
            std::vector<int> big(4);
            for (int s = 0; s < 4; ++s) big[s] = key_get(k, s) + 5;
            qs_big.add_at(big, v);
        }
        CHECK(qs_big == qb);
    }
    // so-block: the trace part differs, so the projections differ for some X
    GradedDim sod{5, 0};
    std::map<std::pair<int, int>, Rat> idm;
    for (int a = 1; a <= 5; ++a) idm[{a, a}] = Rat(1);
    Metric gso(sod, idm, "so-only");
    SuperDim sdd(5, 1, true);
    Metric gsup = default_metric(sdd);
    bool differ = false;
    for (int a = 1; a <= 3 && !differ; ++a) {
        // (e_a ^ e_{a+1}) (x) (e_a ^ e_{a+1}) as an honest wedge square
        TensorQ Xs = TensorQ::all_upper(sod, 4);
        for (auto [i, j, si] : {std::tuple{a, a + 1, 1}, {a + 1, a, -1}})
            for (auto [k2, l, sj] : {std::tuple{a, a + 1, 1}, {a + 1, a, -1}})
                Xs.add_at({i, j, k2, l}, Rat(si * sj));
        TensorQ Xb = TensorQ::all_upper(sdd.graded(), 4);
        for (const auto& [k, v] : Xs.coeffs()) Xb.add(k, v);
        TensorQ ps = cartan1_projector(Xs, gso, 5);
        TensorQ pb = cartan1_projector(Xb, gsup, sdd.M());
        TensorQ ps_big = TensorQ::all_upper(sdd.graded(), 4);
        for (const auto& [k, v] : ps.coeffs()) {
            std::vector<int> idx(4);
            for (int s = 0; s < 4; ++s) idx[s] = key_get(k, s);
            ps_big.add_at(idx, v);
        }
        if (!(ps_big == pb)) differ = true;
    }
    CHECK(differ);
}

TEST_CASE("decomposition at (5,1): six components, dimensions sum to (dim g)^2") {
    SuperDim sd(5, 1, true);
    OspAlgebra alg(sd, split_metric(sd));
    TensorSquare ts(alg);
    auto rep = ts.decompose(RootChoice::NonStandard);
    CHECK(rep.completely_reducible);
    CHECK(rep.hw_count == 6);
    CHECK(rep.components.size() == 6);
    CHECK(rep.total_dim == rep.square_dim);
    CHECK(rep.weights_match_table);
    long adj = -1, triv = -1;
    for (auto& c : rep.components) {
        if (c.label == "adjoint") adj = c.dimension;
        if (c.label == "trivial") triv = c.dimension;
    }
    CHECK(adj == 23);
    CHECK(triv == 1);

    auto rep2 = ts.decompose(RootChoice::Standard);
    CHECK(rep2.completely_reducible);
    CHECK(rep2.total_dim == rep2.square_dim);
    // n = 1: the delta-side table needs delta_2, so the table match is waived
}

TEST_CASE("decomposition at (6,2): M=2 is not completely reducible, gamma has 3 hw vectors") {
    SuperDim sd(6, 2);
    OspAlgebra alg(sd, split_metric(sd));
    TensorSquare ts(alg);
    auto rep = ts.decompose(RootChoice::NonStandard);
    CHECK(!rep.completely_reducible);
    CHECK(rep.gamma_hw_count == 3);
    CHECK(rep.total_dim == rep.square_dim);
    CHECK(rep.hw_count == 6);
}

TEST_CASE("casimir spectral projector agrees with the compositional one at (5,1)") {
    SuperDim sd(5, 1, true);
    OspAlgebra alg(sd, split_metric(sd));
    TensorSquare ts(alg);
    auto evs = ts.component_casimir_eigenvalues(RootChoice::NonStandard);
    REQUIRE(evs.size() == 6);
    // eigenvalues pairwise distinct for M > 2
    for (size_t i = 0; i < evs.size(); ++i)
        for (size_t j = i + 1; j < evs.size(); ++j) CHECK(evs[i].second != evs[j].second);
    Weight target = alg.adjoint_highest_weight(RootChoice::NonStandard);
    target += target;  // 2e1+2e2
    std::mt19937_64 rng(45);
    for (int t = 0; t < 6; ++t) {
        TensorQ T = random_square_element(alg, rng);
        CHECK(ts.spectral_projector(T, target, RootChoice::NonStandard) == ts.pi1(T));
    }
    // full basis agreement
    for (const auto& b : ts.square_basis())
        CHECK(ts.spectral_projector(b, target, RootChoice::NonStandard) == ts.pi1(b));
}

TEST_CASE("cartan powers at (5,1): k=3 check passes for both root choices") {
    SuperDim sd(5, 1, true);
    OspAlgebra alg(sd, split_metric(sd));
    TensorSquare ts(alg);
    for (auto c : {RootChoice::Standard, RootChoice::NonStandard}) {
        CartanPower cp(ts, c);
        // beta2 is inside the symmetric square and contains the seed
        TensorQ v = alg.adjoint_highest_vector(c);
        TensorQ seed = v.tensor_product(v);
        Echelon<Rat> e2;
        for (const auto& b : cp.beta2()) {
            CHECK(pair_antisymmetrize(b).is_zero());
            e2.insert(tensor_svec(b));
        }
        CHECK(e2.contains(tensor_svec(seed)));
        auto rep = cp.check(3);
        CHECK(rep.ok);
        CHECK(rep.single_hw_criterion);
        CHECK(rep.casimir_eigenspace);
        CHECK(rep.beta_dim == rep.closure_dim);
    }
}
