#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "osp/linalg.hpp"

#include <random>

using namespace osp;

namespace {

SVec<Rat> rvec(std::mt19937_64& rng, int dim, int terms) {
    std::map<std::uint64_t, Rat> m;
    for (int t = 0; t < terms; ++t) {
        int c = static_cast<int>(rng() % 11) - 5;
        if (c == 0) c = 3;
        m[rng() % dim] += Rat(c, 1 + static_cast<int>(rng() % 4));
    }
    for (auto it = m.begin(); it != m.end();)
        it = it->second.is_zero() ? m.erase(it) : std::next(it);
    return svec_from_map(m);
}

}  // namespace

TEST_CASE("axpy merge semantics") {
    SVec<Rat> a, b;
    a.set(1, Rat(2));
    a.set(5, Rat(-1));
    b.set(1, Rat(1));
    b.set(3, Rat(4));
    a.axpy(Rat(-2), b);
    CHECK(a.coeff(1).is_zero());
    CHECK(a.coeff(3) == Rat(-8));
    CHECK(a.coeff(5) == Rat(-1));
    CHECK(a.nnz() == 2);
}

TEST_CASE("echelon rank on known configurations") {
    Echelon<Rat> e;
    SVec<Rat> v1, v2, v3;
    v1.set(0, Rat(1)); v1.set(1, Rat(2));
    v2.set(1, Rat(1));
    v3.set(0, Rat(2)); v3.set(1, Rat(5));  // = 2*v1 + v2
    CHECK(e.insert(v1));
    CHECK(e.insert(v2));
    CHECK(!e.insert(v3));
    CHECK(e.rank() == 2);
    CHECK(e.contains(v3));
}

TEST_CASE("random spans: rank is invariant under shuffles and scaling") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 15; ++trial) {
        std::vector<SVec<Rat>> vecs;
        int nv = 8 + static_cast<int>(rng() % 8);
        for (int i = 0; i < nv; ++i) vecs.push_back(rvec(rng, 20, 5));
        size_t r1 = rank_of(vecs);
        std::shuffle(vecs.begin(), vecs.end(), rng);
        for (auto& v : vecs) v.scale(Rat(1 + static_cast<int>(rng() % 5), 7));
        size_t r2 = rank_of(vecs, /*fp_prepass=*/true);
        CHECK(r1 == r2);
    }
}

TEST_CASE("kernel solver finds exact dependencies") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<SVec<Rat>> vecs;
        for (int i = 0; i < 6; ++i) vecs.push_back(rvec(rng, 12, 4));
        SVec<Rat> c1 = vecs[0]; c1.axpy(Rat(3), vecs[1]);
        SVec<Rat> c2 = vecs[2]; c2.axpy(Rat(-1, 2), vecs[3]);
        vecs.push_back(c1);
        vecs.push_back(c2);
        KernelSolver<Rat> ks;
        for (std::uint32_t i = 0; i < vecs.size(); ++i) ks.feed(vecs[i], i);
        for (const auto& combo : ks.kernel()) {
            SVec<Rat> acc;
            for (const auto& [tag, c] : combo.e) acc.axpy(c, vecs[tag]);
            CHECK(acc.is_zero());
        }
        CHECK(ks.kernel().size() + ks.rank() == vecs.size());
        CHECK(ks.kernel().size() >= 2);
    }
}

TEST_CASE("span intersection") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<SVec<Rat>> shared, A, B;
        for (int i = 0; i < 3; ++i) shared.push_back(rvec(rng, 30, 4));
        A = shared;
        B = shared;
        for (int i = 0; i < 4; ++i) A.push_back(rvec(rng, 30, 4));
        for (int i = 0; i < 4; ++i) B.push_back(rvec(rng, 30, 4));
        auto inter = intersect_spans(A, B);
        Echelon<Rat> ei;
        for (const auto& v : inter) ei.insert(v);
        for (const auto& s : shared) CHECK(ei.contains(s));
        Echelon<Rat> ea, eb;
        for (const auto& v : A) ea.insert(v);
        for (const auto& v : B) eb.insert(v);
        for (const auto& v : inter) {
            CHECK(ea.contains(v));
            CHECK(eb.contains(v));
        }
    }
}

TEST_CASE("prime-field prepass agrees on rank for structured input") {
    std::mt19937_64 rng(34);
    std::vector<SVec<Rat>> vecs;
    for (int i = 0; i < 30; ++i) vecs.push_back(rvec(rng, 40, 3));
    CHECK(rank_of(vecs, true) == rank_of(vecs, false));
}
