#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "folnerlab/cover.hpp"

using namespace folnerlab;

namespace {

GroupPtr z() { return GroupSpec::free_abelian(1); }
GroupPtr z2() { return GroupSpec::free_abelian(2); }
GroupPtr heis_sdp() {
    return GroupSpec::semidirect_product(GroupSpec::free_abelian(2), GroupSpec::free_abelian(1),
                                         ActionRule::heisenberg_shear());
}

FiniteSubset interval(GroupPtr g, Coord lo, Coord hi) {
    std::vector<GroupElement> e;
    for (Coord v = lo; v <= hi; ++v) e.push_back(GroupElement{v});
    return FiniteSubset(std::move(g), std::move(e));
}

FiniteSubset box2(GroupPtr g, Coord n) {
    std::vector<GroupElement> e;
    for (Coord a = -n; a <= n; ++a)
        for (Coord b = -n; b <= n; ++b) e.push_back(GroupElement{a, b});
    return FiniteSubset(std::move(g), std::move(e));
}

// Independent oracle: smallest k such that some k-subset of the candidate
// translates covers A^{-1}A, by exhaustive combination search. Tiny inputs only.
long long oracle_min_cover(const FiniteSubset& A, const FiniteSubset& candidates) {
    auto U = set_product(set_inverse(A), A);
    std::vector<std::vector<std::size_t>> covers;
    for (const auto& g : candidates) {
        std::vector<std::size_t> c;
        auto gA = translate(g, A);
        for (std::size_t i = 0; i < U.size(); ++i)
            if (gA.contains(U.elements()[i])) c.push_back(i);
        covers.push_back(std::move(c));
    }
    const std::size_t n = covers.size();
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<std::size_t> idx(k);
        std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t pos,
                                                               std::size_t start) -> bool {
            if (pos == k) {
                std::vector<char> cov(U.size(), 0);
                for (auto i : idx)
                    for (auto u : covers[i]) cov[u] = 1;
                for (char c : cov)
                    if (!c) return false;
                return true;
            }
            for (std::size_t i = start; i < n; ++i) {
                idx[pos] = i;
                if (go(pos + 1, i + 1)) return true;
            }
            return false;
        };
        if (go(0, 0)) return static_cast<long long>(k);
    }
    return -1;
}

FiniteSubset random_subset_with_identity(const FiniteSubset& pool, std::size_t k,
                                         std::mt19937& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::vector<GroupElement> e{pool.owner()->identity()};
    while (e.size() < k + 1) e.push_back(pool.elements()[pick(rng)]);
    return FiniteSubset(pool.owner(), std::move(e));
}

} // namespace

TEST_CASE("candidate translates are exactly (A^{-1}A) A^{-1}") {
    CHECK(candidate_translates(interval(z(), -1, 1)) == interval(z(), -3, 3));
    CHECK(candidate_translates(box2(z2(), 1)) == box2(z2(), 3));
    FiniteSubset just_e(z(), {GroupElement{0}});
    CHECK(candidate_translates(just_e) == just_e);
    CHECK_THROWS_AS(candidate_translates(interval(z(), 1, 3)), precondition_error);
}

TEST_CASE("every useful translate lies in the candidate set") {
    std::mt19937 rng(4242);
    auto spec = heis_sdp();
    auto pool = ball(spec, GeneratingSet::standard(spec), 3);
    auto big = ball(spec, GeneratingSet::standard(spec), 6);
    for (int trial = 0; trial < 5; ++trial) {
        auto A = random_subset_with_identity(pool, 4, rng);
        auto U = set_product(set_inverse(A), A);
        auto cand = candidate_translates(A);
        for (const auto& g : big) {
            const bool useful = intersection_size(translate(g, A), U) > 0;
            CHECK(useful == cand.contains(g));
        }
    }
}

TEST_CASE("covering number of a singleton is 1") {
    FiniteSubset A(z(), {GroupElement{0}});
    auto w = covering_number(A);
    CHECK(w.L == 1);
    CHECK(w.mode == CoverMode::Exact);
    CHECK(w.verified);
}

TEST_CASE("intervals in Z have covering constant 2") {
    for (Coord n = 1; n <= 5; ++n) {
        auto w = covering_number(interval(z(), -n, n));
        CHECK(w.L == 2);
        CHECK(w.mode == CoverMode::Exact);
        CHECK(w.minimal);
    }
}

TEST_CASE("boxes in Z^2 have covering constant 4") {
    for (Coord n = 1; n <= 3; ++n) {
        auto w = covering_number(box2(z2(), n));
        CHECK(w.L == 4);
        CHECK(w.mode == CoverMode::Exact);
    }
}

TEST_CASE("exact solver agrees with the exhaustive oracle on small instances") {
    std::mt19937 rng(777);
    std::vector<GroupPtr> specs = {z(), z2(), heis_sdp()};
    for (const auto& spec : specs) {
        auto pool = ball(spec, GeneratingSet::standard(spec), 2);
        for (int trial = 0; trial < 8; ++trial) {
            auto A = random_subset_with_identity(pool, 3, rng);
            auto w = covering_number(A);
            REQUIRE(w.mode == CoverMode::Exact);
            CHECK(w.L == oracle_min_cover(A, candidate_translates(A)));
        }
    }
    for (Coord n = 1; n <= 3; ++n) {
        auto A = interval(z(), -n, n);
        CHECK(covering_number(A).L == oracle_min_cover(A, candidate_translates(A)));
    }
}

TEST_CASE("is_approximate verdicts for intervals") {
    auto A = interval(z(), -5, 5);
    auto yes = is_approximate(A, 2);
    CHECK(yes.verdict == Verdict::Yes);
    REQUIRE(yes.witness.has_value());
    CHECK(yes.witness->verified);

    auto no = is_approximate(A, 1);
    CHECK(no.verdict == Verdict::No);
}

TEST_CASE("strong approximate witnesses come from A") {
    for (Coord n = 2; n <= 5; ++n) {
        auto A = interval(z(), -n, n);
        auto res = is_strongly_approximate(A, 2);
        REQUIRE(res.verdict == Verdict::Yes);
        REQUIRE(res.witness.has_value());
        for (const auto& g : res.witness->translates) CHECK(A.contains(g));
        CHECK(res.witness->translates ==
              std::vector<GroupElement>{GroupElement{-n}, GroupElement{n}});
    }
    auto res2 = is_strongly_approximate(box2(z2(), 2), 4);
    REQUIRE(res2.verdict == Verdict::Yes);
    CHECK(res2.witness->translates ==
          std::vector<GroupElement>{GroupElement{-2, -2}, GroupElement{-2, 2}, GroupElement{2, -2},
                                    GroupElement{2, 2}});
}

TEST_CASE("greedy never beats exact; equality on these cover-by-2 instances") {
    std::mt19937 rng(31337);
    auto pool = ball(z(), GeneratingSet::standard(z()), 3);
    for (int trial = 0; trial < 20; ++trial) {
        auto A = random_subset_with_identity(pool, 3, rng);
        auto w = covering_number(A);
        REQUIRE(w.mode == CoverMode::Exact);
        auto approx = is_approximate(A, w.L);
        CHECK(approx.verdict == Verdict::Yes);
        if (w.L <= 2) {
            REQUIRE(approx.witness.has_value());
            CHECK(static_cast<long long>(approx.witness->translates.size()) == w.L);
        }
    }
}

TEST_CASE("covering number is translation invariant when e stays inside") {
    auto A = interval(z(), 0, 3);
    auto B = translate(GroupElement{-1}, A);
    CHECK(covering_number(A).L == covering_number(B).L);

    auto A2 = box2(z2(), 1);
    auto B2 = translate(GroupElement{1, -1}, A2);
    CHECK(covering_number(A2).L == covering_number(B2).L);
}

TEST_CASE("witness translates cover the universe (re-verified invariant)") {
    std::mt19937 rng(2024);
    auto spec = heis_sdp();
    auto pool = ball(spec, GeneratingSet::standard(spec), 3);
    for (int trial = 0; trial < 8; ++trial) {
        auto A = random_subset_with_identity(pool, 5, rng);
        auto w = covering_number(A);
        CHECK(w.verified);
        auto U = set_product(set_inverse(A), A);
        FiniteSubset cov(spec, {});
        for (const auto& g : w.translates) cov = set_union(cov, translate(g, A));
        CHECK(U.is_subset_of(cov));
    }
}

TEST_CASE("symmetrization bound holds on exactly solved instances") {
    auto rep = symmetrization_bound_check(interval(z(), 0, 2));
    CHECK(rep.certified);
    CHECK(rep.holds);

    auto symrep = symmetrization_bound_check(interval(z(), -2, 2));
    CHECK(symrep.certified);
    CHECK(symrep.L_A == symrep.L_Ainv);
    CHECK(symrep.L_A == symrep.L_B);
    CHECK(symrep.holds);

    std::mt19937 rng(55);
    auto spec = heis_sdp();
    auto pool = ball(spec, GeneratingSet::standard(spec), 3);
    for (int trial = 0; trial < 15; ++trial) {
        auto A = random_subset_with_identity(pool, 4, rng);
        auto r = symmetrization_bound_check(A);
        REQUIRE(r.certified);
        CHECK(r.holds);
    }
}

TEST_CASE("budget exhaustion degrades to a flagged greedy witness") {
    CoverBudget tight;
    tight.max_nodes = 0; // abort the exact search immediately
    auto w = covering_number(box2(z2(), 3), tight);
    CHECK(w.mode == CoverMode::Greedy);
    CHECK_FALSE(w.minimal);
    CHECK(w.verified);
    CHECK(w.L >= 4);

    auto res = is_approximate(box2(z2(), 3), 3, tight);
    CHECK(res.verdict == Verdict::Indeterminate);
}

TEST_CASE("universe budget violation raises") {
    CoverBudget tiny;
    tiny.max_universe = 3;
    CHECK_THROWS_AS(covering_number(interval(z(), -2, 2), tiny), budget_exceeded_error);
}
