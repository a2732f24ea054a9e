#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "folnerlab/group.hpp"

using namespace folnerlab;

namespace {

GroupPtr z() { return GroupSpec::free_abelian(1); }
GroupPtr z2() { return GroupSpec::free_abelian(2); }

// Z^2 x| Z under the shear l.(a,b) = (a+lb, b); isomorphic to H_3(Z).
GroupPtr heis_sdp() {
    return GroupSpec::semidirect_product(GroupSpec::free_abelian(2), GroupSpec::free_abelian(1),
                                         ActionRule::heisenberg_shear());
}

FiniteSubset interval(GroupPtr g, Coord lo, Coord hi) {
    std::vector<GroupElement> e;
    for (Coord v = lo; v <= hi; ++v) e.push_back(GroupElement{v});
    return FiniteSubset(std::move(g), std::move(e));
}

} // namespace

TEST_CASE("semidirect multiply follows the shear law") {
    auto g = heis_sdp();
    // ((1,0),0)*((0,1),0) = ((1,1),0)
    CHECK(g->multiply(GroupElement{1, 0, 0}, GroupElement{0, 1, 0}) == GroupElement{1, 1, 0});
    // ((0,0),1)*((0,1),0) = ((1,1),1) since alpha_1(0,1) = (1,1)
    CHECK(g->multiply(GroupElement{0, 0, 1}, GroupElement{0, 1, 0}) == GroupElement{1, 1, 1});
    // identity absorbs
    CHECK(g->multiply(g->identity(), GroupElement{3, -2, 5}) == GroupElement{3, -2, 5});
}

TEST_CASE("semidirect inverse follows (a,b)^{-1} = (alpha_{b^{-1}}(a^{-1}), b^{-1})") {
    auto g = heis_sdp();
    CHECK(g->inverse(GroupElement{1, 1, 1}) == GroupElement{0, -1, -1});
    CHECK(g->inverse(g->identity()) == g->identity());
    CHECK(z()->inverse(GroupElement{3}) == GroupElement{-3});
}

TEST_CASE("heisenberg kind multiplication and inverse") {
    auto h = GroupSpec::heisenberg(1); // (a, b, c), c central
    auto x = GroupElement{1, 0, 0};
    auto y = GroupElement{0, 1, 0};
    auto xy = h->multiply(x, y);
    auto yx = h->multiply(y, x);
    CHECK(xy == GroupElement{1, 1, 1});
    CHECK(yx == GroupElement{1, 1, 0});
    auto comm = h->multiply(h->multiply(xy, h->inverse(yx)), h->identity());
    CHECK(comm == GroupElement{0, 0, 1}); // [x,y] = z
    for (auto e : {x, y, xy, yx, GroupElement{-4, 7, -9}}) {
        CHECK(h->multiply(e, h->inverse(e)) == h->identity());
        CHECK(h->inverse(h->inverse(e)) == e);
    }
}

TEST_CASE("finite cyclic reduces mod q") {
    auto c = GroupSpec::finite_cyclic(5);
    CHECK(c->multiply(GroupElement{3}, GroupElement{4}) == GroupElement{2});
    CHECK(c->inverse(GroupElement{2}) == GroupElement{3});
    CHECK(c->inverse(GroupElement{0}) == GroupElement{0});
    CHECK_THROWS_AS(c->validate(GroupElement{5}), malformed_element_error);
}

TEST_CASE("malformed element is rejected") {
    CHECK_THROWS_AS(z2()->multiply(GroupElement{1}, GroupElement{1, 2}), malformed_element_error);
}

TEST_CASE("group axioms hold on random elements of radius-4 balls") {
    std::vector<GroupPtr> specs = {
        z(), z2(), heis_sdp(), GroupSpec::heisenberg(1),
        GroupSpec::direct_product(GroupSpec::free_abelian(1), GroupSpec::finite_cyclic(3))};
    std::mt19937 rng(12345);
    for (const auto& spec : specs) {
        auto gens = GeneratingSet::standard(spec);
        auto B = ball(spec, gens, 4);
        std::uniform_int_distribution<std::size_t> pick(0, B.size() - 1);
        for (int trial = 0; trial < 50; ++trial) {
            const auto& g = B.elements()[pick(rng)];
            const auto& h = B.elements()[pick(rng)];
            const auto& k = B.elements()[pick(rng)];
            CHECK(spec->multiply(spec->multiply(g, h), k) ==
                  spec->multiply(g, spec->multiply(h, k)));
            CHECK(spec->multiply(g, spec->inverse(g)) == spec->identity());
            CHECK(spec->inverse(spec->inverse(g)) == g);
        }
    }
}

TEST_CASE("set algebra basics") {
    auto A = interval(z(), 0, 1);
    CHECK(set_product(A, A) == interval(z(), 0, 2));

    FiniteSubset B(z(), {GroupElement{-1}, GroupElement{0}, GroupElement{2}});
    CHECK(symmetrize(B) == interval(z(), -2, 2));

    CHECK(translate(z()->identity(), B) == B);
    CHECK(set_inverse(B).size() == B.size());

    // if e in A then A is contained in A^{-1} A
    CHECK(B.is_subset_of(set_product(set_inverse(B), B)));
}

TEST_CASE("set_product is associative on random triples") {
    std::mt19937 rng(99);
    auto spec = heis_sdp();
    auto B = ball(spec, GeneratingSet::standard(spec), 3);
    std::uniform_int_distribution<std::size_t> pick(0, B.size() - 1);
    for (int trial = 0; trial < 5; ++trial) {
        auto sample = [&](std::size_t n) {
            std::vector<GroupElement> e;
            for (std::size_t i = 0; i < n; ++i) e.push_back(B.elements()[pick(rng)]);
            return FiniteSubset(spec, std::move(e));
        };
        auto X = sample(3), Y = sample(3), Z = sample(3);
        CHECK(set_product(set_product(X, Y), Z) == set_product(X, set_product(Y, Z)));
    }
}

TEST_CASE("owner mismatch is rejected") {
    auto A = interval(z(), 0, 1);
    FiniteSubset B(z2(), {GroupElement{0, 0}});
    CHECK_THROWS_AS(set_product(A, B), owner_mismatch_error);
}

TEST_CASE("ball sizes in Z and Z^2") {
    auto gz = GeneratingSet::standard(z());
    CHECK(growth_profile(z(), gz, 3) == std::vector<std::size_t>{1, 3, 5, 7});

    auto gz2 = GeneratingSet::standard(z2());
    auto p = growth_profile(z2(), gz2, 2);
    CHECK(p[2] == 13); // l^1 ball: 1 + 4 + 8
}

TEST_CASE("balls are nested and growth is monotone") {
    auto spec = heis_sdp();
    auto gens = GeneratingSet::standard(spec);
    auto p = growth_profile(spec, gens, 8);
    for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i] >= p[i - 1]);
    auto b3 = ball(spec, gens, 3);
    auto b4 = ball(spec, gens, 4);
    CHECK(b3.is_subset_of(b4));
    // degree-4 growth envelope for the discrete Heisenberg group
    for (std::size_t k = 1; k < p.size(); ++k) {
        CHECK(p[k] <= 40 * (k * k * k * k + 1));
    }
}

TEST_CASE("ball budget is enforced") {
    auto spec = z2();
    CHECK_THROWS_AS(ball(spec, GeneratingSet::standard(spec), 50, 100), budget_exceeded_error);
}

TEST_CASE("ball_with_radii enumerates in (radius, lex) order") {
    auto b = ball_with_radii(z(), GeneratingSet::standard(z()), 2);
    REQUIRE(b.elems.size() == 5);
    CHECK(b.elems[0] == GroupElement{0});
    CHECK(b.elems[1] == GroupElement{-1});
    CHECK(b.elems[2] == GroupElement{1});
    CHECK(b.elems[3] == GroupElement{-2});
    CHECK(b.elems[4] == GroupElement{2});
    CHECK(b.radius == std::vector<int>{0, 1, 1, 2, 2});
}

TEST_CASE("centralizer in abelian groups is everything") {
    auto B = ball(z2(), GeneratingSet::standard(z2()), 2);
    FiniteSubset J(z2(), {GroupElement{1, 0}, GroupElement{0, 1}});
    CHECK(centralizer_in_ball(J, B) == B);
}

TEST_CASE("centralizer of {u,t} in the Heisenberg group is the center") {
    auto spec = heis_sdp();
    auto gens = GeneratingSet::standard(spec);
    auto B = ball(spec, gens, 6);
    // u = ((0,1),0) and t = ((0,0),1) generate; ((1,0),0) = [t,u] is central.
    FiniteSubset J(spec, {GroupElement{0, 1, 0}, GroupElement{0, 0, 1}});
    auto Z = centralizer_in_ball(J, B);
    CHECK(Z.size() >= 3);
    for (const auto& g : Z) {
        CHECK(g.coords[1] == 0);
        CHECK(g.coords[2] == 0);
        for (const auto& zel : J) CHECK(spec->commute(g, zel));
    }
    CHECK(Z.contains(GroupElement{1, 0, 0}));
    CHECK(Z.contains(spec->identity()));
}

TEST_CASE("centralizer of {e} is the whole search set") {
    auto spec = heis_sdp();
    auto B = ball(spec, GeneratingSet::standard(spec), 3);
    FiniteSubset J(spec, {spec->identity()});
    CHECK(centralizer_in_ball(J, B) == B);
}

TEST_CASE("action rule is a homomorphism and bijective on finite sets") {
    auto g = heis_sdp();
    auto N = g->left();
    std::mt19937 rng(7);
    std::uniform_int_distribution<Coord> c(-5, 5);
    for (int trial = 0; trial < 100; ++trial) {
        GroupElement h1{c(rng)}, h2{c(rng)};
        GroupElement n{c(rng), c(rng)};
        CHECK(g->act(GroupElement{0}, n) == n);
        auto lhs = g->act(GroupElement{h1.coords[0] + h2.coords[0]}, n);
        auto rhs = g->act(h1, g->act(h2, n));
        CHECK(lhs == rhs);
    }
    // bijection on a finite subset: image has the same size
    std::vector<GroupElement> box;
    for (Coord a = -2; a <= 2; ++a)
        for (Coord b = -2; b <= 2; ++b) box.push_back(GroupElement{a, b});
    FiniteSubset NB(N, box);
    std::vector<GroupElement> image;
    for (const auto& n : NB) image.push_back(g->act(GroupElement{3}, n));
    CHECK(FiniteSubset(N, image).size() == NB.size());
}

TEST_CASE("overflow is a hard error") {
    auto spec = z();
    GroupElement big{std::numeric_limits<Coord>::max()};
    CHECK_THROWS_AS(spec->multiply(big, GroupElement{1}), overflow_error);
}

TEST_CASE("group json round trip") {
    std::vector<GroupPtr> specs = {
        z(), GroupSpec::heisenberg(2), GroupSpec::finite_cyclic(7), heis_sdp(),
        GroupSpec::direct_product(GroupSpec::free_abelian(2), GroupSpec::finite_cyclic(4))};
    for (const auto& s : specs) {
        auto back = GroupSpec::from_json(s->to_json());
        CHECK(back->same_as(*s));
    }
    auto j = nlohmann::json::parse(R"({"kind":"heisenberg","n":1})");
    CHECK(GroupSpec::from_json(j)->same_as(*GroupSpec::heisenberg(1)));
}

TEST_CASE("subset json round trip") {
    auto spec = heis_sdp();
    auto B = ball(spec, GeneratingSet::standard(spec), 2);
    auto back = FiniteSubset::from_json(spec, B.to_json());
    CHECK(back == B);
}
