#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "folnerlab/bounds.hpp"
#include "folnerlab/errors.hpp"
#include "folnerlab/markers.hpp"

using namespace folnerlab;

TEST_CASE("rokhlin bound values") {
    CHECK(rokhlin_bound(2, 0) == 1);
    CHECK(rokhlin_bound(1, 5) == 5);
    CHECK(rokhlin_bound(512, 2) == 1535);
}

TEST_CASE("amenability bound values") {
    CHECK(amenability_bound(2, 1) == 4);
    CHECK(amenability_bound(1, 0) == 1);
    CHECK(amenability_bound(4, 1) == 8);
}

TEST_CASE("nuclear and tower bounds") {
    auto b = nuclear_and_tower_bounds(2, 0);
    CHECK(b.dad_plus1 == 2);
    CHECK(b.tower_plus1 == 2);
    CHECK(b.fine_tower_plus1 == 2);
    CHECK(b.nuclear_plus1 == 2);

    auto ones = nuclear_and_tower_bounds(1, 0);
    CHECK(ones.dad_plus1 == 1);
    CHECK(ones.nuclear_plus1 == 1);

    auto big = nuclear_and_tower_bounds(4, 2);
    CHECK(big.dad_plus1 == 12);
    CHECK(big.tower_plus1 == 36);
    CHECK(big.fine_tower_plus1 == 36);
    CHECK(big.nuclear_plus1 == 36);
}

TEST_CASE("embedding bound values") {
    CHECK(embedding_bound(2, 0, 1) == 4);
    CHECK(embedding_bound(1, 0, 1) == 3);
    CHECK(embedding_bound(4, 1, 3) == 28);
}

TEST_CASE("symmetrization bound values") {
    CHECK(symmetrization_bound(1, 1) == 4);
    CHECK(symmetrization_bound(2, 2) == 12);
    CHECK(symmetrization_bound(3, 5) == 38);
}

TEST_CASE("monotonicity in each argument") {
    for (long long L = 1; L <= 6; ++L)
        for (long long d = 0; d <= 4; ++d) {
            CHECK(rokhlin_bound(L + 1, d) > rokhlin_bound(L, d));
            CHECK(rokhlin_bound(L, d + 1) > rokhlin_bound(L, d));
            CHECK(amenability_bound(L + 1, d) > amenability_bound(L, d));
            CHECK(amenability_bound(L, d + 1) > amenability_bound(L, d));
            CHECK(nuclear_and_tower_bounds(L + 1, d).nuclear_plus1 >
                  nuclear_and_tower_bounds(L, d).nuclear_plus1);
            for (long long m = 1; m <= 3; ++m) {
                CHECK(embedding_bound(L + 1, d, m) > embedding_bound(L, d, m));
                CHECK(embedding_bound(L, d, m + 1) > embedding_bound(L, d, m));
            }
        }
}

TEST_CASE("chain identities between the bounds") {
    for (long long L = 1; L <= 8; ++L)
        for (long long d = 0; d <= 5; ++d) {
            CHECK(rokhlin_bound(L, d) + 1 == amenability_bound(L, d));
            const auto nt = nuclear_and_tower_bounds(L, d);
            CHECK(nt.dad_plus1 == amenability_bound(L, d));
            CHECK(nt.nuclear_plus1 == amenability_bound(L, d) * (d + 1));
        }
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(rokhlin_bound(0, 0), precondition_error);
    CHECK_THROWS_AS(amenability_bound(1, -1), precondition_error);
    CHECK_THROWS_AS(embedding_bound(1, 0, 0), precondition_error);
    CHECK_THROWS_AS(symmetrization_bound(0, 1), precondition_error);
}

TEST_CASE("measured castle tower counts respect the amenability bound") {
    auto fam = FolnerFamily::zm_box(1);
    auto spec = fam.owner();
    auto w = OrbitWindow::make(spec, GeneratingSet::standard(spec), 120, 100);
    for (int d_extra : {0, 1}) {
        auto rep = build_castle(w, fam, 2, d_extra, false);
        const auto L_measured = static_cast<long long>(rep.v.size());
        CHECK(static_cast<long long>(rep.towers.size()) <=
              amenability_bound(L_measured, d_extra));
    }
}

TEST_CASE("bounds report carries raw and +1 values") {
    auto j = bounds_report(2, 0, 1);
    CHECK(j["rokhlin_dim"]["bound"] == 1);
    CHECK(j["rokhlin_dim"]["bound_plus1"] == 2);
    CHECK(j["amenability_dim_plus1"]["bound"] == 2);
    CHECK(j["nuclear_dim_plus1"]["bound"] == 2);
    CHECK(j["embedding_dim"]["bound"] == 4);
    CHECK(bounds_report(2, 0, 1).dump() == j.dump());
}
