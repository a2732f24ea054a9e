#pragma once

#include <unordered_map>

#include "folnerlab/markers.hpp"

namespace folnerlab {

/// Indicator partition of unity subordinate to the castle levels: each covered
/// point is assigned to the first (tower, gamma) containing it in canonical
/// order, so Sum_{i,gamma} psi_{i,gamma} = 1 pointwise on the covered set and
/// supp psi_{i,gamma} = gamma base_i restricted to the assignment.
struct PsiPartition {
    std::unordered_map<GroupElement, std::pair<int, GroupElement>, ElemHash> assignment;
    std::size_t covered_points = 0;
};

PsiPartition indicator_partition(const CastleReport& castle, const OrbitWindow& w);

/// mu^{(i)}_g(x) = (1/|F_n|) Sum_{h in F_n} psi_{i, h^{-1}g}(h^{-1}x), stored
/// as integer counts over the common denominator |F_n|. Exact rationals only;
/// no floating point anywhere.
struct MuSystem {
    long long denom = 0; // |F_n|
    int tower_count = 0;
    FiniteSubset F_n;

    struct Entry {
        int i;
        GroupElement g;
        long long count;
    };
    // defined exactly on the verified core: every h^{-1}x inside the window
    // and covered by the castle
    std::unordered_map<GroupElement, std::vector<Entry>, ElemHash> values;
    FiniteSubset verified_core;
    std::size_t excluded_window = 0;
    std::size_t excluded_uncovered = 0;
};

/// Requires a strong castle with all disjointness verdicts verified: the
/// orthogonality condition is exactly the (F_N,1)-separation of the bases.
MuSystem mu_from_castle(const CastleReport& castle, const OrbitWindow& w);

/// (a) Sum_{i,g} mu^{(i)}_g = 1 on the verified core, exactly.
bool check_partition_of_unity(const MuSystem& mu);

/// (b) mu^{(i)}_{g1} mu^{(i)}_{g2} = 0 for g1 != g2, exactly.
bool check_orthogonality(const MuSystem& mu);

struct EquivarianceReport {
    GroupElement g;
    Rational max_defect{0, 1}; // max over i, g', x of |mu^{(i)}_{g'}(g^{-1}x) - mu^{(i)}_{g g'}(x)|
    Rational sum_defect{0, 1}; // max over i, x of the g'-sum of those differences
    Rational folner_bound{0, 1}; // |F_n delta gF_n| / |F_n|
    bool within_bound = false;
    std::size_t core_size = 0; // points where both sides are defined
    ojson to_json() const;
};

/// Exact equivariance defect of the witness against the Folner bound.
EquivarianceReport equivariance_defect(const MuSystem& mu, const GroupElement& g,
                                       const OrbitWindow& w);

} // namespace folnerlab
