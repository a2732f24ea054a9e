#pragma once

#include "folnerlab/folner.hpp"

namespace folnerlab {

/// Finite window standing in for one free orbit: the group acting on itself
/// by left translation, truncated to B_R. Coverage claims are asserted only
/// on the inner core B_{r_core}; towers may reach outside the window.
struct OrbitWindow {
    GroupPtr spec;
    GeneratingSet gens;
    int R = 0;
    int r_core = 0;
    BallWithRadii window; // canonical (radius, lex) enumeration of B_R
    FiniteSubset ball_R;
    FiniteSubset ball_core;

    static OrbitWindow make(GroupPtr spec, GeneratingSet gens, int R, int r_core,
                            std::size_t budget = kDefaultBallBudget);
};

/// Separation predicate: a symmetric set S of group elements; a marker set D
/// is S-separated when d'd^{-1} never lies in S \ {e}. Either an explicit set
/// or a lazy union of conjugates v_i (F_l^{-1} F_l) v_i^{-1} backed by a
/// family closed form (strong castles need shapes too large to materialize).
class SeparationShape {
public:
    static SeparationShape from_set(FiniteSubset s);
    static SeparationShape conjugated(const FolnerFamily& family, long index,
                                      std::vector<GroupElement> conjugators);

    bool contains(const GroupElement& q) const;
    const GroupPtr& owner() const { return spec_; }
    bool materialized() const { return set_.has_value(); }
    std::size_t set_size() const { return set_ ? set_->size() : 0; }

private:
    GroupPtr spec_;
    std::optional<FiniteSubset> set_;
    std::function<bool(const GroupElement&)> pred_;
};

/// Lemma-style greedy choice of g_1..g_d (g_0 = e implicit) from the ordered
/// sample so that {F g_0..F g_d} and {g_0 F..g_d F} are both pairwise
/// disjoint; both families are re-verified exactly before returning.
std::vector<GroupElement> choose_disjoint_translates(const FiniteSubset& F,
                                                     const std::vector<GroupElement>& sample,
                                                     int d);

struct CoveringTranslates {
    std::vector<GroupElement> v; // F F^{-1} subset of U_i F v_i^{-1}, re-verified
    CoverWitness base;           // underlying cover computation for F^{-1}
};

/// Minimal-cardinality (exact mode) list v_1..v_L with F F^{-1} in U F v_i^{-1},
/// obtained from the covering constant of F^{-1} followed by inversion.
CoveringTranslates covering_translates(const FiniteSubset& F, const CoverBudget& budget = {});

struct MarkerSet {
    FiniteSubset D;
    FiniteSubset F; // shape whose translates must stay disjoint
    bool separation_verified = false;
    bool maximal = false;           // no window point can be added
    FiniteSubset covered_core;      // core points reached by (S u S^{-1}) D
    bool coverage_complete = false; // covered_core == ball_core
};

/// Greedy maximal S-separated subset of the window in canonical order.
MarkerSet build_marker(const OrbitWindow& w, const FiniteSubset& F, const SeparationShape& sep);

struct CastleTower {
    int i = 0, j = 0;       // v index (1-based), g index (0-based)
    GroupElement translate; // v_i^{-1} g_j
    FiniteSubset base;
    bool shape_disjoint = false;
    bool strong_disjoint = false; // checked against F_N in strong mode
};

struct CastleReport {
    long n = 0;
    bool strong = false;
    long N = -1; // strong: smallest family index with F_n^2 (and F~_n) inside F_N
    FiniteSubset F_n;                // shape of every tower
    std::optional<FiniteSubset> F_N; // strong separation shape
    std::vector<GroupElement> v;
    CoverMode v_mode = CoverMode::Greedy;
    std::vector<GroupElement> g; // g_0 = e first
    FiniteSubset D;
    std::vector<CastleTower> towers;
    std::size_t core_size = 0;
    std::size_t covered_core = 0;
    Rational covered_fraction{0, 1};
    bool coverage_complete = false;
    std::size_t max_multiplicity = 0; // distinct towers through a point
    bool all_disjoint = false;
    bool freeness_shadow = false; // strong: g(base) misses base for g in F_N \ {e}
    ojson to_json() const;
};

/// Assemble the castle {(v_i^{-1} g_j D, F_n)} on the window: covering
/// translates from the approximate-group structure, central g_j's, and a
/// greedy maximal marker D. Every verdict is re-checked from the raw sets.
CastleReport build_castle(const OrbitWindow& w, const FolnerFamily& family, long n, int d_extra,
                          bool strong, const CoverBudget& budget = {}, long family_cap = 4096);

/// (M,k)-disjointness: any k+1 distinct translates of E by elements of M have
/// empty intersection. Exact; Indeterminate only when |M| |E| exceeds the
/// enumeration budget.
Verdict verify_disjointness(const FiniteSubset& E, const FiniteSubset& M, int k,
                            std::size_t budget = 50'000'000);

} // namespace folnerlab
