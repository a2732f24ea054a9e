#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>

#include "folnerlab/cover.hpp"
#include "folnerlab/report.hpp"

namespace folnerlab {

long long isqrt_floor(long long x);

/// An indexed generator l -> F_l of finite subsets. Built-in families carry
/// closed-form membership helpers; every closed form is redundant with the
/// generated sets and is cross-checked against them in the test suite.
class FolnerFamily {
public:
    using Generator = std::function<FiniteSubset(long)>;

    FolnerFamily() = default; // empty shell; at() requires a real generator
    FolnerFamily(GroupPtr owner, std::string name, ojson descriptor, Generator gen);

    const GroupPtr& owner() const { return owner_; }
    const std::string& name() const { return name_; }
    const ojson& descriptor() const { return descriptor_; }
    FiniteSubset at(long l) const;

    // optional closed forms
    std::function<bool(long, const GroupElement&)> contains;              // g in F_l
    std::function<bool(long, const GroupElement&)> inv_product_contains;  // g in F_l^{-1} F_l
    std::function<long(const GroupElement&)> min_index_containing;        // smallest such l
    // candidate a in F_{l1} with a^{-1} z in F_{l2}; verified by the caller
    std::function<std::optional<GroupElement>(long, long, const GroupElement&)> containment_hint;

    static FolnerFamily zm_box(int m);          // F_l = {-l..l}^m
    static FolnerFamily heisenberg_sqrt(int n); // (box isqrt(l))^{2n} x (box isqrt(l))
    static FolnerFamily singletons(GroupPtr owner);
    /// F_l = N_l x H_l inside a semidirect (or direct) product group.
    static FolnerFamily product(const FolnerFamily& normal, const FolnerFamily& acting,
                                GroupPtr group);
    static FolnerFamily from_json(const nlohmann::json& j);

private:
    GroupPtr owner_;
    std::string name_;
    ojson descriptor_;
    Generator gen_;
};

/// |gF symm-diff F| / |F| as an exact rational in [0, 2].
Rational folner_defect(const FiniteSubset& F, const GroupElement& g);

struct WafcEntry {
    long l = 0;
    std::size_t size = 0;
    CoverWitness witness;
    bool symmetric = false;
    Verdict verdict = Verdict::Indeterminate; // L_{F_l} <= L_budget?
};

struct WafcReport {
    std::vector<WafcEntry> entries;
    long long sup_L = 0;
    long long L_budget = 0;
    Verdict verdict = Verdict::Indeterminate;
    bool all_symmetric = false;
    bool all_exact = false;
    ojson to_json() const;
};

/// Per-index covering constants, symmetry, and the uniform-bound verdict.
/// Verdicts never extrapolate beyond the tested range.
WafcReport check_wafc(const FolnerFamily& family, long l_from, long l_to, long long L_budget,
                      const CoverBudget& budget = {});

struct AfcPairResult {
    long l1 = 0, l2 = 0;
    bool holds = false;
    std::optional<GroupElement> counterexample;
};

struct AfcReport {
    std::vector<AfcPairResult> pairs;
    bool all_hold = false;
    ojson to_json() const;
};

/// Exact test of F_{l1+l2} subset of F_{l1} * F_{l2} per pair. Every claimed
/// membership carries a verified factorization witness; failures carry the
/// offending element.
AfcReport check_afc_containment(const FolnerFamily& family,
                                const std::vector<std::pair<long, long>>& pairs);

struct SafcEntry {
    long l = 0;
    long long L = 0; // unrestricted covering constant (exact where possible)
    CoverMode mode = CoverMode::Greedy;
    Verdict strong_verdict = Verdict::Indeterminate;
    std::optional<CoverWitness> strong_witness;
    bool witnesses_inside = false; // re-verified translates subset of F_l
};

struct SafcReport {
    std::vector<SafcEntry> entries;
    Verdict verdict = Verdict::Indeterminate;
    ojson to_json() const;
};

SafcReport check_safc_witnesses(const FolnerFamily& family, long l_from, long l_to,
                                const CoverBudget& budget = {});

/// Data for the semidirect-product uniformity hypotheses. The xi rule maps a
/// pair of indices to an index of the containment family `target`; built-in
/// data sets pick target so the image containment is meaningful for their
/// normal-family shapes.
struct SdpData {
    GroupPtr G; // semidirect or direct product of normal x acting
    FolnerFamily normal;
    FolnerFamily acting;
    FolnerFamily target;
    std::function<long(long, long)> xi;
    std::string xi_name;
    bool xi_inferred = false;
    long M = 1;
    Rational eps{1, 2};
    long K = 1;
    std::vector<GroupElement> test_elements; // elements of G for hypothesis (2)

    static SdpData heisenberg_example(int n);
    static SdpData trivial_product_example();
};

struct SdpCounterexample {
    std::string clause;
    long l1 = 0, l2 = 0;
    std::optional<GroupElement> x, b;
    std::string detail;
};

struct SdpReport {
    // (1) image containment + xi(i,i) <= i*M
    bool hyp1_containment = false;
    bool hyp1_xi_clause = false;
    bool hyp1_certifying = false; // false when xi was inferred
    // (2) density inequality for the supplied test elements
    bool hyp2 = false;
    // (3) translate-intersection condition
    bool hyp3 = false;
    std::vector<SdpCounterexample> counterexamples;
    long scale_cap = 0;
    bool all_pass = false;
    ojson to_json() const;
};

SdpReport check_sdp_hypotheses(const SdpData& data, long scale_cap);

} // namespace folnerlab
