#pragma once

#include <optional>
#include <string>
#include <vector>

#include "folnerlab/group.hpp"

namespace folnerlab {

/// Resource limits for covering-number computations. Node and time caps
/// apply to the exact branch-and-bound; when they trip, the result degrades
/// to a verified greedy upper bound instead of failing.
/// time_cap_seconds = 0 disables the wall clock so that identical inputs
/// give identical outputs.
struct CoverBudget {
    std::size_t max_universe = 200000;
    std::uint64_t max_nodes = 2'000'000;
    double time_cap_seconds = 0.0;
};

enum class Verdict { Yes, No, Indeterminate };
std::string verdict_name(Verdict v);

enum class CoverMode { Exact, Greedy };

/// A covering constant L together with the translate list certifying it.
/// Coverage is re-verified at construction. mode == Exact additionally
/// certifies minimality.
struct CoverWitness {
    long long L = 0;
    std::vector<GroupElement> translates;
    FiniteSubset universe; // A^{-1} A
    CoverMode mode = CoverMode::Greedy;
    bool minimal = false;
    bool verified = false;

    nlohmann::json to_json() const;
};

/// The complete set of useful translates: {g : gA meets A^{-1}A} = (A^{-1}A) A^{-1}.
/// A cover by arbitrary group elements can always be rewritten inside this set,
/// so minimality over these candidates equals minimality over the whole group.
FiniteSubset candidate_translates(const FiniteSubset& A);

/// Minimum number of left translates of A covering A^{-1}A (exact mode), or a
/// greedy upper bound when the exact search is out of budget.
CoverWitness covering_number(const FiniteSubset& A, const CoverBudget& budget = {});

struct ApproxResult {
    Verdict verdict = Verdict::Indeterminate;
    std::optional<CoverWitness> witness;
};

/// Is A an approximate group with constant <= L? Greedy success certifies Yes;
/// No requires a completed exact search. Budget exhaustion in exact mode is
/// reported as Indeterminate, never collapsed to No.
ApproxResult is_approximate(const FiniteSubset& A, long long L, const CoverBudget& budget = {});

/// Strong variant: covering translates restricted to A itself.
ApproxResult is_strongly_approximate(const FiniteSubset& A, long long L,
                                     const CoverBudget& budget = {});

struct SymmetrizationReport {
    CoverWitness witness_A, witness_Ainv, witness_B;
    long long L_A = 0, L_Ainv = 0, L_B = 0;
    long long bound = 0; // 2 L_A L_Ainv + L_A + L_Ainv
    bool holds = false;
    bool certified = false; // all three covers solved exactly

    nlohmann::json to_json() const;
};

/// Computes L_A, L_{A^{-1}} and L_B for B = A u A^{-1} and checks
/// L_B <= 2 L_A L_{A^{-1}} + L_A + L_{A^{-1}}.
SymmetrizationReport symmetrization_bound_check(const FiniteSubset& A,
                                                const CoverBudget& budget = {});

} // namespace folnerlab
