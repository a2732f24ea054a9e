#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "folnerlab/errors.hpp"

namespace folnerlab {

using Coord = std::int64_t;

// Overflow-checked integer ops. A detected overflow is a hard error, never
// wraparound: shear actions multiply coordinates and must not wrap silently.
Coord checked_add(Coord a, Coord b);
Coord checked_sub(Coord a, Coord b);
Coord checked_mul(Coord a, Coord b);
Coord checked_neg(Coord a);

/// An element of a concrete group: a fixed-width integer coordinate vector,
/// interpreted by the owning GroupSpec.
struct GroupElement {
    std::vector<Coord> coords;

    GroupElement() = default;
    explicit GroupElement(std::vector<Coord> c) : coords(std::move(c)) {}
    GroupElement(std::initializer_list<Coord> c) : coords(c) {}

    auto operator<=>(const GroupElement&) const = default;

    std::string str() const;
};

struct ElemHash {
    std::size_t operator()(const GroupElement& e) const noexcept;
};

enum class GroupKind { FreeAbelian, Heisenberg, DirectProduct, SemidirectProduct, FiniteCyclic };
enum class ActionKind { Trivial, HeisenbergShear };

/// Closed-form homomorphism H -> Aut(N) for semidirect products.
/// heisenberg_shear: acting rank 1, normal Z^(2m), l.(a,b) = (a+l*b, b)
/// applied componentwise to the two halves of the normal coordinates.
struct ActionRule {
    ActionKind kind = ActionKind::Trivial;
    std::string name() const;
    static ActionRule trivial() { return {ActionKind::Trivial}; }
    static ActionRule heisenberg_shear() { return {ActionKind::HeisenbergShear}; }
};

class GroupSpec;
using GroupPtr = std::shared_ptr<const GroupSpec>;

/// A computable group with exact integer arithmetic. Immutable after
/// construction; all operations are pure functions.
class GroupSpec {
public:
    static GroupPtr free_abelian(int rank);
    static GroupPtr heisenberg(int n); // tuples (a  vec, b vec, c), length 2n+1
    static GroupPtr finite_cyclic(Coord order);
    static GroupPtr direct_product(GroupPtr left, GroupPtr right);
    static GroupPtr semidirect_product(GroupPtr normal, GroupPtr acting, ActionRule action);

    GroupKind kind() const { return kind_; }
    int dim() const { return dim_; }
    int param() const { return param_; }
    Coord order() const { return order_; }
    const GroupPtr& left() const { return left_; }
    const GroupPtr& right() const { return right_; }
    const ActionRule& action() const { return action_; }

    GroupElement identity() const;
    GroupElement multiply(const GroupElement& g, const GroupElement& h) const;
    GroupElement inverse(const GroupElement& g) const;
    bool commute(const GroupElement& g, const GroupElement& h) const;

    /// Semidirect products only: apply the action of acting element h to a
    /// normal element n (both given as bare child coordinates).
    GroupElement act(const GroupElement& h, const GroupElement& n) const;

    /// Unchecked span-based multiply for hot loops over already-validated
    /// elements. out must not alias a or b.
    void multiply_raw(std::span<const Coord> a, std::span<const Coord> b,
                      std::span<Coord> out) const {
        multiply_into(a, b, out);
    }

    void validate(const GroupElement& g) const; // throws malformed_element_error

    bool same_as(const GroupSpec& other) const;
    std::string describe() const;

    nlohmann::json to_json() const;
    static GroupPtr from_json(const nlohmann::json& j);

    /// Generators customary for each kind (not symmetrized; GeneratingSet
    /// symmetrizes). FreeAbelian: e_i. Heisenberg: x_i, y_i. Semidirect and
    /// direct products: embedded child generators. FiniteCyclic(q>1): {1}.
    std::vector<GroupElement> standard_generators() const;

private:
    GroupSpec() = default;

    void multiply_into(std::span<const Coord> a, std::span<const Coord> b,
                       std::span<Coord> out) const;
    void inverse_into(std::span<const Coord> a, std::span<Coord> out) const;
    void act_into(std::span<const Coord> h, std::span<const Coord> n,
                  std::span<Coord> out) const;
    void validate_span(std::span<const Coord> a) const;

    GroupKind kind_ = GroupKind::FreeAbelian;
    int dim_ = 0;
    int param_ = 0;   // rank for FreeAbelian, n for Heisenberg
    Coord order_ = 0; // FiniteCyclic
    GroupPtr left_, right_;
    ActionRule action_;
};

/// Canonically ordered, duplicate-free finite set of group elements.
/// Iteration order is lexicographic on coordinates, so every downstream
/// output is reproducible byte for byte.
class FiniteSubset {
public:
    FiniteSubset() = default;
    FiniteSubset(GroupPtr owner, std::vector<GroupElement> elems);

    const GroupPtr& owner() const { return owner_; }
    const std::vector<GroupElement>& elements() const { return elems_; }
    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    bool contains(const GroupElement& g) const;
    bool is_subset_of(const FiniteSubset& other) const;

    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }

    bool operator==(const FiniteSubset& other) const { return elems_ == other.elems_; }

    nlohmann::json to_json() const;
    static FiniteSubset from_json(GroupPtr owner, const nlohmann::json& j);

private:
    GroupPtr owner_;
    std::vector<GroupElement> elems_;
};

void require_same_owner(const FiniteSubset& a, const FiniteSubset& b);

FiniteSubset set_product(const FiniteSubset& a, const FiniteSubset& b);
FiniteSubset set_inverse(const FiniteSubset& a);
FiniteSubset translate(const GroupElement& g, const FiniteSubset& a);       // g*A
FiniteSubset translate_right(const FiniteSubset& a, const GroupElement& g); // A*g
FiniteSubset symmetrize(const FiniteSubset& a);                             // A^{-1} u A
FiniteSubset set_union(const FiniteSubset& a, const FiniteSubset& b);
FiniteSubset set_intersection(const FiniteSubset& a, const FiniteSubset& b);
FiniteSubset set_difference(const FiniteSubset& a, const FiniteSubset& b);
std::size_t intersection_size(const FiniteSubset& a, const FiniteSubset& b);

/// Symmetric generating set; closed under inverse by construction.
struct GeneratingSet {
    GroupPtr owner;
    FiniteSubset gens;
    static GeneratingSet make(GroupPtr owner, std::vector<GroupElement> gens);
    static GeneratingSet standard(GroupPtr owner);
};

inline constexpr std::size_t kDefaultBallBudget = 5'000'000;

/// Word-metric ball of the given radius, by breadth-first closure.
FiniteSubset ball(const GroupPtr& spec, const GeneratingSet& gens, int radius,
                  std::size_t budget = kDefaultBallBudget);

/// Sizes |B_0|, |B_1|, ..., |B_n|.
std::vector<std::size_t> growth_profile(const GroupPtr& spec, const GeneratingSet& gens,
                                        int n_max, std::size_t budget = kDefaultBallBudget);

/// Ball enumerated in canonical window order: radius ascending, lexicographic
/// within each radius stratum.
struct BallWithRadii {
    std::vector<GroupElement> elems; // BFS strata order
    std::vector<int> radius;         // parallel to elems
};
BallWithRadii ball_with_radii(const GroupPtr& spec, const GeneratingSet& gens, int radius,
                              std::size_t budget = kDefaultBallBudget);

/// { g in search : gz = zg for all z in J }.
FiniteSubset centralizer_in_ball(const FiniteSubset& J, const FiniteSubset& search);

} // namespace folnerlab
