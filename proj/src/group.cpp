#include "folnerlab/group.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <unordered_set>

namespace folnerlab {

Coord checked_add(Coord a, Coord b) {
    Coord r;
    if (__builtin_add_overflow(a, b, &r)) throw overflow_error("integer overflow in add");
    return r;
}

Coord checked_sub(Coord a, Coord b) {
    Coord r;
    if (__builtin_sub_overflow(a, b, &r)) throw overflow_error("integer overflow in sub");
    return r;
}

Coord checked_mul(Coord a, Coord b) {
    Coord r;
    if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("integer overflow in mul");
    return r;
}

Coord checked_neg(Coord a) { return checked_sub(0, a); }

std::string GroupElement::str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) os << ',';
        os << coords[i];
    }
    os << ')';
    return os.str();
}

std::size_t ElemHash::operator()(const GroupElement& e) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Coord c : e.coords) {
        h ^= static_cast<std::size_t>(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

std::string ActionRule::name() const {
    switch (kind) {
        case ActionKind::Trivial: return "trivial";
        case ActionKind::HeisenbergShear: return "heisenberg_shear";
    }
    return "?";
}

GroupPtr GroupSpec::free_abelian(int rank) {
    if (rank < 1) throw precondition_error("free_abelian: rank must be >= 1");
    auto g = std::shared_ptr<GroupSpec>(new GroupSpec());
    g->kind_ = GroupKind::FreeAbelian;
    g->dim_ = rank;
    g->param_ = rank;
    return g;
}

GroupPtr GroupSpec::heisenberg(int n) {
    if (n < 1) throw precondition_error("heisenberg: n must be >= 1");
    auto g = std::shared_ptr<GroupSpec>(new GroupSpec());
    g->kind_ = GroupKind::Heisenberg;
    g->dim_ = 2 * n + 1;
    g->param_ = n;
    return g;
}

GroupPtr GroupSpec::finite_cyclic(Coord order) {
    if (order < 1) throw precondition_error("finite_cyclic: order must be >= 1");
    auto g = std::shared_ptr<GroupSpec>(new GroupSpec());
    g->kind_ = GroupKind::FiniteCyclic;
    g->dim_ = 1;
    g->order_ = order;
    return g;
}

GroupPtr GroupSpec::direct_product(GroupPtr left, GroupPtr right) {
    if (!left || !right) throw precondition_error("direct_product: null child");
    auto g = std::shared_ptr<GroupSpec>(new GroupSpec());
    g->kind_ = GroupKind::DirectProduct;
    g->dim_ = left->dim() + right->dim();
    g->left_ = std::move(left);
    g->right_ = std::move(right);
    return g;
}

GroupPtr GroupSpec::semidirect_product(GroupPtr normal, GroupPtr acting, ActionRule action) {
    if (!normal || !acting) throw precondition_error("semidirect_product: null child");
    if (action.kind == ActionKind::HeisenbergShear) {
        if (normal->kind() != GroupKind::FreeAbelian || normal->dim() % 2 != 0)
            throw precondition_error("heisenberg_shear: normal group must be Z^(2m)");
        if (acting->kind() != GroupKind::FreeAbelian || acting->dim() != 1)
            throw precondition_error("heisenberg_shear: acting group must be Z");
    }
    auto g = std::shared_ptr<GroupSpec>(new GroupSpec());
    g->kind_ = GroupKind::SemidirectProduct;
    g->dim_ = normal->dim() + acting->dim();
    g->left_ = std::move(normal);
    g->right_ = std::move(acting);
    g->action_ = action;
    return g;
}

GroupElement GroupSpec::identity() const {
    return GroupElement(std::vector<Coord>(static_cast<std::size_t>(dim_), 0));
}

void GroupSpec::validate_span(std::span<const Coord> a) const {
    if (static_cast<int>(a.size()) != dim_)
        throw malformed_element_error("coordinate length mismatch: expected " +
                                      std::to_string(dim_) + ", got " + std::to_string(a.size()));
    switch (kind_) {
        case GroupKind::FiniteCyclic:
            if (a[0] < 0 || a[0] >= order_)
                throw malformed_element_error("finite_cyclic coordinate out of [0,q)");
            break;
        case GroupKind::DirectProduct:
        case GroupKind::SemidirectProduct:
            left_->validate_span(a.subspan(0, left_->dim()));
            right_->validate_span(a.subspan(left_->dim()));
            break;
        default:
            break;
    }
}

void GroupSpec::validate(const GroupElement& g) const { validate_span(g.coords); }

void GroupSpec::multiply_into(std::span<const Coord> a, std::span<const Coord> b,
                              std::span<Coord> out) const {
    switch (kind_) {
        case GroupKind::FreeAbelian:
            for (int i = 0; i < dim_; ++i) out[i] = checked_add(a[i], b[i]);
            break;
        case GroupKind::FiniteCyclic: {
            Coord s = a[0] + b[0]; // both in [0,q), no overflow for sane q
            out[0] = s % order_;
            break;
        }
        case GroupKind::Heisenberg: {
            const int n = param_;
            Coord dot = 0;
            for (int i = 0; i < n; ++i) dot = checked_add(dot, checked_mul(a[i], b[n + i]));
            for (int i = 0; i < 2 * n; ++i) out[i] = checked_add(a[i], b[i]);
            out[2 * n] = checked_add(checked_add(a[2 * n], b[2 * n]), dot);
            break;
        }
        case GroupKind::DirectProduct: {
            const int dl = left_->dim();
            left_->multiply_into(a.subspan(0, dl), b.subspan(0, dl), out.subspan(0, dl));
            right_->multiply_into(a.subspan(dl), b.subspan(dl), out.subspan(dl));
            break;
        }
        case GroupKind::SemidirectProduct: {
            const int dn = left_->dim();
            // (n1,h1)(n2,h2) = (n1 * alpha_{h1}(n2), h1 h2)
            std::vector<Coord> acted(static_cast<std::size_t>(dn));
            act_into(a.subspan(dn), b.subspan(0, dn), acted);
            left_->multiply_into(a.subspan(0, dn), acted, out.subspan(0, dn));
            right_->multiply_into(a.subspan(dn), b.subspan(dn), out.subspan(dn));
            break;
        }
    }
}

void GroupSpec::inverse_into(std::span<const Coord> a, std::span<Coord> out) const {
    switch (kind_) {
        case GroupKind::FreeAbelian:
            for (int i = 0; i < dim_; ++i) out[i] = checked_neg(a[i]);
            break;
        case GroupKind::FiniteCyclic:
            out[0] = a[0] == 0 ? 0 : order_ - a[0];
            break;
        case GroupKind::Heisenberg: {
            const int n = param_;
            Coord dot = 0;
            for (int i = 0; i < n; ++i) dot = checked_add(dot, checked_mul(a[i], a[n + i]));
            for (int i = 0; i < 2 * n; ++i) out[i] = checked_neg(a[i]);
            out[2 * n] = checked_add(checked_neg(a[2 * n]), dot);
            break;
        }
        case GroupKind::DirectProduct: {
            const int dl = left_->dim();
            left_->inverse_into(a.subspan(0, dl), out.subspan(0, dl));
            right_->inverse_into(a.subspan(dl), out.subspan(dl));
            break;
        }
        case GroupKind::SemidirectProduct: {
            // (n,h)^{-1} = (alpha_{h^{-1}}(n^{-1}), h^{-1})
            const int dn = left_->dim();
            std::vector<Coord> ninv(static_cast<std::size_t>(dn));
            left_->inverse_into(a.subspan(0, dn), ninv);
            right_->inverse_into(a.subspan(dn), out.subspan(dn));
            act_into(out.subspan(dn), ninv, out.subspan(0, dn));
            break;
        }
    }
}

void GroupSpec::act_into(std::span<const Coord> h, std::span<const Coord> n,
                         std::span<Coord> out) const {
    switch (action_.kind) {
        case ActionKind::Trivial:
            std::copy(n.begin(), n.end(), out.begin());
            break;
        case ActionKind::HeisenbergShear: {
            const int m = left_->dim() / 2;
            const Coord l = h[0];
            for (int i = 0; i < m; ++i) out[i] = checked_add(n[i], checked_mul(l, n[m + i]));
            for (int i = 0; i < m; ++i) out[m + i] = n[m + i];
            break;
        }
    }
}

GroupElement GroupSpec::multiply(const GroupElement& g, const GroupElement& h) const {
    validate(g);
    validate(h);
    GroupElement out(std::vector<Coord>(static_cast<std::size_t>(dim_)));
    multiply_into(g.coords, h.coords, out.coords);
    return out;
}

GroupElement GroupSpec::inverse(const GroupElement& g) const {
    validate(g);
    GroupElement out(std::vector<Coord>(static_cast<std::size_t>(dim_)));
    inverse_into(g.coords, out.coords);
    return out;
}

bool GroupSpec::commute(const GroupElement& g, const GroupElement& h) const {
    return multiply(g, h) == multiply(h, g);
}

GroupElement GroupSpec::act(const GroupElement& h, const GroupElement& n) const {
    if (kind_ != GroupKind::SemidirectProduct)
        throw precondition_error("act: only defined for semidirect products");
    right_->validate(h);
    left_->validate(n);
    GroupElement out(std::vector<Coord>(static_cast<std::size_t>(left_->dim())));
    act_into(h.coords, n.coords, out.coords);
    return out;
}

bool GroupSpec::same_as(const GroupSpec& other) const {
    if (kind_ != other.kind_ || dim_ != other.dim_ || param_ != other.param_ ||
        order_ != other.order_)
        return false;
    if (kind_ == GroupKind::DirectProduct || kind_ == GroupKind::SemidirectProduct) {
        if (action_.kind != other.action_.kind) return false;
        return left_->same_as(*other.left_) && right_->same_as(*other.right_);
    }
    return true;
}

std::string GroupSpec::describe() const {
    switch (kind_) {
        case GroupKind::FreeAbelian: return "Z^" + std::to_string(param_);
        case GroupKind::Heisenberg: return "H_" + std::to_string(2 * param_ + 1) + "(Z)";
        case GroupKind::FiniteCyclic: return "Z/" + std::to_string(order_);
        case GroupKind::DirectProduct:
            return "(" + left_->describe() + " x " + right_->describe() + ")";
        case GroupKind::SemidirectProduct:
            return "(" + left_->describe() + " x|_" + action_.name() + " " + right_->describe() +
                   ")";
    }
    return "?";
}

nlohmann::json GroupSpec::to_json() const {
    nlohmann::json j;
    switch (kind_) {
        case GroupKind::FreeAbelian:
            j["kind"] = "free_abelian";
            j["rank"] = param_;
            break;
        case GroupKind::Heisenberg:
            j["kind"] = "heisenberg";
            j["n"] = param_;
            break;
        case GroupKind::FiniteCyclic:
            j["kind"] = "finite_cyclic";
            j["order"] = order_;
            break;
        case GroupKind::DirectProduct:
            j["kind"] = "direct_product";
            j["left"] = left_->to_json();
            j["right"] = right_->to_json();
            break;
        case GroupKind::SemidirectProduct:
            j["kind"] = "semidirect_product";
            j["normal"] = left_->to_json();
            j["acting"] = right_->to_json();
            j["action"] = action_.name();
            break;
    }
    return j;
}

GroupPtr GroupSpec::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "free_abelian") return free_abelian(j.at("rank").get<int>());
    if (kind == "heisenberg") return heisenberg(j.at("n").get<int>());
    if (kind == "finite_cyclic") return finite_cyclic(j.at("order").get<Coord>());
    if (kind == "direct_product")
        return direct_product(from_json(j.at("left")), from_json(j.at("right")));
    if (kind == "semidirect_product") {
        const std::string a = j.at("action").get<std::string>();
        ActionRule rule;
        if (a == "trivial")
            rule = ActionRule::trivial();
        else if (a == "heisenberg_shear")
            rule = ActionRule::heisenberg_shear();
        else
            throw precondition_error("unknown action rule: " + a);
        return semidirect_product(from_json(j.at("normal")), from_json(j.at("acting")), rule);
    }
    throw precondition_error("unknown group kind: " + kind);
}

std::vector<GroupElement> GroupSpec::standard_generators() const {
    std::vector<GroupElement> gens;
    auto unit = [this](int i) {
        GroupElement e(std::vector<Coord>(static_cast<std::size_t>(dim_), 0));
        e.coords[static_cast<std::size_t>(i)] = 1;
        return e;
    };
    switch (kind_) {
        case GroupKind::FreeAbelian:
            for (int i = 0; i < dim_; ++i) gens.push_back(unit(i));
            break;
        case GroupKind::Heisenberg:
            // x_i and y_i; the center is generated by their commutators.
            for (int i = 0; i < 2 * param_; ++i) gens.push_back(unit(i));
            break;
        case GroupKind::FiniteCyclic:
            if (order_ > 1) gens.push_back(unit(0));
            break;
        case GroupKind::DirectProduct:
        case GroupKind::SemidirectProduct: {
            const int dl = left_->dim();
            for (const auto& g : left_->standard_generators()) {
                GroupElement e(std::vector<Coord>(static_cast<std::size_t>(dim_), 0));
                std::copy(g.coords.begin(), g.coords.end(), e.coords.begin());
                gens.push_back(std::move(e));
            }
            for (const auto& g : right_->standard_generators()) {
                GroupElement e(std::vector<Coord>(static_cast<std::size_t>(dim_), 0));
                std::copy(g.coords.begin(), g.coords.end(), e.coords.begin() + dl);
                gens.push_back(std::move(e));
            }
            break;
        }
    }
    return gens;
}

FiniteSubset::FiniteSubset(GroupPtr owner, std::vector<GroupElement> elems)
    : owner_(std::move(owner)), elems_(std::move(elems)) {
    if (!owner_) throw precondition_error("FiniteSubset: null owner");
    for (const auto& e : elems_) owner_->validate(e);
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

bool FiniteSubset::contains(const GroupElement& g) const {
    return std::binary_search(elems_.begin(), elems_.end(), g);
}

bool FiniteSubset::is_subset_of(const FiniteSubset& other) const {
    return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
}

nlohmann::json FiniteSubset::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : elems_) j.push_back(e.coords);
    return j;
}

FiniteSubset FiniteSubset::from_json(GroupPtr owner, const nlohmann::json& j) {
    std::vector<GroupElement> elems;
    for (const auto& row : j) elems.emplace_back(row.get<std::vector<Coord>>());
    return FiniteSubset(std::move(owner), std::move(elems));
}

void require_same_owner(const FiniteSubset& a, const FiniteSubset& b) {
    if (!a.owner() || !b.owner() || !a.owner()->same_as(*b.owner()))
        throw owner_mismatch_error("finite subsets belong to different groups");
}

FiniteSubset set_product(const FiniteSubset& a, const FiniteSubset& b) {
    require_same_owner(a, b);
    const auto& spec = *a.owner();
    std::vector<GroupElement> out;
    out.reserve(a.size() * b.size());
    GroupElement tmp(std::vector<Coord>(static_cast<std::size_t>(spec.dim())));
    for (const auto& x : a)
        for (const auto& y : b) out.push_back(spec.multiply(x, y));
    return FiniteSubset(a.owner(), std::move(out));
}

FiniteSubset set_inverse(const FiniteSubset& a) {
    std::vector<GroupElement> out;
    out.reserve(a.size());
    for (const auto& x : a) out.push_back(a.owner()->inverse(x));
    return FiniteSubset(a.owner(), std::move(out));
}

FiniteSubset translate(const GroupElement& g, const FiniteSubset& a) {
    std::vector<GroupElement> out;
    out.reserve(a.size());
    for (const auto& x : a) out.push_back(a.owner()->multiply(g, x));
    return FiniteSubset(a.owner(), std::move(out));
}

FiniteSubset translate_right(const FiniteSubset& a, const GroupElement& g) {
    std::vector<GroupElement> out;
    out.reserve(a.size());
    for (const auto& x : a) out.push_back(a.owner()->multiply(x, g));
    return FiniteSubset(a.owner(), std::move(out));
}

FiniteSubset symmetrize(const FiniteSubset& a) { return set_union(a, set_inverse(a)); }

FiniteSubset set_union(const FiniteSubset& a, const FiniteSubset& b) {
    require_same_owner(a, b);
    std::vector<GroupElement> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return FiniteSubset(a.owner(), std::move(out));
}

FiniteSubset set_intersection(const FiniteSubset& a, const FiniteSubset& b) {
    require_same_owner(a, b);
    std::vector<GroupElement> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return FiniteSubset(a.owner(), std::move(out));
}

FiniteSubset set_difference(const FiniteSubset& a, const FiniteSubset& b) {
    require_same_owner(a, b);
    std::vector<GroupElement> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return FiniteSubset(a.owner(), std::move(out));
}

std::size_t intersection_size(const FiniteSubset& a, const FiniteSubset& b) {
    require_same_owner(a, b);
    std::size_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

GeneratingSet GeneratingSet::make(GroupPtr owner, std::vector<GroupElement> gens) {
    FiniteSubset s(owner, std::move(gens));
    return GeneratingSet{owner, symmetrize(s)};
}

GeneratingSet GeneratingSet::standard(GroupPtr owner) {
    auto gens = owner->standard_generators();
    return make(std::move(owner), std::move(gens));
}

namespace {

BallWithRadii bfs_ball(const GroupPtr& spec, const GeneratingSet& gens, int radius,
                       std::size_t budget) {
    if (radius < 0) throw precondition_error("ball: radius must be >= 0");
    if (gens.gens.empty()) throw precondition_error("ball: generating set is empty");
    if (!gens.owner->same_as(*spec)) throw owner_mismatch_error("generating set owner mismatch");

    BallWithRadii out;
    std::unordered_set<GroupElement, ElemHash> seen;
    std::vector<GroupElement> frontier{spec->identity()};
    seen.insert(frontier.front());
    out.elems.push_back(frontier.front());
    out.radius.push_back(0);

    for (int r = 1; r <= radius; ++r) {
        std::vector<GroupElement> next;
        for (const auto& x : frontier) {
            for (const auto& s : gens.gens) {
                GroupElement y = spec->multiply(x, s);
                if (seen.insert(y).second) {
                    next.push_back(std::move(y));
                    if (seen.size() > budget)
                        throw budget_exceeded_error("ball budget exceeded at radius " +
                                                    std::to_string(r));
                }
            }
        }
        std::sort(next.begin(), next.end());
        for (auto& y : next) {
            out.elems.push_back(y);
            out.radius.push_back(r);
        }
        frontier = std::move(next);
        if (frontier.empty()) break; // finite group exhausted
    }
    return out;
}

} // namespace

FiniteSubset ball(const GroupPtr& spec, const GeneratingSet& gens, int radius,
                  std::size_t budget) {
    auto b = bfs_ball(spec, gens, radius, budget);
    return FiniteSubset(spec, std::move(b.elems));
}

std::vector<std::size_t> growth_profile(const GroupPtr& spec, const GeneratingSet& gens, int n_max,
                                        std::size_t budget) {
    auto b = bfs_ball(spec, gens, n_max, budget);
    std::vector<std::size_t> sizes(static_cast<std::size_t>(n_max) + 1, 0);
    for (int r : b.radius) sizes[static_cast<std::size_t>(r)]++;
    for (std::size_t i = 1; i < sizes.size(); ++i) sizes[i] += sizes[i - 1];
    return sizes;
}

BallWithRadii ball_with_radii(const GroupPtr& spec, const GeneratingSet& gens, int radius,
                              std::size_t budget) {
    return bfs_ball(spec, gens, radius, budget);
}

FiniteSubset centralizer_in_ball(const FiniteSubset& J, const FiniteSubset& search) {
    require_same_owner(J, search);
    if (J.empty() || search.empty())
        throw precondition_error("centralizer_in_ball: J and search must be nonempty");
    const auto& spec = *J.owner();
    std::vector<GroupElement> out;
    for (const auto& g : search) {
        bool ok = true;
        for (const auto& z : J) {
            if (spec.multiply(g, z) != spec.multiply(z, g)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(g);
    }
    return FiniteSubset(J.owner(), std::move(out));
}

} // namespace folnerlab
