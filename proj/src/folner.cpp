#include "folnerlab/folner.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "folnerlab/parallel.hpp"

namespace folnerlab {

long long isqrt_floor(long long x) {
    if (x < 0) throw precondition_error("isqrt_floor: negative argument");
    auto r = static_cast<long long>(std::sqrt(static_cast<double>(x)));
    while (r > 0 && r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r;
}

FolnerFamily::FolnerFamily(GroupPtr owner, std::string name, ojson descriptor, Generator gen)
    : owner_(std::move(owner)), name_(std::move(name)), descriptor_(std::move(descriptor)),
      gen_(std::move(gen)) {}

FiniteSubset FolnerFamily::at(long l) const {
    if (!gen_) throw precondition_error("folner family has no generator");
    if (l < 1) throw precondition_error("folner family index must be >= 1");
    return gen_(l);
}

namespace {

std::vector<GroupElement> box_elements(int m, Coord r) {
    std::vector<GroupElement> out;
    std::vector<Coord> cur(static_cast<std::size_t>(m), -r);
    while (true) {
        out.emplace_back(cur);
        int i = m - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == r) {
            cur[static_cast<std::size_t>(i)] = -r;
            --i;
        }
        if (i < 0) break;
        cur[static_cast<std::size_t>(i)]++;
    }
    return out;
}

Coord max_abs(const GroupElement& g) {
    Coord m = 0;
    for (Coord c : g.coords) m = std::max(m, c < 0 ? -c : c);
    return m;
}

} // namespace

FolnerFamily FolnerFamily::zm_box(int m) {
    auto owner = GroupSpec::free_abelian(m);
    ojson d = {{"family", "zm_box"}, {"m", m}};
    FolnerFamily fam(owner, "zm_box", d, [owner, m](long l) {
        return FiniteSubset(owner, box_elements(m, l));
    });
    fam.contains = [](long l, const GroupElement& g) { return max_abs(g) <= l; };
    fam.inv_product_contains = [](long l, const GroupElement& g) { return max_abs(g) <= 2 * l; };
    fam.min_index_containing = [](const GroupElement& g) {
        return static_cast<long>(std::max<Coord>(1, max_abs(g)));
    };
    fam.containment_hint = [](long l1, long /*l2*/,
                              const GroupElement& z) -> std::optional<GroupElement> {
        GroupElement a = z;
        for (auto& c : a.coords) c = std::clamp<Coord>(c, -l1, l1);
        return a;
    };
    return fam;
}

FolnerFamily FolnerFamily::heisenberg_sqrt(int n) {
    auto owner = GroupSpec::semidirect_product(GroupSpec::free_abelian(2 * n),
                                               GroupSpec::free_abelian(1),
                                               ActionRule::heisenberg_shear());
    ojson d = {{"family", "heisenberg_sqrt"}, {"n", n}};
    const int dim = 2 * n + 1;
    FolnerFamily fam(owner, "heisenberg_sqrt", d, [owner, dim](long l) {
        const Coord s = isqrt_floor(l);
        return FiniteSubset(owner, box_elements(dim, s));
    });
    fam.contains = [](long l, const GroupElement& g) { return max_abs(g) <= isqrt_floor(l); };
    // q = ((x,y),u) lies in F_l^{-1} F_l iff |u| <= 2s, |y_i| <= 2s, and some
    // admissible t (t in [-s,s], t+u in [-s,s]) keeps every |x_i + t y_i| <= 2s.
    fam.inv_product_contains = [n](long l, const GroupElement& q) {
        const Coord s = isqrt_floor(l);
        const Coord u = q.coords[static_cast<std::size_t>(2 * n)];
        if (u < -2 * s || u > 2 * s) return false;
        for (int i = n; i < 2 * n; ++i) {
            const Coord y = q.coords[static_cast<std::size_t>(i)];
            if (y < -2 * s || y > 2 * s) return false;
        }
        const Coord tlo = std::max(-s, -s - u);
        const Coord thi = std::min(s, s - u);
        for (Coord t = tlo; t <= thi; ++t) {
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) {
                const Coord x = q.coords[static_cast<std::size_t>(i)];
                const Coord y = q.coords[static_cast<std::size_t>(n + i)];
                const Coord v = x + t * y;
                ok = (v >= -2 * s && v <= 2 * s);
            }
            if (ok) return true;
        }
        return false;
    };
    fam.min_index_containing = [](const GroupElement& g) {
        const Coord r = std::max<Coord>(1, max_abs(g));
        return static_cast<long>(r * r);
    };
    fam.containment_hint = [n](long l1, long l2,
                               const GroupElement& z) -> std::optional<GroupElement> {
        const Coord s1 = isqrt_floor(l1), s2 = isqrt_floor(l2);
        const Coord w = z.coords[static_cast<std::size_t>(2 * n)];
        for (Coord b1 = std::max(-s1, w - s2); b1 <= std::min(s1, w + s2); ++b1) {
            GroupElement a(std::vector<Coord>(static_cast<std::size_t>(2 * n + 1), 0));
            a.coords[static_cast<std::size_t>(2 * n)] = b1;
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) {
                const Coord x = z.coords[static_cast<std::size_t>(i)];
                const Coord y = z.coords[static_cast<std::size_t>(n + i)];
                bool found = false;
                for (Coord beta = std::max(-s1, y - s2); beta <= std::min(s1, y + s2); ++beta) {
                    const Coord rem = x - b1 * (y - beta);
                    if (rem >= -(s1 + s2) && rem <= s1 + s2) {
                        a.coords[static_cast<std::size_t>(n + i)] = beta;
                        a.coords[static_cast<std::size_t>(i)] = std::clamp(rem, -s1, s1);
                        found = true;
                        break;
                    }
                }
                ok = found;
            }
            if (ok) return a;
        }
        return std::nullopt;
    };
    return fam;
}

FolnerFamily FolnerFamily::singletons(GroupPtr owner) {
    ojson d = {{"family", "singletons"}, {"group", owner->to_json()}};
    auto o = owner;
    FolnerFamily fam(owner, "singletons", d, [o](long) {
        return FiniteSubset(o, {o->identity()});
    });
    fam.contains = [o](long, const GroupElement& g) { return g == o->identity(); };
    fam.inv_product_contains = fam.contains;
    fam.min_index_containing = [o](const GroupElement& g) {
        return g == o->identity() ? 1L : -1L;
    };
    return fam;
}

FolnerFamily FolnerFamily::product(const FolnerFamily& normal, const FolnerFamily& acting,
                                   GroupPtr group) {
    if (group->kind() != GroupKind::SemidirectProduct && group->kind() != GroupKind::DirectProduct)
        throw precondition_error("product family: group must be a (semi)direct product");
    if (!group->left()->same_as(*normal.owner()) || !group->right()->same_as(*acting.owner()))
        throw owner_mismatch_error("product family: factor owners do not match the group");
    ojson d = {{"family", "product"},
               {"normal", normal.descriptor()},
               {"acting", acting.descriptor()}};
    auto nf = std::make_shared<FolnerFamily>(normal);
    auto hf = std::make_shared<FolnerFamily>(acting);
    const int dn = group->left()->dim();
    const int dim = group->dim();
    FolnerFamily fam(group, "product", d, [group, nf, hf, dn, dim](long l) {
        auto N = nf->at(l);
        auto H = hf->at(l);
        std::vector<GroupElement> out;
        out.reserve(N.size() * H.size());
        for (const auto& a : N)
            for (const auto& b : H) {
                GroupElement e(std::vector<Coord>(static_cast<std::size_t>(dim)));
                std::copy(a.coords.begin(), a.coords.end(), e.coords.begin());
                std::copy(b.coords.begin(), b.coords.end(), e.coords.begin() + dn);
                out.push_back(std::move(e));
            }
        return FiniteSubset(group, std::move(out));
    });
    if (nf->contains && hf->contains) {
        fam.contains = [nf, hf, dn](long l, const GroupElement& g) {
            GroupElement a(std::vector<Coord>(g.coords.begin(), g.coords.begin() + dn));
            GroupElement b(std::vector<Coord>(g.coords.begin() + dn, g.coords.end()));
            return nf->contains(l, a) && hf->contains(l, b);
        };
    }
    if (nf->min_index_containing && hf->min_index_containing) {
        fam.min_index_containing = [nf, hf, dn](const GroupElement& g) {
            GroupElement a(std::vector<Coord>(g.coords.begin(), g.coords.begin() + dn));
            GroupElement b(std::vector<Coord>(g.coords.begin() + dn, g.coords.end()));
            const long la = nf->min_index_containing(a);
            const long lb = hf->min_index_containing(b);
            if (la < 0 || lb < 0) return -1L;
            return std::max(la, lb);
        };
    }
    return fam;
}

FolnerFamily FolnerFamily::from_json(const nlohmann::json& j) {
    const std::string f = j.at("family").get<std::string>();
    if (f == "zm_box") return zm_box(j.at("m").get<int>());
    if (f == "heisenberg_sqrt") return heisenberg_sqrt(j.at("n").get<int>());
    if (f == "singletons") return singletons(GroupSpec::from_json(j.at("group")));
    throw precondition_error("unknown folner family: " + f);
}

Rational folner_defect(const FiniteSubset& F, const GroupElement& g) {
    if (F.empty()) throw precondition_error("folner_defect: empty set");
    const auto gF = translate(g, F);
    const auto common = intersection_size(gF, F);
    const auto num = 2 * (static_cast<long long>(F.size()) - static_cast<long long>(common));
    return Rational(num, static_cast<long long>(F.size()));
}

ojson WafcReport::to_json() const {
    ojson j;
    ojson es = ojson::array();
    for (const auto& e : entries) {
        ojson row;
        row["l"] = e.l;
        row["size"] = e.size;
        row["L"] = e.witness.L;
        row["mode"] = e.witness.mode == CoverMode::Exact ? "exact" : "greedy";
        row["symmetric"] = e.symmetric;
        row["verdict"] = verdict_name(e.verdict);
        es.push_back(std::move(row));
    }
    j["entries"] = std::move(es);
    j["sup_L"] = sup_L;
    j["L_budget"] = L_budget;
    j["all_symmetric"] = all_symmetric;
    j["all_exact"] = all_exact;
    j["verdict"] = verdict_name(verdict);
    return j;
}

WafcReport check_wafc(const FolnerFamily& family, long l_from, long l_to, long long L_budget,
                      const CoverBudget& budget) {
    if (l_from < 1 || l_to < l_from) throw precondition_error("check_wafc: bad index range");
    WafcReport rep;
    rep.L_budget = L_budget;

    // per-index checks are independent; assemble by index order
    rep.entries.resize(static_cast<std::size_t>(l_to - l_from + 1));
    parallel_for(rep.entries.size(), [&](std::size_t k) {
        const long l = l_from + static_cast<long>(k);
        WafcEntry e;
        e.l = l;
        auto F = family.at(l);
        e.size = F.size();
        e.witness = covering_number(F, budget);
        e.symmetric = F == set_inverse(F);
        if (e.witness.L <= L_budget)
            e.verdict = Verdict::Yes;
        else if (e.witness.mode == CoverMode::Exact)
            e.verdict = Verdict::No;
        else
            e.verdict = Verdict::Indeterminate;
        rep.entries[k] = std::move(e);
    });

    rep.all_symmetric = true;
    rep.all_exact = true;
    bool any_indeterminate = false;
    bool any_no = false;
    for (const auto& e : rep.entries) {
        rep.sup_L = std::max(rep.sup_L, e.witness.L);
        rep.all_symmetric = rep.all_symmetric && e.symmetric;
        rep.all_exact = rep.all_exact && e.witness.mode == CoverMode::Exact;
        any_indeterminate = any_indeterminate || e.verdict == Verdict::Indeterminate;
        any_no = any_no || e.verdict == Verdict::No;
    }
    rep.verdict =
        any_no ? Verdict::No : (any_indeterminate ? Verdict::Indeterminate : Verdict::Yes);
    return rep;
}

ojson AfcReport::to_json() const {
    ojson j;
    ojson ps = ojson::array();
    for (const auto& p : pairs) {
        ojson row;
        row["l1"] = p.l1;
        row["l2"] = p.l2;
        row["holds"] = p.holds;
        if (p.counterexample) row["counterexample"] = p.counterexample->coords;
        ps.push_back(std::move(row));
    }
    j["pairs"] = std::move(ps);
    j["all_hold"] = all_hold;
    return j;
}

AfcReport check_afc_containment(const FolnerFamily& family,
                                const std::vector<std::pair<long, long>>& pairs) {
    AfcReport rep;
    rep.all_hold = true;
    const auto& spec = *family.owner();
    for (const auto& [l1, l2] : pairs) {
        if (l1 < 1 || l2 < 1) throw precondition_error("check_afc_containment: indices >= 1");
        AfcPairResult r;
        r.l1 = l1;
        r.l2 = l2;
        r.holds = true;
        const auto F1 = family.at(l1);
        const auto F2 = family.at(l2);
        const auto F12 = family.at(l1 + l2);
        for (const auto& z : F12) {
            bool ok = false;
            if (family.containment_hint) {
                if (auto a = family.containment_hint(l1, l2, z)) {
                    if (F1.contains(*a) && F2.contains(spec.multiply(spec.inverse(*a), z)))
                        ok = true;
                }
            }
            if (!ok) {
                for (const auto& a : F1) {
                    if (F2.contains(spec.multiply(spec.inverse(a), z))) {
                        ok = true;
                        break;
                    }
                }
            }
            if (!ok) {
                r.holds = false;
                r.counterexample = z;
                break;
            }
        }
        rep.all_hold = rep.all_hold && r.holds;
        rep.pairs.push_back(std::move(r));
    }
    return rep;
}

ojson SafcReport::to_json() const {
    ojson j;
    ojson es = ojson::array();
    for (const auto& e : entries) {
        ojson row;
        row["l"] = e.l;
        row["L"] = e.L;
        row["mode"] = e.mode == CoverMode::Exact ? "exact" : "greedy";
        row["strong_verdict"] = verdict_name(e.strong_verdict);
        row["witnesses_inside"] = e.witnesses_inside;
        if (e.strong_witness) row["strong_witness"] = ojson(e.strong_witness->to_json());
        es.push_back(std::move(row));
    }
    j["entries"] = std::move(es);
    j["verdict"] = verdict_name(verdict);
    return j;
}

SafcReport check_safc_witnesses(const FolnerFamily& family, long l_from, long l_to,
                                const CoverBudget& budget) {
    SafcReport rep;
    bool any_no = false, any_ind = false;
    for (long l = l_from; l <= l_to; ++l) {
        SafcEntry e;
        e.l = l;
        auto F = family.at(l);
        auto w = covering_number(F, budget);
        e.L = w.L;
        e.mode = w.mode;
        auto strong = is_strongly_approximate(F, w.L, budget);
        e.strong_verdict = strong.verdict;
        if (strong.witness) {
            e.strong_witness = strong.witness;
            e.witnesses_inside = true;
            for (const auto& g : strong.witness->translates)
                e.witnesses_inside = e.witnesses_inside && F.contains(g);
        }
        any_no = any_no || e.strong_verdict == Verdict::No;
        any_ind = any_ind || e.strong_verdict == Verdict::Indeterminate;
        rep.entries.push_back(std::move(e));
    }
    rep.verdict = any_no ? Verdict::No : (any_ind ? Verdict::Indeterminate : Verdict::Yes);
    return rep;
}

namespace {

// normal/acting coordinate split of an element of N x| H
std::pair<GroupElement, GroupElement> split_element(const GroupSpec& G, const GroupElement& g) {
    const int dn = G.left()->dim();
    GroupElement a(std::vector<Coord>(g.coords.begin(), g.coords.begin() + dn));
    GroupElement b(std::vector<Coord>(g.coords.begin() + dn, g.coords.end()));
    return {std::move(a), std::move(b)};
}

GroupElement apply_action(const GroupSpec& G, const GroupElement& h, const GroupElement& n) {
    if (G.kind() == GroupKind::SemidirectProduct) return G.act(h, n);
    return n; // direct product: trivial action
}

} // namespace

SdpData SdpData::heisenberg_example(int n) {
    SdpData d;
    auto N = GroupSpec::free_abelian(2 * n);
    auto H = GroupSpec::free_abelian(1);
    d.G = GroupSpec::semidirect_product(N, H, ActionRule::heisenberg_shear());
    d.normal = FolnerFamily(N, "sqrt_box", ojson{{"family", "sqrt_box"}, {"m", 2 * n}},
                            [N, n](long l) {
                                return FiniteSubset(N, box_elements(2 * n, isqrt_floor(l)));
                            });
    d.normal.contains = [](long l, const GroupElement& g) {
        return max_abs(g) <= isqrt_floor(l);
    };
    d.acting = FolnerFamily(H, "sqrt_box", ojson{{"family", "sqrt_box"}, {"m", 1}}, [H](long l) {
        return FiniteSubset(H, box_elements(1, isqrt_floor(l)));
    });
    d.acting.contains = [](long l, const GroupElement& g) {
        return max_abs(g) <= isqrt_floor(l);
    };
    d.target = FolnerFamily::zm_box(2 * n);
    // Exact floor form of the radius sqrt(j) + sqrt(ji) needed to absorb the
    // sheared box; indexes the unit-radius target family.
    d.xi = [](long i, long j) {
        return static_cast<long>(isqrt_floor(j) * (1 + isqrt_floor(i)));
    };
    d.xi_name = "isqrt(j)*(1+isqrt(i))";
    d.xi_inferred = false;
    d.M = 2;
    d.eps = Rational(1, 2);
    d.K = 9;
    // generators, the center direction, and one composite element
    d.test_elements = {GroupElement(std::vector<Coord>(static_cast<std::size_t>(2 * n + 1), 0))};
    d.test_elements.back().coords[0] = 1; // central direction (a_1)
    GroupElement u(std::vector<Coord>(static_cast<std::size_t>(2 * n + 1), 0));
    u.coords[static_cast<std::size_t>(n)] = 1; // sheared direction (b_1)
    GroupElement t(std::vector<Coord>(static_cast<std::size_t>(2 * n + 1), 0));
    t.coords[static_cast<std::size_t>(2 * n)] = 1; // acting generator
    GroupElement c(std::vector<Coord>(static_cast<std::size_t>(2 * n + 1), 0));
    c.coords[0] = 2;
    c.coords[static_cast<std::size_t>(n)] = -1;
    c.coords[static_cast<std::size_t>(2 * n)] = 1;
    d.test_elements.push_back(std::move(u));
    d.test_elements.push_back(std::move(t));
    d.test_elements.push_back(std::move(c));
    return d;
}

SdpData SdpData::trivial_product_example() {
    SdpData d;
    auto N = GroupSpec::free_abelian(1);
    auto H = GroupSpec::free_abelian(1);
    d.G = GroupSpec::semidirect_product(N, H, ActionRule::trivial());
    d.normal = FolnerFamily::zm_box(1);
    d.acting = FolnerFamily::zm_box(1);
    d.target = FolnerFamily::zm_box(1);
    d.xi = [](long /*i*/, long j) { return j; };
    d.xi_name = "j";
    d.xi_inferred = false;
    d.M = 1;
    d.eps = Rational(1, 2);
    d.K = 4;
    d.test_elements = {GroupElement{1, 0}, GroupElement{0, 1}, GroupElement{2, -1}};
    return d;
}

ojson SdpReport::to_json() const {
    ojson j;
    j["hypothesis1_containment"] = hyp1_containment;
    j["hypothesis1_xi_clause"] = hyp1_xi_clause;
    j["hypothesis1_certifying"] = hyp1_certifying;
    j["hypothesis2"] = hyp2;
    j["hypothesis3"] = hyp3;
    j["scale_cap"] = scale_cap;
    j["all_pass"] = all_pass;
    ojson ces = ojson::array();
    for (const auto& c : counterexamples) {
        ojson row;
        row["clause"] = c.clause;
        row["l1"] = c.l1;
        row["l2"] = c.l2;
        if (c.x) row["x"] = c.x->coords;
        if (c.b) row["b"] = c.b->coords;
        if (!c.detail.empty()) row["detail"] = c.detail;
        ces.push_back(std::move(row));
    }
    j["counterexamples"] = std::move(ces);
    return j;
}

SdpReport check_sdp_hypotheses(const SdpData& data, long scale_cap) {
    if (scale_cap < 1) throw precondition_error("check_sdp_hypotheses: scale cap >= 1");
    SdpReport rep;
    rep.scale_cap = scale_cap;
    const auto& G = *data.G;
    const auto& Nspec = *G.left();

    // (1) image containment alpha_{H_i}(N_j) in T_{xi(i,j)} and xi(i,i) <= i*M
    rep.hyp1_containment = true;
    rep.hyp1_xi_clause = true;
    rep.hyp1_certifying = !data.xi_inferred;
    for (long i = 1; i <= scale_cap && rep.hyp1_containment; ++i) {
        const auto Hi = data.acting.at(i);
        for (long j = 1; j <= scale_cap && rep.hyp1_containment; ++j) {
            const auto Nj = data.normal.at(j);
            const long xij = data.xi(i, j);
            std::optional<FiniteSubset> Txi;
            if (!data.target.contains) Txi = data.target.at(xij);
            for (const auto& h : Hi) {
                for (const auto& nelem : Nj) {
                    const auto img = apply_action(G, h, nelem);
                    const bool in = data.target.contains ? data.target.contains(xij, img)
                                                         : Txi->contains(img);
                    if (!in) {
                        rep.hyp1_containment = false;
                        rep.counterexamples.push_back(
                            {"hypothesis1_containment", i, j, img, h,
                             "image escapes target index " + std::to_string(xij)});
                        break;
                    }
                }
                if (!rep.hyp1_containment) break;
            }
        }
    }
    for (long i = 1; i <= scale_cap; ++i) {
        if (data.xi(i, i) > i * data.M) {
            rep.hyp1_xi_clause = false;
            rep.counterexamples.push_back({"hypothesis1_xi", i, i, std::nullopt, std::nullopt,
                                           "xi(i,i) = " + std::to_string(data.xi(i, i)) + " > " +
                                               std::to_string(i * data.M)});
            break;
        }
    }

    // (2) |a alpha_b(N_l) n N_l| > (1-eps) |N_l| for all tested l >= K
    rep.hyp2 = true;
    for (const auto& g : data.test_elements) {
        auto [a, b] = split_element(G, g);
        for (long l = std::max(1L, data.K); l <= scale_cap && rep.hyp2; ++l) {
            const auto Nl = data.normal.at(l);
            std::vector<GroupElement> moved;
            moved.reserve(Nl.size());
            for (const auto& x : Nl) moved.push_back(Nspec.multiply(a, apply_action(G, b, x)));
            FiniteSubset S(G.left(), std::move(moved));
            const auto common = intersection_size(S, Nl);
            const Rational frac(static_cast<long long>(common),
                                static_cast<long long>(Nl.size()));
            if (!(frac > Rational(1) - data.eps)) {
                rep.hyp2 = false;
                rep.counterexamples.push_back({"hypothesis2", l, 0, std::nullopt, g,
                                               "density " + rational_str(frac) + " at l = " +
                                                   std::to_string(l)});
            }
        }
    }

    // (3) N_{l1} x meets alpha_b(N_{l2}) for every x in N_{l1+l2}, b in H_{l1}
    rep.hyp3 = true;
    for (long l1 = 1; l1 <= scale_cap && rep.hyp3; ++l1) {
        const auto N1 = data.normal.at(l1);
        const auto H1 = data.acting.at(l1);
        for (long l2 = 1; l2 <= scale_cap && rep.hyp3; ++l2) {
            const auto N2 = data.normal.at(l2);
            const auto N12 = data.normal.at(l1 + l2);
            for (const auto& b : H1) {
                std::unordered_set<GroupElement, ElemHash> image;
                image.reserve(N2.size() * 2);
                for (const auto& y : N2) image.insert(apply_action(G, b, y));
                for (const auto& x : N12) {
                    bool meet = false;
                    for (const auto& nelem : N1) {
                        if (image.count(Nspec.multiply(nelem, x))) {
                            meet = true;
                            break;
                        }
                    }
                    if (!meet) {
                        rep.hyp3 = false;
                        rep.counterexamples.push_back({"hypothesis3", l1, l2, x, b, ""});
                        break;
                    }
                }
                if (!rep.hyp3) break;
            }
        }
    }

    rep.all_pass = rep.hyp1_containment && rep.hyp1_xi_clause && rep.hyp2 && rep.hyp3;
    return rep;
}

} // namespace folnerlab
