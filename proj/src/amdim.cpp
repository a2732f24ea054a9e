#include "folnerlab/amdim.hpp"

#include <algorithm>

namespace folnerlab {

PsiPartition indicator_partition(const CastleReport& castle, const OrbitWindow& w) {
    const auto& spec = *w.spec;
    PsiPartition psi;
    for (std::size_t ti = 0; ti < castle.towers.size(); ++ti) {
        for (const auto& gamma : castle.F_n) {
            for (const auto& b : castle.towers[ti].base) {
                auto x = spec.multiply(gamma, b);
                psi.assignment.try_emplace(std::move(x),
                                           std::make_pair(static_cast<int>(ti), gamma));
            }
        }
    }
    psi.covered_points = psi.assignment.size();
    for (const auto& x : w.ball_core)
        if (!psi.assignment.count(x))
            throw precondition_error("indicator_partition: castle leaves a core point uncovered");
    return psi;
}

MuSystem mu_from_castle(const CastleReport& castle, const OrbitWindow& w) {
    if (!castle.strong)
        throw precondition_error(
            "mu_from_castle: a strong castle is required (orthogonality needs bases "
            "separated against F_N with F_n^2 inside F_N)");
    if (!castle.all_disjoint)
        throw precondition_error("mu_from_castle: castle disjointness verdicts failed");
    const auto& spec = *w.spec;
    auto psi = indicator_partition(castle, w);

    MuSystem mu;
    mu.denom = static_cast<long long>(castle.F_n.size());
    mu.tower_count = static_cast<int>(castle.towers.size());
    mu.F_n = castle.F_n;

    std::vector<GroupElement> hinv;
    hinv.reserve(castle.F_n.size());
    for (const auto& h : castle.F_n) hinv.push_back(spec.inverse(h));

    std::vector<GroupElement> core_pts;
    for (const auto& x : w.ball_R) {
        bool in_window = true, covered = true;
        std::map<std::pair<int, GroupElement>, long long> acc;
        for (std::size_t hi = 0; hi < hinv.size(); ++hi) {
            auto y = spec.multiply(hinv[hi], x);
            if (!w.ball_R.contains(y)) {
                in_window = false;
                break;
            }
            auto it = psi.assignment.find(y);
            if (it == psi.assignment.end()) {
                covered = false;
                break;
            }
            const auto& [tower, gamma] = it->second;
            // this h-term feeds mu^{(tower)}_{h gamma}
            auto g = spec.multiply(castle.F_n.elements()[hi], gamma);
            acc[{tower, std::move(g)}] += 1;
        }
        if (!in_window) {
            ++mu.excluded_window;
            continue;
        }
        if (!covered) {
            ++mu.excluded_uncovered;
            continue;
        }
        std::vector<MuSystem::Entry> entries;
        entries.reserve(acc.size());
        for (auto& [key, count] : acc) entries.push_back({key.first, key.second, count});
        mu.values.emplace(x, std::move(entries));
        core_pts.push_back(x);
    }
    mu.verified_core = FiniteSubset(w.spec, std::move(core_pts));
    return mu;
}

bool check_partition_of_unity(const MuSystem& mu) {
    for (const auto& [x, entries] : mu.values) {
        long long total = 0;
        for (const auto& e : entries) total += e.count;
        if (total != mu.denom) return false;
    }
    return true;
}

bool check_orthogonality(const MuSystem& mu) {
    for (const auto& [x, entries] : mu.values) {
        // entries are grouped by (i, g); two distinct g for one i break (b)
        std::vector<int> seen;
        for (const auto& e : entries) {
            if (e.count == 0) continue;
            if (std::find(seen.begin(), seen.end(), e.i) != seen.end()) return false;
            seen.push_back(e.i);
        }
    }
    return true;
}

ojson EquivarianceReport::to_json() const {
    ojson j;
    j["g"] = g.coords;
    j["max_defect"] = rational_str(max_defect);
    j["sum_defect"] = rational_str(sum_defect);
    j["folner_bound"] = rational_str(folner_bound);
    j["within_bound"] = within_bound;
    j["core_size"] = core_size;
    return j;
}

EquivarianceReport equivariance_defect(const MuSystem& mu, const GroupElement& g,
                                       const OrbitWindow& w) {
    const auto& spec = *w.spec;
    EquivarianceReport rep;
    rep.g = g;
    rep.folner_bound = folner_defect(mu.F_n, g);

    const auto ginv = spec.inverse(g);
    long long max_num = 0; // over denominator mu.denom
    long long max_sum = 0;

    for (const auto& [x, at_x] : mu.values) {
        auto it = mu.values.find(spec.multiply(ginv, x));
        if (it == mu.values.end()) continue; // g^{-1}x outside the verified core
        ++rep.core_size;
        const auto& at_gx = it->second; // mu at g^{-1}x

        // per (i, g'): c1 = mu^{(i)}_{g'}(g^{-1}x), c2 = mu^{(i)}_{g g'}(x)
        std::map<std::pair<int, GroupElement>, std::pair<long long, long long>> diff;
        for (const auto& e : at_gx) diff[{e.i, e.g}].first = e.count;
        for (const auto& e : at_x) diff[{e.i, spec.multiply(ginv, e.g)}].second = e.count;

        std::map<int, long long> per_tower_sum;
        for (const auto& [key, cc] : diff) {
            const long long d = cc.first >= cc.second ? cc.first - cc.second : cc.second - cc.first;
            max_num = std::max(max_num, d);
            per_tower_sum[key.first] += d;
        }
        for (const auto& [i, s] : per_tower_sum) max_sum = std::max(max_sum, s);
    }

    rep.max_defect = Rational(max_num, mu.denom);
    rep.sum_defect = Rational(max_sum, mu.denom);
    rep.within_bound = rep.max_defect <= rep.folner_bound && rep.sum_defect <= rep.folner_bound;
    return rep;
}

} // namespace folnerlab
