#include "folnerlab/cover.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <queue>
#include <unordered_map>

namespace folnerlab {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        case Verdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

namespace {

constexpr std::size_t kExactUniverseCap = 4096;
constexpr std::size_t kExactCandidateCap = 60000;
constexpr std::size_t kDominanceCap = 1400;
constexpr std::size_t kGridCellCap = 16'000'000;

// Contiguous coordinate storage for hot loops.
struct Flat {
    int dim = 0;
    std::vector<Coord> data;

    Flat() = default;
    explicit Flat(int d) : dim(d) {}
    std::size_t size() const { return dim ? data.size() / static_cast<std::size_t>(dim) : 0; }
    std::span<const Coord> at(std::size_t i) const {
        return {data.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
    void push(std::span<const Coord> c) { data.insert(data.end(), c.begin(), c.end()); }

    static Flat from(const FiniteSubset& s, int dim) {
        Flat f(dim);
        f.data.reserve(s.size() * static_cast<std::size_t>(dim));
        for (const auto& e : s) f.push(e.coords);
        return f;
    }
    GroupElement elem(std::size_t i) const {
        auto sp = at(i);
        return GroupElement(std::vector<Coord>(sp.begin(), sp.end()));
    }
};

// Dense lookup grid over a coordinate bounding box. Cell order equals the
// lexicographic order of coordinate vectors, so iterating cells yields the
// canonical enumeration.
struct BoxGrid {
    int dim = 0;
    std::vector<Coord> lo, hi;
    std::vector<std::size_t> stride;
    std::size_t volume = 0;
    std::vector<std::int32_t> cells;

    static std::optional<BoxGrid> make(std::vector<Coord> lo, std::vector<Coord> hi,
                                       std::size_t max_cells) {
        BoxGrid g;
        g.dim = static_cast<int>(lo.size());
        g.lo = std::move(lo);
        g.hi = std::move(hi);
        std::size_t vol = 1;
        for (std::size_t i = 0; i < static_cast<std::size_t>(g.dim); ++i) {
            const Coord w = g.hi[i] - g.lo[i] + 1;
            if (w <= 0) return std::nullopt;
            if (static_cast<std::size_t>(w) > max_cells / vol) return std::nullopt;
            vol *= static_cast<std::size_t>(w);
        }
        g.stride.assign(static_cast<std::size_t>(g.dim), 1);
        for (int i = g.dim - 2; i >= 0; --i) {
            const auto u = static_cast<std::size_t>(i);
            g.stride[u] = g.stride[u + 1] * static_cast<std::size_t>(g.hi[u + 1] - g.lo[u + 1] + 1);
        }
        g.volume = vol;
        g.cells.assign(vol, -1);
        return g;
    }

    std::int64_t index(std::span<const Coord> c) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < static_cast<std::size_t>(dim); ++i) {
            if (c[i] < lo[i] || c[i] > hi[i]) return -1;
            idx += static_cast<std::size_t>(c[i] - lo[i]) * stride[i];
        }
        return static_cast<std::int64_t>(idx);
    }
    void coords_of(std::size_t idx, std::span<Coord> out) const {
        for (std::size_t i = 0; i < static_cast<std::size_t>(dim); ++i) {
            out[i] = lo[i] + static_cast<Coord>(idx / stride[i]);
            idx %= stride[i];
        }
    }
};

// Indexed element set: canonical flat list plus rank lookup.
struct IndexedSet {
    Flat elems;
    std::optional<BoxGrid> grid;
    std::unordered_map<GroupElement, std::int32_t, ElemHash> lookup;

    std::int32_t rank(std::span<const Coord> c) const {
        if (grid) {
            const auto i = grid->index(c);
            return i < 0 ? -1 : grid->cells[static_cast<std::size_t>(i)];
        }
        auto it = lookup.find(GroupElement(std::vector<Coord>(c.begin(), c.end())));
        return it == lookup.end() ? -1 : it->second;
    }
};

// Deduplicated {x*y : x in X, y in Y} in canonical order.
IndexedSet flat_product(const GroupSpec& spec, const Flat& X, const Flat& Y) {
    const int dim = X.dim;
    IndexedSet out;
    out.elems = Flat(dim);
    std::vector<Coord> tmp(static_cast<std::size_t>(dim));
    std::vector<Coord> lo(static_cast<std::size_t>(dim)), hi(static_cast<std::size_t>(dim));
    bool first = true;
    for (std::size_t i = 0; i < X.size(); ++i) {
        for (std::size_t j = 0; j < Y.size(); ++j) {
            spec.multiply_raw(X.at(i), Y.at(j), tmp);
            if (first) {
                lo.assign(tmp.begin(), tmp.end());
                hi.assign(tmp.begin(), tmp.end());
                first = false;
            } else {
                for (std::size_t d = 0; d < static_cast<std::size_t>(dim); ++d) {
                    lo[d] = std::min(lo[d], tmp[d]);
                    hi[d] = std::max(hi[d], tmp[d]);
                }
            }
        }
    }
    auto grid = BoxGrid::make(lo, hi, kGridCellCap);
    if (grid) {
        auto& g = *grid;
        for (std::size_t i = 0; i < X.size(); ++i) {
            for (std::size_t j = 0; j < Y.size(); ++j) {
                spec.multiply_raw(X.at(i), Y.at(j), tmp);
                g.cells[static_cast<std::size_t>(g.index(tmp))] = 0;
            }
        }
        std::int32_t next = 0;
        std::vector<Coord> c(static_cast<std::size_t>(dim));
        for (std::size_t idx = 0; idx < g.volume; ++idx) {
            if (g.cells[idx] == 0) {
                g.cells[idx] = next++;
                g.coords_of(idx, c);
                out.elems.push(c);
            }
        }
        out.grid = std::move(grid);
    } else {
        if (X.size() * Y.size() > 8'000'000)
            throw budget_exceeded_error("covering: product set too spread out to index");
        std::vector<GroupElement> all;
        all.reserve(X.size() * Y.size());
        for (std::size_t i = 0; i < X.size(); ++i)
            for (std::size_t j = 0; j < Y.size(); ++j) {
                spec.multiply_raw(X.at(i), Y.at(j), tmp);
                all.emplace_back(std::vector<Coord>(tmp.begin(), tmp.end()));
            }
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        for (std::size_t r = 0; r < all.size(); ++r) {
            out.elems.push(all[r].coords);
            out.lookup.emplace(all[r], static_cast<std::int32_t>(r));
        }
    }
    return out;
}

IndexedSet index_subset(const FiniteSubset& s, int dim) {
    IndexedSet out;
    out.elems = Flat::from(s, dim);
    if (!s.empty()) {
        std::vector<Coord> lo(s.elements().front().coords), hi(lo);
        for (const auto& e : s)
            for (std::size_t d = 0; d < static_cast<std::size_t>(dim); ++d) {
                lo[d] = std::min(lo[d], e.coords[d]);
                hi[d] = std::max(hi[d], e.coords[d]);
            }
        auto grid = BoxGrid::make(lo, hi, kGridCellCap);
        if (grid) {
            for (std::size_t r = 0; r < s.size(); ++r)
                grid->cells[static_cast<std::size_t>(grid->index(out.elems.at(r)))] =
                    static_cast<std::int32_t>(r);
            out.grid = std::move(grid);
            return out;
        }
    }
    for (std::size_t r = 0; r < s.size(); ++r)
        out.lookup.emplace(s.elements()[r], static_cast<std::int32_t>(r));
    return out;
}

struct CoverInstance {
    GroupPtr spec;
    int dim = 0;
    FiniteSubset A;
    FiniteSubset universe_set;
    Flat flatA;
    Flat flatAinv;
    IndexedSet universe;
    IndexedSet candidates;
};

CoverInstance build_instance(const FiniteSubset& A, bool strong, const CoverBudget& budget) {
    if (!A.contains(A.owner()->identity()))
        throw precondition_error("covering: the set must contain the identity");
    CoverInstance inst;
    inst.spec = A.owner();
    inst.dim = inst.spec->dim();
    inst.A = A;
    inst.flatA = Flat::from(A, inst.dim);
    inst.flatAinv = Flat::from(set_inverse(A), inst.dim);

    inst.universe = flat_product(*inst.spec, inst.flatAinv, inst.flatA);
    if (inst.universe.elems.size() > budget.max_universe)
        throw budget_exceeded_error("covering: |A^{-1}A| = " +
                                    std::to_string(inst.universe.elems.size()) +
                                    " exceeds max_universe");
    {
        std::vector<GroupElement> u;
        u.reserve(inst.universe.elems.size());
        for (std::size_t i = 0; i < inst.universe.elems.size(); ++i)
            u.push_back(inst.universe.elems.elem(i));
        inst.universe_set = FiniteSubset(inst.spec, std::move(u));
    }

    if (strong)
        inst.candidates = index_subset(A, inst.dim);
    else
        inst.candidates = flat_product(*inst.spec, inst.universe.elems, inst.flatAinv);
    return inst;
}

template <typename Uncovered>
long long current_coverage(const CoverInstance& inst, std::size_t cand, Uncovered&& uncovered) {
    long long n = 0;
    std::vector<Coord> tmp(static_cast<std::size_t>(inst.dim));
    for (std::size_t a = 0; a < inst.flatA.size(); ++a) {
        inst.spec->multiply_raw(inst.candidates.elems.at(cand), inst.flatA.at(a), tmp);
        const auto r = inst.universe.rank(tmp);
        if (r >= 0 && uncovered(static_cast<std::size_t>(r))) ++n;
    }
    return n;
}

struct GreedyResult {
    bool complete = false;
    std::vector<std::int32_t> picks;
};

GreedyResult greedy_cover(const CoverInstance& inst) {
    const std::size_t nU = inst.universe.elems.size();
    const std::size_t nC = inst.candidates.elems.size();
    std::vector<char> covered(nU, 0);
    std::size_t unc = nU;

    // initial counts: the translate u * a^{-1} covers u
    std::vector<long long> counts(nC, 0);
    {
        std::vector<Coord> tmp(static_cast<std::size_t>(inst.dim));
        for (std::size_t u = 0; u < nU; ++u)
            for (std::size_t a = 0; a < inst.flatAinv.size(); ++a) {
                inst.spec->multiply_raw(inst.universe.elems.at(u), inst.flatAinv.at(a), tmp);
                const auto r = inst.candidates.rank(tmp);
                if (r >= 0) counts[static_cast<std::size_t>(r)]++;
            }
    }

    struct Entry {
        long long count;
        std::int32_t rank;
    };
    auto less = [](const Entry& x, const Entry& y) {
        if (x.count != y.count) return x.count < y.count;
        return x.rank > y.rank; // smaller rank wins ties
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(less)> pq(less);
    for (std::size_t c = 0; c < nC; ++c)
        if (counts[c] > 0) pq.push({counts[c], static_cast<std::int32_t>(c)});

    GreedyResult res;
    std::vector<Coord> tmp(static_cast<std::size_t>(inst.dim));
    auto unc_pred = [&](std::size_t r) { return covered[r] == 0; };
    while (unc > 0) {
        if (pq.empty()) return res;
        Entry top = pq.top();
        pq.pop();
        const long long cur = current_coverage(inst, static_cast<std::size_t>(top.rank), unc_pred);
        if (cur == 0) continue;
        if (!pq.empty() && less(Entry{cur, top.rank}, pq.top())) {
            pq.push({cur, top.rank});
            continue;
        }
        for (std::size_t a = 0; a < inst.flatA.size(); ++a) {
            inst.spec->multiply_raw(inst.candidates.elems.at(static_cast<std::size_t>(top.rank)),
                                    inst.flatA.at(a), tmp);
            const auto r = inst.universe.rank(tmp);
            if (r >= 0 && !covered[static_cast<std::size_t>(r)]) {
                covered[static_cast<std::size_t>(r)] = 1;
                --unc;
            }
        }
        res.picks.push_back(top.rank);
    }
    res.complete = true;
    return res;
}

struct ExactResult {
    bool attempted = false;
    bool completed = false;
    bool cover_exists = true;
    std::vector<std::int32_t> best;
};

ExactResult exact_cover(const CoverInstance& inst, const GreedyResult& greedy,
                        const CoverBudget& budget) {
    ExactResult res;
    const std::size_t nU = inst.universe.elems.size();
    const std::size_t nC = inst.candidates.elems.size();
    if (nU > kExactUniverseCap || nC > kExactCandidateCap) return res;
    res.attempted = true;

    const std::size_t W = (nU + 63) / 64;
    std::vector<std::vector<std::uint64_t>> masks;
    std::vector<std::int32_t> kept;
    {
        std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
        std::vector<Coord> tmp(static_cast<std::size_t>(inst.dim));
        for (std::size_t c = 0; c < nC; ++c) {
            std::vector<std::uint64_t> m(W, 0);
            bool any = false;
            for (std::size_t a = 0; a < inst.flatA.size(); ++a) {
                inst.spec->multiply_raw(inst.candidates.elems.at(c), inst.flatA.at(a), tmp);
                const auto r = inst.universe.rank(tmp);
                if (r >= 0) {
                    m[static_cast<std::size_t>(r) / 64] |=
                        1ull << (static_cast<std::size_t>(r) % 64);
                    any = true;
                }
            }
            if (!any) continue;
            std::uint64_t h = 1469598103934665603ull;
            for (auto w : m) h = (h ^ w) * 1099511628211ull;
            auto& bucket = buckets[h];
            bool dup = false;
            for (auto k : bucket)
                if (masks[k] == m) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            bucket.push_back(masks.size());
            masks.push_back(std::move(m));
            kept.push_back(static_cast<std::int32_t>(c));
        }
    }

    if (masks.size() <= kDominanceCap) {
        const std::size_t n = masks.size();
        std::vector<char> dominated(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n && !dominated[i]; ++j) {
                if (i == j || dominated[j]) continue;
                bool sub = true;
                for (std::size_t w = 0; w < W; ++w)
                    if (masks[i][w] & ~masks[j][w]) {
                        sub = false;
                        break;
                    }
                if (sub) dominated[i] = 1; // strict subset: masks are deduplicated
            }
        }
        std::vector<std::vector<std::uint64_t>> m2;
        std::vector<std::int32_t> k2;
        for (std::size_t i = 0; i < n; ++i)
            if (!dominated[i]) {
                m2.push_back(std::move(masks[i]));
                k2.push_back(kept[i]);
            }
        masks = std::move(m2);
        kept = std::move(k2);
    }

    std::vector<std::vector<std::int32_t>> element_covers(nU);
    for (std::size_t p = 0; p < masks.size(); ++p)
        for (std::size_t w = 0; w < W; ++w) {
            std::uint64_t word = masks[p][w];
            while (word) {
                const auto b = static_cast<std::size_t>(__builtin_ctzll(word));
                word &= word - 1;
                element_covers[w * 64 + b].push_back(static_cast<std::int32_t>(p));
            }
        }
    for (std::size_t u = 0; u < nU; ++u)
        if (element_covers[u].empty()) {
            res.cover_exists = false;
            res.completed = true;
            return res;
        }

    std::size_t global_max = 1;
    for (const auto& m : masks) {
        std::size_t pc = 0;
        for (auto w : m) pc += static_cast<std::size_t>(__builtin_popcountll(w));
        global_max = std::max(global_max, pc);
    }

    std::size_t bestL = greedy.complete ? greedy.picks.size() : nU + 1;
    std::vector<std::int32_t> bestRanks(greedy.picks.begin(), greedy.picks.end());
    std::uint64_t nodes = 0;
    bool aborted = false;

    std::vector<std::uint64_t> uncovered(W, ~0ull);
    if (nU % 64) uncovered[W - 1] = (1ull << (nU % 64)) - 1;
    std::vector<std::int32_t> chosen;

    const auto t0 = std::chrono::steady_clock::now();
    auto out_of_budget = [&]() {
        if (nodes > budget.max_nodes) return true;
        if (budget.time_cap_seconds > 0 && (nodes % 16384) == 0) {
            const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
            if (dt.count() > budget.time_cap_seconds) return true;
        }
        return false;
    };

    std::function<void()> rec = [&]() {
        if (aborted) return;
        ++nodes;
        if (out_of_budget()) {
            aborted = true;
            return;
        }
        std::size_t unc_cnt = 0;
        for (auto w : uncovered) unc_cnt += static_cast<std::size_t>(__builtin_popcountll(w));
        if (unc_cnt == 0) {
            if (chosen.size() < bestL) {
                bestL = chosen.size();
                bestRanks.clear();
                for (auto p : chosen) bestRanks.push_back(kept[static_cast<std::size_t>(p)]);
            }
            return;
        }
        if (chosen.size() + (unc_cnt + global_max - 1) / global_max >= bestL) return;

        std::size_t pick = nU;
        std::size_t pick_deg = SIZE_MAX;
        for (std::size_t w = 0; w < W; ++w) {
            std::uint64_t word = uncovered[w];
            while (word) {
                const auto b = static_cast<std::size_t>(__builtin_ctzll(word));
                word &= word - 1;
                const std::size_t u = w * 64 + b;
                if (element_covers[u].size() < pick_deg) {
                    pick_deg = element_covers[u].size();
                    pick = u;
                }
            }
        }

        struct Br {
            long long cov;
            std::int32_t pos;
        };
        std::vector<Br> branches;
        branches.reserve(element_covers[pick].size());
        for (auto p : element_covers[pick]) {
            long long cov = 0;
            for (std::size_t w = 0; w < W; ++w)
                cov += __builtin_popcountll(masks[static_cast<std::size_t>(p)][w] & uncovered[w]);
            if (cov > 0) branches.push_back({cov, p});
        }
        std::sort(branches.begin(), branches.end(), [](const Br& x, const Br& y) {
            if (x.cov != y.cov) return x.cov > y.cov;
            return x.pos < y.pos;
        });

        std::vector<std::uint64_t> saved(W);
        for (const auto& br : branches) {
            if (aborted) return;
            saved = uncovered;
            for (std::size_t w = 0; w < W; ++w)
                uncovered[w] &= ~masks[static_cast<std::size_t>(br.pos)][w];
            chosen.push_back(br.pos);
            rec();
            chosen.pop_back();
            uncovered = saved;
        }
    };
    rec();

    res.completed = !aborted;
    res.best = std::move(bestRanks);
    return res;
}

CoverWitness make_witness(const CoverInstance& inst, const std::vector<std::int32_t>& picks,
                          CoverMode mode, bool minimal) {
    CoverWitness w;
    w.L = static_cast<long long>(picks.size());
    for (auto r : picks)
        w.translates.push_back(inst.candidates.elems.elem(static_cast<std::size_t>(r)));
    std::sort(w.translates.begin(), w.translates.end());
    w.universe = inst.universe_set;
    w.mode = mode;
    w.minimal = minimal;

    std::vector<char> covered(inst.universe.elems.size(), 0);
    std::vector<Coord> tmp(static_cast<std::size_t>(inst.dim));
    for (const auto& g : w.translates) {
        for (std::size_t a = 0; a < inst.flatA.size(); ++a) {
            inst.spec->multiply_raw(g.coords, inst.flatA.at(a), tmp);
            const auto r = inst.universe.rank(tmp);
            if (r >= 0) covered[static_cast<std::size_t>(r)] = 1;
        }
    }
    for (char c : covered)
        if (!c) throw error("internal: cover witness failed re-verification");
    w.verified = true;
    return w;
}

ApproxResult approx_impl(const FiniteSubset& A, long long L, const CoverBudget& budget,
                         bool strong) {
    if (L < 1) throw precondition_error("is_approximate: L must be >= 1");
    auto inst = build_instance(A, strong, budget);
    auto greedy = greedy_cover(inst);
    ApproxResult res;
    if (greedy.complete && static_cast<long long>(greedy.picks.size()) <= L) {
        res.verdict = Verdict::Yes;
        res.witness = make_witness(inst, greedy.picks, CoverMode::Greedy, false);
        return res;
    }
    auto exact = exact_cover(inst, greedy, budget);
    if (exact.completed && !exact.cover_exists) {
        res.verdict = Verdict::No; // the full candidate union misses the universe
        return res;
    }
    if (exact.completed) {
        if (static_cast<long long>(exact.best.size()) <= L) {
            res.verdict = Verdict::Yes;
            res.witness = make_witness(inst, exact.best, CoverMode::Exact, true);
        } else {
            res.verdict = Verdict::No;
        }
        return res;
    }
    res.verdict = Verdict::Indeterminate;
    return res;
}

} // namespace

nlohmann::json CoverWitness::to_json() const {
    nlohmann::json j;
    j["L"] = L;
    j["mode"] = mode == CoverMode::Exact ? "exact" : "greedy";
    j["minimal"] = minimal;
    nlohmann::json t = nlohmann::json::array();
    for (const auto& g : translates) t.push_back(g.coords);
    j["translates"] = t;
    j["universe_size"] = universe.size();
    j["verified"] = verified;
    return j;
}

FiniteSubset candidate_translates(const FiniteSubset& A) {
    if (!A.contains(A.owner()->identity()))
        throw precondition_error("candidate_translates: the set must contain the identity");
    return set_product(set_product(set_inverse(A), A), set_inverse(A));
}

CoverWitness covering_number(const FiniteSubset& A, const CoverBudget& budget) {
    auto inst = build_instance(A, /*strong=*/false, budget);
    auto greedy = greedy_cover(inst);
    if (!greedy.complete) throw error("internal: full candidate set failed to cover A^{-1}A");
    auto exact = exact_cover(inst, greedy, budget);
    if (exact.completed) return make_witness(inst, exact.best, CoverMode::Exact, true);
    if (exact.attempted && exact.best.size() < greedy.picks.size())
        return make_witness(inst, exact.best, CoverMode::Greedy, false);
    return make_witness(inst, greedy.picks, CoverMode::Greedy, false);
}

ApproxResult is_approximate(const FiniteSubset& A, long long L, const CoverBudget& budget) {
    return approx_impl(A, L, budget, false);
}

ApproxResult is_strongly_approximate(const FiniteSubset& A, long long L,
                                     const CoverBudget& budget) {
    return approx_impl(A, L, budget, true);
}

nlohmann::json SymmetrizationReport::to_json() const {
    nlohmann::json j;
    j["L_A"] = L_A;
    j["L_Ainv"] = L_Ainv;
    j["L_B"] = L_B;
    j["bound"] = bound;
    j["holds"] = holds;
    j["certified"] = certified;
    return j;
}

SymmetrizationReport symmetrization_bound_check(const FiniteSubset& A, const CoverBudget& budget) {
    SymmetrizationReport rep;
    rep.witness_A = covering_number(A, budget);
    rep.witness_Ainv = covering_number(set_inverse(A), budget);
    rep.witness_B = covering_number(symmetrize(A), budget);
    rep.L_A = rep.witness_A.L;
    rep.L_Ainv = rep.witness_Ainv.L;
    rep.L_B = rep.witness_B.L;
    rep.bound = 2 * rep.L_A * rep.L_Ainv + rep.L_A + rep.L_Ainv;
    rep.holds = rep.L_B <= rep.bound;
    rep.certified = rep.witness_A.mode == CoverMode::Exact &&
                    rep.witness_Ainv.mode == CoverMode::Exact &&
                    rep.witness_B.mode == CoverMode::Exact;
    return rep;
}

} // namespace folnerlab
