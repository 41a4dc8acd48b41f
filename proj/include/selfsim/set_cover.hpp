#pragma once

/// Exact minimum-weight set cover. Laminar families (every two sets nested
/// or disjoint) are solved by dynamic programming over the containment
/// forest; other families by branch and bound with a per-element price bound.
/// Ties within 1e-12 relative weight prefer fewer sets, then the
/// lexicographically smallest list of set indices.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace selfsim {

class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const noexcept { return n_; }
    void set(std::size_t i) { w_[i / 64] |= (std::uint64_t{1} << (i % 64)); }
    void reset(std::size_t i) { w_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
    bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1u; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w_) c += static_cast<std::size_t>(__builtin_popcountll(x));
        return c;
    }
    bool none() const {
        return std::all_of(w_.begin(), w_.end(), [](std::uint64_t x) { return x == 0; });
    }
    bool intersects(const Bits& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }
    bool subset_of(const Bits& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }
    std::size_t count_and(const Bits& o) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < w_.size(); ++i) c += static_cast<std::size_t>(__builtin_popcountll(w_[i] & o.w_[i]));
        return c;
    }
    Bits& operator|=(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    Bits minus(const Bits& o) const {
        Bits r = *this;
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] &= ~o.w_[i];
        return r;
    }
    bool operator==(const Bits& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator<(const Bits& o) const { return w_ < o.w_; }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < w_.size(); ++i) {
            std::uint64_t x = w_[i];
            while (x) {
                const int b = __builtin_ctzll(x);
                f(i * 64 + static_cast<std::size_t>(b));
                x &= x - 1;
            }
        }
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct CoverInstance {
    std::size_t universe = 0;
    std::vector<Bits> sets;
    std::vector<double> weights;
};

struct CoverSolution {
    bool feasible = false;
    double weight = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> chosen;  // ascending set indices
    bool optimal = false;
    bool laminar = false;
    std::size_t nodes = 0;
};

namespace detail {

inline bool weight_less(double a, double b) { return a < b - 1e-12 * std::max(std::abs(a), std::abs(b)); }
inline bool weight_tie(double a, double b) { return !weight_less(a, b) && !weight_less(b, a); }

/// (weight, size, indices) order used for every tie-break.
inline bool cover_better(double w, const std::vector<std::size_t>& c, double bw, const std::vector<std::size_t>& bc) {
    if (weight_less(w, bw)) return true;
    if (!weight_tie(w, bw)) return false;
    if (c.size() != bc.size()) return c.size() < bc.size();
    return c < bc;
}

inline std::vector<std::size_t> sorted_union(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    return a;
}

}  // namespace detail

/// Sets with equal membership collapse to the one with the smallest
/// (weight, index); empty sets are dropped. Returns the kept indices.
inline std::vector<std::size_t> distinct_sets(const CoverInstance& inst) {
    std::vector<std::size_t> order(inst.sets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (!(inst.sets[a] == inst.sets[b])) return inst.sets[a] < inst.sets[b];
        if (inst.weights[a] != inst.weights[b]) return inst.weights[a] < inst.weights[b];
        return a < b;
    });
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (inst.sets[order[i]].none()) continue;
        if (i > 0 && inst.sets[order[i]] == inst.sets[order[i - 1]]) continue;
        kept.push_back(order[i]);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

namespace detail {

/// Parent of each set (smallest strict superset, or npos) if the family is
/// laminar. Sets are visited by decreasing size; every element remembers the
/// smallest visited set containing it, and a laminar set finds one common
/// owner among its elements.
inline std::optional<std::vector<std::size_t>> laminar_parents(const CoverInstance& inst,
                                                               const std::vector<std::size_t>& ids) {
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    const std::size_t m = ids.size();
    std::vector<std::size_t> card(m), order(m), parent(m, none);
    for (std::size_t i = 0; i < m; ++i) card[i] = inst.sets[ids[i]].count();
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return card[a] > card[b]; });
    std::vector<std::size_t> owner(inst.universe, none);
    for (std::size_t i : order) {
        bool first = true, ok = true;
        std::size_t common = none;
        inst.sets[ids[i]].for_each([&](std::size_t e) {
            if (first) common = owner[e], first = false;
            else if (owner[e] != common) ok = false;
        });
        if (!ok) return std::nullopt;
        parent[i] = common;
        inst.sets[ids[i]].for_each([&](std::size_t e) { owner[e] = i; });
    }
    return parent;
}

}  // namespace detail

inline bool is_laminar(const CoverInstance& inst, const std::vector<std::size_t>& ids) {
    return detail::laminar_parents(inst, ids).has_value();
}

namespace detail {

inline CoverSolution solve_laminar(const CoverInstance& inst, const std::vector<std::size_t>& ids) {
    CoverSolution out;
    out.laminar = true;
    const std::size_t m = ids.size();
    std::vector<std::size_t> card(m);
    for (std::size_t i = 0; i < m; ++i) card[i] = inst.sets[ids[i]].count();
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    const std::vector<std::size_t> parent = *laminar_parents(inst, ids);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return card[a] < card[b]; });
    std::vector<std::vector<std::size_t>> kids(m);
    for (std::size_t i = 0; i < m; ++i)
        if (parent[i] != none) kids[parent[i]].push_back(i);

    std::vector<double> cost(m);
    std::vector<std::vector<std::size_t>> pick(m);
    for (std::size_t i : order) {
        ++out.nodes;
        const std::vector<std::size_t> self{ids[i]};
        cost[i] = inst.weights[ids[i]];
        pick[i] = self;
        if (kids[i].empty()) continue;
        Bits u(inst.universe);
        double w = 0.0;
        std::vector<std::size_t> chosen;
        for (std::size_t c : kids[i]) {
            u |= inst.sets[ids[c]];
            w += cost[c];
            chosen = sorted_union(std::move(chosen), pick[c]);
        }
        if (!(u == inst.sets[ids[i]])) continue;
        if (cover_better(w, chosen, cost[i], pick[i])) {
            cost[i] = w;
            pick[i] = std::move(chosen);
        }
    }
    Bits covered(inst.universe);
    double total = 0.0;
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < m; ++i) {
        if (parent[i] != none) continue;
        covered |= inst.sets[ids[i]];
        total += cost[i];
        chosen = sorted_union(std::move(chosen), pick[i]);
    }
    if (covered.count() != inst.universe) return out;
    out.feasible = true;
    out.optimal = true;
    out.weight = total;
    out.chosen = std::move(chosen);
    return out;
}

inline CoverSolution solve_branch_and_bound(const CoverInstance& inst, const std::vector<std::size_t>& ids,
                                            std::size_t node_budget) {
    CoverSolution best;
    const std::size_t m = ids.size();
    std::vector<std::vector<std::size_t>> containing(inst.universe);
    for (std::size_t i = 0; i < m; ++i) inst.sets[ids[i]].for_each([&](std::size_t e) { containing[e].push_back(i); });
    for (const auto& c : containing)
        if (c.empty()) return best;

    // Greedy incumbent.
    {
        Bits uncovered(inst.universe);
        for (std::size_t e = 0; e < inst.universe; ++e) uncovered.set(e);
        std::vector<std::size_t> chosen;
        double w = 0.0;
        while (!uncovered.none()) {
            std::size_t arg = m;
            double score = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t gain = inst.sets[ids[i]].count_and(uncovered);
                if (gain == 0) continue;
                const double s = inst.weights[ids[i]] / static_cast<double>(gain);
                if (s < score) score = s, arg = i;
            }
            chosen.push_back(ids[arg]);
            w += inst.weights[ids[arg]];
            uncovered = uncovered.minus(inst.sets[ids[arg]]);
        }
        std::sort(chosen.begin(), chosen.end());
        best.feasible = true;
        best.weight = w;
        best.chosen = std::move(chosen);
    }

    bool exhausted = true;
    std::vector<std::size_t> chosen;
    std::vector<char> banned(m, 0);
    auto recurse = [&](auto&& self, const Bits& uncovered, double weight) -> void {
        if (best.nodes >= node_budget) {
            exhausted = false;
            return;
        }
        ++best.nodes;
        if (uncovered.none()) {
            std::vector<std::size_t> c = chosen;
            std::sort(c.begin(), c.end());
            if (detail::cover_better(weight, c, best.weight, best.chosen)) {
                best.weight = weight;
                best.chosen = std::move(c);
            }
            return;
        }
        std::vector<std::size_t> live(m, 0);
        for (std::size_t i = 0; i < m; ++i)
            if (!banned[i]) live[i] = inst.sets[ids[i]].count_and(uncovered);
        double bound = 0.0;
        std::size_t pivot = inst.universe, pivot_options = std::numeric_limits<std::size_t>::max();
        bool dead = false;
        uncovered.for_each([&](std::size_t e) {
            double price = std::numeric_limits<double>::infinity();
            std::size_t options = 0;
            for (std::size_t i : containing[e]) {
                if (banned[i]) continue;
                ++options;
                price = std::min(price, inst.weights[ids[i]] / static_cast<double>(live[i]));
            }
            if (options == 0) dead = true;
            bound += price;
            if (options < pivot_options) pivot_options = options, pivot = e;
        });
        if (dead) return;
        if (weight_less(best.weight, weight + bound)) return;
        std::vector<std::size_t> branch;
        for (std::size_t i : containing[pivot])
            if (!banned[i]) branch.push_back(i);
        std::stable_sort(branch.begin(), branch.end(), [&](std::size_t a, std::size_t b) {
            return inst.weights[ids[a]] / static_cast<double>(live[a]) < inst.weights[ids[b]] / static_cast<double>(live[b]);
        });
        std::vector<std::size_t> newly_banned;
        for (std::size_t i : branch) {
            chosen.push_back(ids[i]);
            self(self, uncovered.minus(inst.sets[ids[i]]), weight + inst.weights[ids[i]]);
            chosen.pop_back();
            banned[i] = 1;
            newly_banned.push_back(i);
        }
        for (std::size_t i : newly_banned) banned[i] = 0;
    };
    Bits all(inst.universe);
    for (std::size_t e = 0; e < inst.universe; ++e) all.set(e);
    recurse(recurse, all, 0.0);
    best.optimal = exhausted;
    return best;
}

}  // namespace detail

/// Minimum-weight cover of {0..universe−1}; infeasible instances return
/// feasible = false. `optimal` is false only when the node budget ran out.
inline CoverSolution solve_set_cover(const CoverInstance& inst, std::size_t node_budget = 1000000) {
    const auto ids = distinct_sets(inst);
    if (inst.universe == 0) {
        CoverSolution s;
        s.feasible = s.optimal = true;
        s.weight = 0.0;
        return s;
    }
    if (detail::laminar_parents(inst, ids)) return detail::solve_laminar(inst, ids);
    return detail::solve_branch_and_bound(inst, ids, node_budget);
}

}  // namespace selfsim
