#pragma once

/// Similarity dimension, fractal dimension III level sums, fractal dimension
/// IV bounds through minimum-weight finite subcovers, H_4^α bounds and a
/// box-counting estimate.

#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <set>
#include <vector>

#include "selfsim/irreducibility.hpp"
#include "selfsim/oracle.hpp"
#include "selfsim/set_cover.hpp"

namespace selfsim {

/// Root t ≥ 0 of Σ c_j^t = 1 by bisection. A single ratio gives 0.
inline double ratio_root(const std::vector<double>& ratios, double tol = 1e-15) {
    if (ratios.empty()) throw std::invalid_argument("ratio_root: no ratios");
    for (double c : ratios)
        if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("ratio_root: ratios must lie in (0,1)");
    auto sum = [&](double s) {
        double total = 0.0;
        for (double c : ratios) total += std::pow(c, s);
        return total;
    };
    if (sum(0.0) <= 1.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (sum(hi) >= 1.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (sum(mid) > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Unique α > 0 with Σ c_i^α = 1.
inline double similarity_dimension(const std::vector<double>& ratios, double tol = 1e-15) {
    if (ratios.size() < 2) throw std::invalid_argument("similarity_dimension: need at least 2 ratios");
    return ratio_root(ratios, tol);
}

/// Σ_{i∈Σ^n} diam(K_i)^s = diam(K)^s·(Σ c_i^s)^n.
inline double h3_level_sum(const Attractor& att, double s, std::size_t n) {
    double base = 0.0;
    for (double c : att.ifs().ratios()) base += std::pow(c, s);
    return std::pow(att.diam_upper(), s) * std::pow(base, static_cast<double>(n));
}

struct Dim3Verification {
    double alpha = 0.0;
    double spread = 0.0;
    std::size_t levels = 0;
    double constant_tol = 1e-9;
    double max_relative_deviation = 0.0;  // at s = α
    double growth_factor = 0.0;           // last/first at s = α − spread
    double decay_factor = 0.0;            // last/first at s = α + spread
    bool constant = false;
    bool grows = false;
    bool vanishes = false;

    bool passed() const noexcept { return constant && grows && vanishes; }
};

/// Levels 1..N: sums at α stay constant, at α − spread increase monotonically
/// past 10× the first, at α + spread decrease monotonically below 0.1×.
inline Dim3Verification verify_dim3(const Attractor& att, double alpha, double spread, std::size_t levels) {
    Dim3Verification v;
    v.alpha = alpha;
    v.spread = spread;
    v.levels = levels;
    if (levels == 0) return v;
    const double first = h3_level_sum(att, alpha, 1);
    const double lo1 = h3_level_sum(att, alpha - spread, 1), hi1 = h3_level_sum(att, alpha + spread, 1);
    bool up = true, down = true;
    double prev_lo = lo1, prev_hi = hi1, last_lo = lo1, last_hi = hi1;
    for (std::size_t n = 1; n <= levels; ++n) {
        const double mid = h3_level_sum(att, alpha, n);
        v.max_relative_deviation = std::max(v.max_relative_deviation, std::abs(mid / first - 1.0));
        last_lo = h3_level_sum(att, alpha - spread, n);
        last_hi = h3_level_sum(att, alpha + spread, n);
        if (n > 1) {
            up = up && last_lo > prev_lo;
            down = down && last_hi < prev_hi;
        }
        prev_lo = last_lo;
        prev_hi = last_hi;
    }
    v.growth_factor = last_lo / lo1;
    v.decay_factor = last_hi / hi1;
    v.constant = v.max_relative_deviation <= v.constant_tol;
    v.grows = up && v.growth_factor >= 10.0;
    v.vanishes = down && v.decay_factor <= 0.1;
    return v;
}

struct SubcoverResult {
    double s = 0.0;
    std::size_t max_level = 0;      // candidates come from levels 1..max_level
    std::size_t universe_depth = 0; // coverage is decided on depth-M descendants
    double weight = std::numeric_limits<double>::infinity();
    std::vector<Word> cover;
    std::size_t elements = 0;
    std::size_t candidates = 0;
    bool feasible = false;
    bool exact = false;
    bool laminar = false;
    bool budget_exceeded = false;
};

namespace detail {

inline std::vector<long long> map_key(const Similitude& f, double tscale) {
    std::vector<long long> key;
    key.push_back(std::llround(f.scale() * 1e9));
    for (Eigen::Index i = 0; i < f.orthogonal().size(); ++i) key.push_back(std::llround(f.orthogonal().data()[i] * 1e9));
    for (Eigen::Index i = 0; i < f.translation().size(); ++i) key.push_back(std::llround(f.translation()[i] * 1e9 / tscale));
    return key;
}

inline double piece_weight(const Attractor& att, double ratio, double s) { return std::pow(ratio * att.diam_upper(), s); }

}  // namespace detail

/// Minimum of Σ diam(A)^s over families from levels 1..L that cover K.
/// A family covers K when every depth-(L+1) descendant D satisfies
/// f_D = f_P∘f_w for a member P (symbolic containment, as in covered_by).
/// The minimum is exact over this horizon; on budget overflow the full first
/// level is returned as the incumbent and the result is flagged.
inline SubcoverResult min_subcover_weight(const Attractor& att, const Oracle& oracle, double s, std::size_t max_level,
                                          std::size_t budget = 0) {
    if (budget == 0) budget = att.budget();
    if (max_level == 0) throw std::invalid_argument("min_subcover_weight: level horizon must be at least 1");
    SubcoverResult out;
    out.s = s;
    out.max_level = max_level;
    out.universe_depth = max_level + 1;
    auto fallback = [&]() {
        out.budget_exceeded = true;
        out.feasible = true;
        out.weight = 0.0;
        out.cover.clear();
        for (const auto& p : att.build_level(1).pieces) {
            out.weight += detail::piece_weight(att, p.ratio, s);
            out.cover.push_back(p.word);
        }
        return out;
    };
    // tree[l] is Γ_l in word order, so the children of tree[l][i] are
    // tree[l+1][i·k .. i·k+k−1]; enclosures of descendants nest.
    std::vector<std::vector<Piece>> tree;
    std::vector<Piece> candidates;
    try {
        std::size_t total = 0;
        for (std::size_t l = 0; l <= out.universe_depth; ++l) {
            total += checked_power(att.k(), l, budget);
            if (total > budget) return fallback();
            tree.push_back(l == 0 ? std::vector<Piece>{att.root_piece()} : att.build_level(l).pieces);
        }
    } catch (const BudgetExceeded&) {
        return fallback();
    }
    for (std::size_t l = 1; l <= max_level; ++l)
        for (const auto& p : tree[l]) candidates.push_back(p);
    const auto& fine = tree.back();

    // Descendants with identical maps are one element.
    std::vector<std::size_t> element_of(fine.size());
    std::size_t universe = 0;
    {
        std::map<std::vector<long long>, std::size_t> index;
        const double tscale = std::max(1.0, att.diam_upper());
        for (std::size_t i = 0; i < fine.size(); ++i) {
            auto [it, inserted] = index.emplace(detail::map_key(fine[i].map, tscale), universe);
            if (inserted) ++universe;
            element_of[i] = it->second;
        }
    }
    CoverInstance inst;
    inst.universe = universe;
    const double slack = 1e-9 * std::max(1.0, att.diam_upper());
    const std::size_t depth = out.universe_depth;
    for (const auto& p : candidates) {
        Bits members(inst.universe);
        std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
        while (!stack.empty()) {
            const auto [l, i] = stack.back();
            stack.pop_back();
            const Piece& node = tree[l][i];
            if (ball_gap(node.enclosure, p.enclosure) > slack) continue;
            if (l < depth) {
                for (std::size_t j = att.k(); j-- > 0;) stack.emplace_back(l + 1, i * att.k() + j);
                continue;
            }
            const std::size_t e = element_of[i];
            if (members.test(e)) continue;
            bool in = is_prefix(p.word, node.word);
            if (!in) {
                const Ball& b = node.enclosure;
                if ((b.center - p.enclosure.center).norm() + b.radius <= p.enclosure.radius + slack)
                    in = oracle.subset_word(node, p).has_value();
            }
            if (in) members.set(e);
        }
        inst.sets.push_back(std::move(members));
        inst.weights.push_back(detail::piece_weight(att, p.ratio, s));
    }
    out.elements = inst.universe;
    out.candidates = candidates.size();
    const auto sol = solve_set_cover(inst, budget * 10);
    out.feasible = sol.feasible;
    out.exact = sol.optimal;
    out.laminar = sol.laminar;
    out.budget_exceeded = !sol.optimal;
    out.weight = sol.weight;
    for (std::size_t i : sol.chosen) out.cover.push_back(candidates[i].word);
    std::sort(out.cover.begin(), out.cover.end());
    return out;
}

struct BoxEstimate {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // max |log N − fit|
    double stderr_slope = 0.0;
    std::vector<double> scales;
    std::vector<std::size_t> counts;
    std::size_t sample_depth = 0;
    std::size_t sample_size = 0;
    double sample_resolution = 0.0;
    bool degenerate = false;
    bool narrow_range = false;  // default scales span less than two decades
};

/// Deterministic sample: images of the fixed point of f_1 under every
/// depth-q composite, with k^q ≤ cap.
inline std::pair<std::vector<Point>, std::size_t> box_sample(const Attractor& att, std::size_t cap) {
    std::size_t q = 0, count = 1;
    while (count * att.k() <= cap) count *= att.k(), ++q;
    return {att.sample_points(att.root_piece(), q), q};
}

/// Grid sizes diam(K)·2^{-j}, from j = 3 down to four times the sample
/// resolution.
inline std::vector<double> default_box_scales(const Attractor& att, std::size_t q) {
    const double resolution = std::pow(att.ifs().max_ratio(), static_cast<double>(q)) * att.diam_upper();
    std::vector<double> scales;
    for (int j = 3; j < 60; ++j) {
        const double eps = att.diam_upper() * std::ldexp(1.0, -j);
        if (eps < 4.0 * resolution) break;
        scales.push_back(eps);
    }
    return scales;
}

namespace detail {
inline BoxEstimate box_fit(const Attractor& att, const std::vector<double>& scales, std::size_t cap);
}  // namespace detail

/// Least-squares slope of log N(ε) against log(1/ε), N counting occupied
/// grid boxes of the sample. Throws if fewer than 4 scales or less than two
/// decades are given.
inline BoxEstimate box_dimension_estimate(const Attractor& att, const std::vector<double>& scales,
                                          std::size_t cap = 1u << 16) {
    if (scales.size() < 4) throw std::invalid_argument("box estimate needs at least 4 scales");
    const auto [lo, hi] = std::minmax_element(scales.begin(), scales.end());
    if (*hi / *lo < 100.0 * (1.0 - 1e-12)) throw std::invalid_argument("box estimate scales must span two decades");
    return detail::box_fit(att, scales, cap);
}

inline BoxEstimate box_dimension_estimate(const Attractor& att, std::size_t cap = 1u << 16) {
    const auto [points, q] = box_sample(att, std::min(cap, att.budget()));
    auto scales = default_box_scales(att, q);
    if (scales.size() < 4) throw std::invalid_argument("box estimate needs at least 4 scales");
    auto out = detail::box_fit(att, scales, cap);
    out.narrow_range = scales.front() / scales.back() < 100.0;
    return out;
}

namespace detail {

inline BoxEstimate box_fit(const Attractor& att, const std::vector<double>& scales, std::size_t cap) {
    BoxEstimate out;
    auto [points, q] = box_sample(att, std::min(cap, att.budget()));
    out.sample_depth = q;
    out.sample_size = points.size();
    out.sample_resolution = std::pow(att.ifs().max_ratio(), static_cast<double>(q)) * att.diam_upper();
    out.scales = scales;
    const Point origin = att.root_ball().center - Point::Constant(att.dim(), att.root_ball().radius);
    std::vector<double> xs, ys;
    for (double eps : scales) {
        std::set<std::vector<long long>> boxes;
        for (const auto& p : points) {
            std::vector<long long> cell(static_cast<std::size_t>(att.dim()));
            for (int i = 0; i < att.dim(); ++i) cell[static_cast<std::size_t>(i)] = static_cast<long long>(std::floor((p[i] - origin[i]) / eps));
            boxes.insert(std::move(cell));
        }
        out.counts.push_back(boxes.size());
        xs.push_back(std::log(1.0 / eps));
        ys.push_back(std::log(static_cast<double>(boxes.size())));
    }
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    out.degenerate = std::all_of(out.counts.begin(), out.counts.end(), [&](std::size_t c) { return c == out.counts.front(); });
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (out.intercept + out.slope * xs[i]);
        out.residual = std::max(out.residual, std::abs(r));
        ssr += r * r;
    }
    out.stderr_slope = xs.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
    return out;
}

}  // namespace detail

enum class BoundBasis {
    SimilarityDimension,  // upper = α: no proper subcover found
    Subcover,             // upper = root over a certified proper subcover
    IrreducibleAllLevels, // lower = α from an all-levels irreducibility certificate
    IrreducibleLevels,    // lower = α from irreducibility at the checked levels only
    BoxEstimate,          // lower from the box-counting fit (heuristic)
};

inline std::string_view to_string(BoundBasis b) {
    switch (b) {
        case BoundBasis::SimilarityDimension: return "similarity_dimension";
        case BoundBasis::Subcover: return "proper_subcover";
        case BoundBasis::IrreducibleAllLevels: return "irreducible_all_levels";
        case BoundBasis::IrreducibleLevels: return "irreducible_checked_levels";
        case BoundBasis::BoxEstimate: return "box_estimate";
    }
    return "unknown";
}

struct Dim4Bounds {
    double lower = 0.0;
    double upper = 0.0;
    double tol = 1e-9;
    BoundBasis lower_basis = BoundBasis::BoxEstimate;
    BoundBasis upper_basis = BoundBasis::SimilarityDimension;
    bool lower_rigorous = false;
    std::vector<Word> subcover;  // J* realizing the upper bound
    std::size_t subcover_level = 0;
    std::size_t levels_checked = 0;
};

/// Removes pieces of Γ_n one at a time (word order) while the removed piece
/// stays covered by the remaining ones; returns the surviving words.
inline std::vector<Piece> greedy_reduce(const Oracle& oracle, std::vector<Piece> pieces, double eps, std::size_t q) {
    for (std::size_t i = 0; i < pieces.size() && pieces.size() > 1;) {
        if (oracle.covered_by_excluding(pieces[i], pieces, i, eps, q).is_holds())
            pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(i));
        else
            ++i;
    }
    return pieces;
}

struct Dim4Inputs {
    double alpha = 0.0;
    const std::vector<LevelIrreducibility>* levels = nullptr;
    bool irreducible_all_levels = false;
    const SubcoverResult* subcover_at_alpha = nullptr;
    const BoxEstimate* box = nullptr;
    double eps = 1e-9;
    std::size_t depth = 12;
};

/// upper: smallest root of Σ_{J} c^t = 1 over the proper subcovers found
/// (greedy reductions of reducible levels and the minimum subcover at α),
/// capped at α. lower: α when irreducibility is certified, otherwise the box
/// fit minus two standard errors, capped at upper.
inline Dim4Bounds dim4_bounds(const Attractor& att, const Oracle& oracle, const Dim4Inputs& in) {
    Dim4Bounds b;
    b.upper = in.alpha;
    b.upper_basis = BoundBasis::SimilarityDimension;
    auto consider = [&](const std::vector<double>& ratios, std::vector<Word> words, std::size_t level) {
        if (ratios.empty()) return;
        const double t = ratio_root(ratios);
        if (t < b.upper - 1e-15) {
            b.upper = t;
            b.upper_basis = BoundBasis::Subcover;
            b.subcover = std::move(words);
            b.subcover_level = level;
        }
    };
    bool all_hold = in.levels && !in.levels->empty();
    if (in.levels) {
        b.levels_checked = in.levels->size();
        for (const auto& lv : *in.levels) {
            if (!lv.verdict.is_holds()) all_hold = false;
            if (!lv.verdict.is_fails()) continue;
            const auto reduced = greedy_reduce(oracle, att.build_level(lv.n).pieces, in.eps, in.depth);
            std::vector<double> ratios;
            std::vector<Word> words;
            for (const auto& p : reduced) ratios.push_back(p.ratio), words.push_back(p.word);
            consider(ratios, std::move(words), lv.n);
        }
    }
    if (in.subcover_at_alpha && in.subcover_at_alpha->feasible) {
        std::vector<double> ratios;
        for (const auto& w : in.subcover_at_alpha->cover) ratios.push_back(att.piece(w).ratio);
        consider(ratios, in.subcover_at_alpha->cover, in.subcover_at_alpha->max_level);
    }
    if (in.irreducible_all_levels || all_hold) {
        b.lower = in.alpha;
        b.lower_basis = in.irreducible_all_levels ? BoundBasis::IrreducibleAllLevels : BoundBasis::IrreducibleLevels;
        b.lower_rigorous = in.irreducible_all_levels;
    } else {
        b.lower_basis = BoundBasis::BoxEstimate;
        b.lower_rigorous = false;
        b.lower = in.box ? std::max(0.0, in.box->slope - 2.0 * in.box->stderr_slope) : 0.0;
    }
    b.lower = std::min(b.lower, b.upper);
    return b;
}

struct H4Bounds {
    Verdict positive;
    double upper = 0.0;
    std::vector<double> weights;  // minimum subcover weight at s = α for horizons 1..m
    std::vector<std::vector<Word>> covers;
    double full_weight = 0.0;     // diam(K)^α
};

/// upper: smallest minimum-subcover weight at s = α over horizons 1..m.
/// Fails when some certified cover weighs less than diam(K)^α (then the
/// replacement argument drives the weight to zero); Holds when
/// irreducibility is certified for all levels; otherwise Inconclusive.
inline H4Bounds h4_alpha_bounds(const Attractor& att, const Oracle& oracle, double alpha, bool irreducible_all_levels,
                                std::size_t horizons = 6, std::size_t budget = 0) {
    H4Bounds h;
    h.full_weight = std::pow(att.diam_upper(), alpha);
    h.upper = h.full_weight;
    Resolution res{0, oracle.options().eps, 0, false};
    std::optional<std::size_t> reducing;
    for (std::size_t m = 1; m <= horizons; ++m) {
        const auto r = min_subcover_weight(att, oracle, alpha, m, budget);
        if (r.budget_exceeded && !r.exact) {
            res.budget_exceeded = true;
            break;
        }
        res.levels = m;
        h.weights.push_back(r.weight);
        h.covers.push_back(r.cover);
        h.upper = std::min(h.upper, r.weight);
        if (!reducing && r.weight < h.full_weight * (1.0 - 1e-9)) reducing = h.weights.size() - 1;
    }
    if (reducing) {
        Witness w;
        w.kind = EvidenceKind::Subcover;
        w.words = h.covers[*reducing];
        w.value = h.weights[*reducing];
        w.detail = "a finite subcover from levels 1.." + std::to_string(*reducing + 1) + " has alpha-weight " +
                   std::to_string(w.value) + " < diam(K)^alpha = " + std::to_string(h.full_weight);
        h.positive = Verdict::fails(std::move(w), res);
    } else if (irreducible_all_levels) {
        Certificate c;
        c.kind = EvidenceKind::Propagated;
        c.value = h.upper;
        c.detail = "irreducible at every level";
        h.positive = Verdict::holds(std::move(c), res);
    } else {
        h.positive = Verdict::inconclusive(res, "no reducing subcover found and no all-levels irreducibility certificate");
    }
    return h;
}

struct DimensionReport {
    double alpha = 0.0;
    double alpha_tol = 1e-12;
    Dim3Verification dim3;
    Dim4Bounds dim4;
    H4Bounds h4;
    BoxEstimate box;
    std::vector<std::string> notes;
};

}  // namespace selfsim
