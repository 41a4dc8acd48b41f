#pragma once

/// Separation properties of the natural fractal structure and the
/// consistency checks that tie them together.

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "selfsim/dimensions.hpp"
#include "selfsim/irreducibility.hpp"
#include "selfsim/polytope.hpp"

namespace selfsim {

struct SeparationOptions {
    std::size_t levels = 5;             // irreducibility checked at levels 1..levels
    std::size_t pair_levels = 3;        // pairwise checks at levels 1..min(levels, pair_levels)
    std::size_t depth = 12;             // subdivision depth q
    double eps = 1e-9;                  // oracle resolution
    double tiling_eps = 1e-3;           // interior certificates dense to this distance (relative to diam K)
    double cluster_eps = 1e-3;          // touching clusters smaller than this (relative to diam K)
    std::size_t cluster_limit = 8;      // M: at most this many touching clusters per pair
    std::size_t common_depth = 2;       // descendants searched for a common sub-piece
    std::size_t pair_budget = 10000;    // nodes per pair subdivision
    std::size_t tiling_budget = 200000; // nodes per piece in the interior cover
    std::size_t max_pair_pieces = 256;  // larger levels skip pairwise checks
    std::size_t sample_depth = 6;       // SOSC and order samples
    std::size_t subcover_level = 3;     // horizon of the subcover at s = α
    std::size_t h4_horizons = 6;
    std::size_t budget = 0;             // cover-universe budget; 0 uses the attractor budget
};

enum class PairKind { Disjoint, Finite, CommonSubpiece, Unresolved };

inline std::string_view to_string(PairKind k) {
    switch (k) {
        case PairKind::Disjoint: return "disjoint";
        case PairKind::Finite: return "finite";
        case PairKind::CommonSubpiece: return "common_subpiece";
        case PairKind::Unresolved: return "unresolved";
    }
    return "unresolved";
}

struct PairResult {
    std::size_t a = 0, b = 0;  // indices into the level
    PairKind kind = PairKind::Unresolved;
    double gap = 0.0;
    std::size_t clusters = 0;
    double cluster_extent = 0.0;
    std::optional<Word> common;
    bool budget_exceeded = false;
};

namespace detail {

/// C with K_C ⊆ K_A ∩ K_B, searched among descendants of A and B up to
/// `depth` levels below them.
inline std::optional<Word> common_subpiece(const Attractor& att, const Oracle& oracle, const Piece& a, const Piece& b,
                                           std::size_t depth) {
    if (oracle.subset_word(a, b)) return a.word.appended(1);
    if (oracle.subset_word(b, a)) return b.word.appended(1);
    for (int side = 0; side < 2; ++side) {
        const Piece& x = side == 0 ? a : b;
        const Piece& y = side == 0 ? b : a;
        std::vector<Piece> frontier{x};
        for (std::size_t m = 1; m <= depth; ++m) {
            std::vector<Piece> next;
            for (const auto& p : frontier)
                for (auto& c : att.children_of(p))
                    if (ball_gap(c.enclosure, y.enclosure) <= 0.0) next.push_back(std::move(c));
            for (const auto& c : next)
                if (oracle.subset_word(c, y)) return c.word;
            frontier = std::move(next);
            if (frontier.empty()) break;
        }
    }
    return std::nullopt;
}

/// Subdivides the pair (A, B) until every surviving enclosure pair is
/// separated or both enclosures are smaller than `leaf_radius`; groups the
/// touching leaves into clusters of overlapping regions.
inline PairResult touching_analysis(const Attractor& att, const Piece& a, const Piece& b, double leaf_radius,
                                    std::size_t budget) {
    PairResult out;
    struct Node {
        Similitude ma, mb;
    };
    std::vector<Node> stack{{a.map, b.map}};
    std::vector<Ball> leaves;
    double gap = std::numeric_limits<double>::infinity();
    std::size_t visited = 0;
    const Ball& root = att.root_ball();
    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        if (++visited > budget) {
            out.kind = PairKind::Unresolved;
            out.budget_exceeded = true;
            return out;
        }
        const Ball ba{node.ma.apply(root.center), node.ma.scale() * root.radius};
        const Ball bb{node.mb.apply(root.center), node.mb.scale() * root.radius};
        const double g = ball_gap(ba, bb);
        if (g > 0.0) {
            gap = std::min(gap, g);
            continue;
        }
        if (std::max(ba.radius, bb.radius) <= leaf_radius) {
            const Point c = 0.5 * (ba.center + bb.center);
            leaves.push_back({c, 0.5 * (ba.center - bb.center).norm() + std::max(ba.radius, bb.radius)});
            continue;
        }
        const bool split_a = ba.radius >= bb.radius;
        for (std::size_t j = att.k(); j-- > 0;) {
            if (split_a)
                stack.push_back({compose(node.ma, att.ifs().maps[j]), node.mb});
            else
                stack.push_back({node.ma, compose(node.mb, att.ifs().maps[j])});
        }
    }
    if (leaves.empty()) {
        out.kind = PairKind::Disjoint;
        out.gap = gap;
        return out;
    }
    std::vector<std::size_t> parent(leaves.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < leaves.size(); ++i)
        for (std::size_t j = i + 1; j < leaves.size(); ++j)
            if (ball_gap(leaves[i], leaves[j]) <= 0.0) parent[find(i)] = find(j);
    std::vector<std::vector<std::size_t>> groups(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) groups[find(i)].push_back(i);
    for (const auto& g : groups) {
        if (g.empty()) continue;
        ++out.clusters;
        for (std::size_t i : g)
            for (std::size_t j : g)
                out.cluster_extent = std::max(out.cluster_extent,
                                              (leaves[i].center - leaves[j].center).norm() + leaves[i].radius + leaves[j].radius);
    }
    out.kind = PairKind::Unresolved;
    return out;
}

}  // namespace detail

/// Pairwise analysis of Γ_n: disjoint (certified gap), finite (no common
/// sub-piece and at most M small touching clusters), common sub-piece, or
/// unresolved.
inline std::vector<PairResult> analyze_pairs(const Attractor& att, const Oracle& oracle, const Level& level,
                                             const SeparationOptions& opt) {
    const double diam = att.diam_upper();
    const double cluster = opt.cluster_eps * diam;
    std::vector<PairResult> out;
    const auto& pieces = level.pieces;
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
            PairResult r;
            const double g = ball_gap(pieces[i].enclosure, pieces[j].enclosure);
            if (g > 0.0) {
                r.kind = PairKind::Disjoint;
                r.gap = g;
            } else if (auto c = detail::common_subpiece(att, oracle, pieces[i], pieces[j], opt.common_depth)) {
                r.kind = PairKind::CommonSubpiece;
                r.common = std::move(c);
            } else {
                r = detail::touching_analysis(att, pieces[i], pieces[j], cluster / 8.0, opt.pair_budget);
                if (r.kind == PairKind::Unresolved && !r.budget_exceeded && r.clusters <= opt.cluster_limit &&
                    r.cluster_extent < cluster)
                    r.kind = PairKind::Finite;
            }
            r.a = i;
            r.b = j;
            out.push_back(std::move(r));
        }
    return out;
}

namespace detail {

enum class PairProperty { Lsp1, FiniteOverlap };

inline Verdict pair_verdict(const Level& level, const std::vector<PairResult>& pairs, PairProperty prop,
                            const SeparationOptions& opt) {
    Resolution res{opt.depth, opt.cluster_eps, level.n, false};
    double gap = std::numeric_limits<double>::infinity();
    std::size_t finite = 0, touching = 0;
    bool unresolved = false;
    for (const auto& p : pairs) {
        res.budget_exceeded = res.budget_exceeded || p.budget_exceeded;
        if (p.kind == PairKind::CommonSubpiece) {
            Witness w;
            w.kind = EvidenceKind::CommonSubpiece;
            const Word& a = level.pieces[p.a].word;
            const Word& b = level.pieces[p.b].word;
            w.words = {a, b, *p.common};
            w.detail = prop == PairProperty::Lsp1
                           ? "piece " + p.common->to_string() + " lies in both " + a.to_string() + " and " +
                                 b.to_string() + ", so their interiors in K meet"
                           : "the intersection of " + a.to_string() + " and " + b.to_string() +
                                 " contains the scaled copy " + p.common->to_string() + " of K";
            return Verdict::fails(std::move(w), res);
        }
        if (p.kind == PairKind::Disjoint) gap = std::min(gap, p.gap);
        if (p.kind == PairKind::Finite) ++finite, touching += p.clusters;
        if (p.kind == PairKind::Unresolved) unresolved = true;
    }
    if (unresolved) return Verdict::inconclusive(res, "some pair intersections are neither separated nor isolated");
    Certificate c;
    c.kind = finite > 0 ? EvidenceKind::TouchingClusters : EvidenceKind::SeparatingGap;
    c.value = finite > 0 ? static_cast<double>(touching) : (pairs.empty() ? 0.0 : gap);
    c.detail = finite > 0 ? std::to_string(finite) + " touching pairs, " + std::to_string(touching) +
                                " isolated contact clusters; all other pairs separated"
                          : "all pairs separated";
    return Verdict::holds(std::move(c), res,
                          finite > 0 ? "finite intersections are evidence from bounded subdivision" : std::string{});
}

}  // namespace detail

/// LSP1 at level n: Fails with a common sub-piece; Holds when every pair is
/// separated or meets in isolated small clusters.
inline Verdict lsp1_check(const Level& level, const std::vector<PairResult>& pairs, const SeparationOptions& opt) {
    return detail::pair_verdict(level, pairs, detail::PairProperty::Lsp1, opt);
}

inline Verdict finite_overlap_check(const Level& level, const std::vector<PairResult>& pairs,
                                    const SeparationOptions& opt) {
    return detail::pair_verdict(level, pairs, detail::PairProperty::FiniteOverlap, opt);
}

/// LSP2 at level n: Holds when every piece has an exact point at certified
/// positive distance from every other piece. Never Fails.
inline Verdict lsp2_check(const LevelIrreducibility& lv) {
    Resolution res = lv.verdict.resolution;
    Certificate c;
    c.kind = EvidenceKind::ExposedPoints;
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < lv.per_piece.size(); ++i) {
        const auto& v = lv.per_piece[i];
        if (v.is_fails())
            c.exposed.push_back({lv.words[i], v.witness->point, v.witness->value});
        else
            missing.push_back(lv.words[i].to_string());
    }
    if (lv.per_piece.empty()) return Verdict::inconclusive(res, "level was not analyzed");
    if (missing.empty()) return Verdict::holds(std::move(c), res);
    std::string note = "no interior certificate for piece";
    for (std::size_t i = 0; i < missing.size() && i < 8; ++i) note += (i ? ", " : " ") + missing[i];
    if (missing.size() > 8) note += ", ...";
    return Verdict::inconclusive(res, note);
}

/// Tiling at level n: Fails when LSP1 Fails; Holds when LSP1 Holds and every
/// piece is covered, to resolution eps, by descendants whose points are all
/// interior in K or that contain a certified interior point.
inline Verdict tiling_check(const Attractor& att, const Oracle& oracle, const Level& level, const Verdict& lsp1,
                            const SeparationOptions& opt) {
    const double eps = opt.tiling_eps * att.diam_upper();
    Resolution res{opt.depth, eps, level.n, false};
    if (lsp1.is_fails()) {
        Witness w = *lsp1.witness;
        w.detail = "interiors are not disjoint: " + w.detail;
        return Verdict::fails(std::move(w), res);
    }
    if (!lsp1.is_holds()) return Verdict::inconclusive(res, "disjointness of interiors is undecided");
    const auto& pieces = level.pieces;
    std::size_t interior_nodes = 0, point_nodes = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        std::vector<Piece> stack{pieces[i]};
        std::size_t visited = 0;
        while (!stack.empty()) {
            Piece d = std::move(stack.back());
            stack.pop_back();
            if (++visited > opt.tiling_budget) {
                res.budget_exceeded = true;
                return Verdict::inconclusive(res, "interior cover of " + pieces[i].word.to_string() + " exceeded its budget");
            }
            std::vector<std::size_t> near;
            for (std::size_t j = 0; j < pieces.size(); ++j)
                if (j != i && ball_gap(d.enclosure, pieces[j].enclosure) <= 0.0) near.push_back(j);
            bool interior = true;
            for (std::size_t j : near)
                if (!(oracle.set_gap(d.map, pieces[j].map, opt.depth, opt.pair_budget) > 0.0)) {
                    interior = false;
                    break;
                }
            if (interior) {
                ++interior_nodes;
                continue;
            }
            if (d.diameter <= eps) {
                bool found = false;
                for (const auto& x : att.representatives(d.map)) {
                    found = std::all_of(near.begin(), near.end(),
                                        [&](std::size_t j) { return oracle.certified_distance(x, pieces[j]) > 0.0; });
                    if (found) break;
                }
                if (!found)
                    return Verdict::inconclusive(res, "no interior point found in " + d.word.to_string());
                ++point_nodes;
                continue;
            }
            if (d.word.size() - pieces[i].word.size() >= opt.depth + level.n + 20) {
                res.budget_exceeded = true;
                return Verdict::inconclusive(res, "interior cover exceeded the depth limit");
            }
            for (auto& c : att.children_of(d)) stack.push_back(std::move(c));
        }
    }
    Certificate c;
    c.kind = EvidenceKind::InteriorCover;
    c.value = eps;
    c.detail = std::to_string(interior_nodes) + " interior sub-pieces and " + std::to_string(point_nodes) +
               " interior points cover every piece to resolution " + std::to_string(eps);
    return Verdict::holds(std::move(c), res);
}

/// max over sampled attractor points x of #{B ∈ Γ_n : x ∈ K_B} − 1; each
/// membership is exact (x is an image of a fixed point under a word of B).
inline std::size_t order_lower_bound(const Attractor& att, const Oracle& oracle, const Level& level, std::size_t q) {
    const auto pts = att.images_of(att.root_piece(), q, att.seeds());
    std::size_t best = 0;
    for (const auto& x : pts) {
        std::size_t count = 0;
        for (const auto& b : level.pieces) {
            if (!b.enclosure.contains(x, oracle.options().zero_tol)) continue;
            if (oracle.point_piece_distance(x, b, q + level.n, 0.0, oracle.options().distance_budget).upper <=
                oracle.options().zero_tol)
                ++count;
        }
        best = std::max(best, count);
    }
    return best == 0 ? 0 : best - 1;
}

struct LevelSeparation {
    std::size_t n = 0;
    Verdict lsp1, lsp2, tiling, finite_overlap;
    std::size_t order_lower = 0;
    std::vector<PairResult> pairs;
};

enum class ConsistencyStatus { Consistent, Violated, Vacuous };

inline std::string_view to_string(ConsistencyStatus s) {
    switch (s) {
        case ConsistencyStatus::Consistent: return "consistent";
        case ConsistencyStatus::Violated: return "violated";
        case ConsistencyStatus::Vacuous: return "vacuous";
    }
    return "vacuous";
}

struct ConsistencyEntry {
    std::string implication;
    std::string chain;
    Outcome antecedent = Outcome::Inconclusive;
    Outcome consequent = Outcome::Inconclusive;
    ConsistencyStatus status = ConsistencyStatus::Vacuous;
    std::string detail;
};

/// P ⇒ Q on three-valued verdicts: both Holds agree; Holds ⇒ Fails is a
/// violation; both Fails agree with the contrapositive; anything else is vacuous.
inline ConsistencyStatus implication_status(Outcome p, Outcome q) {
    if (p == Outcome::Inconclusive || q == Outcome::Inconclusive) return ConsistencyStatus::Vacuous;
    if (p == Outcome::Holds) return q == Outcome::Holds ? ConsistencyStatus::Consistent : ConsistencyStatus::Violated;
    return q == Outcome::Fails ? ConsistencyStatus::Consistent : ConsistencyStatus::Vacuous;
}

inline ConsistencyStatus equivalence_status(Outcome p, Outcome q) {
    if (p == Outcome::Inconclusive || q == Outcome::Inconclusive) return ConsistencyStatus::Vacuous;
    return p == q ? ConsistencyStatus::Consistent : ConsistencyStatus::Violated;
}

struct SeparationReport {
    SeparationOptions options;
    double alpha = 0.0;
    std::vector<LevelIrreducibility> irreducibility;  // levels 1..N
    std::vector<LevelSeparation> levels;             // levels 1..min(N, pair_levels)
    Verdict osc, sosc;
    std::optional<Polytope> osc_polytope;
    std::vector<std::string> osc_rejected;
    Verdict irreducible, lsp, tiling, finite_overlap, finite_order, dim4_alpha, h4_positive, dim_h_alpha, wosc;
    std::size_t order_lower = 0;
    SubcoverResult subcover;
    Dim4Bounds dim4;
    H4Bounds h4;
    std::vector<ConsistencyEntry> consistency;
    std::vector<std::string> notes;

    std::size_t violations() const {
        return static_cast<std::size_t>(std::count_if(consistency.begin(), consistency.end(), [](const auto& e) {
            return e.status == ConsistencyStatus::Violated;
        }));
    }
};

namespace detail {

inline Verdict propagated(std::string from, Resolution res) {
    Certificate c;
    c.kind = EvidenceKind::Propagated;
    c.detail = std::move(from);
    return Verdict::holds(std::move(c), res);
}

inline Verdict first_failure(const std::vector<const Verdict*>& vs, std::string_view what, Resolution res) {
    for (const Verdict* v : vs)
        if (v->is_fails()) {
            Verdict out = *v;
            out.note = std::string(what) + " fails at level " + std::to_string(v->resolution.levels);
            return out;
        }
    return Verdict::inconclusive(res);
}

}  // namespace detail

/// Structure-level irreducibility: Fails when any level is reducible; Holds
/// via the open set condition (which forces finite order); otherwise
/// Inconclusive with the finite-level evidence in the note.
inline Verdict irreducible_structure(const std::vector<LevelIrreducibility>& levels, const Verdict& osc) {
    Resolution res{0, 0.0, levels.size(), false};
    for (const auto& lv : levels) {
        if (lv.verdict.is_fails()) {
            Verdict out = lv.verdict;
            out.note = lv.symbolic_duplicates ? "reducible at every level from " + std::to_string(lv.n)
                                              : "reducible at level " + std::to_string(lv.n);
            return out;
        }
        res.budget_exceeded = res.budget_exceeded || lv.verdict.resolution.budget_exceeded;
    }
    if (osc.is_holds())
        return detail::propagated("the open set condition bounds the order of every level, so every level is irreducible",
                                  res);
    const bool all = !levels.empty() && std::all_of(levels.begin(), levels.end(),
                                                   [](const auto& lv) { return lv.verdict.is_holds(); });
    return Verdict::inconclusive(res, all ? "irreducible at levels 1.." + std::to_string(levels.size()) +
                                                "; no certificate for every level"
                                          : "some levels are undecided");
}

std::vector<ConsistencyEntry> consistency_harness(const SeparationReport& r);

/// Runs every check and combines them. wosc Holds when some equivalent
/// property Holds and none Fails, Fails in the reverse case.
inline SeparationReport wosc_report(const Attractor& att, const Oracle& oracle, const SeparationOptions& opt,
                                    const BoxEstimate* box = nullptr) {
    SeparationReport r;
    r.options = opt;
    r.alpha = similarity_dimension(att.ifs().ratios());
    const std::size_t budget = opt.budget ? opt.budget : att.budget();

    for (std::size_t n = 1; n <= opt.levels; ++n)
        r.irreducibility.push_back(analyze_level(att, oracle, n, opt.eps, opt.depth));

    auto osc = osc_certificate_search(att);
    r.osc = osc.verdict;
    r.osc_polytope = osc.polytope;
    r.osc_rejected = osc.rejected;
    r.sosc = osc.polytope ? sosc_check(att, *osc.polytope, opt.sample_depth)
                          : Verdict::inconclusive({}, "no open set certificate to test");

    const std::size_t pair_levels = std::min(opt.levels, opt.pair_levels);
    for (std::size_t n = 1; n <= pair_levels; ++n) {
        LevelSeparation ls;
        ls.n = n;
        Level level;
        Resolution res{opt.depth, opt.eps, n, false};
        bool built = true;
        try {
            level = att.build_level(n);
        } catch (const BudgetExceeded&) {
            built = false;
        }
        if (!built || level.pieces.size() > opt.max_pair_pieces) {
            res.budget_exceeded = true;
            ls.lsp1 = ls.tiling = ls.finite_overlap = Verdict::inconclusive(res, "level too large for pairwise checks");
        } else {
            ls.pairs = analyze_pairs(att, oracle, level, opt);
            ls.lsp1 = lsp1_check(level, ls.pairs, opt);
            ls.finite_overlap = finite_overlap_check(level, ls.pairs, opt);
            ls.tiling = tiling_check(att, oracle, level, ls.lsp1, opt);
            ls.order_lower = order_lower_bound(att, oracle, level, std::min<std::size_t>(opt.sample_depth, 4));
            r.order_lower = std::max(r.order_lower, ls.order_lower);
        }
        ls.lsp2 = lsp2_check(r.irreducibility[n - 1]);
        r.levels.push_back(std::move(ls));
    }

    const Resolution sres{opt.depth, opt.eps, opt.levels, false};
    r.irreducible = irreducible_structure(r.irreducibility, r.osc);
    const std::string via = "equivalent to irreducibility of every level";
    std::vector<const Verdict*> lsps, tilings, overlaps;
    for (const auto& ls : r.levels) lsps.push_back(&ls.lsp1), tilings.push_back(&ls.tiling), overlaps.push_back(&ls.finite_overlap);
    r.lsp = detail::first_failure(lsps, "LSP1", sres);
    if (r.lsp.is_inconclusive() && r.irreducible.is_holds()) r.lsp = detail::propagated(via, sres);
    r.tiling = detail::first_failure(tilings, "tiling", sres);
    if (r.tiling.is_inconclusive() && r.irreducible.is_holds()) r.tiling = detail::propagated(via, sres);
    r.finite_overlap = detail::first_failure(overlaps, "finite overlap", sres);
    if (r.finite_overlap.is_inconclusive() && !r.levels.empty() &&
        std::all_of(overlaps.begin(), overlaps.end(), [](const Verdict* v) { return v->is_holds(); })) {
        r.finite_overlap = *overlaps.back();
        r.finite_overlap.resolution.levels = pair_levels;
    }
    r.finite_overlap.note = "finite intersections checked at levels 1.." + std::to_string(pair_levels);
    r.finite_order = r.osc.is_holds() ? detail::propagated("the open set condition bounds the order", sres)
                                      : Verdict::inconclusive(sres, "order bounded only on samples");
    r.dim_h_alpha = Verdict::inconclusive(sres, "Hausdorff dimension is not computed");

    const bool all_levels = r.irreducible.is_holds();
    r.subcover = min_subcover_weight(att, oracle, r.alpha, std::min(opt.subcover_level, opt.levels), budget);
    Dim4Inputs in;
    in.alpha = r.alpha;
    in.levels = &r.irreducibility;
    in.irreducible_all_levels = all_levels;
    in.subcover_at_alpha = &r.subcover;
    in.box = box;
    in.eps = opt.eps;
    in.depth = opt.depth;
    r.dim4 = dim4_bounds(att, oracle, in);
    if (all_levels && std::abs(r.dim4.upper - r.alpha) <= r.dim4.tol) {
        r.dim4_alpha = detail::propagated("lower and upper bounds both equal alpha", sres);
    } else if (r.dim4.upper < r.alpha - r.dim4.tol) {
        Witness w;
        w.kind = EvidenceKind::Subcover;
        w.words = r.dim4.subcover;
        w.value = r.dim4.upper;
        w.detail = "a proper subcover bounds dim4 by " + std::to_string(r.dim4.upper) + " < alpha";
        r.dim4_alpha = Verdict::fails(std::move(w), sres);
    } else {
        r.dim4_alpha = Verdict::inconclusive(sres, "upper bound equals alpha; lower bound not certified");
    }
    r.h4 = h4_alpha_bounds(att, oracle, r.alpha, all_levels, opt.h4_horizons, budget);
    r.h4_positive = r.h4.positive;

    const std::vector<std::pair<std::string, const Verdict*>> equivalents{
        {"irreducible", &r.irreducible}, {"lsp", &r.lsp},        {"tiling", &r.tiling},
        {"dim4_equals_alpha", &r.dim4_alpha}, {"h4_positive", &r.h4_positive}};
    std::vector<std::string> holding, failing;
    for (const auto& [name, v] : equivalents) {
        if (v->is_holds()) holding.push_back(name);
        if (v->is_fails()) failing.push_back(name);
    }
    auto join = [](const std::vector<std::string>& xs) {
        std::string s;
        for (const auto& x : xs) s += (s.empty() ? "" : ", ") + x;
        return s;
    };
    if (!holding.empty() && failing.empty()) {
        r.wosc = detail::propagated("certified by " + join(holding), sres);
    } else if (!failing.empty() && holding.empty()) {
        Witness w;
        for (const auto& [name, v] : equivalents)
            if (v->is_fails()) {
                w = *v->witness;
                break;
            }
        w.detail = "refuted by " + join(failing) + ": " + w.detail;
        r.wosc = Verdict::fails(std::move(w), sres);
    } else if (!failing.empty()) {
        r.wosc = Verdict::inconclusive(sres, "equivalent properties disagree: holds " + join(holding) + "; fails " +
                                                 join(failing));
    } else {
        r.wosc = Verdict::inconclusive(sres, "no equivalent property is certified");
    }
    r.consistency = consistency_harness(r);
    return r;
}

/// Checks the implication chains on the verdicts of a report.
inline std::vector<ConsistencyEntry> consistency_harness(const SeparationReport& r) {
    std::vector<ConsistencyEntry> out;
    auto imp = [&](std::string name, std::string chain, Outcome p, Outcome q, std::string detail = {}) {
        out.push_back({std::move(name), std::move(chain), p, q, implication_status(p, q), std::move(detail)});
    };
    auto eqv = [&](std::string name, std::string chain, Outcome p, Outcome q) {
        out.push_back({std::move(name), std::move(chain), p, q, equivalence_status(p, q), {}});
    };
    auto neg = [](Outcome o) {
        return o == Outcome::Holds ? Outcome::Fails : o == Outcome::Fails ? Outcome::Holds : Outcome::Inconclusive;
    };
    auto truth = [](bool b) { return b ? Outcome::Holds : Outcome::Fails; };
    const std::string measure = "measure chain";
    const std::string order = "order chain";
    const std::string overlap = "finite overlaps";
    const std::string equiv = "equivalences";

    imp("H_H^alpha > 0 => SOSC", measure, Outcome::Inconclusive, r.sosc.outcome);
    imp("SOSC => OSC", measure, r.sosc.outcome, r.osc.outcome);
    imp("OSC => SOSC", measure, r.osc.outcome, r.sosc.outcome);
    imp("SOSC => dim_H = alpha", measure, r.sosc.outcome, r.dim_h_alpha.outcome);
    imp("dim_H = alpha => WOSC", measure, r.dim_h_alpha.outcome, r.wosc.outcome);
    imp("SOSC => WOSC", measure, r.sosc.outcome, r.wosc.outcome);
    eqv("WOSC <=> H4^alpha > 0", measure, r.wosc.outcome, r.h4_positive.outcome);
    eqv("WOSC <=> dim4 = alpha", measure, r.wosc.outcome, r.dim4_alpha.outcome);

    imp("OSC => finite order", order, r.osc.outcome, r.finite_order.outcome);
    imp("finite order => irreducible", order, r.finite_order.outcome, r.irreducible.outcome);
    for (const auto& lv : r.irreducibility)
        imp("OSC => irreducible at level " + std::to_string(lv.n), order, r.osc.outcome, lv.verdict.outcome);
    for (const auto& ls : r.levels)
        if (r.finite_order.is_holds())
            out.push_back({"order lower bound at level " + std::to_string(ls.n) + " is finite", order, Outcome::Holds,
                           Outcome::Holds, ConsistencyStatus::Consistent,
                           "observed order >= " + std::to_string(ls.order_lower)});

    for (const auto& ls : r.levels) {
        const std::string n = std::to_string(ls.n);
        imp("finite overlaps => LSP1 at level " + n, overlap, ls.finite_overlap.outcome, ls.lsp1.outcome);
        const Outcome lsp2_not_failed = ls.lsp2.is_fails() ? Outcome::Fails : Outcome::Holds;
        imp("finite overlaps => LSP2 not refuted at level " + n, overlap, ls.finite_overlap.outcome, lsp2_not_failed);
        imp("LSP1 fails => tiling fails at level " + n, overlap, neg(ls.lsp1.outcome), neg(ls.tiling.outcome));
    }

    eqv("irreducible <=> LSP", equiv, r.irreducible.outcome, r.lsp.outcome);
    eqv("irreducible <=> tiling", equiv, r.irreducible.outcome, r.tiling.outcome);
    eqv("irreducible <=> dim4 = alpha", equiv, r.irreducible.outcome, r.dim4_alpha.outcome);
    eqv("irreducible <=> H4^alpha > 0", equiv, r.irreducible.outcome, r.h4_positive.outcome);
    imp("reducible => dim4 upper < alpha", equiv, neg(r.irreducible.outcome),
        truth(r.dim4.upper < r.alpha - r.dim4.tol));
    {
        const bool ok = r.dim4.lower <= r.dim4.upper + r.dim4.tol && r.dim4.upper <= r.alpha + 1e-9;
        out.push_back({"dim4 lower <= upper <= alpha", equiv, Outcome::Holds, truth(ok),
                       ok ? ConsistencyStatus::Consistent : ConsistencyStatus::Violated,
                       "[" + std::to_string(r.dim4.lower) + ", " + std::to_string(r.dim4.upper) + "]"});
    }
    for (const auto& lv : r.irreducibility)
        if (lv.symbolic_duplicates) {
            bool all = true;
            for (const auto& later : r.irreducibility)
                if (later.n >= lv.n && !later.verdict.is_fails()) all = false;
            imp("duplicate maps at level " + std::to_string(lv.n) + " => every deeper level reducible", equiv,
                Outcome::Holds, truth(all));
            break;
        }
    return out;
}

}  // namespace selfsim
