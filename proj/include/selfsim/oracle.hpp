#pragma once

/// Rigorous three-valued geometric decisions about pieces of an attractor.
///
/// Holds answers for containment are symbolic: K_A ⊆ K_B is certified only
/// when f_A = f_B∘f_w for some word w (then K_A = f_B(K_w) ⊆ K_B exactly).
/// Fails answers carry exact attractor points (fixed-point images) together
/// with certified positive distances obtained by branch and bound over ball
/// enclosures. Ball containment alone is never used as a Holds certificate.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "selfsim/attractor.hpp"
#include "selfsim/verdict.hpp"

namespace selfsim {

struct OracleOptions {
    double eps = 1e-9;
    std::size_t depth = 30;
    double ratio_tol = 1e-9;
    double map_tol = 1e-9;
    double zero_tol = 1e-12;
    std::size_t node_budget = 200000;   // per covered_by / pair query
    std::size_t distance_budget = 4000;  // per point-to-piece bound
    std::size_t witness_depth = 6;       // descendants searched for Fails witnesses in piece_subset
};

struct DistanceBracket {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    bool budget_exceeded = false;
};

class Oracle {
public:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    explicit Oracle(const Attractor& att) : Oracle(att, default_options(att)) {}
    Oracle(const Attractor& att, OracleOptions options) : att_(att), opt_(options) {}

    /// eps = 1e-9·diam(K); depth smallest q with (max c)^q·diam(K) < eps.
    static OracleOptions default_options(const Attractor& att) {
        OracleOptions o;
        const double diam = att.diam_upper();
        o.eps = 1e-9 * diam;
        o.zero_tol = 1e-12 * std::max(diam, 1e-300);
        const double c = att.ifs().max_ratio();
        o.depth = static_cast<std::size_t>(std::ceil(std::log(1e-9) / std::log(c))) + 1;
        o.node_budget = std::max<std::size_t>(att.budget(), 1000);
        return o;
    }

    const Attractor& attractor() const noexcept { return att_; }
    const OracleOptions& options() const noexcept { return opt_; }

    /// lower ≤ dist(x, K_B) ≤ upper. Refines B's descendants best-first down to
    /// q levels below B; stops early once the lower bound exceeds `stop_above`.
    DistanceBracket point_piece_distance(const Point& x, const Piece& b, std::size_t q,
                                         double stop_above = std::numeric_limits<double>::infinity(),
                                         std::size_t budget = 0) const {
        if (budget == 0) budget = opt_.node_budget;
        DistanceBracket out;
        for (const auto& r : att_.representatives(b.map)) out.upper = std::min(out.upper, (x - r).norm());
        if (out.upper <= opt_.zero_tol) {
            out.lower = 0.0;
            return out;
        }
        struct Node {
            double lb;
            std::size_t depth;
            Similitude map;
        };
        auto cmp = [](const Node& a, const Node& b) { return a.lb > b.lb; };
        std::priority_queue<Node, std::vector<Node>, decltype(cmp)> queue(cmp);
        queue.push({std::max(0.0, (x - b.enclosure.center).norm() - b.enclosure.radius), 0, b.map});
        double leaf_min = std::numeric_limits<double>::infinity();
        std::size_t expanded = 0;
        while (!queue.empty()) {
            const Node& top = queue.top();
            if (top.lb >= out.upper - opt_.zero_tol || top.lb > stop_above) break;
            if (top.depth >= q) {
                leaf_min = std::min(leaf_min, top.lb);
                queue.pop();
                continue;
            }
            if (expanded >= budget) {
                out.budget_exceeded = true;
                break;
            }
            Node node = top;
            queue.pop();
            ++expanded;
            for (std::size_t j = 1; j <= att_.k(); ++j) {
                const Ball ball = att_.child_ball(node.map, static_cast<Symbol>(j));
                Similitude child = compose(node.map, att_.ifs().maps[j - 1]);
                for (const auto& r : att_.representatives(child)) out.upper = std::min(out.upper, (x - r).norm());
                if (out.upper <= opt_.zero_tol) {
                    out.lower = 0.0;
                    return out;
                }
                queue.push({std::max(0.0, (x - ball.center).norm() - ball.radius), node.depth + 1, std::move(child)});
            }
        }
        out.lower = std::min(leaf_min, queue.empty() ? std::numeric_limits<double>::infinity() : queue.top().lb);
        out.lower = std::min(out.lower, out.upper);
        return out;
    }

    /// A certified positive lower bound on dist(x, K_B), or 0 if none was found.
    double certified_distance(const Point& x, const Piece& b) const {
        const double gap = (x - b.enclosure.center).norm() - b.enclosure.radius;
        if (gap > 0.0) return gap;
        const auto bracket = point_piece_distance(x, b, opt_.depth, 0.0, opt_.distance_budget);
        return bracket.lower;
    }

    /// A word w with f_a = f_b∘f_w (to tolerance), if one exists among words
    /// whose ratio matches c_a/c_b.
    std::optional<Word> subset_word(const Piece& a, const Piece& b) const {
        return find_word(relative_map(a.map, b.map));
    }

    /// Searches w with f_w ≈ rel. Subtrees are pruned when their ratio drops
    /// below the target or when rel(x₀) leaves their enclosure (it must equal
    /// f_w(x₀)).
    std::optional<Word> find_word(const Similitude& rel) const {
        const double target = rel.scale();
        if (target > 1.0 + opt_.ratio_tol) return std::nullopt;
        const auto key = quantize(rel);
        {
            std::lock_guard<std::mutex> lock(memo_mutex_);
            if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        }
        std::optional<Word> found = search_word(rel);
        {
            std::lock_guard<std::mutex> lock(memo_mutex_);
            memo_.emplace(key, found);
        }
        return found;
    }

    /// K_A ⊆ K_B: Holds with the word w, Fails with an exact point of K_A at
    /// certified positive distance from K_B, Inconclusive otherwise.
    Verdict piece_subset(const Piece& a, const Piece& b, double ratio_tol, std::size_t q) const {
        Resolution res{q, opt_.eps, 0, false};
        if (ratio_tol > 0 && ratio_tol != opt_.ratio_tol) {
            Oracle tuned(att_, with_ratio_tol(ratio_tol));
            return tuned.piece_subset(a, b, 0.0, q);
        }
        if (auto w = subset_word(a, b)) {
            Certificate c;
            c.kind = EvidenceKind::WordMatch;
            c.words = {*w};
            c.detail = "f_" + a.word.to_string() + " = f_" + b.word.to_string() + " o f_" + w->to_string();
            return Verdict::holds(std::move(c), res);
        }
        // Witness search: exact points of descendants of A, breadth first.
        std::deque<std::pair<Similitude, std::size_t>> queue{{a.map, 0}};
        std::size_t visited = 0;
        const std::size_t max_depth = std::min(q, opt_.witness_depth);
        while (!queue.empty()) {
            auto [map, depth] = std::move(queue.front());
            queue.pop_front();
            if (++visited > opt_.node_budget) {
                res.budget_exceeded = true;
                break;
            }
            for (const auto& x : att_.representatives(map)) {
                const double d = certified_distance(x, b);
                if (d > 0.0) {
                    Witness wit;
                    wit.kind = EvidenceKind::ExposedPoint;
                    wit.point = to_vector(x);
                    wit.value = d;
                    wit.words = {a.word};
                    return Verdict::fails(std::move(wit), res);
                }
            }
            if (depth < max_depth)
                for (const auto& g : att_.ifs().maps) queue.emplace_back(compose(map, g), depth + 1);
        }
        return Verdict::inconclusive(res, "no containment word and no separated point found");
    }

    /// K_A ∩ K_B ≠ ∅: Holds with exact points at distance ≤ eps, Fails with a
    /// certified gap between the two sets, Inconclusive otherwise.
    Verdict pieces_intersect(const Piece& a, const Piece& b, double eps, std::size_t q) const {
        Resolution res{q, eps, 0, false};
        auto holds_with = [&](const Point& p, const Point& r, double dist) {
            Certificate c;
            c.kind = EvidenceKind::PiecePair;
            c.words = {a.word, b.word};
            c.point = to_vector(p);
            c.second_point = to_vector(r);
            c.value = dist;
            return Verdict::holds(std::move(c), res);
        };
        if (auto w = subset_word(a, b)) {
            const Point x = a.map.apply(att_.seeds().front());
            return holds_with(x, x, 0.0);
        }
        if (auto w = subset_word(b, a)) {
            const Point x = b.map.apply(att_.seeds().front());
            return holds_with(x, x, 0.0);
        }
        struct PairNode {
            Similitude ma, mb;
            std::size_t da, db;
        };
        std::vector<PairNode> stack{{a.map, b.map, 0, 0}};
        double gap = std::numeric_limits<double>::infinity();
        bool unresolved = false;
        std::size_t visited = 0;
        while (!stack.empty()) {
            PairNode node = std::move(stack.back());
            stack.pop_back();
            if (++visited > opt_.node_budget) {
                res.budget_exceeded = true;
                unresolved = true;
                break;
            }
            const Ball ba{node.ma.apply(att_.root_ball().center), node.ma.scale() * att_.root_ball().radius};
            const Ball bb{node.mb.apply(att_.root_ball().center), node.mb.scale() * att_.root_ball().radius};
            const double g = ball_gap(ba, bb);
            if (g > 0.0) {
                gap = std::min(gap, g);
                continue;
            }
            const auto ra = att_.representatives(node.ma);
            const auto rb = att_.representatives(node.mb);
            for (const auto& p : ra)
                for (const auto& r : rb) {
                    const double d = (p - r).norm();
                    if (d <= eps) return holds_with(p, r, d);
                }
            const bool can_a = node.da < q, can_b = node.db < q;
            if (!can_a && !can_b) {
                unresolved = true;
                continue;
            }
            const bool split_a = can_a && (!can_b || ba.radius >= bb.radius);
            for (std::size_t j = att_.k(); j-- > 0;) {
                if (split_a)
                    stack.push_back({compose(node.ma, att_.ifs().maps[j]), node.mb, node.da + 1, node.db});
                else
                    stack.push_back({node.ma, compose(node.mb, att_.ifs().maps[j]), node.da, node.db + 1});
            }
        }
        if (!unresolved) {
            Certificate c;
            c.kind = EvidenceKind::SeparatingGap;
            c.words = {a.word, b.word};
            c.value = gap;
            return Verdict::fails(std::move(c), res);
        }
        return Verdict::inconclusive(res, "enclosures overlap at the finest depth");
    }

    /// K_A ⊆ ∪ family. Holds when every descendant of A reached by
    /// subdivision (≤ q levels) is symbolically inside some member; Fails with
    /// an exact point of K_A at certified positive distance from every
    /// member; Inconclusive otherwise.
    Verdict covered_by(const Piece& a, const std::vector<Piece>& family, double eps, std::size_t q) const {
        return covered_by_excluding(a, family, kNone, eps, q);
    }

    /// covered_by against `family` without its member at index `skip`.
    Verdict covered_by_excluding(const Piece& a, const std::vector<Piece>& family, std::size_t skip, double eps,
                                 std::size_t q) const {
        if (family.size() <= (skip < family.size() ? 1u : 0u)) throw std::invalid_argument("covered_by: empty family");
        Resolution res{q, eps, 0, false};
        std::deque<Piece> queue{a};
        std::vector<Assignment> assignment;
        bool undecided = false;
        std::size_t visited = 0;
        std::vector<std::size_t> relevant;
        while (!queue.empty()) {
            Piece d = std::move(queue.front());
            queue.pop_front();
            if (++visited > opt_.node_budget) {
                res.budget_exceeded = true;
                undecided = true;
                break;
            }
            relevant.clear();
            for (std::size_t i = 0; i < family.size(); ++i)
                if (i != skip && ball_gap(d.enclosure, family[i].enclosure) <= opt_.zero_tol) relevant.push_back(i);

            bool discharged = false;
            for (std::size_t i : relevant) {
                if (auto w = subset_word(d, family[i])) {
                    assignment.push_back({d.word, family[i].word, *w});
                    discharged = true;
                    break;
                }
            }
            if (discharged) continue;

            for (const auto& x : att_.representatives(d.map)) {
                double dmin = std::numeric_limits<double>::infinity();
                bool separated = true;
                for (std::size_t i : relevant) {
                    const double dist = certified_distance(x, family[i]);
                    if (!(dist > 0.0)) {
                        separated = false;
                        break;
                    }
                    dmin = std::min(dmin, dist);
                }
                if (!separated) continue;
                for (std::size_t i = 0; i < family.size(); ++i) {
                    if (i == skip) continue;
                    const double g = (x - family[i].enclosure.center).norm() - family[i].enclosure.radius;
                    if (g > 0.0) dmin = std::min(dmin, g);
                }
                Witness wit;
                wit.kind = EvidenceKind::ExposedPoint;
                wit.words = {d.word};
                wit.point = to_vector(x);
                wit.value = dmin;
                return Verdict::fails(std::move(wit), res);
            }
            if (d.word.size() - a.word.size() < q) {
                for (std::size_t j = 1; j <= att_.k(); ++j) queue.push_back(att_.child(d, static_cast<Symbol>(j)));
            } else {
                undecided = true;
            }
        }
        if (undecided) return Verdict::inconclusive(res, "undischarged descendants remain at the finest depth");
        Certificate c;
        c.kind = EvidenceKind::CoveringAssignment;
        c.assignment = std::move(assignment);
        return Verdict::holds(std::move(c), res);
    }

    /// Certified lower bound on dist(K_A, K_B) by pair subdivision; 0 if the
    /// enclosures could not be separated within q levels.
    double set_gap(const Similitude& a, const Similitude& b, std::size_t q, std::size_t budget = 0) const {
        if (budget == 0) budget = opt_.node_budget;
        struct PairNode {
            Similitude ma, mb;
            std::size_t da, db;
        };
        std::vector<PairNode> stack{{a, b, 0, 0}};
        double gap = std::numeric_limits<double>::infinity();
        std::size_t visited = 0;
        while (!stack.empty()) {
            PairNode node = std::move(stack.back());
            stack.pop_back();
            if (++visited > budget) return 0.0;
            const Ball ba{node.ma.apply(att_.root_ball().center), node.ma.scale() * att_.root_ball().radius};
            const Ball bb{node.mb.apply(att_.root_ball().center), node.mb.scale() * att_.root_ball().radius};
            const double g = ball_gap(ba, bb);
            if (g > 0.0) {
                gap = std::min(gap, g);
                continue;
            }
            const bool can_a = node.da < q, can_b = node.db < q;
            if (!can_a && !can_b) return 0.0;
            for (const auto& r : att_.representatives(node.ma))
                for (const auto& s : att_.representatives(node.mb))
                    if ((r - s).norm() <= opt_.zero_tol) return 0.0;
            const bool split_a = can_a && (!can_b || ba.radius >= bb.radius);
            for (std::size_t j = att_.k(); j-- > 0;) {
                if (split_a)
                    stack.push_back({compose(node.ma, att_.ifs().maps[j]), node.mb, node.da + 1, node.db});
                else
                    stack.push_back({node.ma, compose(node.mb, att_.ifs().maps[j]), node.da, node.db + 1});
            }
        }
        return gap;
    }

private:
    using Key = std::vector<long long>;
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            std::size_t h = 1469598103934665603ull;
            for (long long v : k) {
                h ^= static_cast<std::size_t>(v);
                h *= 1099511628211ull;
            }
            return h;
        }
    };

    OracleOptions with_ratio_tol(double tol) const {
        OracleOptions o = opt_;
        o.ratio_tol = tol;
        return o;
    }

    Key quantize(const Similitude& f) const {
        const double scale = 1e10;
        const double tscale = scale / std::max(1.0, att_.diam_upper());
        Key key;
        key.reserve(1 + f.orthogonal().size() + f.translation().size());
        key.push_back(std::llround(f.scale() * scale));
        for (Eigen::Index i = 0; i < f.orthogonal().size(); ++i)
            key.push_back(std::llround(f.orthogonal().data()[i] * scale));
        for (Eigen::Index i = 0; i < f.translation().size(); ++i)
            key.push_back(std::llround(f.translation()[i] * tscale));
        return key;
    }

    bool maps_match(const Similitude& f, const Similitude& g) const {
        const double ttol = opt_.map_tol * std::max(1.0, att_.diam_upper());
        if (std::abs(f.scale() - g.scale()) > opt_.map_tol) return false;
        if ((f.orthogonal() - g.orthogonal()).cwiseAbs().maxCoeff() > opt_.map_tol) return false;
        return (f.translation() - g.translation()).cwiseAbs().maxCoeff() <= ttol;
    }

    std::optional<Word> search_word(const Similitude& rel) const {
        const double target = rel.scale();
        const Ball& root = att_.root_ball();
        const Point y = rel.apply(root.center);
        const double slack = 1e-9 * std::max(1.0, att_.diam_upper());
        struct Node {
            Similitude map;
            Word word;
        };
        std::vector<Node> stack;
        stack.push_back({Similitude::identity(att_.dim()), Word{}});
        std::size_t visited = 0;
        while (!stack.empty()) {
            Node node = std::move(stack.back());
            stack.pop_back();
            if (++visited > opt_.node_budget) break;
            const double c = node.map.scale();
            if (c < target * (1.0 - opt_.ratio_tol)) continue;
            const Point center = node.map.apply(root.center);
            if ((y - center).norm() > c * root.radius + slack) continue;
            if (std::abs(c - target) <= opt_.ratio_tol * target && maps_match(node.map, rel)) return node.word;
            for (std::size_t j = att_.k(); j-- > 0;)
                stack.push_back({compose(node.map, att_.ifs().maps[j]), node.word.appended(static_cast<Symbol>(j + 1))});
        }
        return std::nullopt;
    }

    const Attractor& att_;
    OracleOptions opt_;
    mutable std::mutex memo_mutex_;
    mutable std::unordered_map<Key, std::optional<Word>, KeyHash> memo_;
};

}  // namespace selfsim
