#pragma once

/// The IFS, certified metric data of its attractor K, and the levels
/// Γ_n = {f_i(K) : i ∈ Σ^n} of its natural fractal structure.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfsim/similitude.hpp"
#include "selfsim/words.hpp"

namespace selfsim {

inline constexpr std::size_t kDefaultBudget = 200000;

/// Default piece budget, overridable through SELFSIM_BUDGET.
inline std::size_t default_budget() {
    if (const char* env = std::getenv("SELFSIM_BUDGET")) {
        try {
            const long long v = std::stoll(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return kDefaultBudget;
}

struct IFSystem {
    int dim = 0;
    std::vector<Similitude> maps;
    std::string label;

    std::size_t k() const noexcept { return maps.size(); }

    std::vector<double> ratios() const {
        std::vector<double> r;
        r.reserve(maps.size());
        for (const auto& f : maps) r.push_back(f.scale());
        return r;
    }

    double max_ratio() const {
        double m = 0.0;
        for (const auto& f : maps) m = std::max(m, f.scale());
        return m;
    }

    double min_ratio() const {
        double m = 1.0;
        for (const auto& f : maps) m = std::min(m, f.scale());
        return m;
    }

    /// Throws std::invalid_argument naming the violated invariant.
    void validate() const {
        if (dim < 1) throw std::invalid_argument("dimension must be at least 1");
        if (maps.size() < 2) throw std::invalid_argument("an IFS needs at least 2 maps");
        for (std::size_t i = 0; i < maps.size(); ++i) {
            if (maps[i].dim() != dim)
                throw std::invalid_argument("map " + std::to_string(i + 1) + " has dimension " +
                                            std::to_string(maps[i].dim()) + ", expected " + std::to_string(dim));
            if (!(maps[i].scale() > 0.0 && maps[i].scale() < 1.0))
                throw std::invalid_argument("map " + std::to_string(i + 1) + ": scale out of (0,1)");
        }
    }
};

struct Ball {
    Point center;
    double radius = 0.0;

    bool contains(const Point& x, double slack = 0.0) const { return (x - center).norm() <= radius + slack; }
};

inline double ball_gap(const Ball& a, const Ball& b) { return (a.center - b.center).norm() - a.radius - b.radius; }

struct Piece {
    Word word;
    Similitude map;
    double ratio = 1.0;
    double diameter = 0.0;
    Ball enclosure;
};

struct Level {
    std::size_t n = 0;
    std::vector<Piece> pieces;

    double max_diameter() const {
        double m = 0.0;
        for (const auto& p : pieces) m = std::max(m, p.diameter);
        return m;
    }
};

struct DiameterBracket {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    std::size_t expansions = 0;
    bool budget_exceeded = false;

    double width() const { return upper - lower; }
};

namespace detail {

/// Invariant ball: center at the mean of the fixed points, radius
/// max_i ‖f_i(x₀)−x₀‖/(1−c_i), slightly inflated for rounding.
inline Ball invariant_ball(const IFSystem& ifs) {
    Point x0 = Point::Zero(ifs.dim);
    for (const auto& f : ifs.maps) x0 += f.fixed_point();
    x0 /= static_cast<double>(ifs.k());
    double r0 = 0.0;
    for (const auto& f : ifs.maps) r0 = std::max(r0, (f.apply(x0) - x0).norm() / (1.0 - f.scale()));
    r0 = r0 * (1.0 + 1e-12) + 1e-15;
    return Ball{x0, r0};
}

}  // namespace detail

/// Lower ≤ diam(K) ≤ upper by best-first branch and bound over pairs of
/// pieces: pair upper = ‖c_a−c_b‖ + r_a + r_b, pair lower = largest distance
/// between exact attractor points (fixed-point images) of the two pieces.
/// Stops when upper − lower ≤ tol, at `max_depth`, or after `budget` expansions.
inline DiameterBracket estimate_diameter(const IFSystem& ifs, std::size_t max_depth, double tol,
                                         std::size_t budget = default_budget()) {
    ifs.validate();
    const Ball root = detail::invariant_ball(ifs);
    std::vector<Point> seeds;
    for (const auto& f : ifs.maps) seeds.push_back(f.fixed_point());

    struct Node {
        Similitude map;
        std::size_t depth;
        Point center;
        double radius;
        std::vector<Point> reps;
    };
    auto make_node = [&](Similitude map, std::size_t depth) {
        Node n{std::move(map), depth, Point(), 0.0, {}};
        n.center = n.map.apply(root.center);
        n.radius = n.map.scale() * root.radius;
        for (const auto& s : seeds) n.reps.push_back(n.map.apply(s));
        return n;
    };
    std::vector<Node> nodes;
    nodes.push_back(make_node(Similitude::identity(ifs.dim), 0));

    struct PairEntry {
        double upper;
        std::size_t a, b;
        bool operator<(const PairEntry& o) const {
            if (upper != o.upper) return upper < o.upper;
            if (a != o.a) return a > o.a;
            return b > o.b;
        }
    };
    DiameterBracket out;
    auto pair_lower = [&](const Node& a, const Node& b) {
        double best = 0.0;
        for (const auto& p : a.reps)
            for (const auto& q : b.reps) best = std::max(best, (p - q).norm());
        return best;
    };
    auto pair_upper = [&](const Node& a, const Node& b) {
        return (a.center - b.center).norm() + a.radius + b.radius;
    };
    std::priority_queue<PairEntry> queue;
    out.lower = pair_lower(nodes[0], nodes[0]);
    queue.push({2.0 * nodes[0].radius, 0, 0});
    std::vector<std::vector<std::size_t>> kids(1);

    auto expand = [&](std::size_t idx) -> const std::vector<std::size_t>& {
        if (kids[idx].empty()) {
            for (std::size_t j = 0; j < ifs.k(); ++j) {
                Node child = make_node(compose(nodes[idx].map, ifs.maps[j]), nodes[idx].depth + 1);
                nodes.push_back(std::move(child));
                kids.emplace_back();
                kids[idx].push_back(nodes.size() - 1);
            }
        }
        return kids[idx];
    };

    while (!queue.empty()) {
        const PairEntry top = queue.top();
        out.upper = top.upper;
        if (top.upper - out.lower <= tol) break;
        const Node& na = nodes[top.a];
        const Node& nb = nodes[top.b];
        if (std::max(na.depth, nb.depth) >= max_depth) break;
        if (out.expansions >= budget) {
            out.budget_exceeded = true;
            break;
        }
        queue.pop();
        ++out.expansions;
        std::vector<std::pair<std::size_t, std::size_t>> next;
        if (top.a == top.b) {
            const auto ch = expand(top.a);
            for (std::size_t i = 0; i < ch.size(); ++i)
                for (std::size_t j = i; j < ch.size(); ++j) next.emplace_back(ch[i], ch[j]);
        } else {
            const bool split_a = nodes[top.a].radius >= nodes[top.b].radius;
            const auto ch = expand(split_a ? top.a : top.b);
            for (std::size_t c : ch) next.emplace_back(split_a ? c : top.a, split_a ? top.b : c);
        }
        for (auto [a, b] : next) {
            out.lower = std::max(out.lower, pair_lower(nodes[a], nodes[b]));
            const double up = (a == b) ? 2.0 * nodes[a].radius : pair_upper(nodes[a], nodes[b]);
            if (up > out.lower) queue.push({up, a, b});
        }
        if (queue.empty()) out.upper = out.lower;
    }
    out.upper = std::max(out.upper, out.lower);
    return out;
}

struct AttractorOptions {
    std::size_t budget = default_budget();
    double diameter_tol = 1e-10;
    std::size_t diameter_depth = 64;
};

/// An IFS together with the certified root enclosure and diameter bracket
/// of its attractor; builds pieces and levels.
class Attractor {
public:
    explicit Attractor(IFSystem ifs, AttractorOptions options = {})
        : ifs_(std::move(ifs)), options_(options) {
        ifs_.validate();
        root_ = detail::invariant_ball(ifs_);
        diameter_ = estimate_diameter(ifs_, options_.diameter_depth, options_.diameter_tol, options_.budget);
        for (const auto& f : ifs_.maps) seeds_.push_back(f.fixed_point());
        for (const auto& f : ifs_.maps) first_centers_.push_back(f.apply(root_.center));
    }

    const IFSystem& ifs() const noexcept { return ifs_; }
    std::size_t k() const noexcept { return ifs_.k(); }
    int dim() const noexcept { return ifs_.dim; }
    std::size_t budget() const noexcept { return options_.budget; }
    const Ball& root_ball() const noexcept { return root_; }
    const DiameterBracket& diameter() const noexcept { return diameter_; }
    double diam_upper() const noexcept { return diameter_.upper; }
    double diam_lower() const noexcept { return diameter_.lower; }

    /// Fixed points of f_1..f_k: exact points of K.
    const std::vector<Point>& seeds() const noexcept { return seeds_; }

    Piece make_piece(Word word, Similitude map) const {
        Piece p;
        p.word = std::move(word);
        p.ratio = map.scale();
        p.diameter = p.ratio * diam_upper();
        p.enclosure = Ball{map.apply(root_.center), p.ratio * root_.radius};
        p.map = std::move(map);
        return p;
    }

    Piece root_piece() const { return make_piece(Word{}, Similitude::identity(dim())); }

    Piece piece(const Word& word) const {
        if (!word.valid_for(k())) throw std::invalid_argument("word " + word.to_string() + " uses symbols outside 1..k");
        Similitude map = Similitude::identity(dim());
        for (Symbol s : word.symbols()) map = compose(map, ifs_.maps[s - 1]);
        return make_piece(word, std::move(map));
    }

    Piece child(const Piece& parent, Symbol j) const {
        return make_piece(parent.word.appended(j), compose(parent.map, ifs_.maps[j - 1]));
    }

    std::vector<Piece> children_of(const Piece& parent) const {
        std::vector<Piece> out;
        out.reserve(k());
        for (std::size_t j = 1; j <= k(); ++j) out.push_back(child(parent, static_cast<Symbol>(j)));
        return out;
    }

    /// Γ_n in lexicographic word order; duplicates are kept.
    Level build_level(std::size_t n) const {
        checked_power(k(), n, options_.budget);
        Level level;
        level.n = n;
        level.pieces.push_back(root_piece());
        for (std::size_t depth = 0; depth < n; ++depth) {
            std::vector<Piece> next;
            next.reserve(level.pieces.size() * k());
            for (const auto& p : level.pieces)
                for (std::size_t j = 1; j <= k(); ++j) next.push_back(child(p, static_cast<Symbol>(j)));
            level.pieces = std::move(next);
        }
        return level;
    }

    /// Images of the fixed point of f_1 under f_word∘f_w, w ∈ Σ^q, in
    /// lexicographic order of w.
    std::vector<Point> sample_points(const Piece& piece, std::size_t q) const {
        return images_of(piece, q, {seeds_.front()});
    }

    /// Images of the given points under f_word∘f_w for all w ∈ Σ^q.
    std::vector<Point> images_of(const Piece& piece, std::size_t q, const std::vector<Point>& points) const {
        checked_power(k(), q, options_.budget);
        std::vector<Similitude> frontier{piece.map};
        for (std::size_t depth = 0; depth < q; ++depth) {
            std::vector<Similitude> next;
            next.reserve(frontier.size() * k());
            for (const auto& f : frontier)
                for (const auto& g : ifs_.maps) next.push_back(compose(f, g));
            frontier = std::move(next);
        }
        std::vector<Point> out;
        out.reserve(frontier.size() * points.size());
        for (const auto& f : frontier)
            for (const auto& x : points) out.push_back(f.apply(x));
        return out;
    }

    /// Exact attractor points of a piece: images of every seed.
    std::vector<Point> representatives(const Similitude& map) const {
        std::vector<Point> out;
        out.reserve(seeds_.size());
        for (const auto& s : seeds_) out.push_back(map.apply(s));
        return out;
    }

    /// Enclosure of the child j of a piece with map `map`, without composing maps.
    Ball child_ball(const Similitude& map, Symbol j) const {
        return Ball{map.apply(first_centers_[j - 1]), map.scale() * ifs_.maps[j - 1].scale() * root_.radius};
    }

private:
    IFSystem ifs_;
    AttractorOptions options_;
    Ball root_;
    DiameterBracket diameter_;
    std::vector<Point> seeds_;
    std::vector<Point> first_centers_;
};

/// Structural self-test that Γ_{n+1} refines Γ_n.
inline bool refinement_check(const Attractor& att, std::size_t n) {
    const Level coarse = att.build_level(n);
    const Level fine = att.build_level(n + 1);
    if (fine.pieces.size() != coarse.pieces.size() * att.k()) return false;
    for (std::size_t i = 0; i < coarse.pieces.size(); ++i) {
        for (std::size_t j = 0; j < att.k(); ++j) {
            const Piece& c = fine.pieces[i * att.k() + j];
            if (!is_prefix(coarse.pieces[i].word, c.word) || c.word.size() != n + 1) return false;
            if (c.word[n] != static_cast<Symbol>(j + 1)) return false;
        }
    }
    return true;
}

}  // namespace selfsim
