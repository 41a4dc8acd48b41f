#pragma once

/// Convex polytopes as candidate open sets for the open set condition.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfsim/attractor.hpp"
#include "selfsim/verdict.hpp"

namespace selfsim {

/// Closed convex polytope {x : n·x ≤ b for every facet}; its interior is the
/// candidate open set V.
struct Polytope {
    struct Facet {
        Point normal;
        double offset = 0.0;
    };

    int dim = 0;
    std::string label;
    std::vector<Point> vertices;
    std::vector<Facet> facets;
    std::vector<Point> edges;  // edge directions (used by the 3-D separation test)

    double margin(const Point& x) const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& f : facets) m = std::min(m, f.offset - f.normal.dot(x));
        return m;
    }

    double extent() const {
        double e = 0.0;
        for (const auto& a : vertices)
            for (const auto& b : vertices) e = std::max(e, (a - b).norm());
        return e;
    }

    /// f(P): vertices mapped, facet normals rotated, offsets rescaled.
    Polytope image(const Similitude& f) const {
        Polytope out;
        out.dim = dim;
        out.label = label;
        for (const auto& v : vertices) out.vertices.push_back(f.apply(v));
        for (const auto& fc : facets) {
            const Point n = f.orthogonal() * fc.normal;
            out.facets.push_back({n, f.scale() * fc.offset + n.dot(f.translation())});
        }
        for (const auto& e : edges) out.edges.push_back(f.orthogonal() * e);
        return out;
    }
};

/// Axis-aligned box [lo, hi].
inline Polytope make_box(const Point& lo, const Point& hi, std::string label = "box") {
    const int d = static_cast<int>(lo.size());
    Polytope p;
    p.dim = d;
    p.label = std::move(label);
    for (int i = 0; i < d; ++i) {
        Point e = Point::Zero(d);
        e[i] = 1.0;
        p.facets.push_back({e, hi[i]});
        p.facets.push_back({-e, -lo[i]});
        p.edges.push_back(e);
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        Point v(d);
        for (int i = 0; i < d; ++i) v[i] = (mask >> i & 1u) ? hi[i] : lo[i];
        p.vertices.push_back(v);
    }
    return p;
}

/// Convex hull of planar points (monotone chain), counter-clockwise.
inline std::optional<Polytope> make_hull_2d(std::vector<Point> pts, double tol, std::string label = "hull") {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
    });
    auto cross = [](const Point& o, const Point& a, const Point& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= tol) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= tol) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k > 0 ? k - 1 : 0);
    if (hull.size() < 3) return std::nullopt;
    Polytope p;
    p.dim = 2;
    p.label = std::move(label);
    p.vertices = hull;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point& a = hull[i];
        const Point& b = hull[(i + 1) % hull.size()];
        Point edge = b - a;
        Point n(2);
        n << edge[1], -edge[0];
        n.normalize();
        p.facets.push_back({n, n.dot(a)});
        p.edges.push_back(edge.normalized());
    }
    return p;
}

/// Built-in candidates: convex hull (d ≤ 2) and bounding box (d ≤ 3) of the
/// fixed points of all level-q composite maps, q = 1, 2. Degenerate
/// (zero-volume) candidates are dropped.
inline std::vector<Polytope> builtin_candidates(const Attractor& att) {
    const int d = att.dim();
    if (d > 3) return {};
    const double tol = 1e-12 * std::max(1.0, att.diam_upper());
    std::vector<Polytope> out;
    for (std::size_t q = 1; q <= 2; ++q) {
        std::vector<Point> pts;
        for (const auto& p : att.build_level(q).pieces) pts.push_back(p.map.fixed_point());
        const std::string tag = "level-" + std::to_string(q) + " fixed points";
        if (d == 2)
            if (auto h = make_hull_2d(pts, tol * tol, "convex hull of " + tag)) out.push_back(std::move(*h));
        Point lo = pts.front(), hi = pts.front();
        for (const auto& p : pts) lo = lo.cwiseMin(p), hi = hi.cwiseMax(p);
        if ((hi - lo).minCoeff() > tol)
            out.push_back(make_box(lo, hi, (d == 1 ? "interval spanned by " : "bounding box of ") + tag));
    }
    return out;
}

/// f(P̄) ⊆ P̄, checked on the vertices of f(P).
inline bool polytope_contains(const Polytope& outer, const Polytope& inner, double tol) {
    for (const auto& v : inner.vertices)
        if (outer.margin(v) < -tol) return false;
    return true;
}

/// Interiors of two convex polytopes are disjoint iff some axis separates
/// their projections (touching allowed). Axes: facet normals, plus pairwise
/// edge cross products in 3-D.
inline bool interiors_disjoint(const Polytope& a, const Polytope& b, double tol) {
    std::vector<Point> axes;
    for (const auto& f : a.facets) axes.push_back(f.normal);
    for (const auto& f : b.facets) axes.push_back(f.normal);
    if (a.dim == 3)
        for (const auto& e : a.edges)
            for (const auto& g : b.edges) {
                Eigen::Vector3d c = Eigen::Vector3d(e[0], e[1], e[2]).cross(Eigen::Vector3d(g[0], g[1], g[2]));
                if (c.norm() > 1e-12) axes.push_back(Point(c.normalized()));
            }
    for (const auto& n : axes) {
        double amin = std::numeric_limits<double>::infinity(), amax = -amin, bmin = amin, bmax = -amin;
        for (const auto& v : a.vertices) amin = std::min(amin, n.dot(v)), amax = std::max(amax, n.dot(v));
        for (const auto& v : b.vertices) bmin = std::min(bmin, n.dot(v)), bmax = std::max(bmax, n.dot(v));
        if (amax <= bmin + tol || bmax <= amin + tol) return true;
    }
    return false;
}

struct OscResult {
    Verdict verdict;
    std::optional<Polytope> polytope;
    std::vector<std::string> rejected;  // one reason per candidate tried
};

/// Holds with the first candidate V whose images f_i(V̄) lie in V̄ with
/// pairwise disjoint interiors. Fails only when two distinct words of length
/// ≤ 2 carry the same composite map (then f_u(V) = f_v(V) for every V).
inline OscResult osc_certificate_search(const Attractor& att, const std::vector<Polytope>& candidates,
                                        double map_tol = 1e-9) {
    OscResult out;
    const double scale = std::max(1.0, att.diam_upper());
    Resolution res{0, 0.0, 2, false};
    for (std::size_t n = 1; n <= 2; ++n) {
        const auto pieces = att.build_level(n).pieces;
        for (std::size_t j = 1; j < pieces.size(); ++j)
            for (std::size_t i = 0; i < j; ++i)
                if (approx_equal(pieces[i].map, pieces[j].map, map_tol * scale)) {
                    Witness w;
                    w.kind = EvidenceKind::DuplicateMaps;
                    w.words = {pieces[i].word, pieces[j].word};
                    w.detail = "f_" + pieces[i].word.to_string() + " = f_" + pieces[j].word.to_string() +
                               ", so their images of any open set coincide";
                    out.verdict = Verdict::fails(std::move(w), res);
                    return out;
                }
    }
    for (const auto& v : candidates) {
        const double tol = 1e-12 * std::max(1.0, v.extent());
        std::vector<Polytope> images;
        for (const auto& f : att.ifs().maps) images.push_back(v.image(f));
        std::string reason;
        for (std::size_t i = 0; i < images.size() && reason.empty(); ++i)
            if (!polytope_contains(v, images[i], tol)) reason = "f_" + std::to_string(i + 1) + "(V) leaves V";
        for (std::size_t i = 0; i < images.size() && reason.empty(); ++i)
            for (std::size_t j = i + 1; j < images.size() && reason.empty(); ++j)
                if (!interiors_disjoint(images[i], images[j], tol))
                    reason = "f_" + std::to_string(i + 1) + "(V) and f_" + std::to_string(j + 1) + "(V) overlap";
        if (!reason.empty()) {
            out.rejected.push_back(v.label + ": " + reason);
            continue;
        }
        Certificate c;
        c.kind = EvidenceKind::Polytope;
        for (const auto& p : v.vertices) c.vertices.push_back(to_vector(p));
        c.detail = "V = interior of the " + v.label;
        out.verdict = Verdict::holds(std::move(c), res);
        out.polytope = v;
        return out;
    }
    out.verdict = Verdict::inconclusive(res, candidates.empty() ? "no built-in candidates for this dimension"
                                                                : "no candidate open set satisfies the conditions");
    return out;
}

inline OscResult osc_certificate_search(const Attractor& att) {
    return osc_certificate_search(att, builtin_candidates(att));
}

/// Holds with the attractor sample point of largest margin strictly inside V.
inline Verdict sosc_check(const Attractor& att, const Polytope& v, std::size_t q) {
    Resolution res{q, 0.0, 0, false};
    std::size_t count = 1, fit = 0;
    while (fit < q && count * att.k() <= att.budget()) count *= att.k(), ++fit;
    if (fit < q) res.depth = q = fit, res.budget_exceeded = true;
    const double tol = 1e-12 * std::max(1.0, v.extent());
    const auto pts = att.images_of(att.root_piece(), q, att.seeds());
    const Point* best = nullptr;
    double best_margin = tol;
    for (const auto& x : pts) {
        const double m = v.margin(x);
        if (m > best_margin) best_margin = m, best = &x;
    }
    if (!best) return Verdict::inconclusive(res, "no sample point strictly inside V");
    Certificate c;
    c.kind = EvidenceKind::InteriorPoint;
    c.point = to_vector(*best);
    c.value = best_margin;
    c.detail = "attractor point inside V with margin " + std::to_string(best_margin);
    return Verdict::holds(std::move(c), res);
}

}  // namespace selfsim
