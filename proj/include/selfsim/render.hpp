#pragma once

/// SVG renderings of pre-fractal levels: stacked interval bars for d = 1,
/// enclosure circles with sample points for d = 2.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "selfsim/attractor.hpp"

namespace selfsim {

namespace detail {

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

/// Convex hull [a, b] of a 1-D attractor: the smallest interval mapped into
/// itself by every f_i.
inline std::pair<double, double> line_hull(const IFSystem& ifs) {
    double a = std::numeric_limits<double>::infinity(), b = -a;
    for (const auto& f : ifs.maps) {
        const double p = f.fixed_point()[0];
        a = std::min(a, p), b = std::max(b, p);
    }
    for (int it = 0; it < 200; ++it) {
        double na = a, nb = b;
        for (const auto& f : ifs.maps)
            for (double x : {a, b}) {
                const double y = f.apply(Point::Constant(1, x))[0];
                na = std::min(na, y), nb = std::max(nb, y);
            }
        if (na == a && nb == b) break;
        a = na, b = nb;
    }
    return {a, b};
}

}  // namespace detail

inline std::string render_levels_svg(const Attractor& att, std::size_t n) {
    if (att.dim() > 2) throw std::invalid_argument("rendering supports d ≤ 2");
    if (n == 0) throw std::invalid_argument("rendering needs a level n ≥ 1");
    const double width = 800.0, margin = 20.0;
    std::string svg;
    auto line = [&](const std::string& s) { svg += s + "\n"; };

    if (att.dim() == 1) {
        const auto [a, b] = detail::line_hull(att.ifs());
        const double span = b > a ? b - a : 1.0;
        const double row = 24.0, bar = 12.0;
        const double height = 2.0 * margin + row * static_cast<double>(n);
        auto sx = [&](double x) { return margin + (x - a) / span * (width - 2.0 * margin); };
        line("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(width) + "\" height=\"" +
             detail::fmt(height) + "\" viewBox=\"0 0 " + detail::fmt(width) + " " + detail::fmt(height) + "\">");
        line("<title>" + att.ifs().label + ", levels 1-" + std::to_string(n) + "</title>");
        for (std::size_t l = 1; l <= n; ++l) {
            const double y = margin + row * static_cast<double>(l - 1);
            line("<g class=\"level\" data-level=\"" + std::to_string(l) + "\" fill=\"#1f4e79\">");
            for (const auto& p : att.build_level(l).pieces) {
                const double u = p.map.apply(Point::Constant(1, a))[0];
                const double v = p.map.apply(Point::Constant(1, b))[0];
                const double lo = std::min(u, v), hi = std::max(u, v);
                line("<rect x=\"" + detail::fmt(sx(lo)) + "\" y=\"" + detail::fmt(y) + "\" width=\"" +
                     detail::fmt(sx(hi) - sx(lo)) + "\" height=\"" + detail::fmt(bar) + "\" data-word=\"" +
                     p.word.to_string() + "\"/>");
            }
            line("</g>");
        }
        line("</svg>");
        return svg;
    }

    const auto level = att.build_level(n);
    Point lo = level.pieces.front().enclosure.center, hi = lo;
    for (const auto& p : level.pieces) {
        const Point r = Point::Constant(2, p.enclosure.radius);
        lo = lo.cwiseMin(p.enclosure.center - r);
        hi = hi.cwiseMax(p.enclosure.center + r);
    }
    const double span = std::max(hi[0] - lo[0], hi[1] - lo[1]);
    const double scale = (width - 2.0 * margin) / span;
    const double height = 2.0 * margin + (hi[1] - lo[1]) * scale;
    auto sx = [&](double x) { return margin + (x - lo[0]) * scale; };
    auto sy = [&](double y) { return height - margin - (y - lo[1]) * scale; };
    line("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(width) + "\" height=\"" +
         detail::fmt(height) + "\" viewBox=\"0 0 " + detail::fmt(width) + " " + detail::fmt(height) + "\">");
    line("<title>" + att.ifs().label + ", level " + std::to_string(n) + "</title>");
    line("<g class=\"enclosures\" fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"0.5\">");
    for (const auto& p : level.pieces)
        line("<circle cx=\"" + detail::fmt(sx(p.enclosure.center[0])) + "\" cy=\"" + detail::fmt(sy(p.enclosure.center[1])) +
             "\" r=\"" + detail::fmt(p.enclosure.radius * scale) + "\" data-word=\"" + p.word.to_string() + "\"/>");
    line("</g>");
    std::size_t q = 0, count = 1;
    while (count * att.k() <= 4096) count *= att.k(), ++q;
    std::string d;
    for (const auto& x : att.sample_points(att.root_piece(), q))
        d += "M" + detail::fmt(sx(x[0])) + " " + detail::fmt(sy(x[1])) + "h0";
    line("<path class=\"samples\" stroke=\"#c00000\" stroke-width=\"1.5\" stroke-linecap=\"round\" d=\"" + d + "\"/>");
    line("</svg>");
    return svg;
}

inline void render_levels(const Attractor& att, std::size_t n, const std::string& path) {
    const std::string svg = render_levels_svg(att, n);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << svg;
}

}  // namespace selfsim
