#pragma once

/// Built-in IFS corpus with the values each entry is expected to reproduce.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfsim/attractor.hpp"
#include "selfsim/verdict.hpp"

namespace selfsim {

/// Where an expected value comes from.
enum class Provenance { Published, Trivial, Derived };

inline std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::Published: return "published";
        case Provenance::Trivial: return "trivial";
        case Provenance::Derived: return "derived";
    }
    return "derived";
}

struct ExpectedValue {
    std::string quantity;  // alpha, box, dim4_upper, dim4_lower, diameter
    double value = 0.0;
    double tol = 0.0;
    Provenance basis = Provenance::Derived;
};

struct ExpectedVerdict {
    std::string property;  // irreducible, osc, sosc, lsp1, tiling, finite_overlap, wosc, h4
    Outcome outcome = Outcome::Inconclusive;
    Provenance basis = Provenance::Derived;
};

struct CorpusEntry {
    std::string name;
    IFSystem ifs;
    std::vector<ExpectedValue> values;
    std::vector<ExpectedVerdict> verdicts;

    std::optional<ExpectedValue> value(const std::string& quantity) const {
        for (const auto& v : values)
            if (v.quantity == quantity) return v;
        return std::nullopt;
    }
    std::optional<ExpectedVerdict> verdict(const std::string& property) const {
        for (const auto& v : verdicts)
            if (v.property == property) return v;
        return std::nullopt;
    }
};

namespace corpus {

inline Similitude line_map(double scale, double shift) {
    return Similitude(scale, Matrix::Identity(1, 1), Point::Constant(1, shift));
}

inline Similitude plane_map(double scale, double tx, double ty) {
    Point t(2);
    t << tx, ty;
    return Similitude(scale, Matrix::Identity(2, 2), t);
}

/// Vertices of the planar gasket whose projections have dimension one.
inline std::vector<Point> mattila_vertices() {
    Point a(2), b(2), c(2);
    a << 0.0, 0.0;
    b << 1.0, 0.0;
    c << 0.5, 1.0 / (2.0 * std::sqrt(3.0));
    return {a, b, c};
}

inline IFSystem bisection() {
    return IFSystem{1, {line_map(0.5, 0.0), line_map(0.5, 0.5)}, "bisection"};
}

inline IFSystem cantor() {
    return IFSystem{1, {line_map(1.0 / 3.0, 0.0), line_map(1.0 / 3.0, 2.0 / 3.0)}, "cantor"};
}

inline IFSystem gasket() {
    return IFSystem{2,
                    {plane_map(0.5, 0.0, 0.0), plane_map(0.5, 0.5, 0.0),
                     plane_map(0.5, 0.25, std::sqrt(3.0) / 4.0)},
                    "gasket"};
}

inline IFSystem squares() {
    return IFSystem{2,
                    {plane_map(0.5, 0.0, 0.0), plane_map(0.5, 0.5, 0.0), plane_map(0.5, 0.0, 0.5),
                     plane_map(0.5, 0.5, 0.5)},
                    "squares"};
}

inline IFSystem duplicate_cantor() {
    return IFSystem{1,
                    {line_map(1.0 / 3.0, 0.0), line_map(1.0 / 3.0, 0.0), line_map(1.0 / 3.0, 2.0 / 3.0)},
                    "duplicate_cantor"};
}

/// f_i(x) = x_i + (x − x_i)/3.
inline IFSystem mattila() {
    IFSystem ifs{2, {}, "mattila"};
    for (const auto& v : mattila_vertices()) ifs.maps.push_back(plane_map(1.0 / 3.0, 2.0 * v[0] / 3.0, 2.0 * v[1] / 3.0));
    return ifs;
}

/// Orthogonal projection of the Mattila gasket onto the line spanned by
/// e_θ: p ↦ p/3 + (2/3)⟨x_i, e_θ⟩.
inline IFSystem mattila_projection(double theta) {
    IFSystem ifs{1, {}, "mattila_proj:" + std::to_string(theta)};
    const double cx = std::cos(theta), sy = std::sin(theta);
    for (const auto& v : mattila_vertices()) ifs.maps.push_back(line_map(1.0 / 3.0, 2.0 / 3.0 * (v[0] * cx + v[1] * sy)));
    return ifs;
}

inline std::vector<std::string> names() {
    return {"bisection", "cantor", "gasket", "squares", "duplicate_cantor", "mattila", "mattila_proj:0.7"};
}

inline CorpusEntry entry(const std::string& name) {
    using P = Provenance;
    const double log2_log3 = std::log(2.0) / std::log(3.0);
    const double log3_log2 = std::log(3.0) / std::log(2.0);
    if (name == "bisection")
        return {name, bisection(),
                {{"alpha", 1.0, 1e-9, P::Trivial}, {"diameter", 1.0, 1e-9, P::Trivial},
                 {"dim4_lower", 1.0, 1e-9, P::Derived}, {"dim4_upper", 1.0, 1e-9, P::Derived},
                 {"box", 1.0, 0.05, P::Trivial}},
                {{"irreducible", Outcome::Holds, P::Trivial}, {"osc", Outcome::Holds, P::Trivial},
                 {"sosc", Outcome::Holds, P::Trivial}, {"finite_overlap", Outcome::Holds, P::Trivial},
                 {"lsp1", Outcome::Holds, P::Derived}, {"tiling", Outcome::Holds, P::Derived},
                 {"h4", Outcome::Holds, P::Trivial}, {"wosc", Outcome::Holds, P::Derived}}};
    if (name == "cantor")
        return {name, cantor(),
                {{"alpha", log2_log3, 1e-9, P::Derived}, {"diameter", 1.0, 1e-6, P::Derived},
                 {"dim4_lower", log2_log3, 1e-9, P::Derived}, {"dim4_upper", log2_log3, 1e-9, P::Derived},
                 {"box", 0.631, 0.05, P::Derived}},
                {{"irreducible", Outcome::Holds, P::Derived}, {"osc", Outcome::Holds, P::Derived},
                 {"sosc", Outcome::Holds, P::Derived}, {"lsp1", Outcome::Holds, P::Derived},
                 {"wosc", Outcome::Holds, P::Derived}}};
    if (name == "gasket")
        return {name, gasket(),
                {{"alpha", log3_log2, 1e-9, P::Derived}, {"diameter", 1.0, 1e-6, P::Derived},
                 {"dim4_lower", log3_log2, 1e-9, P::Derived}, {"dim4_upper", log3_log2, 1e-9, P::Derived},
                 {"box", 1.585, 0.05, P::Derived}},
                {{"irreducible", Outcome::Holds, P::Derived}, {"osc", Outcome::Holds, P::Derived},
                 {"sosc", Outcome::Holds, P::Derived}, {"finite_overlap", Outcome::Holds, P::Derived},
                 {"tiling", Outcome::Holds, P::Derived}, {"h4", Outcome::Holds, P::Derived},
                 {"wosc", Outcome::Holds, P::Derived}}};
    if (name == "squares")
        return {name, squares(),
                {{"alpha", 2.0, 1e-9, P::Trivial}, {"dim4_lower", 2.0, 1e-9, P::Derived},
                 {"dim4_upper", 2.0, 1e-9, P::Derived}},
                {{"irreducible", Outcome::Holds, P::Derived}, {"osc", Outcome::Holds, P::Trivial},
                 {"wosc", Outcome::Holds, P::Derived}}};
    if (name == "duplicate_cantor")
        return {name, duplicate_cantor(),
                {{"alpha", 1.0, 1e-9, P::Trivial}, {"dim4_upper", log2_log3, 1e-9, P::Derived}},
                {{"irreducible", Outcome::Fails, P::Derived}, {"osc", Outcome::Fails, P::Trivial},
                 {"lsp1", Outcome::Fails, P::Derived}, {"tiling", Outcome::Fails, P::Derived},
                 {"finite_overlap", Outcome::Fails, P::Derived}, {"h4", Outcome::Fails, P::Derived},
                 {"wosc", Outcome::Fails, P::Derived}}};
    if (name == "mattila")
        return {name, mattila(),
                {{"alpha", 1.0, 1e-9, P::Published}, {"dim4_lower", 1.0, 1e-9, P::Derived},
                 {"dim4_upper", 1.0, 1e-9, P::Derived}},
                {{"irreducible", Outcome::Holds, P::Derived}, {"osc", Outcome::Holds, P::Published},
                 {"sosc", Outcome::Holds, P::Published}, {"wosc", Outcome::Holds, P::Derived}}};
    if (name.rfind("mattila_proj:", 0) == 0) {
        const double theta = std::stod(name.substr(13));
        CorpusEntry e{name, mattila_projection(theta),
                      {{"alpha", 1.0, 1e-9, P::Published}, {"box", 1.0, 0.15, P::Published}},
                      {{"osc", Outcome::Inconclusive, P::Published}, {"wosc", Outcome::Inconclusive, P::Published}}};
        e.ifs.label = name;
        return e;
    }
    throw std::invalid_argument("unknown corpus entry '" + name + "'");
}

}  // namespace corpus
}  // namespace selfsim
