#pragma once

/// JSON serialization of verdicts, dimension and separation reports.

#include <chrono>
#include <cmath>
#include <ctime>
#include <string>
#include <vector>

#include "json.hpp"

#include "selfsim/dimensions.hpp"
#include "selfsim/separation.hpp"

namespace selfsim {

using Json = nlohmann::ordered_json;

namespace detail {

/// Non-finite values become null.
inline Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json words_json(const std::vector<Word>& ws) {
    Json out = Json::array();
    for (const auto& w : ws) out.push_back(w.to_string());
    return out;
}

}  // namespace detail

inline Json to_json(const Evidence& e) {
    Json j;
    j["kind"] = std::string(to_string(e.kind));
    if (!e.words.empty()) j["words"] = detail::words_json(e.words);
    if (!e.point.empty()) j["point"] = e.point;
    if (!e.second_point.empty()) j["second_point"] = e.second_point;
    j["value"] = detail::num(e.value);
    if (!e.assignment.empty()) {
        Json a = Json::array();
        for (const auto& x : e.assignment)
            a.push_back({{"piece", x.piece.to_string()}, {"cover", x.cover.to_string()}, {"via", x.via.to_string()}});
        j["assignment"] = std::move(a);
    }
    if (!e.exposed.empty()) {
        Json a = Json::array();
        for (const auto& x : e.exposed)
            a.push_back({{"piece", x.piece.to_string()}, {"point", x.point}, {"distance_lower", detail::num(x.distance_lower)}});
        j["exposed"] = std::move(a);
    }
    if (!e.vertices.empty()) j["vertices"] = e.vertices;
    if (!e.detail.empty()) j["detail"] = e.detail;
    return j;
}

inline Json to_json(const Resolution& r) {
    return {{"depth", r.depth}, {"eps", detail::num(r.eps)}, {"levels", r.levels}, {"budget_exceeded", r.budget_exceeded}};
}

inline Json to_json(const Verdict& v) {
    Json j;
    j["outcome"] = std::string(to_string(v.outcome));
    if (v.certificate) j["certificate"] = to_json(*v.certificate);
    if (v.witness) j["witness"] = to_json(*v.witness);
    j["resolution"] = to_json(v.resolution);
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

inline Json to_json(const Dim3Verification& v) {
    return {{"alpha", detail::num(v.alpha)},
            {"spread", v.spread},
            {"levels", v.levels},
            {"constant_tol", v.constant_tol},
            {"max_relative_deviation", detail::num(v.max_relative_deviation)},
            {"growth_factor", detail::num(v.growth_factor)},
            {"decay_factor", detail::num(v.decay_factor)},
            {"constant", v.constant},
            {"grows", v.grows},
            {"vanishes", v.vanishes},
            {"verified", v.passed()}};
}

inline Json to_json(const Dim4Bounds& b) {
    return {{"lower", detail::num(b.lower)},
            {"upper", detail::num(b.upper)},
            {"tol", b.tol},
            {"lower_basis", std::string(to_string(b.lower_basis))},
            {"upper_basis", std::string(to_string(b.upper_basis))},
            {"lower_rigorous", b.lower_rigorous},
            {"subcover", detail::words_json(b.subcover)},
            {"subcover_level", b.subcover_level},
            {"levels_checked", b.levels_checked}};
}

inline Json to_json(const H4Bounds& h) {
    Json covers = Json::array();
    for (const auto& c : h.covers) covers.push_back(detail::words_json(c));
    Json weights = Json::array();
    for (double w : h.weights) weights.push_back(detail::num(w));
    return {{"positive", to_json(h.positive)},
            {"upper", detail::num(h.upper)},
            {"full_weight", detail::num(h.full_weight)},
            {"weights", std::move(weights)},
            {"covers", std::move(covers)}};
}

inline Json to_json(const BoxEstimate& b) {
    Json scales = Json::array(), counts = Json::array();
    for (double s : b.scales) scales.push_back(detail::num(s));
    for (auto c : b.counts) counts.push_back(c);
    return {{"slope", detail::num(b.slope)},
            {"intercept", detail::num(b.intercept)},
            {"residual", detail::num(b.residual)},
            {"stderr_slope", detail::num(b.stderr_slope)},
            {"sample_depth", b.sample_depth},
            {"sample_size", b.sample_size},
            {"sample_resolution", detail::num(b.sample_resolution)},
            {"narrow_range", b.narrow_range},
            {"degenerate", b.degenerate},
            {"scales", std::move(scales)},
            {"counts", std::move(counts)}};
}

inline Json to_json(const SubcoverResult& s) {
    return {{"s", detail::num(s.s)},
            {"max_level", s.max_level},
            {"weight", detail::num(s.weight)},
            {"cover", detail::words_json(s.cover)},
            {"elements", s.elements},
            {"candidates", s.candidates},
            {"feasible", s.feasible},
            {"exact", s.exact},
            {"laminar", s.laminar},
            {"budget_exceeded", s.budget_exceeded}};
}

inline Json to_json(const ConsistencyEntry& e) {
    Json j{{"implication", e.implication},
           {"chain", e.chain},
           {"antecedent", std::string(to_string(e.antecedent))},
           {"consequent", std::string(to_string(e.consequent))},
           {"status", std::string(to_string(e.status))}};
    if (!e.detail.empty()) j["detail"] = e.detail;
    return j;
}

inline Json to_json(const SeparationReport& r) {
    Json levels = Json::array();
    for (std::size_t i = 0; i < r.irreducibility.size(); ++i) {
        const auto& lv = r.irreducibility[i];
        Json l{{"n", lv.n}, {"pieces", lv.words.size()}, {"irreducible", to_json(lv.verdict)}};
        if (i < r.levels.size()) {
            const auto& ls = r.levels[i];
            l["lsp1"] = to_json(ls.lsp1);
            l["lsp2"] = to_json(ls.lsp2);
            l["tiling"] = to_json(ls.tiling);
            l["finite_overlap"] = to_json(ls.finite_overlap);
            l["order_lower_bound"] = ls.order_lower;
        }
        levels.push_back(std::move(l));
    }
    Json consistency = Json::array();
    for (const auto& e : r.consistency) consistency.push_back(to_json(e));
    Json osc = to_json(r.osc);
    if (!r.osc_rejected.empty()) osc["rejected_candidates"] = r.osc_rejected;
    return {{"levels", std::move(levels)},
            {"irreducible", to_json(r.irreducible)},
            {"lsp", to_json(r.lsp)},
            {"tiling", to_json(r.tiling)},
            {"finite_overlap", to_json(r.finite_overlap)},
            {"finite_order", to_json(r.finite_order)},
            {"order_lower_bound", r.order_lower},
            {"osc", std::move(osc)},
            {"sosc", to_json(r.sosc)},
            {"dim4_equals_alpha", to_json(r.dim4_alpha)},
            {"h4_positive", to_json(r.h4_positive)},
            {"dim_h_equals_alpha", to_json(r.dim_h_alpha)},
            {"wosc", to_json(r.wosc)},
            {"consistency", std::move(consistency)},
            {"violations", r.violations()},
            {"notes", r.notes}};
}

/// ISO 8601 UTC timestamp, the only field that differs between runs.
inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace selfsim
