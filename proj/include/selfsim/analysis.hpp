#pragma once

/// One analysis run: dimensions, separation properties and the report.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "selfsim/corpus.hpp"
#include "selfsim/ifs_io.hpp"
#include "selfsim/report.hpp"

namespace selfsim {

struct AnalysisConfig {
    std::size_t levels = 5;
    std::size_t depth = 12;
    double eps = 1e-9;
    std::size_t budget = default_budget();
    std::string dim = "all";  // sim | dim3 | dim4 | box | all
    std::optional<std::string> check;
    std::optional<double> project;
    std::string source;  // provenance of the input, echoed into the report
};

inline const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{"irreducible", "lsp", "tiling", "osc", "sosc", "wosc", "overlaps"};
    return names;
}

inline const std::vector<std::string>& dim_names() {
    static const std::vector<std::string> names{"sim", "dim3", "dim4", "box", "all"};
    return names;
}

/// Projection of a planar IFS of homotheties onto the line spanned by e_θ:
/// x ↦ c x + ⟨t, e_θ⟩.
inline IFSystem project_ifs(const IFSystem& ifs, double theta) {
    if (ifs.dim != 2) throw std::invalid_argument("projection needs a planar IFS");
    const double c = std::cos(theta), s = std::sin(theta);
    IFSystem out{1, {}, ifs.label + "_proj:" + std::to_string(theta)};
    for (const auto& f : ifs.maps) {
        if ((f.orthogonal() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("projection needs maps without rotation or reflection");
        out.maps.push_back(Similitude(f.scale(), Matrix::Identity(1, 1),
                                      Point::Constant(1, f.translation()[0] * c + f.translation()[1] * s)));
    }
    return out;
}

struct AnalysisResult {
    Json report;
    std::optional<Verdict> requested;
    std::size_t violations = 0;
};

/// Exit status: 4 for harness violations, then 1/2 for a requested property
/// that Fails or is Inconclusive, else 0.
inline int exit_status(const AnalysisResult& r) {
    if (r.violations > 0) return 4;
    if (r.requested && r.requested->is_fails()) return 1;
    if (r.requested && r.requested->is_inconclusive()) return 2;
    return 0;
}

inline AnalysisResult run_analysis(const IFSystem& input, const AnalysisConfig& cfg) {
    if (std::find(dim_names().begin(), dim_names().end(), cfg.dim) == dim_names().end())
        throw std::invalid_argument("unknown --dim value '" + cfg.dim + "'");
    if (cfg.check && std::find(check_names().begin(), check_names().end(), *cfg.check) == check_names().end())
        throw std::invalid_argument("unknown --check value '" + *cfg.check + "'");
    if (cfg.levels == 0) throw std::invalid_argument("--levels must be at least 1");
    const IFSystem ifs = cfg.project ? project_ifs(input, *cfg.project) : input;
    ifs.validate();

    AttractorOptions aopt;
    aopt.budget = cfg.budget;
    const Attractor att(ifs, aopt);
    OracleOptions oopt = Oracle::default_options(att);
    oopt.eps = cfg.eps;
    const Oracle oracle(att, oopt);

    const bool all = cfg.dim == "all";
    const bool want_dim3 = all || cfg.dim == "dim3";
    const bool want_dim4 = all || cfg.dim == "dim4";
    const bool want_box = all || cfg.dim == "box" || want_dim4;
    const bool want_separation = want_dim4 || cfg.check.has_value();

    AnalysisResult result;
    Json dims;
    std::vector<std::string> notes;
    const double alpha = similarity_dimension(ifs.ratios());
    dims["alpha"] = alpha;
    dims["alpha_tol"] = 1e-12;
    dims["diameter"] = {{"lower", att.diam_lower()}, {"upper", att.diam_upper()}};
    if (want_dim3) {
        try {
            dims["dim3"] = to_json(verify_dim3(att, alpha, 0.05, 40));
        } catch (const BudgetExceeded& e) {
            notes.push_back(std::string("dim3 unavailable: ") + e.what());
        }
    }
    std::optional<BoxEstimate> box;
    if (want_box) {
        try {
            box = box_dimension_estimate(att);
            dims["box"] = to_json(*box);
        } catch (const std::invalid_argument& e) {
            notes.push_back(std::string("box estimate unavailable: ") + e.what());
        }
    }

    Json sep;
    if (want_separation) {
        SeparationOptions sopt;
        sopt.levels = cfg.levels;
        sopt.depth = cfg.depth;
        sopt.eps = cfg.eps;
        sopt.budget = cfg.budget;
        std::optional<SeparationReport> sr;
        try {
            sr = wosc_report(att, oracle, sopt, box ? &*box : nullptr);
        } catch (const BudgetExceeded& e) {
            const std::string msg = std::string("separation analysis stopped: ") + e.what();
            notes.push_back(msg);
            sep = {{"budget_exceeded", true}, {"note", msg}};
            if (cfg.check) result.requested = Verdict::inconclusive(Resolution{cfg.depth, cfg.eps, cfg.levels, true}, msg);
        }
        if (sr) {
            auto& r = *sr;
            if (ifs.label.rfind("mattila_proj", 0) == 0 && r.wosc.is_inconclusive())
                r.notes.push_back("irreducible expected by the projection theorem (dim_H = alpha), not certifiable at this resolution");
            if (want_dim4) {
                dims["dim4"] = to_json(r.dim4);
                dims["h4"] = to_json(r.h4);
                dims["subcover_at_alpha"] = to_json(r.subcover);
            }
            sep = to_json(r);
            result.violations = r.violations();
            if (cfg.check) {
                const std::string& c = *cfg.check;
                const Verdict& v = c == "irreducible" ? r.irreducible
                                   : c == "lsp"       ? r.lsp
                                   : c == "tiling"    ? r.tiling
                                   : c == "osc"       ? r.osc
                                   : c == "sosc"      ? r.sosc
                                   : c == "wosc"      ? r.wosc
                                                      : r.finite_overlap;
                result.requested = v;
            }
        }
    }
    dims["notes"] = notes;

    Json config{{"levels", cfg.levels},
                {"depth", cfg.depth},
                {"eps", cfg.eps},
                {"budget", cfg.budget},
                {"dim", cfg.dim},
                {"check", cfg.check ? Json(*cfg.check) : Json(nullptr)},
                {"project", cfg.project ? Json(*cfg.project) : Json(nullptr)}};

    Json& rep = result.report;
    rep["schema"] = "selfsim-report/1";
    rep["generated_at"] = utc_timestamp();
    rep["input"] = {{"source", cfg.source}, {"ifs", ifs_to_json(ifs)}};
    rep["config"] = std::move(config);
    rep["dimensions"] = std::move(dims);
    if (want_separation) rep["separation"] = std::move(sep);
    if (cfg.check)
        rep["requested"] = {{"property", *cfg.check},
                            {"outcome", result.requested ? Json(std::string(to_string(result.requested->outcome)))
                                                         : Json(nullptr)}};
    rep["exit_code"] = exit_status(result);
    return result;
}

/// Report text with the timestamp blanked, for byte comparisons.
inline std::string canonical_report(Json report) {
    report["generated_at"] = "";
    return report.dump(2);
}

}  // namespace selfsim
