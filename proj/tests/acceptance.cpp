/// @file acceptance.cpp
/// @brief One pass/fail line per acceptance criterion. With an argument N,
/// runs only criterion N; the exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "selfsim/selfsim.hpp"
#include "support/brute_cover.hpp"
#include "support/grid_oracle.hpp"

using namespace selfsim;

namespace {

const double kLog2Log3 = std::log(2.0) / std::log(3.0);

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            pass = false;
            detail << (detail.tellp() > 0 ? "; " : "") << what;
        }
    }
};

struct Analysed {
    explicit Analysed(const std::string& name) : att(corpus::entry(name).ifs), oracle(att) {
        box = box_dimension_estimate(att);
        report = wosc_report(att, oracle, SeparationOptions{}, &box);
    }
    Attractor att;
    Oracle oracle;
    BoxEstimate box;
    SeparationReport report;
};

const Analysed& analysed(const std::string& name) {
    static std::map<std::string, std::unique_ptr<Analysed>> cache;
    auto& slot = cache[name];
    if (!slot) slot = std::make_unique<Analysed>(name);
    return *slot;
}

double alpha_of(const std::string& name) { return similarity_dimension(corpus::entry(name).ifs.ratios()); }

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

Check check_similarity_dimensions() {
    Check o;
    const std::vector<std::pair<std::string, double>> expected{
        {"cantor", kLog2Log3}, {"mattila", 1.0}, {"bisection", 1.0}, {"squares", 2.0}};
    for (const auto& [name, value] : expected) {
        const double a = alpha_of(name);
        o.require(std::abs(a - value) <= 1e-9, name + " alpha " + fmt(a) + " != " + fmt(value));
    }
    return o;
}

Check check_dim3_regimes() {
    Check o;
    for (const auto& name : corpus::names()) {
        const Attractor att(corpus::entry(name).ifs);
        const auto v = verify_dim3(att, alpha_of(name), 0.05, 40);
        o.require(v.constant, name + " level sums not constant (deviation " + fmt(v.max_relative_deviation) + ")");
        o.require(v.grows, name + " growth at alpha-0.05 is " + fmt(v.growth_factor) + " < 10");
        o.require(v.vanishes, name + " decay at alpha+0.05 is " + fmt(v.decay_factor) + " > 0.1");
    }
    return o;
}

Check check_reducibility() {
    Check o;
    const auto& d = analysed("duplicate_cantor");
    const auto& l1 = d.report.irreducibility.at(0).verdict;
    o.require(l1.is_fails() && l1.witness.has_value(), "level 1 not reducible");
    if (l1.witness) {
        bool within = !l1.witness->assignment.empty();
        for (const auto& a : l1.witness->assignment)
            within = within && a.piece.to_string() == "2" && (a.cover.to_string() == "1" || a.cover.to_string() == "3");
        o.require(within, "subcover witness is not piece 2 covered by {1, 3}");
    }
    o.require(std::abs(d.report.dim4.upper - kLog2Log3) <= 1e-9, "dim4 upper " + fmt(d.report.dim4.upper));
    const auto& h = d.report.h4;
    o.require(h.positive.is_fails(), "H4 positivity not Fails");
    o.require(h.weights.size() >= 6, "fewer than 6 horizons");
    for (std::size_t m = 0; m < std::min<std::size_t>(6, h.weights.size()); ++m) {
        const double want = std::pow(2.0 / 3.0, static_cast<double>(m + 1));
        o.require(std::abs(h.weights[m] - want) <= 1e-7 * want,
                  "weight at m=" + std::to_string(m + 1) + " is " + fmt(h.weights[m]));
        if (m > 0) o.require(h.weights[m] < h.weights[m - 1], "weights not decreasing at m=" + std::to_string(m + 1));
    }
    return o;
}

Check check_irreducibility_certificates() {
    Check o;
    for (const char* name : {"bisection", "cantor", "gasket", "squares", "mattila"}) {
        const auto& r = analysed(name).report;
        o.require(r.irreducibility.size() == 5, std::string(name) + " missing levels");
        for (const auto& lv : r.irreducibility) {
            const bool exact = lv.verdict.is_holds() && lv.verdict.certificate &&
                               lv.verdict.certificate->kind == EvidenceKind::ExposedPoints &&
                               lv.verdict.certificate->exposed.size() == lv.words.size();
            o.require(exact, std::string(name) + " level " + std::to_string(lv.n) + " " +
                                 std::string(to_string(lv.verdict.outcome)));
        }
        o.require(std::abs(r.dim4.lower - r.alpha) <= 1e-9 && std::abs(r.dim4.upper - r.alpha) <= 1e-9,
                  std::string(name) + " dim4 [" + fmt(r.dim4.lower) + ", " + fmt(r.dim4.upper) + "]");
    }
    return o;
}

Check check_separation_suite() {
    Check o;
    const auto& g = analysed("gasket").report;
    o.require(g.osc.is_holds() && g.osc.certificate && g.osc.certificate->kind == EvidenceKind::Polytope,
              "gasket OSC without polytope certificate");
    o.require(g.sosc.is_holds(), "gasket SOSC");
    o.require(g.finite_overlap.is_holds(), "gasket finite overlap");
    o.require(!g.lsp.is_fails(), "gasket LSP violated");
    o.require(g.tiling.is_holds(), "gasket tiling");
    const auto& d = analysed("duplicate_cantor").report;
    o.require(d.osc.is_fails(), "duplicate_cantor OSC not Fails");
    const auto& lsp1 = d.levels.at(0).lsp1;
    o.require(lsp1.is_fails() && lsp1.witness && lsp1.witness->kind == EvidenceKind::CommonSubpiece,
              "duplicate_cantor LSP1 without common sub-piece witness");
    o.require(d.tiling.is_fails(), "duplicate_cantor tiling not Fails");
    o.require(d.wosc.is_fails(), "duplicate_cantor WOSC not Fails");
    return o;
}

Check check_consistency_harness() {
    Check o;
    for (const auto& name : corpus::names()) {
        const auto& r = analysed(name).report;
        std::map<std::string, std::size_t> chains;
        for (const auto& e : r.consistency) {
            ++chains[e.chain];
            o.require(e.status != ConsistencyStatus::Violated, name + ": " + e.implication + " violated");
        }
        for (const char* chain : {"measure chain", "order chain", "finite overlaps"})
            o.require(chains[chain] > 0, name + " has no " + chain + " entries");
    }
    AnalysisResult violated;
    violated.violations = 1;
    o.require(exit_status(violated) == 4, "a violation does not map to exit code 4");
    return o;
}

Check check_oracle_equivalence() {
    Check o;
    std::size_t instances = 0;
    for (const auto& name : corpus::names()) {
        const Attractor att(corpus::entry(name).ifs);
        if (att.k() > 3) continue;
        const Oracle oracle(att);
        const double alpha = similarity_dimension(att.ifs().ratios());
        for (double s : {alpha, 0.5 * alpha, 1.5 * alpha})
            for (std::size_t L = 1; L <= 2; ++L) {
                const auto ours = min_subcover_weight(att, oracle, s, L);
                const auto truth = selfsim::testing::brute_force_subcover(att, oracle, s, L);
                ++instances;
                o.require(std::abs(ours.weight - truth.weight) <= 1e-12 * truth.weight,
                          name + " s=" + fmt(s) + " L=" + std::to_string(L) + ": " + fmt(ours.weight) + " vs " +
                              fmt(truth.weight));
            }
    }
    std::size_t decided = 0, agree = 0;
    for (const auto& name : corpus::names()) {
        const auto ifs = corpus::entry(name).ifs;
        if (ifs.dim != 1) continue;
        const Attractor att(ifs);
        const Oracle oracle(att);
        const selfsim::testing::IntervalGridOracle grid(ifs, 1e-4);
        for (std::size_t n = 1; n <= 2; ++n) {
            const auto level = att.build_level(n);
            for (std::size_t i = 0; i < level.pieces.size(); ++i) {
                std::vector<Piece> fam;
                std::vector<Word> words;
                for (std::size_t j = 0; j < level.pieces.size(); ++j)
                    if (j != i) fam.push_back(level.pieces[j]), words.push_back(level.pieces[j].word);
                const auto v = oracle.covered_by(level.pieces[i], fam, 1e-9, 8);
                if (v.is_inconclusive()) continue;
                ++decided;
                const auto truth = grid.covered(level.pieces[i].word, words);
                const auto want = v.is_holds() ? selfsim::testing::GridTruth::Covered : selfsim::testing::GridTruth::NotCovered;
                if (truth == want) ++agree;
            }
        }
    }
    o.require(instances > 0, "no small instances");
    o.require(decided > 0 && agree == decided,
              "covered_by agrees with the grid on " + std::to_string(agree) + "/" + std::to_string(decided));
    return o;
}

Check check_box_estimates() {
    Check o;
    const std::vector<std::pair<std::string, double>> expected{{"cantor", 0.631}, {"gasket", 1.585}, {"bisection", 1.0}};
    for (const auto& [name, value] : expected) {
        const double slope = analysed(name).box.slope;
        o.require(std::abs(slope - value) <= 0.05, name + " slope " + fmt(slope));
    }
    return o;
}

Check check_mattila_probe() {
    Check o;
    const auto& p = analysed("mattila_proj:0.7");
    o.require(std::abs(p.report.alpha - 1.0) <= 1e-9, "alpha " + fmt(p.report.alpha));
    o.require(!p.report.osc_polytope.has_value() && !p.report.osc.is_holds(), "an OSC certificate was found");
    o.require(p.report.wosc.is_inconclusive(), "WOSC is " + std::string(to_string(p.report.wosc.outcome)));
    o.require(std::abs(p.box.slope - 1.0) <= 0.15, "box slope " + fmt(p.box.slope));
    return o;
}

Check check_determinism() {
    Check o;
    for (const char* name : {"gasket", "duplicate_cantor", "mattila_proj:0.7"}) {
        AnalysisConfig cfg;
        cfg.check = "wosc";
        cfg.source = std::string("corpus:") + name;
        const auto a = run_analysis(corpus::entry(name).ifs, cfg);
        const auto b = run_analysis(corpus::entry(name).ifs, cfg);
        o.require(canonical_report(a.report) == canonical_report(b.report), std::string(name) + " reports differ");
    }
    return o;
}

struct Criterion {
    const char* summary;
    std::function<Check()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {"similarity dimension of cantor, mattila, bisection, squares", check_similarity_dimensions},
        {"dim3 level sums constant at alpha, >=10x growth and <=0.1x decay at alpha -/+ 0.05 over 40 levels", check_dim3_regimes},
        {"duplicate_cantor level-1 subcover, dim4 upper log2/log3, H4 weights (2/3)^m", check_reducibility},
        {"irreducibility certificates at levels 1..5 and dim4 = alpha", check_irreducibility_certificates},
        {"separation suite on gasket and duplicate_cantor", check_separation_suite},
        {"consistency harness has no violated entries", check_consistency_harness},
        {"min subcover and covered_by agree with exhaustive oracles", check_oracle_equivalence},
        {"box-counting estimates", check_box_estimates},
        {"mattila_proj:0.7 probe", check_mattila_probe},
        {"reports byte-identical modulo timestamp", check_determinism},
    };
    std::size_t only = 0;
    if (argc > 1) {
        only = static_cast<std::size_t>(std::strtoul(argv[1], nullptr, 10));
        if (only < 1 || only > criteria.size()) {
            std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], criteria.size());
            return 2;
        }
    }
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only && only != i + 1) continue;
        const auto start = std::chrono::steady_clock::now();
        Check o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu: %s  %s (%.2fs)%s%s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].summary, secs,
                    o.pass ? "" : "\n    ", o.pass ? "" : o.detail.str().c_str());
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}
