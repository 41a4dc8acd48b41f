/// @file selfsim_cli.cpp
/// @brief Command-line front end: analyze an IFS, list the built-in corpus.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "selfsim/selfsim.hpp"

namespace {

constexpr int kExitInput = 3;

struct Options {
    std::string ifs_path;
    std::string corpus_name;
    std::size_t levels = 5;
    std::size_t depth = 12;
    double eps = 1e-9;
    std::optional<std::size_t> budget;
    std::string check;
    std::string dim = "all";
    std::optional<double> project;
    std::string report_path;
    std::string render_path;
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

void print_summary(const selfsim::Json& rep) {
    const auto& dims = rep["dimensions"];
    std::cout << "ifs: " << rep["input"]["ifs"]["label"].get<std::string>() << "\n";
    std::cout << "alpha: " << dims["alpha"].dump() << "\n";
    if (dims.contains("dim4"))
        std::cout << "dim4: [" << dims["dim4"]["lower"].dump() << ", " << dims["dim4"]["upper"].dump() << "]\n";
    if (dims.contains("box")) std::cout << "box: " << dims["box"]["slope"].dump() << "\n";
    if (rep.contains("separation")) {
        const auto& sep = rep["separation"];
        for (const char* key : {"irreducible", "osc", "sosc", "lsp", "tiling", "finite_overlap", "wosc"})
            std::cout << key << ": " << sep[key]["outcome"].get<std::string>() << "\n";
        std::cout << "violations: " << sep["violations"].dump() << "\n";
    }
    std::cout << "exit_code: " << rep["exit_code"].dump() << "\n";
}

int run_analyze(const Options& o) {
    selfsim::AnalysisConfig cfg;
    cfg.levels = o.levels;
    cfg.depth = o.depth;
    cfg.eps = o.eps;
    if (o.budget) cfg.budget = *o.budget;
    cfg.dim = o.dim;
    if (!o.check.empty()) cfg.check = o.check;
    cfg.project = o.project;

    selfsim::IFSystem ifs;
    if (!o.ifs_path.empty()) {
        ifs = selfsim::parse_ifs_file(o.ifs_path);
        cfg.source = "file:" + o.ifs_path;
    } else {
        ifs = selfsim::corpus::entry(o.corpus_name).ifs;
        cfg.source = "corpus:" + o.corpus_name;
    }

    const auto result = selfsim::run_analysis(ifs, cfg);
    const std::string text = result.report.dump(2) + "\n";
    if (o.report_path.empty()) {
        std::cout << text;
    } else {
        write_file(o.report_path, text);
        print_summary(result.report);
    }
    if (!o.render_path.empty()) {
        const auto rendered = cfg.project ? selfsim::project_ifs(ifs, *cfg.project) : ifs;
        selfsim::AttractorOptions aopt;
        aopt.budget = cfg.budget;
        selfsim::render_levels(selfsim::Attractor(rendered, aopt), cfg.levels, o.render_path);
    }
    const int code = selfsim::exit_status(result);
    if (code == 4)
        std::cerr << "error: consistency harness reported " << result.violations << " violated implication(s)\n";
    return code;
}

int run_list_corpus() {
    for (const auto& name : selfsim::corpus::names()) {
        const auto e = selfsim::corpus::entry(name);
        std::printf("%-18s d=%d k=%zu alpha=%.10f\n", name.c_str(), e.ifs.dim, e.ifs.maps.size(),
                    selfsim::similarity_dimension(e.ifs.ratios()));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dimensions and separation properties of self-similar sets"};
    app.require_subcommand(1);

    Options o;
    auto* analyze = app.add_subcommand("analyze", "Analyze an IFS from a file or the built-in corpus");
    auto* src = analyze->add_option_group("source");
    src->add_option("--ifs", o.ifs_path, "IFS JSON file")->check(CLI::ExistingFile);
    src->add_option("--corpus", o.corpus_name, "Built-in corpus entry (see list-corpus; mattila_proj:<theta>)");
    src->require_option(1);
    analyze->add_option("--levels", o.levels, "Levels checked for separation, and rendered")->check(CLI::Range(1, 12));
    analyze->add_option("--depth", o.depth, "Refinement depth of geometric queries")->check(CLI::Range(1, 40));
    analyze->add_option("--eps", o.eps, "Geometric tolerance")->check(CLI::PositiveNumber);
    analyze->add_option("--budget", o.budget, "Maximum pieces materialized (default SELFSIM_BUDGET or 200000)");
    analyze->add_option("--check", o.check, "Requested property; sets exit codes 1/2")
        ->check(CLI::IsMember(selfsim::check_names()));
    analyze->add_option("--dim", o.dim, "Dimensions to compute")->check(CLI::IsMember(selfsim::dim_names()));
    analyze->add_option("--project", o.project, "Project a planar IFS of homotheties onto angle theta (radians)");
    analyze->add_option("--report", o.report_path, "Write the JSON report here instead of stdout");
    analyze->add_option("--render", o.render_path, "Write an SVG of the first --levels levels");

    auto* list = app.add_subcommand("list-corpus", "List built-in corpus entries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (list->parsed()) return run_list_corpus();
        return run_analyze(o);
    } catch (const selfsim::IfsFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
