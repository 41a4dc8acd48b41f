#pragma once

/// Irreducibility of a single level Γ_n: no piece is covered by the others.

#include <string>
#include <vector>

#include "selfsim/oracle.hpp"

namespace selfsim {

struct LevelIrreducibility {
    std::size_t n = 0;
    Verdict verdict;
    std::vector<Verdict> per_piece;  // covered_by(A, Γ_n∖{A}) for every A
    bool symbolic_duplicates = false;
    std::vector<Word> words;
};

namespace detail {

inline bool same_map(const Similitude& f, const Similitude& g, double tol, double scale) {
    if (std::abs(f.scale() - g.scale()) > tol) return false;
    if ((f.translation() - g.translation()).cwiseAbs().maxCoeff() > tol * scale) return false;
    return (f.orthogonal() - g.orthogonal()).cwiseAbs().maxCoeff() <= tol;
}

/// First pair (i, j), i < j, of pieces with identical maps.
inline std::optional<std::pair<std::size_t, std::size_t>> duplicate_pair(const std::vector<Piece>& pieces, double tol,
                                                                         double scale) {
    for (std::size_t j = 1; j < pieces.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            if (same_map(pieces[i].map, pieces[j].map, tol, scale)) return std::make_pair(i, j);
    return std::nullopt;
}

}  // namespace detail

/// Runs covered_by for every piece of Γ_n. Fails (reducible) with the first
/// coverable piece and its covering assignment; Holds with one exposed point
/// per piece; Inconclusive otherwise. Identical maps under two words give an
/// immediate symbolic Fails that repeats at every deeper level.
inline LevelIrreducibility analyze_level(const Attractor& att, const Oracle& oracle, std::size_t n, double eps,
                                         std::size_t q) {
    LevelIrreducibility out;
    out.n = n;
    Resolution res{q, eps, n, false};
    Level level;
    try {
        level = att.build_level(n);
    } catch (const BudgetExceeded&) {
        res.budget_exceeded = true;
        out.verdict = Verdict::inconclusive(res, "level exceeds the piece budget");
        return out;
    }
    for (const auto& p : level.pieces) out.words.push_back(p.word);

    std::optional<Witness> reducible;
    if (auto dup = detail::duplicate_pair(level.pieces, oracle.options().map_tol, std::max(1.0, att.diam_upper()))) {
        const auto& [i, j] = *dup;
        out.symbolic_duplicates = true;
        Witness w;
        w.kind = EvidenceKind::DuplicateMaps;
        w.words = {level.pieces[j].word, level.pieces[i].word};
        w.assignment = {{level.pieces[j].word, level.pieces[i].word, Word{}}};
        w.detail = "f_" + level.pieces[j].word.to_string() + " = f_" + level.pieces[i].word.to_string() +
                   "; the duplication repeats at every deeper level";
        reducible = std::move(w);
    }

    Certificate exposed;
    exposed.kind = EvidenceKind::ExposedPoints;
    bool undecided = false;
    for (std::size_t i = 0; i < level.pieces.size(); ++i) {
        Verdict v = oracle.covered_by_excluding(level.pieces[i], level.pieces, i, eps, q);
        res.budget_exceeded = res.budget_exceeded || v.resolution.budget_exceeded;
        if (v.is_holds() && !reducible) {
            Witness w;
            w.kind = EvidenceKind::CoveringAssignment;
            w.words = {level.pieces[i].word};
            w.assignment = v.certificate->assignment;
            w.detail = "piece " + level.pieces[i].word.to_string() + " is covered by the rest of its level";
            reducible = std::move(w);
        } else if (v.is_fails()) {
            exposed.exposed.push_back({level.pieces[i].word, v.witness->point, v.witness->value});
        } else if (v.is_inconclusive()) {
            undecided = true;
        }
        out.per_piece.push_back(std::move(v));
    }
    if (reducible)
        out.verdict = Verdict::fails(std::move(*reducible), res, "level " + std::to_string(n) + " is reducible");
    else if (!undecided)
        out.verdict = Verdict::holds(std::move(exposed), res, "level " + std::to_string(n) + " is irreducible");
    else
        out.verdict = Verdict::inconclusive(res, "some pieces are neither covered nor exposed at this resolution");
    return out;
}

inline Verdict level_irreducible(const Attractor& att, const Oracle& oracle, std::size_t n, double eps, std::size_t q) {
    return analyze_level(att, oracle, n, eps, q).verdict;
}

}  // namespace selfsim
