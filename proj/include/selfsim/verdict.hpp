#pragma once

/// Three-valued answers with the evidence that backs them.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "selfsim/similitude.hpp"
#include "selfsim/words.hpp"

namespace selfsim {

enum class Outcome { Holds, Fails, Inconclusive };

inline std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::Holds: return "holds";
        case Outcome::Fails: return "fails";
        case Outcome::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

enum class EvidenceKind {
    WordMatch,           // K_A = f_B(K_w) by map equality
    SeparatingGap,       // certified positive distance between two pieces
    CoveringAssignment,  // every descendant discharged into a family member
    ExposedPoint,        // exact attractor point at certified distance from others
    ExposedPoints,       // one exposed point per piece
    PiecePair,           // two pieces (e.g. a near-coincidence)
    CommonSubpiece,      // C ⊆ A and C ⊆ B
    DuplicateMaps,       // identical composite maps under distinct words
    TouchingClusters,    // isolated contact regions of two pieces
    Polytope,            // open convex set V for the open set condition
    InteriorPoint,       // attractor point strictly inside V
    Subcover,            // proper subcovering with its weight
    InteriorCover,       // interior certificates dense to a resolution
    Propagated,          // derived from another certified property
};

inline std::string_view to_string(EvidenceKind k) {
    switch (k) {
        case EvidenceKind::WordMatch: return "word_match";
        case EvidenceKind::SeparatingGap: return "separating_gap";
        case EvidenceKind::CoveringAssignment: return "covering_assignment";
        case EvidenceKind::ExposedPoint: return "exposed_point";
        case EvidenceKind::ExposedPoints: return "exposed_points";
        case EvidenceKind::PiecePair: return "piece_pair";
        case EvidenceKind::CommonSubpiece: return "common_subpiece";
        case EvidenceKind::DuplicateMaps: return "duplicate_maps";
        case EvidenceKind::TouchingClusters: return "touching_clusters";
        case EvidenceKind::Polytope: return "polytope";
        case EvidenceKind::InteriorPoint: return "interior_point";
        case EvidenceKind::Subcover: return "subcover";
        case EvidenceKind::InteriorCover: return "interior_cover";
        case EvidenceKind::Propagated: return "propagated";
    }
    return "unknown";
}

struct Assignment {
    Word piece;    // discharged descendant
    Word cover;    // family member containing it
    Word via;      // w with f_piece = f_cover∘f_w
};

struct ExposedPoint {
    Word piece;
    std::vector<double> point;
    double distance_lower = 0.0;
};

/// Certificate (for Holds) or witness (for Fails). Only the fields relevant
/// to `kind` are populated. Every numeric bound is a certified inequality.
struct Evidence {
    EvidenceKind kind = EvidenceKind::WordMatch;
    std::vector<Word> words;
    std::vector<double> point;
    std::vector<double> second_point;
    double value = 0.0;  // gap, distance lower bound, margin or weight
    std::vector<Assignment> assignment;
    std::vector<ExposedPoint> exposed;
    std::vector<std::vector<double>> vertices;
    std::string detail;
};

using Certificate = Evidence;
using Witness = Evidence;

struct Resolution {
    std::size_t depth = 0;
    double eps = 0.0;
    std::size_t levels = 0;
    bool budget_exceeded = false;
};

struct Verdict {
    Outcome outcome = Outcome::Inconclusive;
    std::optional<Certificate> certificate;
    std::optional<Witness> witness;
    Resolution resolution;
    std::string note;

    static Verdict holds(Certificate c, Resolution r = {}, std::string note = {}) {
        return Verdict{Outcome::Holds, std::move(c), std::nullopt, r, std::move(note)};
    }
    static Verdict fails(Witness w, Resolution r = {}, std::string note = {}) {
        return Verdict{Outcome::Fails, std::nullopt, std::move(w), r, std::move(note)};
    }
    static Verdict inconclusive(Resolution r = {}, std::string note = {}) {
        return Verdict{Outcome::Inconclusive, std::nullopt, std::nullopt, r, std::move(note)};
    }

    bool is_holds() const noexcept { return outcome == Outcome::Holds; }
    bool is_fails() const noexcept { return outcome == Outcome::Fails; }
    bool is_inconclusive() const noexcept { return outcome == Outcome::Inconclusive; }

    /// Holds ⟹ certificate, Fails ⟹ witness.
    bool well_formed() const noexcept {
        if (outcome == Outcome::Holds) return certificate.has_value();
        if (outcome == Outcome::Fails) return witness.has_value();
        return true;
    }
};

inline std::vector<double> to_vector(const Point& p) { return std::vector<double>(p.data(), p.data() + p.size()); }

}  // namespace selfsim
