#pragma once

// Exhaustive minimum subcover: every nonempty subfamily of levels 1..L is
// checked with covered_by on the whole attractor.

#include <cmath>
#include <limits>
#include <vector>

#include "selfsim/oracle.hpp"

namespace selfsim::testing {

struct BruteCover {
    double weight = std::numeric_limits<double>::infinity();
    std::vector<Word> cover;
    std::size_t families = 0;
};

inline BruteCover brute_force_subcover(const Attractor& att, const Oracle& oracle, double s, std::size_t max_level) {
    std::vector<Piece> candidates;
    for (std::size_t l = 1; l <= max_level; ++l)
        for (auto& p : att.build_level(l).pieces) candidates.push_back(std::move(p));
    BruteCover best;
    const Piece root = att.root_piece();
    const std::size_t n = candidates.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<Piece> family;
        double weight = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u) {
                family.push_back(candidates[i]);
                weight += std::pow(candidates[i].ratio * att.diam_upper(), s);
            }
        if (weight >= best.weight) continue;
        ++best.families;
        if (oracle.covered_by(root, family, oracle.options().eps, max_level + 1).is_holds()) {
            best.weight = weight;
            best.cover.clear();
            for (const auto& p : family) best.cover.push_back(p.word);
        }
    }
    return best;
}

}  // namespace selfsim::testing
