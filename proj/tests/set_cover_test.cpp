#include <random>

#include <gtest/gtest.h>

#include "selfsim/set_cover.hpp"

using namespace selfsim;

namespace {

CoverInstance make(std::size_t universe, const std::vector<std::vector<std::size_t>>& sets, std::vector<double> w) {
    CoverInstance inst;
    inst.universe = universe;
    for (const auto& s : sets) {
        Bits b(universe);
        for (auto e : s) b.set(e);
        inst.sets.push_back(b);
    }
    inst.weights = std::move(w);
    return inst;
}

double exhaustive(const CoverInstance& inst) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = inst.sets.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        Bits u(inst.universe);
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u) u |= inst.sets[i], w += inst.weights[i];
        if (u.count() == inst.universe) best = std::min(best, w);
    }
    return best;
}

}  // namespace

TEST(SetCover, LaminarPrefersSingleSetOnTies) {
    const auto inst = make(4, {{0, 1, 2, 3}, {0, 1}, {2, 3}}, {1.0, 0.5, 0.5});
    const auto sol = solve_set_cover(inst);
    ASSERT_TRUE(sol.feasible);
    EXPECT_TRUE(sol.laminar);
    EXPECT_DOUBLE_EQ(sol.weight, 1.0);
    EXPECT_EQ(sol.chosen, std::vector<std::size_t>{0});
}

TEST(SetCover, LaminarTakesCheaperChildren) {
    const auto inst = make(4, {{0, 1, 2, 3}, {0, 1}, {2, 3}, {0}, {1}}, {1.0, 0.6, 0.3, 0.1, 0.1});
    const auto sol = solve_set_cover(inst);
    EXPECT_NEAR(sol.weight, 0.5, 1e-15);
    EXPECT_EQ(sol.chosen, (std::vector<std::size_t>{2, 3, 4}));
}

TEST(SetCover, InfeasibleInstance) {
    EXPECT_FALSE(solve_set_cover(make(3, {{0}, {1}}, {1.0, 1.0})).feasible);
    EXPECT_FALSE(solve_set_cover(make(3, {{0, 1}, {1}}, {1.0, 1.0})).feasible);
}

TEST(SetCover, BranchAndBoundMatchesExhaustiveSearch) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t universe = 3 + rng() % 6, nsets = 3 + rng() % 9;
        std::vector<std::vector<std::size_t>> sets(nsets);
        std::vector<double> w(nsets);
        for (std::size_t i = 0; i < nsets; ++i) {
            for (std::size_t e = 0; e < universe; ++e)
                if (rng() % 3 == 0) sets[i].push_back(e);
            w[i] = 0.1 + (rng() % 1000) / 1000.0;
        }
        const auto inst = make(universe, sets, w);
        const double truth = exhaustive(inst);
        const auto sol = solve_set_cover(inst);
        ASSERT_EQ(sol.feasible, std::isfinite(truth)) << trial;
        if (!sol.feasible) continue;
        EXPECT_TRUE(sol.optimal);
        EXPECT_NEAR(sol.weight, truth, 1e-12) << trial;
        Bits u(universe);
        double check = 0.0;
        for (auto i : sol.chosen) u |= inst.sets[i], check += w[i];
        EXPECT_EQ(u.count(), universe);
        EXPECT_NEAR(check, sol.weight, 1e-12);
    }
}

TEST(SetCover, LaminarFamiliesMatchExhaustiveSearch) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        // Intervals of a random binary hierarchy over 8 elements.
        std::vector<std::vector<std::size_t>> sets;
        std::vector<double> w;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 8}};
        while (!stack.empty() && sets.size() < 14) {
            const auto [lo, hi] = stack.back();
            stack.pop_back();
            if (rng() % 4 != 0 || lo == 0) {
                std::vector<std::size_t> s;
                for (std::size_t e = lo; e < hi; ++e) s.push_back(e);
                sets.push_back(s);
                w.push_back(0.05 + (rng() % 1000) / 1000.0);
            }
            if (hi - lo > 1) {
                const std::size_t mid = lo + 1 + rng() % (hi - lo - 1);
                stack.emplace_back(lo, mid);
                stack.emplace_back(mid, hi);
            }
        }
        const auto inst = make(8, sets, w);
        const auto sol = solve_set_cover(inst);
        EXPECT_TRUE(sol.laminar) << trial;
        const double truth = exhaustive(inst);
        ASSERT_EQ(sol.feasible, std::isfinite(truth)) << trial;
        if (sol.feasible) EXPECT_NEAR(sol.weight, truth, 1e-12) << trial;
    }
    EXPECT_FALSE(is_laminar(make(3, {{0, 1}, {1, 2}}, {1.0, 1.0}), {0, 1}));
    EXPECT_TRUE(is_laminar(make(3, {{0, 1, 2}, {1, 2}, {0}}, {1.0, 1.0, 1.0}), {0, 1, 2}));
}
