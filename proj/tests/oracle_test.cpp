#include <cmath>

#include <gtest/gtest.h>

#include "selfsim/corpus.hpp"
#include "selfsim/oracle.hpp"
#include "support/grid_oracle.hpp"

using namespace selfsim;

namespace {

Point at(double x) { return Point::Constant(1, x); }

std::vector<Piece> others(const Level& level, std::size_t skip) {
    std::vector<Piece> out;
    for (std::size_t i = 0; i < level.pieces.size(); ++i)
        if (i != skip) out.push_back(level.pieces[i]);
    return out;
}

}  // namespace

TEST(Oracle, PointPieceDistanceExamples) {
    const Attractor bis(corpus::bisection());
    const Oracle oracle(bis);
    const auto d = oracle.point_piece_distance(at(0.0), bis.piece(Word{2}), 20);
    EXPECT_LE(d.lower, 0.5);
    EXPECT_GE(d.upper, 0.5);
    EXPECT_LE(d.upper - d.lower, 1e-6);

    const Attractor cantor(corpus::cantor());
    const Oracle co(cantor);
    const Piece b = cantor.piece(Word{1});
    for (const auto& x : cantor.sample_points(b, 3)) EXPECT_EQ(co.point_piece_distance(x, b, 10).upper, 0.0);
    const auto c = co.point_piece_distance(at(0.5), b, 20);
    EXPECT_LE(c.lower, 1.0 / 6.0 + 1e-15);
    EXPECT_GE(c.upper, 1.0 / 6.0 - 1e-15);
    EXPECT_LE(c.upper - c.lower, 2.0 * b.ratio * std::pow(1.0 / 3.0, 20) * cantor.diam_upper() + 1e-15);
}

TEST(Oracle, PointPieceDistanceAgreesWithIntervals) {
    for (const auto& name : {"bisection", "cantor", "mattila_proj:0.7"}) {
        const auto ifs = corpus::entry(name).ifs;
        const Attractor att(ifs);
        const Oracle oracle(att);
        const selfsim::testing::IntervalGridOracle grid(ifs, 1e-5);
        for (double x = -0.2; x <= 1.2; x += 0.0731)
            for (const auto& w : enumerate_level(ifs.k(), 2)) {
                const auto ours = oracle.point_piece_distance(at(x), att.piece(w), 25);
                const auto [glo, gup] = grid.distance(x, w);
                EXPECT_LE(ours.lower, gup + 1e-12) << name << " x=" << x << " w=" << w.to_string();
                EXPECT_LE(glo, ours.upper + 1e-12) << name << " x=" << x << " w=" << w.to_string();
            }
    }
}

TEST(Oracle, PieceSubsetExamples) {
    for (const auto& name : corpus::names()) {
        const Attractor att(corpus::entry(name).ifs);
        const Oracle oracle(att);
        const auto v = oracle.piece_subset(att.piece(Word{1, 1}), att.piece(Word{1}), 1e-9, 8);
        ASSERT_TRUE(v.is_holds()) << name;
        EXPECT_EQ(v.certificate->words.front(), Word{1});
    }
    const Attractor dup(corpus::duplicate_cantor());
    const Oracle d(dup);
    const auto dv = d.piece_subset(dup.piece(Word{1}), dup.piece(Word{2}), 1e-9, 8);
    ASSERT_TRUE(dv.is_holds());
    EXPECT_EQ(dv.certificate->words.front(), Word{});

    const Attractor bis(corpus::bisection());
    const Oracle b(bis);
    const auto bv = b.piece_subset(bis.piece(Word{1}), bis.piece(Word{2}), 1e-9, 8);
    ASSERT_TRUE(bv.is_fails());
    EXPECT_NEAR(bv.witness->point[0], 0.0, 1e-15);
    EXPECT_GE(bv.witness->value, 0.5 - 1e-9);
}

TEST(Oracle, PiecesIntersectExamples) {
    const Attractor cantor(corpus::cantor());
    const Oracle co(cantor);
    const auto v = co.pieces_intersect(cantor.piece(Word{1}), cantor.piece(Word{2}), 1e-9, 20);
    ASSERT_TRUE(v.is_fails());
    EXPECT_GE(v.witness->value, 1.0 / 3.0 - 1e-9);

    const Attractor bis(corpus::bisection());
    const Oracle bo(bis);
    const auto t = bo.pieces_intersect(bis.piece(Word{1}), bis.piece(Word{2}), 1e-9, 20);
    ASSERT_TRUE(t.is_holds());
    EXPECT_NEAR(t.certificate->point[0], 0.5, 1e-9);

    const Attractor gasket(corpus::gasket());
    const Oracle go(gasket);
    const Piece a = gasket.piece(Word{2, 3});
    EXPECT_TRUE(go.pieces_intersect(a, a, 1e-9, 10).is_holds());
}

TEST(Oracle, CoveredByExamples) {
    const Attractor dup(corpus::duplicate_cantor());
    const Oracle d(dup);
    const auto dv = d.covered_by(dup.piece(Word{2}), {dup.piece(Word{1}), dup.piece(Word{3})}, 1e-9, 10);
    ASSERT_TRUE(dv.is_holds());
    ASSERT_FALSE(dv.certificate->assignment.empty());
    EXPECT_EQ(dv.certificate->assignment.front().cover, Word{1});

    const Attractor bis(corpus::bisection());
    const Oracle b(bis);
    const auto bv = b.covered_by(bis.piece(Word{1}), {bis.piece(Word{2})}, 1e-9, 10);
    ASSERT_TRUE(bv.is_fails());
    EXPECT_NEAR(bv.witness->point[0], 0.0, 1e-15);
    EXPECT_GE(bv.witness->value, 0.5 - 1e-9);

    const Attractor gasket(corpus::gasket());
    const Oracle g(gasket);
    const auto gv = g.covered_by(gasket.piece(Word{1}), {gasket.piece(Word{2}), gasket.piece(Word{3})}, 1e-9, 10);
    ASSERT_TRUE(gv.is_fails());
    EXPECT_NEAR(gv.witness->point[0], 0.0, 1e-15);
    EXPECT_NEAR(gv.witness->point[1], 0.0, 1e-15);
    EXPECT_GT(gv.witness->value, 0.0);
}

TEST(Oracle, ReflexiveAnswers) {
    for (const auto& name : corpus::names()) {
        const Attractor att(corpus::entry(name).ifs);
        const Oracle oracle(att);
        for (const auto& p : att.build_level(2).pieces) {
            const auto s = oracle.piece_subset(p, p, 1e-9, 6);
            ASSERT_TRUE(s.is_holds()) << name;
            EXPECT_EQ(s.certificate->words.front(), Word{});
            EXPECT_TRUE(oracle.covered_by(p, {p}, 1e-9, 6).is_holds()) << name;
        }
    }
}

TEST(Oracle, GapImpliesNotSubset) {
    for (const auto& name : corpus::names()) {
        const Attractor att(corpus::entry(name).ifs);
        const Oracle oracle(att);
        const auto level = att.build_level(2);
        for (const auto& a : level.pieces)
            for (const auto& b : level.pieces) {
                const auto inter = oracle.pieces_intersect(a, b, 1e-9, 12);
                EXPECT_TRUE(inter.well_formed());
                if (inter.is_fails()) EXPECT_TRUE(oracle.piece_subset(a, b, 1e-9, 6).is_fails()) << name;
            }
    }
}

TEST(Oracle, DeeperSearchNeverFlipsDecidedAnswers) {
    for (const auto& name : corpus::names()) {
        const Attractor att(corpus::entry(name).ifs);
        const Oracle oracle(att);
        const auto level = att.build_level(2);
        for (std::size_t i = 0; i < level.pieces.size(); ++i) {
            const auto fam = others(level, i);
            const auto shallow = oracle.covered_by(level.pieces[i], fam, 1e-6, 2);
            const auto deep = oracle.covered_by(level.pieces[i], fam, 1e-9, 6);
            EXPECT_TRUE(shallow.well_formed());
            EXPECT_TRUE(deep.well_formed());
            if (!shallow.is_inconclusive()) EXPECT_EQ(shallow.outcome, deep.outcome) << name << " piece " << i;
            for (std::size_t j = 0; j < level.pieces.size(); ++j) {
                const auto s1 = oracle.pieces_intersect(level.pieces[i], level.pieces[j], 1e-6, 4);
                const auto s2 = oracle.pieces_intersect(level.pieces[i], level.pieces[j], 1e-9, 12);
                if (!s1.is_inconclusive() && !s2.is_inconclusive()) EXPECT_EQ(s1.outcome, s2.outcome) << name;
            }
        }
    }
}

TEST(Oracle, CoveredByMatchesDenseGridOnLineSystems) {
    std::size_t decided = 0;
    for (const auto& name : {"bisection", "cantor", "duplicate_cantor", "mattila_proj:0.7"}) {
        const auto ifs = corpus::entry(name).ifs;
        const Attractor att(ifs);
        const Oracle oracle(att);
        const selfsim::testing::IntervalGridOracle grid(ifs, 1e-4);
        for (std::size_t n = 1; n <= 2; ++n) {
            const auto level = att.build_level(n);
            for (std::size_t i = 0; i < level.pieces.size(); ++i) {
                const auto fam = others(level, i);
                const auto v = oracle.covered_by(level.pieces[i], fam, 1e-9, 8);
                if (v.is_inconclusive()) continue;
                ++decided;
                std::vector<Word> words;
                for (const auto& f : fam) words.push_back(f.word);
                const auto truth = grid.covered(level.pieces[i].word, words);
                if (v.is_holds()) EXPECT_EQ(truth, selfsim::testing::GridTruth::Covered) << name << " " << level.pieces[i].word.to_string();
                if (v.is_fails()) EXPECT_EQ(truth, selfsim::testing::GridTruth::NotCovered) << name << " " << level.pieces[i].word.to_string();
            }
        }
    }
    EXPECT_GT(decided, 10u);
}
