#include <random>

#include <gtest/gtest.h>

#include "selfsim/words.hpp"

using selfsim::Word;

TEST(Words, PrefixExamples) {
    EXPECT_TRUE(selfsim::is_prefix(Word{}, Word{1, 2, 1}));
    EXPECT_TRUE(selfsim::is_prefix(Word{1, 2}, Word{1, 2, 1}));
    EXPECT_FALSE(selfsim::is_prefix(Word{2}, Word{1, 2, 1}));
}

TEST(Words, IncomparableExamples) {
    EXPECT_TRUE(selfsim::incomparable(Word{1}, Word{2}));
    EXPECT_FALSE(selfsim::incomparable(Word{1}, Word{1, 2}));
    const auto level = selfsim::enumerate_level(3, 3);
    for (std::size_t i = 0; i < level.size(); ++i)
        for (std::size_t j = 0; j < level.size(); ++j)
            if (i != j) EXPECT_TRUE(selfsim::incomparable(level[i], level[j]));
}

TEST(Words, EnumerateLevel) {
    EXPECT_EQ(selfsim::enumerate_level(2, 0), std::vector<Word>{Word{}});
    EXPECT_EQ(selfsim::enumerate_level(2, 2), (std::vector<Word>{{1, 1}, {1, 2}, {2, 1}, {2, 2}}));
    const auto l = selfsim::enumerate_level(3, 2);
    ASSERT_EQ(l.size(), 9u);
    EXPECT_EQ(l.front(), (Word{1, 1}));
    EXPECT_EQ(l.back(), (Word{3, 3}));
    EXPECT_TRUE(std::is_sorted(l.begin(), l.end()));
}

TEST(Words, BudgetGuard) {
    EXPECT_THROW(selfsim::enumerate_level(3, 12, 100000), selfsim::BudgetExceeded);
    EXPECT_THROW(selfsim::enumerate_level(1000, 40), selfsim::BudgetExceeded);
    EXPECT_THROW(selfsim::children(Word{1}, 5, 3), selfsim::BudgetExceeded);
    EXPECT_THROW(selfsim::enumerate_level(1, 2), std::invalid_argument);
}

TEST(Words, Children) {
    EXPECT_EQ(selfsim::children(Word{}, 3), (std::vector<Word>{{1}, {2}, {3}}));
    EXPECT_EQ(selfsim::children(Word{1, 2}, 2), (std::vector<Word>{{1, 2, 1}, {1, 2, 2}}));
    for (const auto& w : selfsim::children(Word{2, 1}, 4)) EXPECT_TRUE(selfsim::is_prefix(Word{2, 1}, w));
}

TEST(Words, LevelIsConcatenationOfChildren) {
    for (std::size_t k = 2; k <= 4; ++k)
        for (std::size_t n = 0; n <= 4; ++n) {
            std::vector<Word> built;
            for (const auto& u : selfsim::enumerate_level(k, n))
                for (auto& c : selfsim::children(u, k)) built.push_back(std::move(c));
            EXPECT_EQ(built, selfsim::enumerate_level(k, n + 1)) << "k=" << k << " n=" << n;
        }
}

TEST(Words, PrefixIsPartialOrderOnRandomWords) {
    std::mt19937 rng(7);
    std::vector<Word> words;
    for (int i = 0; i < 60; ++i) {
        std::vector<selfsim::Symbol> s(rng() % 4);
        for (auto& x : s) x = static_cast<selfsim::Symbol>(1 + rng() % 2);
        words.emplace_back(s);
    }
    for (const auto& u : words) {
        EXPECT_TRUE(selfsim::is_prefix(u, u));
        for (const auto& v : words) {
            EXPECT_EQ(selfsim::incomparable(u, v), selfsim::incomparable(v, u));
            if (selfsim::is_prefix(u, v) && selfsim::is_prefix(v, u)) EXPECT_EQ(u, v);
            for (const auto& w : words)
                if (selfsim::is_prefix(u, v) && selfsim::is_prefix(v, w)) EXPECT_TRUE(selfsim::is_prefix(u, w));
        }
    }
}

TEST(Words, TextForm) {
    EXPECT_EQ(Word{}.to_string(), "e");
    EXPECT_EQ((Word{1, 2, 1}).to_string(), "121");
    EXPECT_EQ((Word{1, 12}).to_string(), "1.12");
    EXPECT_EQ(Word::parse("121"), (Word{1, 2, 1}));
    EXPECT_EQ(Word::parse("1.12"), (Word{1, 12}));
    EXPECT_EQ(Word::parse("e"), Word{});
    EXPECT_THROW(Word::parse("1x"), std::invalid_argument);
}
