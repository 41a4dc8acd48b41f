#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "selfsim/corpus.hpp"
#include "selfsim/similitude.hpp"

using namespace selfsim;

namespace {

Point vec(std::initializer_list<double> xs) {
    Point p(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}

Similitude random_similitude(std::mt19937& rng, int dim) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix a = Matrix::NullaryExpr(dim, dim, [&]() { return u(rng); });
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    Point t = Point::NullaryExpr(dim, [&]() { return u(rng); });
    return Similitude(0.1 + 0.8 * (u(rng) + 1.0) / 2.0, q, t);
}

}  // namespace

TEST(Similitude, ApplyExamples) {
    const auto half = corpus::line_map(0.5, 0.0);
    EXPECT_DOUBLE_EQ(half.apply(vec({1.0}))[0], 0.5);

    const auto f3 = corpus::mattila().maps[2];
    const Point y = f3.apply(vec({0.0, 0.0}));
    EXPECT_NEAR(y[0], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(y[1], 1.0 / (3.0 * std::sqrt(3.0)), 1e-15);
}

TEST(Similitude, FixedPoint) {
    std::mt19937 rng(3);
    for (int dim = 1; dim <= 3; ++dim)
        for (int i = 0; i < 20; ++i) {
            const auto f = random_similitude(rng, dim);
            const Point x = f.fixed_point();
            EXPECT_LT((f.apply(x) - x).norm(), 1e-12);
        }
}

TEST(Similitude, RejectsBadInput) {
    Matrix notq(2, 2);
    notq << 1, 1, 0, 1;
    EXPECT_THROW(Similitude(0.5, notq, Point::Zero(2)), std::invalid_argument);
    EXPECT_THROW(Similitude(0.0, Matrix::Identity(2, 2), Point::Zero(2)), std::invalid_argument);
    EXPECT_THROW(Similitude(0.5, Matrix::Identity(2, 2), Point::Zero(3)), std::invalid_argument);
    const auto f = corpus::line_map(0.5, 0.0);
    EXPECT_THROW(f.apply(Point::Zero(2)), std::invalid_argument);
    EXPECT_THROW(compose(f, Similitude::identity(2)), std::invalid_argument);
}

TEST(Similitude, ComposeExamples) {
    const auto f = corpus::cantor().maps[0];
    EXPECT_TRUE(approx_equal(compose(f, Similitude::identity(1)), f, 1e-15));
    const auto ff = compose(f, f);
    EXPECT_NEAR(ff.scale(), 1.0 / 9.0, 1e-16);
    EXPECT_EQ(ff.translation()[0], 0.0);

    std::mt19937 rng(11);
    std::vector<Similitude> maps;
    double product = 1.0;
    Similitude acc = Similitude::identity(2);
    for (int i = 0; i < 30; ++i) {
        maps.push_back(random_similitude(rng, 2));
        product *= maps.back().scale();
        acc = compose(acc, maps.back());
    }
    EXPECT_NEAR(acc.scale() / product, 1.0, 1e-12);
}

TEST(Similitude, RelativeMapExamples) {
    const auto f = corpus::cantor().maps[0];
    EXPECT_TRUE(approx_equal(relative_map(f, f), Similitude::identity(1), 1e-15));
    const auto dup = corpus::duplicate_cantor();
    EXPECT_TRUE(approx_equal(relative_map(dup.maps[0], dup.maps[1]), Similitude::identity(1), 1e-15));
    EXPECT_TRUE(approx_equal(relative_map(compose(f, f), f), f, 1e-15));
}

TEST(Similitude, ApproxEqualExamples) {
    const auto c = corpus::cantor();
    EXPECT_TRUE(approx_equal(c.maps[0], c.maps[0], 1e-12));
    EXPECT_FALSE(approx_equal(c.maps[0], c.maps[1], 1e-9));
    const auto dup = corpus::duplicate_cantor();
    EXPECT_TRUE(approx_equal(dup.maps[0], dup.maps[1], 1e-12));
}

TEST(Similitude, PlanarNormalization) {
    const auto r = Similitude::planar(0.5, std::numbers::pi / 2, false, vec({1.0, 0.0}));
    const Point y = r.apply(vec({1.0, 0.0}));
    EXPECT_NEAR(y[0], 1.0, 1e-15);
    EXPECT_NEAR(y[1], 0.5, 1e-15);
    const auto m = Similitude::planar(1.0 / 3.0, 0.0, true, vec({0.0, 0.0}));
    EXPECT_NEAR(m.orthogonal().determinant(), -1.0, 1e-15);
}

TEST(Similitude, AlgebraicPropertiesOnRandomMaps) {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int dim = 1; dim <= 3; ++dim)
        for (int trial = 0; trial < 50; ++trial) {
            const auto f = random_similitude(rng, dim), g = random_similitude(rng, dim), h = random_similitude(rng, dim);
            EXPECT_TRUE(approx_equal(compose(compose(f, g), h), compose(f, compose(g, h)), 1e-10));
            EXPECT_TRUE(approx_equal(relative_map(compose(g, h), g), h, 1e-10));
            const Point x = Point::NullaryExpr(dim, [&]() { return u(rng); });
            const Point y = Point::NullaryExpr(dim, [&]() { return u(rng); });
            const Point lhs = compose(f, g).apply(x), rhs = f.apply(g.apply(x));
            EXPECT_LE((lhs - rhs).norm(), 1e-10 * std::max(1.0, rhs.norm()));
            const double d = (f.apply(x) - f.apply(y)).norm();
            EXPECT_NEAR(d / ((x - y).norm() * f.scale()), 1.0, 1e-10);
            EXPECT_NEAR((f.orthogonal() * x).norm(), x.norm(), 1e-12 * std::max(1.0, x.norm()));
        }
}
