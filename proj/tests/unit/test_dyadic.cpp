#include "vcz/dyadic.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <sstream>
#include <vector>

using namespace vcz;

namespace {

/// Endpoints scaled by 2^6 so that every cube with level >= -6 has integer endpoints.
std::pair<std::int64_t, std::int64_t> scaled(const DyadicCube& q)
{
    const std::int64_t width = std::int64_t{1} << (q.level() + 6);
    return {q.index() * width, (q.index() + 1) * width};
}

} // namespace

TEST(Dyadic, ParentExamples)
{
    EXPECT_EQ(parent(DyadicCube(0, 3)), DyadicCube(1, 1));
    EXPECT_EQ(DyadicCube(1, 1).left(), 2.0);
    EXPECT_EQ(DyadicCube(1, 1).right(), 4.0);
    EXPECT_EQ(parent(DyadicCube(0, 0)), DyadicCube(1, 0));
    EXPECT_EQ(parent(parent(DyadicCube(-1, 0))), DyadicCube(1, 0));
}

TEST(Dyadic, ChildrenExamples)
{
    EXPECT_EQ(children(DyadicCube(1, 0)), std::pair(DyadicCube(0, 0), DyadicCube(0, 1)));
    EXPECT_EQ(children(DyadicCube(1, 1)), std::pair(DyadicCube(0, 2), DyadicCube(0, 3)));
    const auto [a, b] = children(DyadicCube(2, 0));
    std::vector<DyadicCube> quarter;
    for (const auto& c : {a, b}) {
        const auto [x, y] = children(c);
        quarter.push_back(x);
        quarter.push_back(y);
    }
    for (std::int64_t k = 0; k < 4; ++k) {
        EXPECT_EQ(quarter[static_cast<std::size_t>(k)], DyadicCube(0, k));
    }
}

TEST(Dyadic, ExpandExamples)
{
    EXPECT_EQ(expand(DyadicCube(0, 0)), (HalfOpenInterval{0.0, 1.5}));
    EXPECT_EQ(expand(DyadicCube(1, 1)), (HalfOpenInterval{1.0, 5.0}));
    EXPECT_EQ(expand(DyadicCube(0, 1)), (HalfOpenInterval{0.5, 2.5}));
}

TEST(Dyadic, ContainsExamples)
{
    EXPECT_TRUE(contains(DyadicCube(1, 0), DyadicCube(0, 1)));
    EXPECT_FALSE(contains(DyadicCube(0, 0), DyadicCube(0, 1)));
    EXPECT_FALSE(contains(DyadicCube(1, 1), DyadicCube(0, 0)));
}

TEST(Dyadic, ExhaustiveTrichotomy)
{
    std::vector<DyadicCube> cubes;
    for (int n = -6; n <= 6; ++n) {
        for (std::int64_t k = 0; k <= 64; ++k) {
            cubes.emplace_back(n, k);
        }
    }
    for (const auto& q1 : cubes) {
        const auto [a1, b1] = scaled(q1);
        for (const auto& q2 : cubes) {
            const auto [a2, b2] = scaled(q2);
            const bool sub = a1 <= a2 && b2 <= b1;
            const bool super = a2 <= a1 && b1 <= b2 && !(a1 == a2 && b1 == b2);
            const bool apart = b1 <= a2 || b2 <= a1;
            ASSERT_EQ(int(sub) + int(super) + int(apart), 1) << to_string(q1) << " vs " << to_string(q2);
            ASSERT_EQ(q1.contains(q2), sub);
            ASSERT_EQ(q1.disjoint(q2), apart);
        }
    }
}

TEST(Dyadic, ParentOfChildrenAndMeasures)
{
    for (int n = -10; n <= 10; ++n) {
        for (std::int64_t k = 0; k < 50; ++k) {
            const DyadicCube q(n, k);
            const auto [a, b] = children(q);
            EXPECT_EQ(parent(a), q);
            EXPECT_EQ(parent(b), q);
            EXPECT_EQ(a.measure() + b.measure(), q.measure());
            EXPECT_EQ(a.left(), q.left());
            EXPECT_EQ(a.right(), b.left());
            EXPECT_EQ(b.right(), q.right());
            EXPECT_TRUE(contains(parent(q), q));
        }
    }
}

TEST(Dyadic, ExpandCoversCube)
{
    for (int n = -8; n <= 8; ++n) {
        for (std::int64_t k = 0; k < 40; ++k) {
            const DyadicCube q(n, k);
            const auto e = expand(q);
            EXPECT_LE(e.left, q.left());
            EXPECT_GE(e.right, q.right());
            EXPECT_GE(e.left, 0.0);
            EXPECT_LE(e.length(), 2.0 * q.measure());
            EXPECT_EQ(e.left + e.right == 2.0 * q.center(), k > 0);
        }
    }
}

TEST(Dyadic, RejectsInvalidCubes)
{
    EXPECT_THROW(DyadicCube(0, -1), std::invalid_argument);
    EXPECT_THROW(DyadicCube(61, 0), std::invalid_argument);
}

TEST(Dyadic, Rendering)
{
    EXPECT_EQ(to_string(DyadicCube(0, 3)), "Q(0,3)=(3,4]");
    EXPECT_EQ(to_string(DyadicCube(-1, 1)), "Q(-1,1)=(0.5,1]");
    std::ostringstream os;
    os << DyadicCube(1, 1);
    EXPECT_EQ(os.str(), "Q(1,1)=(2,4]");
    EXPECT_EQ(format_double(1.0), "1.0");
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}
