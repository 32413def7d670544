#include <random>

#include <gtest/gtest.h>

#include "fuzzyemb/core.hpp"
#include "fuzzyemb/random.hpp"
#include "test_util.hpp"

using namespace fuzzyemb;

TEST(Dataset, RejectsBadShapes) {
    EXPECT_THROW(Dataset({"a", "b"}, Matrix::Zero(3, 2)), DimensionMismatch);
    EXPECT_THROW(Dataset({"a", "a"}, Matrix::Zero(2, 2)), InvalidArgument);
    EXPECT_THROW(Dataset(std::vector<std::string>{}, Matrix::Zero(0, 2)), InvalidArgument);
    EXPECT_THROW(Dataset({"a"}, Matrix::Zero(1, 0)), InvalidArgument);
    Matrix bad = Matrix::Zero(1, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(Dataset({"a"}, bad), InvalidArgument);
}

TEST(Dataset, Accessors) {
    const Dataset d({"x", "y", "z"}, Matrix::Ones(3, 4));
    EXPECT_EQ(d.size(), 3);
    EXPECT_EQ(d.dim(), 4);
    EXPECT_EQ(d.labels()[1], "y");
}

TEST(ValidateMembership, CrispIsValid) {
    EXPECT_FALSE(validate_membership(MembershipMatrix(Matrix::Identity(3, 3))).has_value());
}

TEST(ValidateMembership, RowSumViolation) {
    Matrix m(2, 2);
    m << 0.6, 0.4, 0.5, 0.6;
    const auto v = validate_membership(MembershipMatrix(m));
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(v->row, 1);
    EXPECT_EQ(v->column, -1);
    EXPECT_NEAR(v->value, 1.1, 1e-15);
}

TEST(ValidateMembership, UniformIsValid) {
    for (Index c : {2, 3, 7})
        EXPECT_FALSE(validate_membership(MembershipMatrix(Matrix::Constant(5, c, 1.0 / c))).has_value());
}

TEST(ValidateMembership, EntryOutOfRange) {
    Matrix m(1, 2);
    m << 1.5, -0.5;
    const auto v = validate_membership(MembershipMatrix(m));
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(v->column, 0);
}

TEST(ValidateMembership, ToleranceIsAbsolute1e9) {
    Matrix m(1, 2);
    m << 0.5, 0.5 + 5e-10;
    EXPECT_FALSE(validate_membership(MembershipMatrix(m)).has_value());
    m(0, 1) = 0.5 + 2e-9;
    EXPECT_TRUE(validate_membership(MembershipMatrix(m)).has_value());
}

TEST(Harden, Argmax) {
    Matrix m(2, 2);
    m << 0.1, 0.9, 0.8, 0.2;
    EXPECT_EQ(harden(MembershipMatrix(m)).cluster_of, (std::vector<Index>{1, 0}));
}

TEST(Harden, TieGoesToLowestIndex) {
    Matrix m(1, 2);
    m << 0.5, 0.5;
    EXPECT_EQ(harden(MembershipMatrix(m)).cluster_of, (std::vector<Index>{0}));
}

TEST(Harden, CrispPositions) {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 2) = m(1, 0) = m(2, 1) = 1.0;
    EXPECT_EQ(harden(MembershipMatrix(m)).cluster_of, (std::vector<Index>{2, 0, 1}));
}

TEST(HardenProperty, InvariantUnderRowScalingAndRenormalization) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Index n = 1 + static_cast<Index>(rng() % 20);
        const Index c = 2 + static_cast<Index>(rng() % 5);
        const MembershipMatrix u = random_memberships(n, c, rng());
        Matrix scaled = u.values();
        for (Index k = 0; k < n; ++k) {
            scaled.row(k) *= 0.1 + 10.0 * open_unit(rng);
            scaled.row(k) /= scaled.row(k).sum();
        }
        EXPECT_EQ(harden(u).cluster_of, harden(MembershipMatrix(scaled)).cluster_of);
    }
}

TEST(HardenProperty, CrispExpansionAlwaysValid) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        HardAssignment a;
        a.clusters = 2 + static_cast<Index>(rng() % 6);
        const auto n = 1 + rng() % 30;
        for (std::size_t k = 0; k < n; ++k) a.cluster_of.push_back(static_cast<Index>(rng() % a.clusters));
        const MembershipMatrix u = crisp_matrix(a);
        EXPECT_FALSE(validate_membership(u).has_value());
        EXPECT_EQ(harden(u).cluster_of, a.cluster_of);
    }
}

TEST(HardenProperty, DependsOnlyOnOwnRow) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = 5 + static_cast<Index>(rng() % 10);
        const MembershipMatrix u = random_memberships(n, 4, rng());
        const auto base = harden(u).cluster_of;
        // Shuffle every row except row 0 among themselves; row 0's label must not move.
        std::vector<Index> order(static_cast<std::size_t>(n - 1));
        std::iota(order.begin(), order.end(), 1);
        std::shuffle(order.begin(), order.end(), rng);
        Matrix shuffled = u.values();
        for (Index k = 1; k < n; ++k) shuffled.row(k) = u.values().row(order[static_cast<std::size_t>(k - 1)]);
        const auto after = harden(MembershipMatrix(shuffled)).cluster_of;
        EXPECT_EQ(after[0], base[0]);
        for (Index k = 1; k < n; ++k)
            EXPECT_EQ(after[static_cast<std::size_t>(k)], base[static_cast<std::size_t>(order[static_cast<std::size_t>(k - 1)])]);
    }
}

TEST(RandomMemberships, RowsOnSimplexAndSeedDeterministic) {
    const auto a = random_memberships(50, 6, 42);
    const auto b = random_memberships(50, 6, 42);
    const auto c = random_memberships(50, 6, 43);
    EXPECT_FALSE(validate_membership(a).has_value());
    EXPECT_EQ(a.values(), b.values());
    EXPECT_NE(a.values(), c.values());
}

TEST(SquaredDistances, MatchesDirect) {
    Matrix x(2, 2), v(1, 2);
    x << 0, 0, 3, 4;
    v << 0, 0;
    const Matrix d = squared_distances(x, v);
    EXPECT_DOUBLE_EQ(d(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(d(1, 0), 25.0);
    EXPECT_THROW(squared_distances(x, Matrix::Zero(1, 3)), DimensionMismatch);
}
