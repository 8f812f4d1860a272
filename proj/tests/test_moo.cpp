#include "modirect/errors.hpp"
#include "modirect/moo.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace modirect;

namespace {

// Coarse grids make ties and duplicates common, which is where sorts go wrong.
std::vector<ObjectiveVector> random_points(std::mt19937_64& rng, std::size_t n, std::size_t m,
                                           int levels) {
    std::uniform_int_distribution<int> u(0, levels);
    std::vector<ObjectiveVector> pts(n, ObjectiveVector(m));
    for (auto& p : pts) {
        for (auto& x : p) x = u(rng) / static_cast<double>(levels);
    }
    return pts;
}

}  // namespace

TEST(Dominates, Basics) {
    const std::vector<double> a{1, 2}, b{2, 2}, c{2, 1};
    EXPECT_TRUE(dominates(a, b));
    EXPECT_FALSE(dominates(b, a));
    EXPECT_FALSE(dominates(a, c));
    EXPECT_FALSE(dominates(a, a));
}

TEST(NondominatedSort, Examples) {
    EXPECT_EQ(fast_nondominated_sort(std::vector<ObjectiveVector>{{1, 2}, {2, 1}, {2, 2}, {3, 3}}),
              (std::vector<int>{1, 1, 2, 3}));
    EXPECT_EQ(fast_nondominated_sort(std::vector<ObjectiveVector>{{1, 1}, {1, 1}, {1, 1}}),
              (std::vector<int>{1, 1, 1}));
    EXPECT_EQ(fast_nondominated_sort(std::vector<ObjectiveVector>{{5}, {3}, {9}}),
              (std::vector<int>{2, 1, 3}));
    EXPECT_TRUE(fast_nondominated_sort(std::vector<ObjectiveVector>{}).empty());
    EXPECT_THROW(fast_nondominated_sort(std::vector<ObjectiveVector>{{1, 2}, {1}}), InvalidInput);
}

TEST(NondominatedSort, MatchesPeelingOracle) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 200;
        const std::size_t m = 1 + trial % 4;
        const auto pts = random_points(rng, n, m, trial % 2 ? 10 : 1000);
        const auto expected = oracle::peel_ranks(pts);
        EXPECT_EQ(fast_nondominated_sort(pts), expected) << "trial " << trial;
        EXPECT_EQ(deb_nondominated_sort(pts), expected) << "trial " << trial;
    }
}

TEST(Hypervolume, Examples) {
    const ObjectiveVector ref{0, 0};
    EXPECT_EQ(hypervolume_2d(std::vector<ObjectiveVector>{{-0.5, -0.5}}, ref), 0.25);
    EXPECT_NEAR(hypervolume_2d(std::vector<ObjectiveVector>{{-0.8, -0.2}, {-0.2, -0.8}}, ref), 0.28,
                1e-15);
    EXPECT_EQ(hypervolume_2d(std::vector<ObjectiveVector>{}, ref), 0.0);
    EXPECT_EQ(hypervolume_2d(std::vector<ObjectiveVector>{{0.5, -1.0}, {0.0, -1.0}}, ref), 0.0);
}

TEST(Hypervolume, ExclusiveContributionExamples) {
    const ObjectiveVector ref{0, 0};
    const std::vector<ObjectiveVector> front{{-0.8, -0.2}, {-0.2, -0.8}};
    EXPECT_NEAR(exclusive_contribution({-0.5, -0.5}, front, ref), 0.09, 1e-15);
    EXPECT_EQ(exclusive_contribution({-0.1, -0.1}, front, ref), 0.0);
    EXPECT_EQ(exclusive_contribution({-0.5, -0.5}, std::vector<ObjectiveVector>{}, ref), 0.25);
}

TEST(Hypervolume, MatchesGridOracleMonotoneAndPermutationInvariant) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 0.1);
    const ObjectiveVector ref{0, 0};
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ObjectiveVector> pts(1 + rng() % 30);
        for (auto& p : pts) p = {u(rng), u(rng)};
        const double hv = hypervolume_2d(pts, ref);
        EXPECT_NEAR(hv, oracle::grid_hypervolume(pts, ref), 1e-12);

        auto shuffled = pts;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EXPECT_NEAR(hypervolume_2d(shuffled, ref), hv, 1e-12);

        const ObjectiveVector extra{u(rng), u(rng)};
        const double gain = exclusive_contribution(extra, pts, ref);
        EXPECT_GE(gain, 0.0);
        pts.push_back(extra);
        EXPECT_GE(hypervolume_2d(pts, ref), hv);
        EXPECT_NEAR(hypervolume_2d(pts, ref) - hv, gain, 1e-12);
    }
}

TEST(Archive, InsertRules) {
    ParetoArchive a;
    EXPECT_TRUE(a.insert({0.1}, {-0.5, -0.5}));
    EXPECT_FALSE(a.insert({0.2}, {-0.4, -0.5}));  // dominated
    EXPECT_FALSE(a.insert({0.1}, {-0.9, -0.9}));  // same x
    EXPECT_TRUE(a.insert({0.3}, {-0.5, -0.5}));   // objective tie, different x
    EXPECT_TRUE(a.insert({0.4}, {-0.9, -0.1}));
    EXPECT_EQ(a.size(), 3u);
    EXPECT_TRUE(a.insert({0.5}, {-0.6, -0.6}));  // evicts both ties
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a.entries()[0].x, DecisionVector{0.4});
    EXPECT_EQ(a.entries()[1].x, DecisionVector{0.5});
    EXPECT_EQ(a.mean_objectives(), (std::vector<double>{-0.75, -0.35}));
    EXPECT_TRUE(ParetoArchive{}.mean_objectives().empty());
}

TEST(Archive, MatchesBruteForceFilter) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pts = random_points(rng, 1000, 2 + trial % 2, trial % 3 ? 50 : 100000);
        ParetoArchive archive;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            archive.insert({static_cast<double>(i)}, pts[i]);
            for (const auto& a : archive.entries()) {
                for (const auto& b : archive.entries()) {
                    ASSERT_FALSE(dominates(a.objectives, b.objectives));
                }
            }
        }
        const auto keep = oracle::nondominated_indices(pts);
        ASSERT_EQ(archive.size(), keep.size()) << "trial " << trial;
        for (std::size_t k = 0; k < keep.size(); ++k) {
            EXPECT_EQ(archive.entries()[k].x[0], static_cast<double>(keep[k]));
        }
    }
}
