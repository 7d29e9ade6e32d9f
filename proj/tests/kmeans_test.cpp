#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "lipcot/error.hpp"
#include "lipcot/kmeans.hpp"

using namespace lipcot;

namespace {

std::vector<double> blobs(std::size_t per_blob, std::size_t dim,
                          const std::vector<std::vector<double>>& centers, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise;
  std::vector<double> data;
  for (std::size_t i = 0; i < per_blob; ++i)
    for (const auto& c : centers)
      for (std::size_t d = 0; d < dim; ++d) data.push_back(c[d] + noise(rng));
  return data;
}

}  // namespace

TEST(KMeans, NearestPrefersLowestIndexOnTies) {
  const std::vector<double> centroids{0.0, 0.0, 2.0, 0.0, 1.0, 5.0, 2.0, 0.0};
  const std::vector<double> p{1.0, 0.0};
  double d = -1.0;
  EXPECT_EQ(kmeans::nearest(p, centroids, 2, &d), 0u);
  EXPECT_EQ(d, 1.0);
  const std::vector<double> q{2.0, 0.0};
  EXPECT_EQ(kmeans::nearest(q, centroids, 2), 1u);  // rows 1 and 3 coincide
}

TEST(KMeans, SingleClusterIsMean) {
  const auto data = blobs(50, 3, {{1.0, -2.0, 0.5}}, 1);
  const auto r = kmeans::fit(data, 3, 1, 0);
  for (std::size_t d = 0; d < 3; ++d) {
    double mean = 0.0;
    for (std::size_t i = 0; i < 50; ++i) mean += data[i * 3 + d];
    EXPECT_NEAR(r.centroids[d], mean / 50.0, 1e-12);
  }
  for (auto l : r.labels) EXPECT_EQ(l, 0u);
  EXPECT_EQ(r.counts, std::vector<std::size_t>{50});
}

TEST(KMeans, SeparatesBlobsPerfectly) {
  const std::vector<std::vector<double>> centers{{0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0}};
  const auto data = blobs(100, 2, centers, 2);
  const auto r = kmeans::fit(data, 2, 3, 7);
  // Row i belongs to blob i % 3; each blob must map to one distinct label.
  std::set<std::uint32_t> used;
  for (std::size_t b = 0; b < 3; ++b) {
    const auto label = r.labels[b];
    used.insert(label);
    for (std::size_t i = b; i < r.labels.size(); i += 3) EXPECT_EQ(r.labels[i], label);
  }
  EXPECT_EQ(used.size(), 3u);
}

TEST(KMeans, InertiaNeverIncreases) {
  const auto data = blobs(80, 4, {{0, 0, 0, 0}, {3, 3, 0, 0}, {0, 3, 3, 0}, {1, 1, 1, 1}}, 3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = kmeans::fit(data, 4, 8, seed);
    ASSERT_GE(r.inertia_history.size(), 2u);
    for (std::size_t i = 1; i < r.inertia_history.size(); ++i)
      EXPECT_LE(r.inertia_history[i], r.inertia_history[i - 1] * (1.0 + 1e-12));
  }
}

TEST(KMeans, EveryClusterKeepsAMember) {
  // Heavy duplication invites empty clusters.
  std::vector<double> data;
  for (int i = 0; i < 200; ++i) data.push_back(0.0);
  for (int i = 1; i <= 9; ++i) data.push_back(100.0 + i);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = kmeans::fit(data, 1, 10, seed);
    ASSERT_EQ(r.counts.size(), 10u);
    for (auto c : r.counts) EXPECT_GE(c, 1u) << "seed " << seed;
    std::vector<std::size_t> recount(10, 0);
    for (auto l : r.labels) ++recount[l];
    EXPECT_EQ(recount, r.counts);
  }
}

TEST(KMeans, DeterministicAndKernelIndependent) {
  const auto data = blobs(150, 5, {{0, 0, 0, 0, 0}, {2, 2, 2, 2, 2}, {-2, 1, 0, 1, -2}}, 4);
  kmeans::Options serial;
  serial.parallel = false;
  const auto a = kmeans::fit(data, 5, 6, 11);
  const auto b = kmeans::fit(data, 5, 6, 11);
  const auto c = kmeans::fit(data, 5, 6, 11, serial);
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.centroids, c.centroids);
  EXPECT_EQ(a.labels, c.labels);
  EXPECT_EQ(a.inertia_history, c.inertia_history);
}

TEST(KMeans, SeedingPicksDataRows) {
  const auto data = blobs(20, 2, {{0, 0}, {5, 5}}, 5);
  const auto seeds = kmeans::seed_plus_plus(data, 2, 4, 9);
  ASSERT_EQ(seeds.size(), 8u);
  for (std::size_t c = 0; c < 4; ++c) {
    bool found = false;
    for (std::size_t i = 0; i < 40 && !found; ++i)
      found = data[2 * i] == seeds[2 * c] && data[2 * i + 1] == seeds[2 * c + 1];
    EXPECT_TRUE(found);
  }
}

TEST(KMeans, TooFewDistinctRows) {
  const std::vector<double> data{1.0, 1.0, 1.0, 2.0};
  try {
    kmeans::fit(data, 1, 3, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewVectors);
  }
  try {
    kmeans::fit(data, 1, 5, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewVectors);
  }
}
