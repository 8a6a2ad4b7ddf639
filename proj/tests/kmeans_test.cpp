#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "roadnet/kmeans.hpp"
#include "support/oracles.hpp"

using namespace roadnet;
using roadnet::testing::make_edges;

namespace {

PointSet make_points(std::initializer_list<Point2D> pts) { return PointSet{std::vector<Point2D>(pts)}; }

PointSet four_points() { return make_points({{0, 0}, {0, 1}, {10, 0}, {10, 1}}); }

PointSet random_points(std::mt19937_64& rng, std::size_t t, int range) {
  // distinct integer coordinates
  std::set<std::pair<int, int>> seen;
  PointSet out;
  while (out.size() < t) {
    int x = static_cast<int>(rng() % range), y = static_cast<int>(rng() % range);
    if (seen.insert({x, y}).second) out.points.push_back({double(x), double(y)});
  }
  return out;
}

void expect_result_invariants(const PointSet& points, const ClusteringResult& r, std::size_t k) {
  ASSERT_EQ(r.centroids.size(), k);
  ASSERT_EQ(r.assignment.size(), points.size());
  std::size_t total = 0;
  for (auto s : r.cluster_sizes) total += s;
  EXPECT_EQ(total, points.size());
  std::vector<std::size_t> counted(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto a = r.assignment[i];
    ASSERT_LT(a, k);
    ++counted[a];
    const double mine = squared_distance(points[i], r.centroids[a]);
    for (std::size_t j = 0; j < k; ++j) {
      const double other = squared_distance(points[i], r.centroids[j]);
      EXPECT_TRUE(mine < other || (mine == other && a <= j)) << "point " << i << " centroid " << j;
    }
  }
  EXPECT_EQ(counted, r.cluster_sizes);
  const double recomputed = roadnet::testing::brute_objective(points.points, r.centroids, r.assignment);
  EXPECT_NEAR(r.objective, recomputed, 1e-9 * std::max(1.0, recomputed));
}

}  // namespace

TEST(EdgesToPoints, DirectMapping) {
  auto pts = edges_to_points(make_edges({{0, 1}, {1, 0}}));
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0], (Point2D{0, 1}));
  EXPECT_EQ(pts[1], (Point2D{1, 0}));
  EXPECT_TRUE(edges_to_points(EdgeList{}).empty());
}

TEST(Objective, TwoPointsOneCluster) {
  auto pts = make_points({{0, 0}, {2, 0}});
  ClusteringResult r;
  r.centroids = {{1, 0}};
  r.assignment = {0, 0};
  EXPECT_DOUBLE_EQ(objective(pts, r), 2.0);
}

TEST(Objective, EveryPointItsOwnCluster) {
  auto pts = make_points({{3, 4}, {-1, 2}, {7, 7}});
  ClusteringResult r;
  r.centroids = pts.points;
  r.assignment = {0, 1, 2};
  EXPECT_EQ(objective(pts, r), 0.0);
}

TEST(Objective, MatchesDoubleLoopOnRandomInstance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50, 50);
  PointSet pts;
  for (int i = 0; i < 20; ++i) pts.points.push_back({u(rng), u(rng)});
  ClusteringResult r;
  r.centroids = {{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
  for (int i = 0; i < 20; ++i) r.assignment.push_back(static_cast<std::uint32_t>(rng() % 3));
  const double oracle = roadnet::testing::brute_objective(pts.points, r.centroids, r.assignment);
  EXPECT_NEAR(objective(pts, r), oracle, 1e-9 * oracle);
}

TEST(Objective, SizeMismatchIsContractError) {
  ClusteringResult r;
  r.centroids = {{0, 0}};
  r.assignment = {0};
  EXPECT_THROW(objective(make_points({{0, 0}, {1, 1}}), r), ParameterError);
  r.assignment = {4};
  EXPECT_THROW(objective(make_points({{0, 0}}), r), ParameterError);
}

TEST(KMeansInit, FirstKWithKEqualT) {
  auto pts = four_points();
  auto c = kmeans_init(pts, 4, {InitMethod::FirstK, 0});
  EXPECT_EQ(c, pts.points);
}

TEST(KMeansInit, KEqualsOnePicksADataPoint) {
  auto pts = four_points();
  for (auto method : {InitMethod::KMeansPlusPlus, InitMethod::UniformRandom, InitMethod::FirstK}) {
    for (std::uint64_t seed : {0ull, 1ull, 42ull}) {
      auto c = kmeans_init(pts, 1, {method, seed});
      ASSERT_EQ(c.size(), 1u);
      EXPECT_NE(std::find(pts.points.begin(), pts.points.end(), c[0]), pts.points.end());
    }
  }
}

TEST(KMeansInit, PlusPlusTwoFarPointsAlwaysBothChosen) {
  // After the first draw all D^2 mass sits on the other point.
  auto pts = make_points({{0, 0}, {100, 100}});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto c = kmeans_init(pts, 2, {InitMethod::KMeansPlusPlus, seed});
    ASSERT_EQ(c.size(), 2u);
    EXPECT_NE(c[0], c[1]);
  }
}

TEST(KMeansInit, UniformRandomPicksDistinctIndices) {
  std::mt19937_64 rng(8);
  auto pts = random_points(rng, 30, 1000);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto c = kmeans_init(pts, 30, {InitMethod::UniformRandom, seed});
    std::set<std::pair<double, double>> distinct;
    for (auto p : c) distinct.insert({p.x, p.y});
    EXPECT_EQ(distinct.size(), 30u);
  }
}

TEST(KMeansInit, DeterministicPerSeed) {
  std::mt19937_64 rng(4);
  auto pts = random_points(rng, 200, 10000);
  for (auto method : {InitMethod::KMeansPlusPlus, InitMethod::UniformRandom}) {
    EXPECT_EQ(kmeans_init(pts, 5, {method, 9}), kmeans_init(pts, 5, {method, 9}));
  }
}

TEST(KMeansInit, Errors) {
  auto dup = make_points({{1, 1}, {1, 1}, {1, 1}});
  EXPECT_THROW(kmeans_init(dup, 2, {InitMethod::KMeansPlusPlus, 1}), InitializationError);
  EXPECT_NO_THROW(kmeans_init(dup, 2, {InitMethod::FirstK, 1}));
  EXPECT_THROW(kmeans_init(four_points(), 5, {InitMethod::FirstK, 1}), ParameterError);
  EXPECT_THROW(kmeans_init(four_points(), 5, {InitMethod::KMeansPlusPlus, 1}), ParameterError);
  EXPECT_THROW(kmeans_init(four_points(), 0, {}), ParameterError);
  EXPECT_THROW(kmeans_init(PointSet{}, 1, {}), ParameterError);
}

TEST(KMeans, FourPointFixtureReachesGlobalOptimum) {
  auto pts = four_points();
  EXPECT_DOUBLE_EQ(roadnet::testing::exhaustive_kmeans_optimum(pts.points, 2), 1.0);
  auto r = kmeans(pts, 2);
  std::vector<Point2D> c = r.centroids;
  std::sort(c.begin(), c.end(), [](auto p, auto q) { return p.x < q.x; });
  EXPECT_EQ(c[0], (Point2D{0, 0.5}));
  EXPECT_EQ(c[1], (Point2D{10, 0.5}));
  EXPECT_DOUBLE_EQ(r.objective, 1.0);
  EXPECT_TRUE(r.converged);
  expect_result_invariants(pts, r, 2);
}

TEST(KMeans, FourPointFixtureFromEveryDataPointStart) {
  // Starting centroids in different columns reach the optimum. Two starts in
  // the same column settle on the horizontal split {(5,0), (5,1)}, which is
  // also a Lloyd fixed point (objective 100).
  auto pts = four_points();
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      if (a == b) continue;
      PointSet reordered;
      reordered.points = {pts[a], pts[b]};
      for (std::size_t i = 0; i < 4; ++i) {
        if (i != a && i != b) reordered.points.push_back(pts[i]);
      }
      auto r = kmeans(reordered, 2, {{InitMethod::FirstK, 0}, 300, 0.0, 1});
      std::vector<Point2D> c = r.centroids;
      std::sort(c.begin(), c.end(), [](auto p, auto q) { return p.x < q.x || (p.x == q.x && p.y < q.y); });
      EXPECT_TRUE(r.converged);
      if (pts[a].x != pts[b].x) {
        EXPECT_EQ(c[0], (Point2D{0, 0.5}));
        EXPECT_EQ(c[1], (Point2D{10, 0.5}));
        EXPECT_DOUBLE_EQ(r.objective, 1.0);
      } else {
        EXPECT_EQ(c[0], (Point2D{5, 0}));
        EXPECT_EQ(c[1], (Point2D{5, 1}));
        EXPECT_DOUBLE_EQ(r.objective, 100.0);
      }
    }
  }
}

TEST(KMeans, SingleClusterIsTheMean) {
  auto pts = make_points({{1, 2}, {3, 8}, {5, 5}, {-1, 1}});
  auto r = kmeans(pts, 1);
  EXPECT_DOUBLE_EQ(r.centroids[0].x, 2.0);
  EXPECT_DOUBLE_EQ(r.centroids[0].y, 4.0);
  // one update step; the second pass only confirms nothing moved
  EXPECT_EQ(r.iterations_run, 2u);
  EXPECT_TRUE(r.converged);
  expect_result_invariants(pts, r, 1);
}

TEST(KMeans, EmptyClusterIsReseededToFarthestPoint) {
  // Both initial centroids coincide: cluster 1 starts empty.
  auto pts = make_points({{0, 0}, {0, 0}, {1, 0}, {9, 0}});
  auto r = kmeans(pts, 2, {{InitMethod::FirstK, 0}, 300, 0.0, 1});
  expect_result_invariants(pts, r, 2);
  for (auto s : r.cluster_sizes) EXPECT_GT(s, 0u);
  EXPECT_NEAR(r.objective, roadnet::testing::exhaustive_kmeans_optimum(pts.points, 2), 1e-12);
}

TEST(KMeans, StopsAtMaxIterations) {
  std::mt19937_64 rng(21);
  auto pts = random_points(rng, 400, 1000);
  auto r = kmeans(pts, 6, {{InitMethod::FirstK, 0}, 1, 0.0, 1});
  EXPECT_EQ(r.iterations_run, 1u);
  EXPECT_FALSE(r.converged);
  expect_result_invariants(pts, r, 6);
}

TEST(KMeans, ParameterErrors) {
  auto pts = four_points();
  EXPECT_THROW(kmeans(pts, 2, {{}, 0, 1e-6, 1}), ParameterError);
  EXPECT_THROW(kmeans(pts, 2, {{}, 10, -1.0, 1}), ParameterError);
  EXPECT_THROW(kmeans(pts, 9), ParameterError);
}

TEST(KMeansProperties, InvariantsMonotonicityAndCost) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t t = 5 + rng() % 300;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(8, t);
    auto pts = random_points(rng, t, 500);
    auto r = kmeans(pts, k, {{InitMethod::KMeansPlusPlus, rng()}, 300, 0.0, 1});
    expect_result_invariants(pts, r, k);
    for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
      EXPECT_LE(r.objective_history[i], r.objective_history[i - 1] * (1 + 1e-9));
    }
    EXPECT_LE(r.distance_evaluations, static_cast<std::uint64_t>(k) * t * r.iterations_run);
    EXPECT_EQ(r.objective_history.size(), r.iterations_run);
  }
}

TEST(KMeansProperties, FixedPointOnAssignmentStability) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    auto pts = random_points(rng, 50 + rng() % 100, 300);
    auto r = kmeans(pts, 4, {{InitMethod::KMeansPlusPlus, rng()}, 1000, 0.0, 1});
    ASSERT_TRUE(r.converged);
    // one more assign + update pass by hand: nothing may move
    std::vector<std::uint32_t> assign(pts.size());
    std::vector<double> sx(4, 0), sy(4, 0);
    std::vector<std::size_t> cnt(4, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::uint32_t best = 0;
      for (std::uint32_t j = 1; j < 4; ++j) {
        if (squared_distance(pts[i], r.centroids[j]) < squared_distance(pts[i], r.centroids[best])) best = j;
      }
      assign[i] = best;
      sx[best] += pts[i].x;
      sy[best] += pts[i].y;
      ++cnt[best];
    }
    EXPECT_EQ(assign, r.assignment);
    for (std::size_t j = 0; j < 4; ++j) {
      ASSERT_GT(cnt[j], 0u);
      EXPECT_NEAR(sx[j] / cnt[j], r.centroids[j].x, 1e-9);
      EXPECT_NEAR(sy[j] / cnt[j], r.centroids[j].y, 1e-9);
    }
  }
}

TEST(KMeansProperties, BestOfRestartsMatchesExhaustiveOptimum) {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t t = 2 + rng() % 7;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(3, t);
    auto pts = random_points(rng, t, 20);
    const double optimum = roadnet::testing::exhaustive_kmeans_optimum(pts.points, k);
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      best = std::min(best, kmeans(pts, k, {{InitMethod::KMeansPlusPlus, seed}, 300, 0.0, 1}).objective);
    }
    EXPECT_NEAR(best, optimum, 1e-9 * std::max(1.0, optimum)) << "trial " << trial;
  }
}

TEST(KMeansProperties, BitIdenticalAcrossWorkerCounts) {
  std::mt19937_64 rng(31);
  PointSet pts;
  std::uniform_real_distribution<double> u(0, 1e6);
  for (int i = 0; i < 100000; ++i) pts.points.push_back({u(rng), u(rng)});
  auto one = kmeans(pts, 4, {{InitMethod::KMeansPlusPlus, 42}, 300, 1e-6, 1});
  auto four = kmeans(pts, 4, {{InitMethod::KMeansPlusPlus, 42}, 300, 1e-6, 4});
  EXPECT_EQ(one.centroids, four.centroids);
  EXPECT_EQ(one.assignment, four.assignment);
  EXPECT_EQ(one.objective, four.objective);
}

TEST(KMeansProperties, PermutationKeepsExhaustiveOptimum) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto pts = random_points(rng, 7, 15);
    auto shuffled = pts;
    std::shuffle(shuffled.points.begin(), shuffled.points.end(), rng);
    EXPECT_NEAR(roadnet::testing::exhaustive_kmeans_optimum(pts.points, 3),
                roadnet::testing::exhaustive_kmeans_optimum(shuffled.points, 3), 1e-9);
  }
}

TEST(NormalizeMinMax, ScalesToUnitBox) {
  auto n = normalize_min_max(make_points({{10, 5}, {20, 5}, {15, 5}}));
  EXPECT_EQ(n[0], (Point2D{0, 0}));
  EXPECT_EQ(n[1], (Point2D{1, 0}));
  EXPECT_EQ(n[2], (Point2D{0.5, 0}));
}

TEST(ClusteringExport, CsvAndJson) {
  auto pts = four_points();
  auto r = kmeans(pts, 2);
  std::ostringstream csv;
  write_assignment_csv(csv, pts, r);
  const std::string text = csv.str();
  EXPECT_EQ(text.rfind("index,x,y,cluster\n0,0,0,", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  auto j = clustering_summary(r);
  EXPECT_EQ(j["k"], 2);
  EXPECT_EQ(j["objective"].get<double>(), 1.0);
  EXPECT_EQ(j["centroids"].size(), 2u);
  EXPECT_EQ(j["sizes"][0].get<int>() + j["sizes"][1].get<int>(), 4);
}
