#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadnet/edge_list.hpp"
#include "roadnet/errors.hpp"
#include "roadnet/parallel.hpp"

namespace roadnet {

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

inline double squared_distance(const Point2D& a, const Point2D& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

struct PointSet {
  std::vector<Point2D> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  const Point2D& operator[](std::size_t i) const { return points[i]; }
};

// One point per raw edge record: (from_id, to_id), file order.
inline PointSet edges_to_points(const EdgeList& edges) {
  PointSet out;
  out.points.reserve(edges.records.size());
  for (const auto& r : edges.records) {
    out.points.push_back({static_cast<double>(r.from_id), static_cast<double>(r.to_id)});
  }
  return out;
}

// Rescale each axis to [0, 1]; a constant axis maps to 0.
inline PointSet normalize_min_max(const PointSet& in) {
  if (in.empty()) return in;
  double lo_x = in[0].x, hi_x = in[0].x, lo_y = in[0].y, hi_y = in[0].y;
  for (const auto& p : in.points) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  const double sx = hi_x > lo_x ? 1.0 / (hi_x - lo_x) : 0.0;
  const double sy = hi_y > lo_y ? 1.0 / (hi_y - lo_y) : 0.0;
  PointSet out;
  out.points.reserve(in.size());
  for (const auto& p : in.points) out.points.push_back({(p.x - lo_x) * sx, (p.y - lo_y) * sy});
  return out;
}

enum class InitMethod { KMeansPlusPlus, UniformRandom, FirstK };

struct InitOptions {
  InitMethod method = InitMethod::KMeansPlusPlus;
  std::uint64_t seed = 42;
};

// mt19937_64 output is fixed by the standard; the distributions in <random>
// are not, so draws are mapped to [0, 1) here.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return std::min(i, n - 1);
  }

 private:
  std::mt19937_64 engine_;
};

inline std::vector<Point2D> kmeans_init(const PointSet& points, std::size_t k, const InitOptions& init = {}) {
  if (k < 1) throw ParameterError("k must be >= 1");
  if (points.empty()) throw ParameterError("k-means needs at least one point");
  if (k > points.size()) {
    throw ParameterError("k = " + std::to_string(k) + " exceeds point count " + std::to_string(points.size()));
  }
  const std::size_t t = points.size();
  std::vector<Point2D> centroids;
  centroids.reserve(k);

  switch (init.method) {
    case InitMethod::FirstK:
      centroids.assign(points.points.begin(), points.points.begin() + static_cast<std::ptrdiff_t>(k));
      break;

    case InitMethod::UniformRandom: {
      SeededRng rng(init.seed);
      std::vector<std::size_t> order(t);
      std::iota(order.begin(), order.end(), std::size_t{0});
      for (std::size_t i = 0; i < k; ++i) {
        std::swap(order[i], order[i + rng.index(t - i)]);
        centroids.push_back(points[order[i]]);
      }
      break;
    }

    case InitMethod::KMeansPlusPlus: {
      // D^2 seeding: each further centroid is drawn with probability
      // proportional to its squared distance from the nearest chosen one.
      SeededRng rng(init.seed);
      centroids.push_back(points[rng.index(t)]);
      std::vector<double> nearest(t);
      for (std::size_t i = 0; i < t; ++i) nearest[i] = squared_distance(points[i], centroids[0]);
      while (centroids.size() < k) {
        double total = 0.0;
        for (double w : nearest) total += w;
        if (!(total > 0.0)) {
          throw InitializationError("k-means++ needs k = " + std::to_string(k) +
                                    " distinct points, found only " + std::to_string(centroids.size()));
        }
        const double target = rng.uniform01() * total;
        double cumulative = 0.0;
        std::size_t pick = t - 1;
        for (std::size_t i = 0; i < t; ++i) {
          cumulative += nearest[i];
          if (cumulative > target) {
            pick = i;
            break;
          }
        }
        // guard against rounding leaving target == total
        while (nearest[pick] == 0.0 && pick > 0) --pick;
        centroids.push_back(points[pick]);
        for (std::size_t i = 0; i < t; ++i) {
          nearest[i] = std::min(nearest[i], squared_distance(points[i], centroids.back()));
        }
      }
      break;
    }
  }
  return centroids;
}

struct KMeansOptions {
  InitOptions init;
  std::size_t max_iterations = 300;
  double tolerance = 1e-6;  // relative objective improvement
  unsigned threads = 0;
};

struct ClusteringResult {
  std::vector<Point2D> centroids;
  std::vector<std::uint32_t> assignment;
  std::vector<std::size_t> cluster_sizes;
  double objective = 0.0;
  std::size_t iterations_run = 0;  // assignment passes
  bool converged = false;
  // objective after each assignment pass
  std::vector<double> objective_history;
  // point-to-centroid distance evaluations in the Lloyd loop (seeding excluded)
  std::uint64_t distance_evaluations = 0;
};

// Lloyd's algorithm. Each iteration assigns every point to its nearest
// centroid (lowest index on ties), then moves each centroid to the mean of
// its points. Stops when no assignment changes, when the relative
// objective improvement drops below the tolerance, or at max_iterations.
// Always ends on an assignment pass, so the returned assignment is nearest
// with respect to the returned centroids.
//
// A centroid left without points is moved onto the point farthest from
// its current centroid (measured in the preceding assignment pass).
inline ClusteringResult kmeans(const PointSet& points, std::size_t k, const KMeansOptions& opt = {}) {
  if (opt.max_iterations < 1) throw ParameterError("max_iterations must be >= 1");
  if (!(opt.tolerance >= 0.0)) throw ParameterError("tolerance must be >= 0");

  ClusteringResult res;
  res.centroids = kmeans_init(points, k, opt.init);
  const std::size_t t = points.size();
  const auto none = static_cast<std::uint32_t>(k);
  res.assignment.assign(t, none);
  std::vector<double> nearest(t, 0.0);

  struct BlockTally {
    std::size_t changed = 0;
    double objective = 0.0;
    std::vector<double> sum_x, sum_y;
    std::vector<std::size_t> count;
  };
  std::vector<BlockTally> tallies(parallel::block_count(t));

  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t pass = 1;; ++pass) {
    parallel::for_each_block(t, opt.threads, [&](std::size_t b, std::size_t begin, std::size_t end) {
      BlockTally& tally = tallies[b];
      tally.changed = 0;
      tally.objective = 0.0;
      tally.sum_x.assign(k, 0.0);
      tally.sum_y.assign(k, 0.0);
      tally.count.assign(k, 0);
      for (std::size_t i = begin; i < end; ++i) {
        const Point2D& p = points[i];
        std::uint32_t best = 0;
        double best_d = squared_distance(p, res.centroids[0]);
        for (std::size_t j = 1; j < k; ++j) {
          double dj = squared_distance(p, res.centroids[j]);
          if (dj < best_d) {
            best_d = dj;
            best = static_cast<std::uint32_t>(j);
          }
        }
        if (res.assignment[i] != best) ++tally.changed;
        res.assignment[i] = best;
        nearest[i] = best_d;
        tally.objective += best_d;
        tally.sum_x[best] += p.x;
        tally.sum_y[best] += p.y;
        ++tally.count[best];
      }
    });

    std::size_t changed = 0;
    double objective = 0.0;
    std::vector<double> sum_x(k, 0.0), sum_y(k, 0.0);
    res.cluster_sizes.assign(k, 0);
    for (const auto& tally : tallies) {
      changed += tally.changed;
      objective += tally.objective;
      for (std::size_t j = 0; j < k; ++j) {
        sum_x[j] += tally.sum_x[j];
        sum_y[j] += tally.sum_y[j];
        res.cluster_sizes[j] += tally.count[j];
      }
    }
    res.distance_evaluations += static_cast<std::uint64_t>(k) * t;
    res.objective = objective;
    res.objective_history.push_back(objective);
    res.iterations_run = pass;

    if (changed == 0 || previous - objective < opt.tolerance * previous) {
      res.converged = true;
      break;
    }
    if (pass == opt.max_iterations) break;
    previous = objective;

    for (std::size_t j = 0; j < k; ++j) {
      if (res.cluster_sizes[j] == 0) continue;
      const auto size = static_cast<double>(res.cluster_sizes[j]);
      res.centroids[j] = {sum_x[j] / size, sum_y[j] / size};
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (res.cluster_sizes[j] != 0) continue;
      auto far = std::max_element(nearest.begin(), nearest.end());
      res.centroids[j] = points[static_cast<std::size_t>(far - nearest.begin())];
      *far = -1.0;
    }
  }
  return res;
}

// Within-cluster sum of squared Euclidean distances, recomputed from the
// result's centroids and assignment.
inline double objective(const PointSet& points, const ClusteringResult& result) {
  if (result.assignment.size() != points.size()) {
    throw ParameterError("assignment covers " + std::to_string(result.assignment.size()) + " points, expected " +
                         std::to_string(points.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto c = result.assignment[i];
    if (c >= result.centroids.size()) throw ParameterError("assignment index out of range");
    total += squared_distance(points[i], result.centroids[c]);
  }
  return total;
}

inline void write_assignment_csv(std::ostream& os, const PointSet& points, const ClusteringResult& result) {
  os << "index,x,y,cluster\n";
  char buf[96];
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%u\n", i, points[i].x, points[i].y,
                  static_cast<unsigned>(result.assignment[i]));
    os << buf;
  }
}

inline nlohmann::ordered_json clustering_summary(const ClusteringResult& result) {
  nlohmann::ordered_json j;
  j["k"] = result.centroids.size();
  auto& centroids = j["centroids"] = nlohmann::ordered_json::array();
  for (const auto& c : result.centroids) centroids.push_back({c.x, c.y});
  j["sizes"] = result.cluster_sizes;
  j["objective"] = result.objective;
  j["iterations"] = result.iterations_run;
  j["converged"] = result.converged;
  return j;
}

}  // namespace roadnet
