#pragma once

#include <cmath>
#include <cstddef>
#include <ostream>
#include <vector>

#include "roadnet/errors.hpp"
#include "roadnet/graph.hpp"
#include "roadnet/parallel.hpp"
#include "roadnet/topk.hpp"

namespace roadnet {

enum class RankView { Undirected, Directed };

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;
  std::size_t max_iterations = 100;
  RankView view = RankView::Undirected;
  unsigned threads = 0;  // 0: process default
};

struct PageRankVector {
  std::vector<double> scores;
  double damping = 0.85;
  std::size_t iterations_run = 0;
  double final_delta = 0.0;  // L1 change of the last iteration
  bool converged = false;
};

// Power iteration with uniform teleport. Mass of nodes without outgoing
// links is spread uniformly each step, so scores always sum to one.
//
// Undirected view: each undirected edge acts as two arcs. Directed view:
// raw arcs, counted with multiplicity.
//
// Each step is a pull over in-neighbours in sorted order; the only
// reductions (dangling mass, L1 delta) go through parallel::blocked_sum, so
// the result does not depend on the worker count.
inline PageRankVector pagerank(const Graph& g, const PageRankOptions& opt = {}) {
  if (!(opt.damping > 0.0 && opt.damping < 1.0)) throw ParameterError("damping must lie in (0, 1)");
  if (!(opt.tolerance > 0.0)) throw ParameterError("tolerance must be > 0");
  if (opt.max_iterations < 1) throw ParameterError("max_iterations must be >= 1");
  const std::size_t n = g.node_count();
  if (n == 0) throw EmptyGraphError("pagerank on an empty graph");

  const bool directed = opt.view == RankView::Directed;
  auto out_links = [&](NodeIndex v) { return directed ? g.outdegree(v) : g.degree(v); };
  auto in_links = [&](NodeIndex v) { return directed ? g.in_neighbors(v) : g.neighbors(v); };

  const double d = opt.damping;
  const double inv_n = 1.0 / static_cast<double>(n);
  const unsigned threads = opt.threads;

  PageRankVector result;
  result.damping = d;
  std::vector<double> rank(n, inv_n), next(n), share(n);

  for (std::size_t iter = 0; iter < opt.max_iterations; ++iter) {
    parallel::for_each_block(n, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        std::size_t deg = out_links(static_cast<NodeIndex>(i));
        share[i] = deg == 0 ? 0.0 : rank[i] / static_cast<double>(deg);
      }
    });
    const double dangling = parallel::blocked_sum(n, threads, [&](std::size_t i) {
      return out_links(static_cast<NodeIndex>(i)) == 0 ? rank[i] : 0.0;
    });
    const double base = (1.0 - d) * inv_n + d * dangling * inv_n;

    parallel::for_each_block(n, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        double acc = 0.0;
        for (NodeIndex u : in_links(static_cast<NodeIndex>(i))) acc += share[u];
        next[i] = base + d * acc;
      }
    });
    const double delta = parallel::blocked_sum(n, threads, [&](std::size_t i) { return std::fabs(next[i] - rank[i]); });

    rank.swap(next);
    result.iterations_run = iter + 1;
    result.final_delta = delta;
    if (delta < opt.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.scores = std::move(rank);
  return result;
}

inline TopKTable top_k_pagerank(const PageRankVector& ranks, const Graph& g, std::size_t k) {
  if (k < 1) throw ParameterError("top-k requires k >= 1");
  if (ranks.scores.size() != g.node_count()) throw ParameterError("rank vector does not match graph");
  TopKHeap<NodeIndex, double> heap(k);
  for (std::size_t i = 0; i < ranks.scores.size(); ++i) heap.push(static_cast<NodeIndex>(i), ranks.scores[i]);
  TopKTable table;
  table.k = k;
  for (const auto& [score, v] : heap.sorted()) {
    table.rows.push_back({g.original_id(v), score, degree_attributes(g, v)});
  }
  return table;
}

// node_id,score for every node in dense (ascending ID) order.
inline void write_scores_csv(std::ostream& os, const PageRankVector& ranks, const Graph& g) {
  os << "node_id,score\n";
  for (std::size_t i = 0; i < ranks.scores.size(); ++i) {
    os << g.original_id(static_cast<NodeIndex>(i)) << ',' << format_score(ranks.scores[i]) << '\n';
  }
}

}  // namespace roadnet
