#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "roadnet/edge_list.hpp"
#include "roadnet/errors.hpp"
#include "roadnet/parallel.hpp"
#include "roadnet/topk.hpp"

namespace roadnet {

// Dense node index, 0..n-1, ascending in original ID.
using NodeIndex = std::uint32_t;

// Compressed adjacency in CSR layout. Holds two views of the same edge list:
//  - undirected: symmetric simple graph (no self-loops, no parallel edges)
//  - directed: the raw arc multiset, duplicates and self-loops kept, indexed
//    both by source (out) and by target (in)
// Immutable once built; safe to share across threads.
class Graph {
 public:
  Graph() = default;

  static Graph from_edges(const EdgeList& edges) {
    Graph g;
    const auto& recs = edges.records;

    g.id_map_.reserve(recs.size() * 2);
    for (const auto& r : recs) {
      g.id_map_.push_back(r.from_id);
      g.id_map_.push_back(r.to_id);
    }
    std::sort(g.id_map_.begin(), g.id_map_.end());
    g.id_map_.erase(std::unique(g.id_map_.begin(), g.id_map_.end()), g.id_map_.end());
    g.id_map_.shrink_to_fit();
    if (g.id_map_.size() > std::numeric_limits<NodeIndex>::max()) {
      throw ParameterError("graph has more nodes than a 32-bit dense index can address");
    }
    const std::size_t n = g.id_map_.size();

    std::vector<NodeIndex> src(recs.size()), dst(recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
      src[i] = *g.index_of(recs[i].from_id);
      dst[i] = *g.index_of(recs[i].to_id);
    }

    build_csr(n, src, dst, g.out_offsets_, g.out_neighbors_);
    build_csr(n, dst, src, g.in_offsets_, g.in_neighbors_);

    std::vector<NodeIndex> usrc, udst;
    usrc.reserve(recs.size() * 2);
    udst.reserve(recs.size() * 2);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (src[i] == dst[i]) continue;
      usrc.push_back(src[i]);
      udst.push_back(dst[i]);
      usrc.push_back(dst[i]);
      udst.push_back(src[i]);
    }
    src = {};
    dst = {};
    build_csr(n, usrc, udst, g.offsets_, g.neighbors_);
    dedupe_rows(g.offsets_, g.neighbors_);
    return g;
  }

  std::size_t node_count() const noexcept { return id_map_.size(); }
  std::size_t undirected_edge_count() const noexcept { return neighbors_.size() / 2; }
  std::size_t arc_count() const noexcept { return out_neighbors_.size(); }

  std::span<const NodeIndex> neighbors(NodeIndex v) const {
    check(v);
    return row(offsets_, neighbors_, v);
  }
  std::span<const NodeIndex> out_neighbors(NodeIndex v) const {
    check(v);
    return row(out_offsets_, out_neighbors_, v);
  }
  std::span<const NodeIndex> in_neighbors(NodeIndex v) const {
    check(v);
    return row(in_offsets_, in_neighbors_, v);
  }

  std::size_t degree(NodeIndex v) const {
    check(v);
    return offsets_[v + 1] - offsets_[v];
  }
  std::size_t outdegree(NodeIndex v) const {
    check(v);
    return out_offsets_[v + 1] - out_offsets_[v];
  }
  std::size_t indegree(NodeIndex v) const {
    check(v);
    return in_offsets_[v + 1] - in_offsets_[v];
  }

  NodeId original_id(NodeIndex v) const {
    check(v);
    return id_map_[v];
  }
  std::optional<NodeIndex> index_of(NodeId id) const {
    auto it = std::lower_bound(id_map_.begin(), id_map_.end(), id);
    if (it == id_map_.end() || *it != id) return std::nullopt;
    return static_cast<NodeIndex>(it - id_map_.begin());
  }
  const std::vector<NodeId>& id_map() const noexcept { return id_map_; }

  const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }
  const std::vector<NodeIndex>& neighbor_array() const noexcept { return neighbors_; }

 private:
  void check(NodeIndex v) const {
    if (v >= id_map_.size()) {
      throw std::out_of_range("node index " + std::to_string(v) + " out of range [0, " +
                              std::to_string(id_map_.size()) + ")");
    }
  }

  static std::span<const NodeIndex> row(const std::vector<std::size_t>& offsets,
                                        const std::vector<NodeIndex>& adj, NodeIndex v) {
    return {adj.data() + offsets[v], offsets[v + 1] - offsets[v]};
  }

  // Counting-sort arcs (from[i] -> to[i]) into rows, each row sorted.
  static void build_csr(std::size_t n, const std::vector<NodeIndex>& from, const std::vector<NodeIndex>& to,
                        std::vector<std::size_t>& offsets, std::vector<NodeIndex>& adj) {
    offsets.assign(n + 1, 0);
    for (NodeIndex u : from) ++offsets[u + 1];
    for (std::size_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
    adj.resize(from.size());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < from.size(); ++i) adj[cursor[from[i]]++] = to[i];
    for (std::size_t v = 0; v < n; ++v) {
      std::sort(adj.begin() + static_cast<std::ptrdiff_t>(offsets[v]),
                adj.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]));
    }
  }

  static void dedupe_rows(std::vector<std::size_t>& offsets, std::vector<NodeIndex>& adj) {
    std::size_t write = 0;
    std::size_t begin = offsets[0];
    for (std::size_t v = 0; v + 1 < offsets.size(); ++v) {
      const std::size_t end = offsets[v + 1];
      offsets[v] = write;
      for (std::size_t i = begin; i < end; ++i) {
        if (i == begin || adj[i] != adj[i - 1]) adj[write++] = adj[i];
      }
      begin = end;
    }
    offsets.back() = write;
    adj.resize(write);
    adj.shrink_to_fit();
  }

  std::vector<NodeId> id_map_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeIndex> neighbors_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<NodeIndex> out_neighbors_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<NodeIndex> in_neighbors_;
};

inline Graph build_graph(const EdgeList& edges) { return Graph::from_edges(edges); }

inline std::size_t degree(const Graph& g, NodeIndex v) { return g.degree(v); }

struct DegreeExtreme {
  NodeIndex index = 0;
  NodeId original_id = 0;
  std::size_t value = 0;

  friend bool operator==(const DegreeExtreme&, const DegreeExtreme&) = default;
};

struct DegreeStats {
  std::vector<std::size_t> degree;
  std::vector<std::size_t> indegree;
  std::vector<std::size_t> outdegree;
  std::optional<DegreeExtreme> max_degree;
  std::optional<DegreeExtreme> max_indegree;
  std::optional<DegreeExtreme> max_outdegree;
};

namespace detail {
// First index holding the maximum, i.e. lowest original ID among ties.
inline std::optional<DegreeExtreme> arg_max(const Graph& g, const std::vector<std::size_t>& values) {
  if (values.empty()) return std::nullopt;
  auto it = std::max_element(values.begin(), values.end());
  auto v = static_cast<NodeIndex>(it - values.begin());
  return DegreeExtreme{v, g.original_id(v), *it};
}
}  // namespace detail

inline DegreeStats degree_stats(const Graph& g, unsigned threads = 0) {
  const std::size_t n = g.node_count();
  DegreeStats s;
  s.degree.resize(n);
  s.indegree.resize(n);
  s.outdegree.resize(n);
  parallel::for_each_block(n, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto v = static_cast<NodeIndex>(i);
      s.degree[i] = g.degree(v);
      s.indegree[i] = g.indegree(v);
      s.outdegree[i] = g.outdegree(v);
    }
  });
  s.max_degree = detail::arg_max(g, s.degree);
  s.max_indegree = detail::arg_max(g, s.indegree);
  s.max_outdegree = detail::arg_max(g, s.outdegree);
  return s;
}

inline std::vector<std::string> degree_attributes(std::size_t degree, std::size_t indegree, std::size_t outdegree) {
  return {"degree=" + std::to_string(degree), "indegree=" + std::to_string(indegree),
          "outdegree=" + std::to_string(outdegree)};
}

inline std::vector<std::string> degree_attributes(const Graph& g, NodeIndex v) {
  return degree_attributes(g.degree(v), g.indegree(v), g.outdegree(v));
}

inline TopKTable top_k_by_degree(const Graph& g, std::size_t k) {
  if (k < 1) throw ParameterError("top-k requires k >= 1");
  TopKHeap<NodeIndex, std::size_t> heap(k);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    auto v = static_cast<NodeIndex>(i);
    heap.push(v, g.degree(v));
  }
  TopKTable table;
  table.k = k;
  for (const auto& [score, v] : heap.sorted()) {
    table.rows.push_back({g.original_id(v), static_cast<double>(score), degree_attributes(g, v)});
  }
  return table;
}

}  // namespace roadnet
