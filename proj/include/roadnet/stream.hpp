#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadnet/edge_list.hpp"
#include "roadnet/errors.hpp"
#include "roadnet/graph.hpp"
#include "roadnet/pagerank.hpp"
#include "roadnet/topk.hpp"

namespace roadnet {

// Splits an edge-list stream into consecutive chunks of batch_size data
// lines. Parse errors carry the absolute line number in the stream.
class BatchReader {
 public:
  BatchReader(std::istream& in, std::size_t batch_size, std::string source_name = "<stream>")
      : reader_(in, source_name), batch_size_(batch_size), source_name_(std::move(source_name)) {
    if (batch_size_ < 1) throw ParameterError("batch_size must be >= 1");
  }

  std::optional<EdgeList> next() {
    EdgeList batch;
    batch.source_name = source_name_;
    batch.records.reserve(batch_size_ < 1'000'000 ? batch_size_ : 1'000'000);
    while (batch.records.size() < batch_size_) {
      auto rec = reader_.next();
      if (!rec) break;
      batch.records.push_back(*rec);
    }
    if (batch.records.empty()) return std::nullopt;
    batch.line_count = batch.records.size();
    return batch;
  }

 private:
  EdgeReader reader_;
  std::size_t batch_size_;
  std::string source_name_;
};

inline std::vector<EdgeList> stream_batches(std::istream& in, std::size_t batch_size,
                                            std::string source_name = "<stream>") {
  BatchReader reader(in, batch_size, std::move(source_name));
  std::vector<EdgeList> out;
  while (auto batch = reader.next()) out.push_back(std::move(*batch));
  return out;
}

// Cumulative per-node degree counters fed one edge at a time. Undirected
// degree follows the same rules as Graph: self-loops ignored, parallel
// edges counted once.
class DegreeTracker {
 public:
  void add(const EdgeRecord& r) {
    ++arcs_;
    auto& from = counters_[r.from_id];
    ++from.out;
    auto& to = counters_[r.to_id];
    ++to.in;
    if (r.from_id == r.to_id) return;
    const auto key = std::make_pair(std::min(r.from_id, r.to_id), std::max(r.from_id, r.to_id));
    if (!pairs_.insert(key).second) return;
    ++counters_[r.from_id].degree;
    ++counters_[r.to_id].degree;
  }

  std::size_t node_count() const noexcept { return counters_.size(); }
  std::size_t arc_count() const noexcept { return arcs_; }
  std::size_t undirected_edge_count() const noexcept { return pairs_.size(); }

  TopKTable top_k(std::size_t k) const {
    if (k < 1) throw ParameterError("top-k requires k >= 1");
    TopKHeap<NodeId, std::size_t> heap(k);
    for (const auto& [id, c] : counters_) heap.push(id, c.degree);
    TopKTable table;
    table.k = k;
    for (const auto& [score, id] : heap.sorted()) {
      const auto& c = counters_.at(id);
      table.rows.push_back({id, static_cast<double>(score), degree_attributes(c.degree, c.in, c.out)});
    }
    return table;
  }

 private:
  struct Counters {
    std::size_t degree = 0;
    std::size_t in = 0;
    std::size_t out = 0;
  };
  struct PairHash {
    std::size_t operator()(const std::pair<NodeId, NodeId>& p) const noexcept {
      std::uint64_t h = p.first * 0x9E3779B97F4A7C15ull;
      h ^= p.second + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };

  std::unordered_map<NodeId, Counters> counters_;
  std::unordered_set<std::pair<NodeId, NodeId>, PairHash> pairs_;
  std::size_t arcs_ = 0;
};

struct BatchStats {
  std::size_t batch_index = 0;  // 1-based
  std::size_t cumulative_edges = 0;  // raw data lines consumed so far
  std::size_t cumulative_nodes = 0;
  TopKTable top_degree;
  std::optional<TopKTable> top_pagerank;
  double wall_time_ms = 0.0;
};

struct StreamOptions {
  std::size_t batch_size = 100'000;
  std::size_t k = 10;
  bool recompute_pagerank = false;
  PageRankOptions pagerank;
};

namespace detail {
inline nlohmann::ordered_json rows_json(const TopKTable& table) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r;
    r["node"] = row.node;
    if (row.score == std::floor(row.score) && row.score < 9007199254740992.0) {
      r["score"] = static_cast<std::uint64_t>(row.score);
    } else {
      r["score"] = row.score;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}
}  // namespace detail

// {batch, cumulative_edges, cumulative_nodes, top_degree, top_pagerank?, ms}
inline nlohmann::ordered_json to_json(const BatchStats& s) {
  nlohmann::ordered_json j;
  j["batch"] = s.batch_index;
  j["cumulative_edges"] = s.cumulative_edges;
  j["cumulative_nodes"] = s.cumulative_nodes;
  j["top_degree"] = detail::rows_json(s.top_degree);
  if (s.top_pagerank) j["top_pagerank"] = detail::rows_json(*s.top_pagerank);
  j["ms"] = s.wall_time_ms;
  return j;
}

// Micro-batch driver: after every batch the degree counters are updated
// and a BatchStats is handed to on_batch (in batch order). With
// recompute_pagerank the cumulative graph is rebuilt and ranked from
// scratch for each snapshot.
inline std::vector<BatchStats> run_stream(std::istream& in, const StreamOptions& opt,
                                          const std::function<void(const BatchStats&)>& on_batch = {},
                                          std::string source_name = "<stream>") {
  if (opt.k < 1) throw ParameterError("top-k requires k >= 1");
  BatchReader reader(in, opt.batch_size, std::move(source_name));
  DegreeTracker tracker;
  EdgeList cumulative;
  std::vector<BatchStats> out;

  while (true) {
    const auto start = std::chrono::steady_clock::now();
    auto batch = reader.next();
    if (!batch) break;
    for (const auto& r : batch->records) tracker.add(r);

    BatchStats stats;
    stats.batch_index = out.size() + 1;
    stats.cumulative_edges = tracker.arc_count();
    stats.cumulative_nodes = tracker.node_count();
    stats.top_degree = tracker.top_k(opt.k);
    if (opt.recompute_pagerank) {
      cumulative.records.insert(cumulative.records.end(), batch->records.begin(), batch->records.end());
      cumulative.line_count = cumulative.records.size();
      Graph g = build_graph(cumulative);
      stats.top_pagerank = top_k_pagerank(pagerank(g, opt.pagerank), g, opt.k);
    }
    stats.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (on_batch) on_batch(stats);
    out.push_back(std::move(stats));
  }
  return out;
}

}  // namespace roadnet
