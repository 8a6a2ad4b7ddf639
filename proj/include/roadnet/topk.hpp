#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace roadnet {

using NodeId = std::uint64_t;

// Keeps the k best (key, score) pairs seen so far: higher score wins, equal
// scores are ordered by ascending key.
template <typename Key, typename Score>
class TopKHeap {
 public:
  using entry_type = std::pair<Score, Key>;

  explicit TopKHeap(std::size_t k) : k_(k) { heap_.reserve(k + 1); }

  // True when a ranks strictly ahead of b.
  static bool ahead(const entry_type& a, const entry_type& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  }

  void push(Key key, Score score) {
    if (k_ == 0) return;
    entry_type e{score, key};
    if (heap_.size() < k_) {
      heap_.push_back(e);
      std::push_heap(heap_.begin(), heap_.end(), ahead);
      return;
    }
    // heap front is the worst entry kept
    if (!ahead(e, heap_.front())) return;
    std::pop_heap(heap_.begin(), heap_.end(), ahead);
    heap_.back() = e;
    std::push_heap(heap_.begin(), heap_.end(), ahead);
  }

  std::size_t capacity() const noexcept { return k_; }
  std::size_t size() const noexcept { return heap_.size(); }

  // Best first.
  std::vector<entry_type> sorted() const {
    auto out = heap_;
    std::sort(out.begin(), out.end(), ahead);
    return out;
  }

 private:
  std::size_t k_;
  std::vector<entry_type> heap_;
};

struct TopKRow {
  NodeId node = 0;
  double score = 0.0;
  std::vector<std::string> attributes;

  friend bool operator==(const TopKRow&, const TopKRow&) = default;
};

// Ranked rows, descending by score with ties on ascending node ID.
struct TopKTable {
  std::vector<TopKRow> rows;
  std::size_t k = 0;

  friend bool operator==(const TopKTable&, const TopKTable&) = default;
};

// Integral scores (degree counts) print without a fraction; everything else
// uses round-trip precision.
inline std::string format_score(double score) {
  char buf[40];
  if (std::isfinite(score) && score == std::floor(score) && std::fabs(score) < 9007199254740992.0) {
    std::snprintf(buf, sizeof buf, "%.0f", score);
  } else {
    std::snprintf(buf, sizeof buf, "%.17g", score);
  }
  return buf;
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// "(Node Identity, Page Rank, List(Node attribute))"
inline std::string format_triple(const TopKRow& row) {
  return "(" + std::to_string(row.node) + ", " + format_score(row.score) + ", List(" +
         join(row.attributes, ", ") + "))";
}

inline void write_triples(std::ostream& os, const TopKTable& table) {
  for (const auto& row : table.rows) os << format_triple(row) << '\n';
}

// Header node_id,score,attributes; attributes are ';'-joined so no field
// needs quoting.
inline void write_csv(std::ostream& os, const TopKTable& table) {
  os << "node_id,score,attributes\n";
  for (const auto& row : table.rows) {
    os << row.node << ',' << format_score(row.score) << ',' << join(row.attributes, ";") << '\n';
  }
}

}  // namespace roadnet
