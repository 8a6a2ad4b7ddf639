#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roadnet/errors.hpp"
#include "roadnet/topk.hpp"

namespace roadnet {

inline constexpr NodeId kMaxNodeId = static_cast<NodeId>(std::numeric_limits<std::int64_t>::max());

struct EdgeRecord {
  NodeId from_id = 0;
  NodeId to_id = 0;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

// Data lines of a SNAP edge-list file, in file order.
struct EdgeList {
  std::vector<EdgeRecord> records;
  std::string source_name;
  std::size_t line_count = 0;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
};

struct DatasetSummary {
  std::size_t node_count = 0;
  std::size_t directed_edge_count = 0;
  std::size_t undirected_edge_count = 0;
  std::size_t self_loop_count = 0;

  friend bool operator==(const DatasetSummary&, const DatasetSummary&) = default;
};

namespace detail {

inline bool is_field_space(char c) { return c == ' ' || c == '\t'; }

inline std::optional<NodeId> parse_node_id(std::string_view token) {
  NodeId value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || value > kMaxNodeId) {
    return std::nullopt;
  }
  return value;
}

}  // namespace detail

// Pulls edge records one at a time from a SNAP text stream. Lines starting
// with '#' and blank lines are skipped; fields are split on any run of
// spaces or tabs. Line numbers count every physical line.
class EdgeReader {
 public:
  EdgeReader(std::istream& in, std::string source_name)
      : in_(&in), source_name_(std::move(source_name)) {}

  std::optional<EdgeRecord> next() {
    while (std::getline(*in_, line_)) {
      ++line_number_;
      std::string_view view(line_);
      if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
      if (!view.empty() && view.front() == '#') continue;

      std::string_view fields[2];
      std::size_t field_count = 0;
      std::size_t pos = 0;
      while (pos < view.size()) {
        while (pos < view.size() && detail::is_field_space(view[pos])) ++pos;
        if (pos == view.size()) break;
        std::size_t end = pos;
        while (end < view.size() && !detail::is_field_space(view[end])) ++end;
        if (field_count < 2) fields[field_count] = view.substr(pos, end - pos);
        ++field_count;
        pos = end;
      }
      if (field_count == 0) continue;
      if (field_count != 2) {
        throw ParseError(source_name_, line_number_, std::string(view),
                         "expected 2 fields, found " + std::to_string(field_count));
      }
      auto from = detail::parse_node_id(fields[0]);
      auto to = detail::parse_node_id(fields[1]);
      if (!from || !to) {
        throw ParseError(source_name_, line_number_, std::string(view),
                         "node id is not an integer in [0, 2^63-1]");
      }
      return EdgeRecord{*from, *to};
    }
    if (in_->bad()) throw IoError(source_name_, "read failed after line " + std::to_string(line_number_));
    return std::nullopt;
  }

  std::size_t line_number() const noexcept { return line_number_; }
  const std::string& source_name() const noexcept { return source_name_; }

 private:
  std::istream* in_;
  std::string source_name_;
  std::string line_;
  std::size_t line_number_ = 0;
};

inline EdgeList parse_edge_list(std::istream& in, std::string source_name) {
  EdgeReader reader(in, source_name);
  EdgeList out;
  out.source_name = std::move(source_name);
  while (auto rec = reader.next()) out.records.push_back(*rec);
  out.line_count = out.records.size();
  return out;
}

inline EdgeList read_edge_list_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  return parse_edge_list(in, path);
}

inline void write_edge_list(std::ostream& os, const EdgeList& edges) {
  for (const auto& r : edges.records) os << r.from_id << '\t' << r.to_id << '\n';
}

inline DatasetSummary summarize(const EdgeList& edges) {
  DatasetSummary s;
  s.directed_edge_count = edges.records.size();

  std::vector<NodeId> ids;
  ids.reserve(edges.records.size() * 2);
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(edges.records.size());
  for (const auto& r : edges.records) {
    ids.push_back(r.from_id);
    ids.push_back(r.to_id);
    if (r.from_id == r.to_id) {
      ++s.self_loop_count;
    } else {
      pairs.emplace_back(std::min(r.from_id, r.to_id), std::max(r.from_id, r.to_id));
    }
  }
  std::sort(ids.begin(), ids.end());
  s.node_count = static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
  std::sort(pairs.begin(), pairs.end());
  s.undirected_edge_count = static_cast<std::size_t>(std::unique(pairs.begin(), pairs.end()) - pairs.begin());
  return s;
}

}  // namespace roadnet
