#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "roadnet/errors.hpp"
#include "roadnet/kmeans.hpp"
#include "roadnet/topk.hpp"

namespace roadnet {

struct ScatterSpec {
  std::size_t sample_size = 100'000;
  std::uint64_t seed = 42;
  int width = 800;
  int height = 800;
  std::string title;
  std::string x_label = "from node id";
  std::string y_label = "to node id";
};

// Algorithm R over indices 0..n-1; returns min(sample_size, n) indices in
// ascending order.
inline std::vector<std::size_t> reservoir_sample(std::size_t n, std::size_t sample_size, std::uint64_t seed) {
  std::vector<std::size_t> keep;
  const std::size_t m = std::min(n, sample_size);
  keep.reserve(m);
  for (std::size_t i = 0; i < m; ++i) keep.push_back(i);
  if (n > m && m > 0) {
    SeededRng rng(seed);
    for (std::size_t i = m; i < n; ++i) {
      std::size_t j = rng.index(i + 1);
      if (j < m) keep[j] = i;
    }
    std::sort(keep.begin(), keep.end());
  }
  return keep;
}

namespace svg {

inline std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                         "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

inline void open(std::ostringstream& os, int width, int height) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
}

inline void close(std::ostringstream& os) { os << "</svg>\n"; }

// Linear map from a data box onto the plot area, y pointing up.
struct Frame {
  double left, top, right, bottom;
  double x_min, x_max, y_min, y_max;

  double px(double x) const { return left + (x - x_min) / (x_max - x_min) * (right - left); }
  double py(double y) const { return bottom - (y - y_min) / (y_max - y_min) * (bottom - top); }
};

inline Frame make_frame(const std::vector<Point2D>& pts, int width, int height) {
  Frame f{70.0, 40.0, width - 20.0, height - 50.0, 0.0, 1.0, 0.0, 1.0};
  if (!pts.empty()) {
    f.x_min = f.x_max = pts[0].x;
    f.y_min = f.y_max = pts[0].y;
    for (const auto& p : pts) {
      f.x_min = std::min(f.x_min, p.x);
      f.x_max = std::max(f.x_max, p.x);
      f.y_min = std::min(f.y_min, p.y);
      f.y_max = std::max(f.y_max, p.y);
    }
  }
  if (f.x_max <= f.x_min) {
    f.x_min -= 0.5;
    f.x_max += 0.5;
  }
  if (f.y_max <= f.y_min) {
    f.y_min -= 0.5;
    f.y_max += 0.5;
  }
  return f;
}

inline void axes(std::ostringstream& os, const Frame& f, const ScatterSpec& spec) {
  os << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
     << "<line x1=\"" << num(f.left) << "\" y1=\"" << num(f.bottom) << "\" x2=\"" << num(f.right) << "\" y2=\""
     << num(f.bottom) << "\"/>\n"
     << "<line x1=\"" << num(f.left) << "\" y1=\"" << num(f.top) << "\" x2=\"" << num(f.left) << "\" y2=\""
     << num(f.bottom) << "\"/>\n"
     << "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"10\">\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = f.x_min + (f.x_max - f.x_min) * i / kTicks;
    const double yv = f.y_min + (f.y_max - f.y_min) * i / kTicks;
    os << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << num(f.bottom + 15) << "\" text-anchor=\"middle\">"
       << tick(xv) << "</text>\n"
       << "<text x=\"" << num(f.left - 5) << "\" y=\"" << num(f.py(yv) + 3) << "\" text-anchor=\"end\">" << tick(yv)
       << "</text>\n";
  }
  os << "</g>\n<g class=\"labels\" font-family=\"sans-serif\">\n"
     << "<text x=\"" << num((f.left + f.right) / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">"
     << escape(spec.title) << "</text>\n"
     << "<text x=\"" << num((f.left + f.right) / 2) << "\" y=\"" << num(f.bottom + 38)
     << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(spec.x_label) << "</text>\n"
     << "<text x=\"14\" y=\"" << num((f.top + f.bottom) / 2) << "\" text-anchor=\"middle\" font-size=\"12\" "
     << "transform=\"rotate(-90 14 " << num((f.top + f.bottom) / 2) << ")\">" << escape(spec.y_label) << "</text>\n"
     << "</g>\n";
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << content;
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

}  // namespace svg

inline std::string scatter_svg(const PointSet& points, const ScatterSpec& spec) {
  const auto keep = reservoir_sample(points.size(), spec.sample_size, spec.seed);
  std::vector<Point2D> sample;
  sample.reserve(keep.size());
  for (auto i : keep) sample.push_back(points[i]);

  const auto frame = svg::make_frame(sample, spec.width, spec.height);
  std::ostringstream os;
  svg::open(os, spec.width, spec.height);
  svg::axes(os, frame, spec);
  os << "<g class=\"points\" fill=\"" << svg::kPalette[0] << "\" fill-opacity=\"0.5\">\n";
  for (const auto& p : sample) {
    os << "<circle cx=\"" << svg::num(frame.px(p.x)) << "\" cy=\"" << svg::num(frame.py(p.y)) << "\" r=\"1.2\"/>\n";
  }
  os << "</g>\n";
  svg::close(os);
  return os.str();
}

inline void render_scatter(const PointSet& points, const ScatterSpec& spec, const std::string& path) {
  svg::write_file(path, scatter_svg(points, spec));
}

// One <g class="cluster cluster-j"> per cluster and one cross marker
// (class "centroid") per centroid.
inline std::string clusters_svg(const ClusteringResult& result, const PointSet& points, const ScatterSpec& spec) {
  if (result.assignment.size() != points.size()) throw ParameterError("clustering result does not match points");
  const std::size_t k = result.centroids.size();
  const auto keep = reservoir_sample(points.size(), spec.sample_size, spec.seed);

  std::vector<Point2D> extent;
  extent.reserve(keep.size() + k);
  for (auto i : keep) extent.push_back(points[i]);
  extent.insert(extent.end(), result.centroids.begin(), result.centroids.end());
  const auto frame = svg::make_frame(extent, spec.width, spec.height);

  std::vector<std::vector<std::size_t>> members(k);
  for (auto i : keep) members[result.assignment[i]].push_back(i);

  std::ostringstream os;
  svg::open(os, spec.width, spec.height);
  svg::axes(os, frame, spec);
  for (std::size_t j = 0; j < k; ++j) {
    os << "<g class=\"cluster cluster-" << j << "\" fill=\"" << svg::kPalette[j % svg::kPalette.size()]
       << "\" fill-opacity=\"0.5\">\n";
    for (auto i : members[j]) {
      os << "<circle cx=\"" << svg::num(frame.px(points[i].x)) << "\" cy=\"" << svg::num(frame.py(points[i].y))
         << "\" r=\"1.2\"/>\n";
    }
    os << "</g>\n";
  }
  constexpr double kArm = 7.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double cx = frame.px(result.centroids[j].x);
    const double cy = frame.py(result.centroids[j].y);
    os << "<path class=\"centroid\" data-cluster=\"" << j << "\" d=\"M " << svg::num(cx - kArm) << ' '
       << svg::num(cy - kArm) << " L " << svg::num(cx + kArm) << ' ' << svg::num(cy + kArm) << " M "
       << svg::num(cx - kArm) << ' ' << svg::num(cy + kArm) << " L " << svg::num(cx + kArm) << ' '
       << svg::num(cy - kArm) << "\" stroke=\"black\" stroke-width=\"2.5\" fill=\"none\"/>\n";
  }
  svg::close(os);
  return os.str();
}

inline void render_clusters(const ClusteringResult& result, const PointSet& points, const ScatterSpec& spec,
                            const std::string& path) {
  svg::write_file(path, clusters_svg(result, points, spec));
}

// Two bar panels side by side on a shared y scale, bars in rank order.
inline std::string topk_bars_svg(const TopKTable& left, const TopKTable& right,
                                 const std::pair<std::string, std::string>& labels,
                                 const std::string& y_label = "score", int width = 1000, int height = 500) {
  if (left.rows.empty() || right.rows.empty()) throw ParameterError("bar chart needs two non-empty tables");
  double top_score = 0.0;
  for (const auto* table : {&left, &right}) {
    for (const auto& row : table->rows) top_score = std::max(top_score, row.score);
  }
  if (top_score <= 0.0) top_score = 1.0;

  std::ostringstream os;
  svg::open(os, width, height);
  const double panel_w = (width - 90.0) / 2.0;
  const double top = 50.0, bottom = height - 70.0;

  os << "<text x=\"16\" y=\"" << svg::num((top + bottom) / 2) << "\" font-family=\"sans-serif\" font-size=\"12\" "
     << "text-anchor=\"middle\" transform=\"rotate(-90 16 " << svg::num((top + bottom) / 2) << ")\">"
     << svg::escape(y_label) << "</text>\n";

  const std::pair<const TopKTable*, const std::string*> panels[2] = {{&left, &labels.first},
                                                                      {&right, &labels.second}};
  for (int p = 0; p < 2; ++p) {
    const auto& table = *panels[p].first;
    const double x0 = 70.0 + p * (panel_w + 10.0);
    os << "<g class=\"panel panel-" << p << "\" font-family=\"sans-serif\">\n"
       << "<text x=\"" << svg::num(x0 + panel_w / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">"
       << svg::escape(*panels[p].second) << "</text>\n"
       << "<line x1=\"" << svg::num(x0) << "\" y1=\"" << svg::num(bottom) << "\" x2=\"" << svg::num(x0 + panel_w)
       << "\" y2=\"" << svg::num(bottom) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << svg::num(x0 - 4) << "\" y=\"" << svg::num(top + 4)
       << "\" text-anchor=\"end\" font-size=\"9\">" << svg::tick(top_score) << "</text>\n";
    const double slot = panel_w / static_cast<double>(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const auto& row = table.rows[i];
      const double h = row.score / top_score * (bottom - top);
      const double bx = x0 + i * slot + slot * 0.1;
      os << "<rect class=\"bar\" data-rank=\"" << i + 1 << "\" x=\"" << svg::num(bx) << "\" y=\""
         << svg::num(bottom - h) << "\" width=\"" << svg::num(slot * 0.8) << "\" height=\"" << svg::num(h)
         << "\" fill=\"" << svg::kPalette[p] << "\"/>\n";
      const double lx = bx + slot * 0.4;
      os << "<text x=\"" << svg::num(lx) << "\" y=\"" << svg::num(bottom + 12) << "\" font-size=\"9\" "
         << "text-anchor=\"end\" transform=\"rotate(-45 " << svg::num(lx) << ' ' << svg::num(bottom + 12) << ")\">"
         << row.node << "</text>\n";
    }
    os << "</g>\n";
  }
  svg::close(os);
  return os.str();
}

inline void render_topk_bars(const TopKTable& left, const TopKTable& right,
                             const std::pair<std::string, std::string>& labels, const std::string& path,
                             const std::string& y_label = "score") {
  svg::write_file(path, topk_bars_svg(left, right, labels, y_label));
}

}  // namespace roadnet
