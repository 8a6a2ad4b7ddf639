// roadnet: command-line front end for the road-network analytics library.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "roadnet/roadnet.hpp"

namespace fs = std::filesystem;
using namespace roadnet;

namespace {

struct RunConfig {
  std::string command;
  std::string input_path;
  std::string output_dir = ".";
  std::size_t k = 3;
  std::size_t top = 10;
  double damping = 0.85;
  std::optional<double> tolerance;
  std::optional<std::size_t> max_iterations;
  std::size_t batch_size = 100'000;
  std::uint64_t seed = 42;
  std::size_t sample_size = 100'000;
  unsigned threads = 1;
  std::string init = "kmeans++";
  std::string metric = "pagerank";
  std::string compare_path;
  bool directed = false;
  bool normalize = false;
  bool stream_pagerank = false;
};

unsigned default_threads() {
  if (const char* env = std::getenv("ROADNET_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring ROADNET_THREADS=" << env << '\n';
  }
  return parallel::hardware_threads();
}

std::string output_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  return out;
}

template <typename Fn>
void write_artifact(const std::string& path, Fn&& fn) {
  auto out = open_output(path);
  fn(out);
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

std::string base_name(const std::string& path) { return fs::path(path).filename().string(); }

PageRankOptions pagerank_options(const RunConfig& cfg) {
  PageRankOptions opt;
  opt.damping = cfg.damping;
  opt.tolerance = cfg.tolerance.value_or(1e-10);
  opt.max_iterations = cfg.max_iterations.value_or(100);
  opt.view = cfg.directed ? RankView::Directed : RankView::Undirected;
  return opt;
}

int run_summary(const RunConfig& cfg) {
  const auto edges = read_edge_list_file(cfg.input_path);
  const auto s = summarize(edges);
  std::cout << "nodes=" << s.node_count << " edges=" << s.undirected_edge_count << '\n'
            << "arcs=" << s.directed_edge_count << " self_loops=" << s.self_loop_count << '\n';
  nlohmann::ordered_json j;
  j["source"] = base_name(cfg.input_path);
  j["nodes"] = s.node_count;
  j["edges"] = s.undirected_edge_count;
  j["arcs"] = s.directed_edge_count;
  j["self_loops"] = s.self_loop_count;
  write_artifact(output_path(cfg, "summary.json"), [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return 0;
}

int run_degrees(const RunConfig& cfg) {
  const Graph g = build_graph(read_edge_list_file(cfg.input_path));
  const auto stats = degree_stats(g);
  auto show = [](const char* what, const std::optional<DegreeExtreme>& e) {
    if (e) {
      std::cout << what << ": node " << e->original_id << " = " << e->value << '\n';
    } else {
      std::cout << what << ": none\n";
    }
  };
  show("max degree", stats.max_degree);
  show("max indegree", stats.max_indegree);
  show("max outdegree", stats.max_outdegree);

  auto csv = open_output(output_path(cfg, "degrees.csv"));
  csv << "node_id,degree,indegree,outdegree\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    csv << g.original_id(static_cast<NodeIndex>(i)) << ',' << stats.degree[i] << ',' << stats.indegree[i] << ','
        << stats.outdegree[i] << '\n';
  }
  const auto table = top_k_by_degree(g, cfg.top);
  write_artifact(output_path(cfg, "topk_degree.csv"), [&](std::ostream& os) { write_csv(os, table); });
  write_triples(std::cout, table);
  return 0;
}

int run_pagerank(const RunConfig& cfg) {
  const Graph g = build_graph(read_edge_list_file(cfg.input_path));
  const auto ranks = pagerank(g, pagerank_options(cfg));
  std::cout << "iterations=" << ranks.iterations_run << " delta=" << format_score(ranks.final_delta)
            << " converged=" << (ranks.converged ? "true" : "false") << '\n';
  write_artifact(output_path(cfg, "pagerank.csv"), [&](std::ostream& os) { write_scores_csv(os, ranks, g); });
  const auto table = top_k_pagerank(ranks, g, cfg.top);
  write_artifact(output_path(cfg, "topk_pagerank.csv"), [&](std::ostream& os) { write_csv(os, table); });
  write_triples(std::cout, table);
  return 0;
}

TopKTable top_table(const RunConfig& cfg, const std::string& path) {
  const Graph g = build_graph(read_edge_list_file(path));
  if (cfg.metric == "degree") return top_k_by_degree(g, cfg.top);
  return top_k_pagerank(pagerank(g, pagerank_options(cfg)), g, cfg.top);
}

int run_topk(const RunConfig& cfg) {
  const auto left = top_table(cfg, cfg.input_path);
  write_artifact(output_path(cfg, "topk_" + cfg.metric + ".csv"), [&](std::ostream& os) { write_csv(os, left); });
  std::cout << base_name(cfg.input_path) << '\n';
  write_triples(std::cout, left);
  if (!cfg.compare_path.empty()) {
    const auto right = top_table(cfg, cfg.compare_path);
    write_artifact(output_path(cfg, "topk_" + cfg.metric + "_compare.csv"), [&](std::ostream& os) { write_csv(os, right); });
    std::cout << base_name(cfg.compare_path) << '\n';
    write_triples(std::cout, right);
    const std::string y_label = cfg.metric == "degree" ? "degree" : "PageRank (scores sum to 1)";
    render_topk_bars(left, right, {base_name(cfg.input_path), base_name(cfg.compare_path)},
                     output_path(cfg, "topk_" + cfg.metric + "_bars.svg"), y_label);
  }
  return 0;
}

int run_kmeans(const RunConfig& cfg) {
  const auto edges = read_edge_list_file(cfg.input_path);
  PointSet points = edges_to_points(edges);
  if (cfg.normalize) points = normalize_min_max(points);

  KMeansOptions opt;
  opt.init.seed = cfg.seed;
  opt.init.method = cfg.init == "random"   ? InitMethod::UniformRandom
                    : cfg.init == "first" ? InitMethod::FirstK
                                          : InitMethod::KMeansPlusPlus;
  opt.tolerance = cfg.tolerance.value_or(1e-6);
  opt.max_iterations = cfg.max_iterations.value_or(300);
  const auto result = kmeans(points, cfg.k, opt);

  const std::string stem = "kmeans_k" + std::to_string(cfg.k);
  write_artifact(output_path(cfg, stem + ".csv"), [&](std::ostream& os) { write_assignment_csv(os, points, result); });
  const auto summary = clustering_summary(result);
  write_artifact(output_path(cfg, stem + ".json"), [&](std::ostream& os) { os << summary.dump(2) << '\n'; });

  ScatterSpec spec;
  spec.sample_size = cfg.sample_size;
  spec.seed = cfg.seed;
  spec.title = "k-means k=" + std::to_string(cfg.k) + " " + base_name(cfg.input_path);
  render_clusters(result, points, spec, output_path(cfg, stem + ".svg"));
  std::cout << summary.dump() << '\n';
  return 0;
}

int run_scatter(const RunConfig& cfg) {
  const auto points = edges_to_points(read_edge_list_file(cfg.input_path));
  ScatterSpec spec;
  spec.sample_size = cfg.sample_size;
  spec.seed = cfg.seed;
  spec.title = "edges " + base_name(cfg.input_path);
  render_scatter(points, spec, output_path(cfg, "scatter.svg"));

  auto csv = open_output(output_path(cfg, "scatter.csv"));
  csv << "index,x,y\n";
  const auto keep = reservoir_sample(points.size(), spec.sample_size, spec.seed);
  for (auto i : keep) csv << i << ',' << format_score(points[i].x) << ',' << format_score(points[i].y) << '\n';
  std::cout << "points=" << points.size() << " plotted=" << keep.size() << '\n';
  return 0;
}

int run_stream_command(const RunConfig& cfg) {
  std::ifstream in(cfg.input_path, std::ios::binary);
  if (!in) throw IoError(cfg.input_path, "cannot open for reading");
  StreamOptions opt;
  opt.batch_size = cfg.batch_size;
  opt.k = cfg.top;
  opt.recompute_pagerank = cfg.stream_pagerank;
  opt.pagerank = pagerank_options(cfg);
  auto out = open_output(output_path(cfg, "stream.ndjson"));
  run_stream(
      in, opt,
      [&](const BatchStats& s) {
        const auto line = to_json(s).dump();
        out << line << '\n';
        std::cout << line << std::endl;
      },
      cfg.input_path);
  return 0;
}

int run(const RunConfig& cfg) {
  if (!fs::exists(cfg.input_path)) throw IoError(cfg.input_path, "no such file");
  fs::create_directories(cfg.output_dir);
  parallel::set_default_thread_count(cfg.threads);
  if (cfg.command == "summary") return run_summary(cfg);
  if (cfg.command == "degrees") return run_degrees(cfg);
  if (cfg.command == "pagerank") return run_pagerank(cfg);
  if (cfg.command == "topk") return run_topk(cfg);
  if (cfg.command == "kmeans") return run_kmeans(cfg);
  if (cfg.command == "scatter") return run_scatter(cfg);
  if (cfg.command == "stream") return run_stream_command(cfg);
  throw ParameterError("unknown command " + cfg.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Road-network graph analytics: SNAP ingestion, degrees, PageRank, k-means, streaming, plots"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.threads = default_threads();

  auto common = [&](CLI::App* sub) {
    sub->add_option("-i,--input", cfg.input_path, "SNAP edge-list file")->required();
    sub->add_option("-o,--out", cfg.output_dir, "directory for artifacts")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker threads (env ROADNET_THREADS sets the default)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->callback([&cfg, sub] { cfg.command = sub->get_name(); });
  };
  auto top_option = [&](CLI::App* sub) {
    sub->add_option("--top", cfg.top, "rows in top-k tables")->check(CLI::PositiveNumber)->capture_default_str();
  };
  auto rank_options = [&](CLI::App* sub) {
    sub->add_option("--damping", cfg.damping, "damping factor in (0,1)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--tol", cfg.tolerance, "L1 convergence tolerance (default 1e-10)")->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", cfg.max_iterations, "iteration cap (default 100)")->check(CLI::PositiveNumber);
    sub->add_flag("--directed", cfg.directed, "rank over raw directed arcs");
  };

  common(app.add_subcommand("summary", "node and edge counts"));

  auto* degrees = app.add_subcommand("degrees", "degree, indegree and outdegree analysis");
  common(degrees);
  top_option(degrees);

  auto* pr = app.add_subcommand("pagerank", "PageRank scores and top-k table");
  common(pr);
  top_option(pr);
  rank_options(pr);

  auto* topk = app.add_subcommand("topk", "top-k table, optionally compared with a second network");
  common(topk);
  top_option(topk);
  rank_options(topk);
  topk->add_option("--metric", cfg.metric, "ranking metric")
      ->check(CLI::IsMember({"pagerank", "degree"}))
      ->capture_default_str();
  topk->add_option("--compare", cfg.compare_path, "second edge-list file for a side-by-side bar chart")
      ->check(CLI::ExistingFile);

  auto* km = app.add_subcommand("kmeans", "k-means clustering of the edge scatter");
  common(km);
  km->add_option("--k", cfg.k, "number of clusters")->check(CLI::PositiveNumber)->capture_default_str();
  km->add_option("--seed", cfg.seed, "seed for initialization and plot sampling")->capture_default_str();
  km->add_option("--init", cfg.init, "initialization method")
      ->check(CLI::IsMember({"kmeans++", "random", "first"}))
      ->capture_default_str();
  km->add_option("--tol", cfg.tolerance, "relative objective-improvement tolerance (default 1e-6)")
      ->check(CLI::NonNegativeNumber);
  km->add_option("--max-iter", cfg.max_iterations, "iteration cap (default 300)")->check(CLI::PositiveNumber);
  km->add_option("--sample", cfg.sample_size, "points drawn in the SVG")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  km->add_flag("--normalize", cfg.normalize, "min-max scale both axes before clustering");

  auto* scatter = app.add_subcommand("scatter", "edge scatter plot");
  common(scatter);
  scatter->add_option("--sample", cfg.sample_size, "points drawn in the SVG")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scatter->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();

  auto* stream = app.add_subcommand("stream", "micro-batch streaming statistics (NDJSON)");
  common(stream);
  top_option(stream);
  rank_options(stream);
  stream->add_option("--batch-size", cfg.batch_size, "data lines per batch")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  stream->add_flag("--pagerank", cfg.stream_pagerank, "recompute PageRank on every cumulative snapshot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run(cfg);
  } catch (const roadnet::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const ParameterError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
