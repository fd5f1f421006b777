#include "smdtn/cli.hpp"

#include <filesystem>
#include <ostream>

#include "CLI11.hpp"
#include "smdtn/batch.hpp"
#include "smdtn/config.hpp"
#include "smdtn/engine.hpp"
#include "smdtn/geo.hpp"
#include "smdtn/metrics.hpp"
#include "smdtn/text_util.hpp"

namespace smdtn::cli {

namespace {

struct IngestArgs {
  std::string input;
  std::string output;
  double spacing = 800.0;
  int every_k = 3;
  std::string name_key = "name";
  std::string stations;
};

struct RunArgs {
  std::string config;
  std::string graph;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
};

struct BatchArgs {
  std::string config;
  std::string graph;
  std::string seeds = "1,2,3,4,5";
  std::string cells;
  std::string out = ".";
  unsigned threads = 0;
};

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
  geo::ParseOptions popts;
  popts.name_key = a.name_key;
  const auto routes = geo::parse_lines(read_file(a.input), popts);
  geo::StationOverrides overrides;
  if (!a.stations.empty()) overrides = geo::parse_station_overrides(read_file(a.stations));
  const auto graph = geo::build_graph(routes, {a.spacing, a.every_k}, a.stations.empty() ? nullptr : &overrides);
  write_file(a.output, geo::serialize(graph));
  std::size_t stations = 0;
  for (const auto& r : graph.routes) stations += r.stations.size();
  out << "routes: " << graph.routes.size() << "\nstations: " << stations << '\n';
  return 0;
}

config::ScenarioConfig load_run_config(const std::string& path, const std::string& graph_override) {
  auto cfg = config::load_config(path);
  if (!graph_override.empty()) cfg.graph_path = graph_override;
  if (cfg.graph_path.empty()) throw ConfigError("no graph: pass --graph or set graph.path in the config");
  config::validate(cfg);
  return cfg;
}

geo::RouteGraph load_run_graph(const config::ScenarioConfig& cfg) {
  return geo::load_graph(cfg.graph_path, {cfg.station_spacing, cfg.express_every_k});
}

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  auto cfg = load_run_config(a.config, a.graph);
  if (a.seed) cfg.seed = *a.seed;
  const auto graph = load_run_graph(cfg);
  std::uint64_t last_pct = 101;
  engine::ProgressFn progress;
  if (!a.quiet) {
    progress = [&](std::uint64_t tick, std::uint64_t total) {
      const auto pct = tick * 100 / total;
      if (pct != last_pct && pct % 10 == 0) {
        last_pct = pct;
        err << "\r" << config::scenario_label(cfg) << " seed " << cfg.seed << ": " << pct << "%" << std::flush;
      }
    };
  }
  const auto report = engine::run(cfg, graph, progress);
  if (!a.quiet) err << '\n';
  if (!a.out.empty()) metrics::emit(report, a.out);
  out << metrics::summary_text(report);
  return 0;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (auto part : split(text, ',')) {
    const auto v = parse_int(part);
    if (!v || *v < 0) throw ConfigError("bad seed '" + std::string(part) + "'");
    seeds.push_back(static_cast<std::uint64_t>(*v));
  }
  return seeds;
}

int cmd_batch(const BatchArgs& a, std::ostream& out) {
  batch::BatchSpec spec;
  spec.base = load_run_config(a.config, a.graph);
  spec.seeds = parse_seeds(a.seeds);
  spec.cells = a.cells.empty() ? batch::default_matrix() : batch::parse_cells(a.cells);
  const auto graph = load_run_graph(spec.base);
  const auto result = batch::run_batch(spec, graph, a.threads);

  const std::filesystem::path dir(a.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<metrics::ScenarioReport> all;
  for (const auto& cell : result.reports) all.insert(all.end(), cell.begin(), cell.end());
  write_file(dir / "matrix.csv", batch::matrix_csv(result.rows));
  write_file(dir / "runs.csv", metrics::metrics_csv(all));
  write_file(dir / "series.csv", metrics::series_csv(all));
  out << batch::matrix_csv(result.rows);
  return 0;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Delay-tolerant alert dissemination simulator for subway networks", "smdtn"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Build a route graph from a subway-lines GeoJSON file");
  ingest_cmd->add_option("input", ingest.input, "GeoJSON FeatureCollection")->required();
  ingest_cmd->add_option("-o,--output", ingest.output, "Graph file to write")->required();
  ingest_cmd->add_option("--spacing", ingest.spacing, "Station spacing in metres");
  ingest_cmd->add_option("--express-every", ingest.every_k, "Every k-th station is an express stop");
  ingest_cmd->add_option("--name-key", ingest.name_key, "Feature property holding the route name");
  ingest_cmd->add_option("--stations", ingest.stations, "Station offset override file");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("--config", run.config, "Scenario config file")->required();
  run_cmd->add_option("--graph", run.graph, "Graph file or GeoJSON (overrides graph.path)");
  run_cmd->add_option("--seed", run.seed, "Override sim.seed");
  run_cmd->add_option("--out", run.out, "Directory for report files");
  run_cmd->add_flag("-q,--quiet", run.quiet, "No progress line");

  BatchArgs bat;
  auto* batch_cmd = app.add_subcommand("batch", "Run the router x radio matrix over several seeds");
  batch_cmd->add_option("--config", bat.config, "Base scenario config file")->required();
  batch_cmd->add_option("--graph", bat.graph, "Graph file or GeoJSON (overrides graph.path)");
  batch_cmd->add_option("--seeds", bat.seeds, "Comma-separated seeds");
  batch_cmd->add_option("--cells", bat.cells, "Comma-separated cells, e.g. EP-BT,MP-WIFI (default: all four)");
  batch_cmd->add_option("--out", bat.out, "Output directory");
  batch_cmd->add_option("--threads", bat.threads, "Worker threads (default: hardware concurrency)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest, out);
    if (*run_cmd) return cmd_run(run, out, err);
    if (*batch_cmd) return cmd_batch(bat, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace smdtn::cli
