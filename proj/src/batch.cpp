#include "smdtn/batch.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include "smdtn/engine.hpp"
#include "smdtn/text_util.hpp"

namespace smdtn::batch {

std::vector<BatchCell> default_matrix() {
  using config::RouterKind;
  return {{RouterKind::epidemic, link::RadioProfile::bluetooth()},
          {RouterKind::maxprop, link::RadioProfile::bluetooth()},
          {RouterKind::epidemic, link::RadioProfile::wifi()},
          {RouterKind::maxprop, link::RadioProfile::wifi()}};
}

std::vector<BatchCell> parse_cells(const std::string& labels) {
  std::vector<BatchCell> cells;
  for (auto part : split(labels, ',')) {
    part = trim(part);
    const auto dash = part.find('-');
    if (dash == std::string_view::npos) throw ConfigError("bad cell label '" + std::string(part) + "'");
    const auto r = part.substr(0, dash);
    const auto p = part.substr(dash + 1);
    BatchCell cell;
    if (r == "EP") {
      cell.router = config::RouterKind::epidemic;
    } else if (r == "MP") {
      cell.router = config::RouterKind::maxprop;
    } else {
      throw ConfigError("bad router in cell label '" + std::string(part) + "'");
    }
    if (p == "BT") {
      cell.radio = link::RadioProfile::bluetooth();
    } else if (p == "WIFI") {
      cell.radio = link::RadioProfile::wifi();
    } else {
      throw ConfigError("bad radio in cell label '" + std::string(part) + "'");
    }
    cells.push_back(cell);
  }
  if (cells.empty()) throw ConfigError("empty cell list");
  return cells;
}

config::ScenarioConfig cell_config(const config::ScenarioConfig& base, const BatchCell& cell, std::uint64_t seed) {
  config::ScenarioConfig c = base;
  c.router = cell.router;
  c.radio = cell.radio;
  c.seed = seed;
  return c;
}

MatrixRow aggregate(const std::string& scenario, const std::vector<metrics::ScenarioReport>& runs) {
  MatrixRow row;
  row.scenario = scenario;
  row.seed_count = runs.size();
  auto mean = [&](auto field) -> std::optional<double> {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : runs) {
      if (const auto& v = r.*field) {
        sum += *v;
        ++n;
      }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  };
  row.delivery_rate = mean(&metrics::ScenarioReport::delivery_rate);
  row.latency_avg = mean(&metrics::ScenarioReport::latency_avg);
  row.overhead_ratio = mean(&metrics::ScenarioReport::overhead_ratio);
  row.avg_hopcount = mean(&metrics::ScenarioReport::avg_hopcount_delivered);
  return row;
}

BatchResult run_batch(const BatchSpec& spec, const geo::RouteGraph& graph, unsigned threads) {
  if (spec.cells.empty()) throw ConfigError("batch needs at least one cell");
  if (spec.seeds.empty()) throw ConfigError("batch needs at least one seed");

  struct Task {
    std::size_t cell;
    std::size_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    for (std::size_t s = 0; s < spec.seeds.size(); ++s) tasks.push_back({c, s});
  }

  BatchResult result;
  result.reports.assign(spec.cells.size(), std::vector<metrics::ScenarioReport>(spec.seeds.size()));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::optional<std::pair<std::size_t, std::string>> first_error;  // task index, message

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const auto [c, s] = tasks[i];
      const auto cfg = cell_config(spec.base, spec.cells[c], spec.seeds[s]);
      try {
        result.reports[c][s] = engine::run(cfg, graph);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        const std::string what = "cell " + config::scenario_label(cfg) + " seed " +
                                 std::to_string(spec.seeds[s]) + ": " + e.what();
        if (!first_error || i < first_error->first) first_error = {i, what};
        failed = true;
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (first_error) throw SimulationError(first_error->second);

  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    const auto label = config::scenario_label(cell_config(spec.base, spec.cells[c], 0));
    result.rows.push_back(aggregate(label, result.reports[c]));
  }
  return result;
}

std::string matrix_csv(const std::vector<MatrixRow>& rows) {
  std::ostringstream out;
  out << "scenario,seed-count,delivery_rate,latency_avg,overhead_ratio,avg_hopcount\n";
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.seed_count << ',' << metrics::format_metric(r.delivery_rate) << ','
        << metrics::format_metric(r.latency_avg) << ',' << metrics::format_metric(r.overhead_ratio) << ','
        << metrics::format_metric(r.avg_hopcount) << '\n';
  }
  return out.str();
}

}  // namespace smdtn::batch
