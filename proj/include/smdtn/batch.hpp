#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smdtn/config.hpp"
#include "smdtn/geo.hpp"
#include "smdtn/metrics.hpp"

namespace smdtn::batch {

struct BatchCell {
  config::RouterKind router = config::RouterKind::epidemic;
  link::RadioProfile radio;
};

struct BatchSpec {
  std::vector<BatchCell> cells;
  std::vector<std::uint64_t> seeds;
  config::ScenarioConfig base;
};

/// EP-BT, MP-BT, EP-WIFI, MP-WIFI, in that order.
std::vector<BatchCell> default_matrix();
/// Parses a comma-separated list of cell labels such as "EP-BT,MP-WIFI".
std::vector<BatchCell> parse_cells(const std::string& labels);

config::ScenarioConfig cell_config(const config::ScenarioConfig& base, const BatchCell& cell, std::uint64_t seed);

struct MatrixRow {
  std::string scenario;
  std::size_t seed_count = 0;
  std::optional<double> delivery_rate;
  std::optional<double> latency_avg;
  std::optional<double> overhead_ratio;
  std::optional<double> avg_hopcount;
};

struct BatchResult {
  std::vector<std::vector<metrics::ScenarioReport>> reports;  // [cell][seed index]
  std::vector<MatrixRow> rows;                                // one per cell, same order
};

/// Runs every (cell, seed) as an independent task on up to `threads` workers.
/// Any failure aborts the batch with a SimulationError naming the cell and seed.
BatchResult run_batch(const BatchSpec& spec, const geo::RouteGraph& graph, unsigned threads = 0);

/// Per-cell means; runs where a metric is undefined are left out of that mean.
MatrixRow aggregate(const std::string& scenario, const std::vector<metrics::ScenarioReport>& runs);

std::string matrix_csv(const std::vector<MatrixRow>& rows);

}  // namespace smdtn::batch
