#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smdtn/link.hpp"
#include "smdtn/routing.hpp"

namespace smdtn::metrics {

double delivery_rate(std::uint64_t delivered, std::uint64_t created);
double hop_completion_rate(std::uint64_t initiated, std::uint64_t completed);
/// (hops_completed - delivered) / delivered.
double overhead_ratio(std::uint64_t hops_completed, std::uint64_t delivered);
double latency_avg(std::span<const double> latencies);

struct Delivery {
  MessageId id{};
  double created_at = 0.0;
  double delivered_at = 0.0;
  int hops = 0;

  double latency() const { return delivered_at - created_at; }
};

struct ScenarioReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::uint64_t created = 0;
  std::uint64_t delivered_unique = 0;
  std::uint64_t duplicates = 0;
  std::optional<double> delivery_rate;
  std::optional<double> latency_avg;
  std::vector<Delivery> deliveries;  // first deliveries, in delivery order
  std::uint64_t hops_initiated = 0;
  std::uint64_t hops_completed = 0;
  std::uint64_t hops_aborted = 0;
  std::uint64_t hops_in_flight = 0;
  std::optional<double> hop_completion_rate;
  std::optional<double> overhead_ratio;
  std::optional<double> avg_hopcount_delivered;
  /// Mean over created messages of the fraction of nodes that ever held a copy.
  std::optional<double> propagation_fraction;
  std::uint64_t evictions = 0;
  std::uint64_t expired = 0;
  std::vector<link::Contact> contacts;

  std::vector<double> latencies() const;
  std::vector<double> contact_durations() const;
};

/// Counters owned by one run. Call finalize() once after the loop.
class MetricsCollector {
 public:
  MetricsCollector(std::string scenario, std::uint64_t seed, std::size_t node_count);

  void on_created(const routing::AlertMessage& message);
  /// Returns true for the first delivery of an id, false for a duplicate.
  bool on_delivered(const routing::AlertMessage& message, double now);
  void on_held(MessageId id, NodeId node);
  void on_evicted(std::uint64_t n) { evictions_ += n; }
  void on_expired(std::uint64_t n) { expired_ += n; }

  ScenarioReport finalize(const link::LinkLayer& links) const;

 private:
  std::string scenario_;
  std::uint64_t seed_;
  std::size_t node_count_;
  std::uint64_t created_ = 0;
  std::uint64_t duplicates_ = 0;
  std::vector<bool> delivered_;             // by message id
  std::vector<std::vector<bool>> holders_;  // by message id, then node
  std::vector<Delivery> deliveries_;
  std::uint64_t evictions_ = 0;
  std::uint64_t expired_ = 0;
};

/// Fraction of contacts whose duration is strictly below `seconds`.
double fraction_below(std::span<const double> durations, double seconds);
/// Fraction of contacts whose duration is strictly above `seconds`.
double fraction_above(std::span<const double> durations, double seconds);

/// Counts per bucket for the given ascending edges; bucket i is [edges[i], edges[i+1]),
/// the last bucket is open-ended.
std::vector<std::uint64_t> histogram(std::span<const double> values, std::span<const double> edges);

/// Table-style block printed by `run` and written to summary.txt.
std::string summary_text(const ScenarioReport& report);

std::string metrics_csv(std::span<const ScenarioReport> reports);
std::string latencies_csv(const ScenarioReport& report);
std::string contacts_csv(const ScenarioReport& report);
std::string series_csv(std::span<const ScenarioReport> reports);

/// Writes summary.txt, metrics.csv, latencies.csv, contacts.csv and series.csv.
void emit(const ScenarioReport& report, const std::filesystem::path& out_dir);

/// Renders an optional metric for CSV/summary output ("n/a" when undefined).
std::string format_metric(const std::optional<double>& value);

}  // namespace smdtn::metrics
