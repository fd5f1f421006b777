#include "smdtn/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "smdtn/text_util.hpp"

namespace smdtn::metrics {

double delivery_rate(std::uint64_t delivered, std::uint64_t created) {
  if (created == 0) throw UndefinedMetric("delivery rate undefined: no messages created");
  return static_cast<double>(delivered) / static_cast<double>(created);
}

double hop_completion_rate(std::uint64_t initiated, std::uint64_t completed) {
  if (initiated == 0) throw UndefinedMetric("hop completion rate undefined: no hops initiated");
  return static_cast<double>(completed) / static_cast<double>(initiated);
}

double overhead_ratio(std::uint64_t hops_completed, std::uint64_t delivered) {
  if (delivered == 0) throw UndefinedMetric("overhead ratio undefined: nothing delivered");
  return (static_cast<double>(hops_completed) - static_cast<double>(delivered)) / static_cast<double>(delivered);
}

double latency_avg(std::span<const double> latencies) {
  if (latencies.empty()) throw UndefinedMetric("latency undefined: nothing delivered");
  return std::accumulate(latencies.begin(), latencies.end(), 0.0) / static_cast<double>(latencies.size());
}

std::vector<double> ScenarioReport::latencies() const {
  std::vector<double> out;
  out.reserve(deliveries.size());
  for (const auto& d : deliveries) out.push_back(d.latency());
  return out;
}

std::vector<double> ScenarioReport::contact_durations() const {
  std::vector<double> out;
  out.reserve(contacts.size());
  for (const auto& c : contacts) out.push_back(c.duration());
  return out;
}

MetricsCollector::MetricsCollector(std::string scenario, std::uint64_t seed, std::size_t node_count)
    : scenario_(std::move(scenario)), seed_(seed), node_count_(node_count) {}

void MetricsCollector::on_created(const routing::AlertMessage& message) {
  ++created_;
  const std::size_t i = index(message.id);
  if (delivered_.size() <= i) {
    delivered_.resize(i + 1, false);
    holders_.resize(i + 1);
  }
  holders_[i].assign(node_count_, false);
  on_held(message.id, message.source);
}

bool MetricsCollector::on_delivered(const routing::AlertMessage& message, double now) {
  const std::size_t i = index(message.id);
  if (delivered_[i]) {
    ++duplicates_;
    return false;
  }
  delivered_[i] = true;
  deliveries_.push_back({message.id, message.created_at, now, message.hop_count});
  on_held(message.id, message.destination);
  return true;
}

void MetricsCollector::on_held(MessageId id, NodeId node) { holders_[index(id)][index(node)] = true; }

ScenarioReport MetricsCollector::finalize(const link::LinkLayer& links) const {
  ScenarioReport r;
  r.scenario = scenario_;
  r.seed = seed_;
  r.created = created_;
  r.delivered_unique = deliveries_.size();
  r.duplicates = duplicates_;
  r.deliveries = deliveries_;
  r.hops_initiated = links.initiated();
  r.hops_completed = links.completed();
  r.hops_aborted = links.aborted();
  r.hops_in_flight = links.in_flight();
  r.evictions = evictions_;
  r.expired = expired_;
  r.contacts = links.contact_history();
  std::stable_sort(r.contacts.begin(), r.contacts.end(), [](const link::Contact& a, const link::Contact& b) {
    if (a.up_time != b.up_time) return a.up_time < b.up_time;
    return a.pair < b.pair;
  });

  if (r.created > 0) {
    r.delivery_rate = delivery_rate(r.delivered_unique, r.created);
    double frac = 0.0;
    for (const auto& h : holders_) {
      frac += static_cast<double>(std::count(h.begin(), h.end(), true)) / static_cast<double>(node_count_);
    }
    r.propagation_fraction = frac / static_cast<double>(holders_.size());
  }
  if (r.hops_initiated > 0) r.hop_completion_rate = hop_completion_rate(r.hops_initiated, r.hops_completed);
  if (r.delivered_unique > 0) {
    r.latency_avg = latency_avg(r.latencies());
    r.overhead_ratio = overhead_ratio(r.hops_completed, r.delivered_unique);
    double hops = 0.0;
    for (const auto& d : r.deliveries) hops += d.hops;
    r.avg_hopcount_delivered = hops / static_cast<double>(r.delivered_unique);
  }
  return r;
}

double fraction_below(std::span<const double> durations, double seconds) {
  if (durations.empty()) return 0.0;
  const auto n = std::count_if(durations.begin(), durations.end(), [&](double d) { return d < seconds; });
  return static_cast<double>(n) / static_cast<double>(durations.size());
}

double fraction_above(std::span<const double> durations, double seconds) {
  if (durations.empty()) return 0.0;
  const auto n = std::count_if(durations.begin(), durations.end(), [&](double d) { return d > seconds; });
  return static_cast<double>(n) / static_cast<double>(durations.size());
}

std::vector<std::uint64_t> histogram(std::span<const double> values, std::span<const double> edges) {
  std::vector<std::uint64_t> counts(edges.size(), 0);
  for (double v : values) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    if (it == edges.begin()) continue;
    ++counts[static_cast<std::size_t>(it - edges.begin()) - 1];
  }
  return counts;
}

std::string format_metric(const std::optional<double>& value) { return value ? format_double(*value) : "n/a"; }

namespace {

std::string percent(const std::optional<double>& ratio) {
  return ratio ? format_fixed(*ratio * 100.0, 1) + "%" : "n/a";
}

void check_conservation(const ScenarioReport& r) {
  if (r.hops_initiated != r.hops_completed + r.hops_aborted + r.hops_in_flight) {
    throw SimulationError("hop counters do not balance: initiated " + std::to_string(r.hops_initiated) +
                          " != completed + aborted + in-flight");
  }
  if (r.delivered_unique > r.created) throw SimulationError("more deliveries than created messages");
}

}  // namespace

std::string summary_text(const ScenarioReport& r) {
  std::ostringstream out;
  out << "Scenario: " << r.scenario << '\n'
      << "Seed: " << r.seed << '\n'
      << "Alerts (Delivered / Created): " << r.delivered_unique << " / " << r.created << '\n'
      << "Alert Delivery Rate: " << percent(r.delivery_rate) << '\n'
      << "Alert Delivery Latency (average): "
      << (r.latency_avg ? format_fixed(*r.latency_avg, 0) + " seconds" : std::string("n/a")) << '\n'
      << "Node Hop (Initiated / Completed): " << r.hops_initiated << " / " << r.hops_completed << '\n'
      << "Hop Completion Rate: " << percent(r.hop_completion_rate) << '\n'
      << "Overhead Ratio: " << (r.overhead_ratio ? format_fixed(*r.overhead_ratio, 2) : "n/a") << '\n'
      << "Average Hop Count (delivered): "
      << (r.avg_hopcount_delivered ? format_fixed(*r.avg_hopcount_delivered, 2) : "n/a") << '\n'
      << "Duplicate Deliveries: " << r.duplicates << '\n'
      << "Created: " << r.created << '\n'
      << "Delivered: " << r.delivered_unique << '\n';
  return out.str();
}

std::string metrics_csv(std::span<const ScenarioReport> reports) {
  std::ostringstream out;
  out << "scenario,seed,created,delivered,duplicates,delivery_rate,latency_avg,hops_initiated,hops_completed,"
         "hops_aborted,hops_in_flight,hop_completion_rate,overhead_ratio,avg_hopcount,propagation_fraction,"
         "evictions,expired,contacts\n";
  for (const auto& r : reports) {
    out << r.scenario << ',' << r.seed << ',' << r.created << ',' << r.delivered_unique << ',' << r.duplicates
        << ',' << format_metric(r.delivery_rate) << ',' << format_metric(r.latency_avg) << ','
        << r.hops_initiated << ',' << r.hops_completed << ',' << r.hops_aborted << ',' << r.hops_in_flight << ','
        << format_metric(r.hop_completion_rate) << ',' << format_metric(r.overhead_ratio) << ','
        << format_metric(r.avg_hopcount_delivered) << ',' << format_metric(r.propagation_fraction) << ','
        << r.evictions << ',' << r.expired << ',' << r.contacts.size() << '\n';
  }
  return out.str();
}

std::string latencies_csv(const ScenarioReport& r) {
  std::ostringstream out;
  out << "message_id,created_at,delivered_at,latency,hops\n";
  for (const auto& d : r.deliveries) {
    out << index(d.id) << ',' << format_double(d.created_at) << ',' << format_double(d.delivered_at) << ','
        << format_double(d.latency()) << ',' << d.hops << '\n';
  }
  return out.str();
}

std::string contacts_csv(const ScenarioReport& r) {
  std::ostringstream out;
  out << "node_a,node_b,up_time,down_time,duration\n";
  for (const auto& c : r.contacts) {
    out << index(c.pair.a) << ',' << index(c.pair.b) << ',' << format_double(c.up_time) << ','
        << format_double(c.down_time.value_or(c.up_time)) << ',' << format_double(c.duration()) << '\n';
  }
  return out.str();
}

std::string series_csv(std::span<const ScenarioReport> reports) {
  std::ostringstream out;
  out << "metric,scenario,seed,value\n";
  const auto row = [&](const char* metric, const ScenarioReport& r, const std::optional<double>& v) {
    out << metric << ',' << r.scenario << ',' << r.seed << ',' << format_metric(v) << '\n';
  };
  for (const auto& r : reports) {
    row("avg_hopcount", r, r.avg_hopcount_delivered);
    row("delivery_rate", r, r.delivery_rate);
    row("latency_avg", r, r.latency_avg);
    row("overhead_ratio", r, r.overhead_ratio);
    row("hop_completion_rate", r, r.hop_completion_rate);
  }
  return out.str();
}

void emit(const ScenarioReport& report, const std::filesystem::path& out_dir) {
  check_conservation(report);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  const std::span<const ScenarioReport> one(&report, 1);
  write_file(out_dir / "summary.txt", summary_text(report));
  write_file(out_dir / "metrics.csv", metrics_csv(one));
  write_file(out_dir / "latencies.csv", latencies_csv(report));
  write_file(out_dir / "contacts.csv", contacts_csv(report));
  write_file(out_dir / "series.csv", series_csv(one));
}

}  // namespace smdtn::metrics
