// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "smdtn/batch.hpp"
#include "smdtn/engine.hpp"
#include "smdtn/epidemic.hpp"
#include "smdtn/maxprop.hpp"
#include "smdtn/text_util.hpp"
#include "trace_driver.hpp"

using namespace smdtn;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string pct(double v) { return format_fixed(100.0 * v, 2) + "%"; }

double rate(const metrics::ScenarioReport& r) { return r.delivery_rate.value_or(0.0); }

enum Cell { ep_bt = 0, mp_bt = 1, ep_wifi = 2, mp_wifi = 3 };

// Number of seeds for which pred(seed index) holds.
int count_seeds(std::size_t seeds, const std::function<bool(std::size_t)>& pred) {
  int n = 0;
  for (std::size_t s = 0; s < seeds; ++s) n += pred(s) ? 1 : 0;
  return n;
}

double brute_force_cost(std::size_t n, const std::vector<const maxprop::LikelihoodVector*>& vec, std::size_t src,
                        std::size_t dst) {
  double best = maxprop::kUnreachable;
  std::vector<bool> used(n, false);
  std::function<void(std::size_t, double)> walk = [&](std::size_t at, double cost) {
    if (at == dst) {
      best = std::min(best, cost);
      return;
    }
    if (vec[at] == nullptr) return;
    used[at] = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (!used[j] && j != at) walk(j, cost + (1.0 - vec[at]->values()[j]));
    }
    used[at] = false;
  };
  walk(src, 0.0);
  return best;
}

void maxprop_oracles() {
  auto v = maxprop::init_vector(node_id(0), 3);
  v.meet(node_id(1));
  const bool meet_ok = std::abs(v[node_id(1)] - 0.75) <= 1e-9 && std::abs(v[node_id(2)] - 0.25) <= 1e-9;

  std::mt19937_64 gen(2024);
  int mismatches = 0;
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + gen() % 5;
    const auto src = static_cast<std::size_t>(gen() % n);
    auto random_vector = [&](NodeId owner) {
      auto r = maxprop::init_vector(owner, n);
      const int meets = static_cast<int>(gen() % 6);
      for (int i = 0; i < meets; ++i) {
        const auto peer = node_id(gen() % n);
        if (peer != owner) r.meet(peer);
      }
      return r;
    };
    const auto own = random_vector(node_id(src));
    maxprop::SnapshotTable snaps;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == src || gen() % 3 == 0) continue;
      maxprop::exchange_vectors(snaps, random_vector(node_id(i)), 0.0);
    }
    std::vector<const maxprop::LikelihoodVector*> vec(n, nullptr);
    vec[src] = &own;
    for (const auto& [owner, snap] : snaps) vec[index(owner)] = &snap.vector;
    const auto costs = maxprop::path_costs(own, snaps);
    for (std::size_t dst = 0; dst < n; ++dst) {
      if (dst == src) continue;
      ++compared;
      if (costs[dst] != brute_force_cost(n, vec, src, dst)) ++mismatches;
    }
  }
  report(8, meet_ok && mismatches == 0,
         "meet -> {" + format_double(v[node_id(1)]) + ", " + format_double(v[node_id(2)]) + "}; path_cost " +
             std::to_string(compared - mismatches) + "/" + std::to_string(compared) + " match brute force");
}

routing::AlertMessage trace_msg(std::uint32_t id, std::uint32_t src, std::uint32_t dst, double created) {
  routing::AlertMessage m;
  m.id = message_id(id);
  m.source = node_id(src);
  m.destination = node_id(dst);
  m.size = 1000;
  m.created_at = created;
  m.ttl = 10000.0;
  return m;
}

std::vector<std::unique_ptr<routing::Router>> epidemic_nodes(std::size_t n) {
  std::vector<std::unique_ptr<routing::Router>> v;
  for (std::size_t i = 0; i < n; ++i) {
    v.push_back(std::make_unique<epidemic::EpidemicRouter>(node_id(i), 1'000'000'000, routing::RoutingLimits{}));
  }
  return v;
}

void epidemic_oracles() {
  test::TraceDriver line(epidemic_nodes(3), link::RadioProfile::bluetooth());
  line.router(0).originate(trace_msg(1, 0, 2, 0.0));
  line.contact(0, 1, 5.0);
  line.contact(1, 2, 5.0);
  const auto* relayed = line.router(1).buffer().find(message_id(1));
  // The destination consumes the copy; the relay's hop count plus the final hop gives the path length.
  const int hops = relayed != nullptr ? relayed->hop_count + 1 : -1;
  const bool line_ok = line.router(2).has_delivered(message_id(1)) && hops == 2 && line.links().completed() == 2;

  test::TraceDriver flood(epidemic_nodes(4), link::RadioProfile::wifi());
  for (std::uint32_t i = 0; i < 4; ++i) flood.router(i).originate(trace_msg(i, i, 99, static_cast<double>(i)));
  for (auto [a, b] : {std::pair{0, 1}, {2, 3}, {1, 2}, {0, 3}, {0, 2}, {1, 3}}) flood.contact(a, b, 3.0);
  int held = 0;
  for (std::size_t n = 0; n < 4; ++n) {
    for (std::uint32_t m = 0; m < 4; ++m) held += flood.router(n).buffer().contains(message_id(m)) ? 1 : 0;
  }
  report(9, line_ok && held == 16,
         "3-node trace hop_count " + std::to_string(hops) + ", completed " +
             std::to_string(line.links().completed()) + "; 4-node flood " + std::to_string(held) + "/16 copies");
}

void metric_arithmetic() {
  const double d = metrics::delivery_rate(104, 521);
  const double h = metrics::hop_completion_rate(15765, 6719);
  report(10, std::abs(d - 0.1996) <= 1e-4 && std::abs(h - 0.4262) <= 1e-4,
         "delivery_rate(104,521)=" + format_fixed(d, 6) + ", hop_completion_rate=" + format_fixed(h, 6));
}

bool same_files(const fs::path& a, const fs::path& b) {
  for (const char* f : {"summary.txt", "metrics.csv", "latencies.csv", "contacts.csv", "series.csv"}) {
    if (read_file(a / f) != read_file(b / f)) return false;
  }
  return true;
}

}  // namespace

int main() {
  const auto cfg = config::load_config(SMDTN_DATA_DIR "/default.cfg");
  const auto graph = geo::load_graph(cfg.graph_path, {cfg.station_spacing, cfg.express_every_k});

  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::printf("running %zu seeds x 4 cells\n", seeds.size());
  std::fflush(stdout);
  const auto batch = batch::run_batch({batch::default_matrix(), seeds, cfg}, graph);
  const auto& runs = batch.reports;
  const std::size_t ns = seeds.size();
  auto at = [&](Cell c, std::size_t s) -> const metrics::ScenarioReport& { return runs[c][s]; };

  std::string rates;
  for (int c = 0; c < 4; ++c) {
    rates += (c ? " " : "") + batch.rows[static_cast<std::size_t>(c)].scenario + "=" +
             pct(batch.rows[static_cast<std::size_t>(c)].delivery_rate.value_or(0.0));
  }

  const int c1 = count_seeds(ns, [&](std::size_t s) {
    return rate(at(ep_wifi, s)) > rate(at(ep_bt, s)) && rate(at(mp_wifi, s)) > rate(at(mp_bt, s));
  });
  report(1, c1 >= 4, std::to_string(c1) + "/5 seeds Wi-Fi > Bluetooth for both routers; mean " + rates);

  const int c2 = count_seeds(ns, [&](std::size_t s) { return rate(at(mp_wifi, s)) > rate(at(ep_wifi, s)); });
  report(2, c2 >= 4, std::to_string(c2) + "/5 seeds MP-WIFI > EP-WIFI");

  const int c3 = count_seeds(ns, [&](std::size_t s) {
    const auto lat = [&](Cell c) { return at(c, s).latency_avg.value_or(INFINITY); };
    return lat(mp_bt) < lat(ep_bt) && lat(mp_wifi) < lat(ep_wifi);
  });
  report(3, c3 >= 4, std::to_string(c3) + "/5 seeds MaxProp latency < Epidemic latency on both interfaces");

  const int c4 = count_seeds(ns, [&](std::size_t s) {
    const double ep = at(ep_wifi, s).overhead_ratio.value_or(-1.0);
    for (Cell c : {ep_bt, mp_bt, mp_wifi}) {
      if (!(ep > at(c, s).overhead_ratio.value_or(-1.0))) return false;
    }
    return true;
  });
  report(4, c4 >= 4, std::to_string(c4) + "/5 seeds EP-WIFI has the highest overhead ratio");

  {
    // Pooled over all seeds of a cell.
    auto pooled = [&](Cell c) {
      std::uint64_t init = 0, done = 0;
      for (std::size_t s = 0; s < ns; ++s) {
        init += at(c, s).hops_initiated;
        done += at(c, s).hops_completed;
      }
      return metrics::hop_completion_rate(init, done);
    };
    const double wifi_lo = std::min(pooled(ep_wifi), pooled(mp_wifi));
    const double bt_hi = std::max(pooled(ep_bt), pooled(mp_bt));
    report(5, wifi_lo > 0.90 && bt_hi < 0.60,
           "hop completion EP-BT=" + pct(pooled(ep_bt)) + " MP-BT=" + pct(pooled(mp_bt)) +
               " EP-WIFI=" + pct(pooled(ep_wifi)) + " MP-WIFI=" + pct(pooled(mp_wifi)));
  }

  {
    bool all = true;
    for (const auto& cell : runs) {
      for (const auto& r : cell) all = all && r.created == 521;
    }
    report(6, all && at(ep_bt, 0).created == 521,
           "created " + std::to_string(at(ep_bt, 0).created) + (all ? " in every run" : ", not in every run"));
  }

  {
    const auto dir = fs::temp_directory_path() / "smdtn-acceptance";
    fs::remove_all(dir);
    metrics::emit(engine::run(cfg, graph), dir / "a");
    metrics::emit(engine::run(cfg, graph), dir / "b");
    const bool same = same_files(dir / "a", dir / "b");
    fs::remove_all(dir);
    report(7, same, same ? "two runs emitted byte-identical report files" : "report files differ");
  }

  maxprop_oracles();
  epidemic_oracles();
  metric_arithmetic();

  {
    const auto durations = at(ep_wifi, 0).contact_durations();
    const double below = metrics::fraction_below(durations, 10.0);
    const double above = metrics::fraction_above(durations, 60.0);
    report(11, below >= 0.10 && above >= 0.10,
           std::to_string(durations.size()) + " Wi-Fi contacts: " + pct(below) + " below 10 s, " + pct(above) +
               " above 60 s");
  }

  {
    auto half = cfg;
    half.tick = cfg.tick / 2.0;
    const double coarse = rate(at(ep_bt, 0));
    const double fine = rate(engine::run(half, graph));
    const double diff_pp = 100.0 * std::abs(coarse - fine);
    report(12, diff_pp < 2.0,
           "delivery " + pct(coarse) + " at tick " + format_double(cfg.tick) + " vs " + pct(fine) + " at tick " +
               format_double(half.tick) + " (" + format_fixed(diff_pp, 2) + " pp)");
  }

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
