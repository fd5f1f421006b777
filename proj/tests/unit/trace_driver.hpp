#pragma once

// Scripted-contact harness for router tests. Positions are chosen by the
// script instead of by mobility: idle nodes sit 1 km apart on a line, and a
// contact moves two nodes onto a shared meeting point. Each tick repeats the
// engine's connection and transfer phases.

#include <memory>
#include <vector>

#include "smdtn/link.hpp"
#include "smdtn/routing.hpp"

namespace smdtn::test {

class TraceDriver {
 public:
  TraceDriver(std::vector<std::unique_ptr<routing::Router>> routers, link::RadioProfile profile, double tick = 1.0)
      : routers_(std::move(routers)), links_(std::move(profile)), tick_(tick), positions_(routers_.size()) {
    park_all();
  }

  routing::Router& router(std::size_t i) { return *routers_[i]; }
  const link::LinkLayer& links() const { return links_; }
  double now() const { return now_; }
  std::uint64_t delivered() const { return delivered_; }

  /// Brings nodes a and b into range for `seconds`, then separates them for one tick.
  void contact(std::size_t a, std::size_t b, double seconds) {
    park_all();
    positions_[a] = {-5000.0, -5000.0};
    positions_[b] = {-5000.0, -5000.0};
    for (double t = 0.0; t < seconds; t += tick_) tick();
    park_all();
    tick();
  }

  /// Advances with everyone apart.
  void idle(double seconds) {
    park_all();
    for (double t = 0.0; t < seconds; t += tick_) tick();
  }

 private:
  void park_all() {
    for (std::size_t i = 0; i < positions_.size(); ++i) positions_[i] = {1000.0 * static_cast<double>(i), 0.0};
  }

  void tick() {
    now_ += tick_;
    const auto delta = links_.update_contacts(positions_, now_);
    for (const auto& p : delta.downs) {
      router(index(p.a)).connection_down(p.b);
      router(index(p.b)).connection_down(p.a);
    }
    for (const auto& p : delta.ups) {
      auto& a = router(index(p.a));
      auto& b = router(index(p.b));
      a.connection_up(p.b, now_);
      b.connection_up(p.a, now_);
      a.exchange(b, now_);
      b.exchange(a, now_);
    }
    const double budget = links_.profile().bandwidth * tick_;
    const std::vector<link::NodePair> live(links_.live_pairs().begin(), links_.live_pairs().end());
    for (const auto& p : live) {
      run_link(p.a, p.b, budget);
      run_link(p.b, p.a, budget);
    }
    for (auto& r : routers_) r->sweep(now_);
  }

  void run_link(NodeId from, NodeId to, double budget) {
    const link::DirectedLink dl{from, to};
    auto& sender = router(index(from));
    auto& receiver = router(index(to));
    while (true) {
      if (links_.busy(dl)) {
        auto done = links_.advance_link(dl, budget);
        if (!done) return;
        auto copy = done->message;
        copy.hop_count += 1;
        const auto d = receiver.on_received(copy, from, now_);
        if (d == routing::Disposition::deliver) ++delivered_;
        sender.on_transfer_done(to, copy, d, now_);
        continue;
      }
      if (budget <= 0.0) return;
      const auto candidates = sender.select_for_transfer(receiver, now_);
      if (candidates.empty()) return;
      sender.on_transfer_started(to, candidates.front());
      links_.start_transfer(from, to, *sender.buffer().find(candidates.front()), now_);
    }
  }

  std::vector<std::unique_ptr<routing::Router>> routers_;
  link::LinkLayer links_;
  double tick_;
  double now_ = 0.0;
  std::vector<geo::Point> positions_;
  std::uint64_t delivered_ = 0;
};

}  // namespace smdtn::test
