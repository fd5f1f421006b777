#include "smdtn/link.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>

namespace smdtn::link {

std::vector<NodePair> pairs_in_range(std::span<const geo::Point> positions, double range) {
  // Sweep over nodes sorted by x; only neighbours within `range` in x can be in range.
  std::vector<std::size_t> order(positions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return positions[l].x < positions[r].x || (positions[l].x == positions[r].x && l < r);
  });
  const double range_sq = range * range;
  std::vector<NodePair> pairs;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& p = positions[order[i]];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const auto& q = positions[order[j]];
      const double dx = q.x - p.x;
      if (dx > range) break;
      const double dy = q.y - p.y;
      if (dx * dx + dy * dy <= range_sq) pairs.push_back(NodePair::of(node_id(order[i]), node_id(order[j])));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

ContactDelta detect_contacts(std::span<const geo::Point> positions, double range,
                             std::span<const NodePair> previous) {
  const auto now_up = pairs_in_range(positions, range);
  ContactDelta delta;
  std::set_difference(now_up.begin(), now_up.end(), previous.begin(), previous.end(),
                      std::back_inserter(delta.ups));
  std::set_difference(previous.begin(), previous.end(), now_up.begin(), now_up.end(),
                      std::back_inserter(delta.downs));
  return delta;
}

ContactDelta LinkLayer::update_contacts(std::span<const geo::Point> positions, double now,
                                        std::vector<Transfer>* aborted) {
  auto delta = detect_contacts(positions, profile_.range, live_);
  for (const auto& pair : delta.downs) {
    abort_pair(pair, aborted);
    const auto it = open_.find(pair);
    history_.push_back({pair, it->second, now});
    open_.erase(it);
  }
  for (const auto& pair : delta.ups) open_.emplace(pair, now);
  live_.clear();
  for (const auto& [pair, up] : open_) live_.push_back(pair);
  return delta;
}

void LinkLayer::abort_pair(NodePair pair, std::vector<Transfer>* aborted) {
  for (const DirectedLink link : {DirectedLink{pair.a, pair.b}, DirectedLink{pair.b, pair.a}}) {
    const auto it = transfers_.find(link);
    if (it == transfers_.end()) continue;
    ++aborted_;
    if (aborted != nullptr) aborted->push_back(std::move(it->second));
    transfers_.erase(it);
  }
}

const Transfer* LinkLayer::active(DirectedLink link) const {
  const auto it = transfers_.find(link);
  return it == transfers_.end() ? nullptr : &it->second;
}

const Transfer& LinkLayer::start_transfer(NodeId from, NodeId to, const routing::AlertMessage& message,
                                          double now) {
  if (!is_up(NodePair::of(from, to))) {
    throw SimulationError("transfer on a pair without contact: " + std::to_string(index(from)) + "->" +
                          std::to_string(index(to)));
  }
  const DirectedLink link{from, to};
  if (transfers_.contains(link)) {
    throw BusyLinkError("busy link " + std::to_string(index(from)) + "->" + std::to_string(index(to)));
  }
  ++initiated_;
  return transfers_.emplace(link, Transfer{message, from, to, message.size, 0.0, now}).first->second;
}

std::optional<Transfer> LinkLayer::advance_link(DirectedLink link, double& budget) {
  const auto it = transfers_.find(link);
  if (it == transfers_.end()) return std::nullopt;
  Transfer& t = it->second;
  const double need = static_cast<double>(t.bytes_total) - t.bytes_done;
  if (budget >= need) {
    budget -= need;
    t.bytes_done = static_cast<double>(t.bytes_total);
    Transfer done = std::move(t);
    transfers_.erase(it);
    ++completed_;
    return done;
  }
  t.bytes_done += budget;
  budget = 0.0;
  return std::nullopt;
}

AdvanceResult LinkLayer::advance_transfers(double dt) {
  AdvanceResult result;
  for (auto it = transfers_.begin(); it != transfers_.end();) {
    Transfer& t = it->second;
    if (!is_up(NodePair::of(t.from, t.to))) {
      ++aborted_;
      result.aborted.push_back(std::move(t));
      it = transfers_.erase(it);
      continue;
    }
    t.bytes_done += profile_.bandwidth * dt;
    if (t.bytes_done >= static_cast<double>(t.bytes_total)) {
      t.bytes_done = static_cast<double>(t.bytes_total);
      ++completed_;
      result.completed.push_back(std::move(t));
      it = transfers_.erase(it);
      continue;
    }
    result.still_active.push_back(t);
    ++it;
  }
  return result;
}

void LinkLayer::close_all(double now) {
  for (const auto& [pair, up] : open_) history_.push_back({pair, up, now});
  open_.clear();
  live_.clear();
}

}  // namespace smdtn::link
