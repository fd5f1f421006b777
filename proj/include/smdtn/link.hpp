#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smdtn/geo.hpp"
#include "smdtn/routing.hpp"
#include "smdtn/types.hpp"

namespace smdtn::link {

struct RadioProfile {
  std::string name;
  double range = 0.0;      // metres
  double bandwidth = 0.0;  // bytes per second

  static RadioProfile bluetooth() { return {"bluetooth", 10.0, 250000.0}; }
  static RadioProfile wifi() { return {"wifi", 30.0, 1250000.0}; }
};

/// Unordered node pair stored canonically with a < b.
struct NodePair {
  NodeId a{};
  NodeId b{};

  static NodePair of(NodeId x, NodeId y) { return x < y ? NodePair{x, y} : NodePair{y, x}; }
  auto operator<=>(const NodePair&) const = default;
};

struct Contact {
  NodePair pair;
  double up_time = 0.0;
  std::optional<double> down_time;

  double duration() const { return down_time.value_or(up_time) - up_time; }
};

struct ContactDelta {
  std::vector<NodePair> ups;    // sorted
  std::vector<NodePair> downs;  // sorted
};

/// Pairs within `range` (inclusive) of each other, sorted. positions[i] belongs to node i.
std::vector<NodePair> pairs_in_range(std::span<const geo::Point> positions, double range);

/// Diff of the in-range relation against `previous` (sorted, canonical).
ContactDelta detect_contacts(std::span<const geo::Point> positions, double range,
                             std::span<const NodePair> previous);

struct Transfer {
  routing::AlertMessage message;  // the copy in flight
  NodeId from{};
  NodeId to{};
  std::uint64_t bytes_total = 0;
  double bytes_done = 0.0;
  double started_at = 0.0;
};

struct DirectedLink {
  NodeId from{};
  NodeId to{};
  auto operator<=>(const DirectedLink&) const = default;
};

struct AdvanceResult {
  std::vector<Transfer> completed;
  std::vector<Transfer> aborted;
  std::vector<Transfer> still_active;
};

class BusyLinkError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

/// Contact table plus in-flight transfers (at most one per directed link).
/// Keeps the hop counters: initiated = completed + aborted + active.
class LinkLayer {
 public:
  explicit LinkLayer(RadioProfile profile) : profile_(std::move(profile)) {}

  const RadioProfile& profile() const { return profile_; }

  /// Re-evaluates contacts at time `now`. Transfers on pairs that went down are
  /// aborted and returned; closed contacts are appended to the history.
  ContactDelta update_contacts(std::span<const geo::Point> positions, double now,
                               std::vector<Transfer>* aborted = nullptr);

  bool is_up(NodePair pair) const { return open_.contains(pair); }
  std::span<const NodePair> live_pairs() const { return live_; }

  const Transfer* active(DirectedLink link) const;
  bool busy(DirectedLink link) const { return transfers_.contains(link); }

  /// Throws BusyLinkError if the directed link already carries a transfer and
  /// SimulationError if the pair is not in contact.
  const Transfer& start_transfer(NodeId from, NodeId to, const routing::AlertMessage& message, double now);

  /// Spends up to `budget` bytes on the link's active transfer. Returns the
  /// transfer if it completed; `budget` is reduced by the bytes consumed.
  std::optional<Transfer> advance_link(DirectedLink link, double& budget);

  /// Advances every active transfer by bandwidth * dt. Transfers whose pair is
  /// no longer up are aborted.
  AdvanceResult advance_transfers(double dt);

  /// Records all still-open contacts as closing at `now` (end of run).
  void close_all(double now);

  const std::vector<Contact>& contact_history() const { return history_; }

  std::uint64_t initiated() const { return initiated_; }
  std::uint64_t completed() const { return completed_; }
  std::uint64_t aborted() const { return aborted_; }
  std::uint64_t in_flight() const { return transfers_.size(); }

 private:
  void abort_pair(NodePair pair, std::vector<Transfer>* aborted);

  RadioProfile profile_;
  std::vector<NodePair> live_;          // sorted
  std::map<NodePair, double> open_;     // pair -> up time
  std::map<DirectedLink, Transfer> transfers_;
  std::vector<Contact> history_;
  std::uint64_t initiated_ = 0;
  std::uint64_t completed_ = 0;
  std::uint64_t aborted_ = 0;
};

}  // namespace smdtn::link
