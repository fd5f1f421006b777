#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "smdtn/types.hpp"

namespace smdtn::routing {

struct AlertMessage {
  MessageId id{};
  NodeId source{};
  NodeId destination{};
  std::uint64_t size = 0;  // bytes
  double created_at = 0.0;
  double ttl = 0.0;
  int hop_count = 0;

  double expires_at() const { return created_at + ttl; }
  bool expired(double now) const { return now - created_at > ttl; }
};

/// Message store ordered by id (oldest-created first).
class Buffer {
 public:
  explicit Buffer(std::uint64_t capacity) : capacity_(capacity) {}

  std::uint64_t capacity() const { return capacity_; }
  std::uint64_t occupancy() const { return occupancy_; }
  std::uint64_t free_bytes() const { return capacity_ - occupancy_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::span<const AlertMessage> entries() const { return entries_; }

  bool contains(MessageId id) const { return find(id) != nullptr; }
  const AlertMessage* find(MessageId id) const;

  /// Requires the id to be absent and the message to fit.
  void insert(const AlertMessage& message);
  bool remove(MessageId id);

 private:
  std::uint64_t capacity_;
  std::uint64_t occupancy_ = 0;
  std::vector<AlertMessage> entries_;
};

enum class Disposition { store, deliver, reject };

struct RoutingLimits {
  int hop_limit = 40;
};

class Router;

struct AdmitResult {
  enum class Outcome { stored, already_have, dropped };
  Outcome outcome = Outcome::stored;
  std::vector<MessageId> victims;  // evicted to make room
};

class OversizeError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

/// Stores `message` in `buffer`, asking `router` for eviction victims when it
/// does not fit. If the incoming message comes up in the victim order before
/// enough space is freed, nothing is evicted and the message is dropped.
AdmitResult admit(Buffer& buffer, const AlertMessage& message, Router& router);

/// Removes every message older than its TTL or past the hop limit.
std::vector<AlertMessage> sweep_expired(Buffer& buffer, double now, int hop_limit);

/// True iff `node` is the message's destination.
bool deliver_check(const AlertMessage& message, NodeId node);

/// Behaviour every router provides. The engine drives it in this order per
/// contact: on_up (both sides), exchange (both sides), then repeated
/// select_for_transfer / on_received while the contact lasts, and on_down.
class Router {
 public:
  Router(NodeId self, std::uint64_t buffer_capacity, RoutingLimits limits)
      : self_(self), buffer_(buffer_capacity), limits_(limits) {}
  virtual ~Router() = default;
  Router(const Router&) = delete;
  Router& operator=(const Router&) = delete;

  NodeId self() const { return self_; }
  const Buffer& buffer() const { return buffer_; }
  const RoutingLimits& limits() const { return limits_; }

  /// Changes whenever the result of any select_for_transfer involving this
  /// node could become non-empty; the engine uses it to skip idle links.
  std::uint64_t version() const { return version_; }

  virtual void on_up(NodeId peer, double now) = 0;
  /// Reads the peer's advertised state (summary vector, likelihoods, acks).
  virtual void exchange(const Router& peer, double now) = 0;
  virtual void on_down(NodeId peer) = 0;
  /// Messages to send to `peer`, in transmission order. Only messages the peer
  /// still wants, unexpired and under the hop limit.
  virtual std::vector<MessageId> select_for_transfer(const Router& peer, double now) = 0;
  /// Eviction order (first = evicted first) over the buffer plus `incoming`.
  virtual std::vector<MessageId> on_buffer_full(const AlertMessage& incoming) = 0;

  /// Handles a completed incoming transfer.
  virtual Disposition on_received(const AlertMessage& message, NodeId from, double now);
  /// Sender-side notification after a transfer to `peer` completed.
  virtual void on_transfer_done(NodeId peer, const AlertMessage& message, Disposition at_peer, double now);
  /// True if receiving `id` would be useful here.
  virtual bool wants(MessageId id) const;
  /// Expiry sweep; returns what was removed.
  virtual std::vector<AlertMessage> sweep(double now);

  /// Contact lifecycle entry points used by the engine. They reset the
  /// per-contact offer record and forward to on_up / on_down.
  void connection_up(NodeId peer, double now);
  void connection_down(NodeId peer);
  /// Records that `id` was offered to `peer` during the current contact;
  /// select_for_transfer never returns it again within that contact.
  void on_transfer_started(NodeId peer, MessageId id) { offered_[peer].insert(id); }
  bool offered(NodeId peer, MessageId id) const;

  /// Places a newly generated message in this node's buffer.
  AdmitResult originate(const AlertMessage& message);

  bool has_delivered(MessageId id) const { return delivered_.contains(id); }
  std::uint64_t evictions() const { return evictions_; }

 protected:
  bool forwardable(const AlertMessage& m, double now) const {
    return !m.expired(now) && m.hop_count < limits_.hop_limit;
  }
  AdmitResult store(const AlertMessage& message);
  bool drop(MessageId id);
  void bump() { ++version_; }

  const std::set<MessageId>& delivered() const { return delivered_; }

 private:
  NodeId self_;
  Buffer buffer_;
  RoutingLimits limits_;
  std::set<MessageId> delivered_;
  std::map<NodeId, std::set<MessageId>> offered_;
  std::uint64_t version_ = 0;
  std::uint64_t evictions_ = 0;
};

}  // namespace smdtn::routing
