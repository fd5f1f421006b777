#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "smdtn/routing.hpp"

namespace smdtn::maxprop {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// Estimated probability of meeting each other node next. Entries sum to 1;
/// the owner's own entry is held at zero and excluded from the sum.
class LikelihoodVector {
 public:
  LikelihoodVector() = default;

  NodeId owner() const { return owner_; }
  std::size_t node_count() const { return f_.size(); }
  double operator[](NodeId peer) const { return f_[index(peer)]; }
  std::span<const double> values() const { return f_; }
  double sum() const;

  /// Incremental averaging: f[peer] += 1, then renormalise.
  void meet(NodeId peer);

  friend LikelihoodVector init_vector(NodeId owner, std::size_t n_nodes);

 private:
  NodeId owner_{};
  std::vector<double> f_;
};

/// Uniform 1/(n-1) over every node except the owner. Requires n >= 2.
LikelihoodVector init_vector(NodeId owner, std::size_t n_nodes);

struct VectorSnapshot {
  LikelihoodVector vector;
  double taken_at = 0.0;
};

/// Snapshots held by one node, keyed by the vector's owner.
using SnapshotTable = std::map<NodeId, VectorSnapshot>;

/// Stores `theirs` taken at `now`; an older snapshot never replaces a newer one.
void exchange_vectors(SnapshotTable& table, const LikelihoodVector& theirs, double now);

/// Shortest-path cost from `own.owner()` to every node. Edge i->j weighs
/// 1 - f_i[j]; only `own` and the snapshot owners have out-edges.
/// Unreachable nodes get kUnreachable; the source gets 0.
std::vector<double> path_costs(const LikelihoodVector& own, const SnapshotTable& snapshots);
double path_cost(const LikelihoodVector& own, const SnapshotTable& snapshots, NodeId destination);

/// Transmission order: messages below `threshold_hops` by ascending hop count,
/// then the rest by ascending cost to destination; ties by lower id.
/// Eviction takes from the back.
std::vector<MessageId> rank_buffer(std::span<const routing::AlertMessage> messages, int threshold_hops,
                                   const std::function<double(NodeId)>& cost_to);

/// Ids of delivered messages, each remembered until the message would have expired.
class AckSet {
 public:
  void add(MessageId id, double expires_at);
  void merge(const AckSet& other);
  void prune(double now);
  bool contains(MessageId id) const { return acks_.contains(id); }
  std::size_t size() const { return acks_.size(); }
  const std::map<MessageId, double>& entries() const { return acks_; }

 private:
  std::map<MessageId, double> acks_;
  double earliest_ = kUnreachable;  // lower bound on the smallest expiry held
};

class MaxPropRouter final : public routing::Router {
 public:
  MaxPropRouter(NodeId self, std::size_t n_nodes, std::uint64_t buffer_capacity, routing::RoutingLimits limits,
                int threshold_hops);

  void on_up(NodeId peer, double now) override;
  void exchange(const Router& peer, double now) override;
  void on_down(NodeId peer) override;
  std::vector<MessageId> select_for_transfer(const Router& peer, double now) override;
  std::vector<MessageId> on_buffer_full(const routing::AlertMessage& incoming) override;
  routing::Disposition on_received(const routing::AlertMessage& message, NodeId from, double now) override;
  void on_transfer_done(NodeId peer, const routing::AlertMessage& message, routing::Disposition at_peer,
                        double now) override;
  bool wants(MessageId id) const override;
  std::vector<routing::AlertMessage> sweep(double now) override;

  const LikelihoodVector& vector() const { return vector_; }
  const SnapshotTable& snapshots() const { return snapshots_; }
  const AckSet& acks() const { return acks_; }
  double cost_to(NodeId destination);
  std::vector<MessageId> ranked();

 private:
  void purge_acked();

  LikelihoodVector vector_;
  SnapshotTable snapshots_;
  AckSet acks_;
  int threshold_hops_;
  std::vector<double> costs_;
  bool costs_dirty_ = true;
};

}  // namespace smdtn::maxprop
