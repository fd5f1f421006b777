#include "smdtn/maxprop.hpp"

#include <algorithm>
#include <numeric>

namespace smdtn::maxprop {

double LikelihoodVector::sum() const { return std::accumulate(f_.begin(), f_.end(), 0.0); }

void LikelihoodVector::meet(NodeId peer) {
  if (peer == owner_) throw SimulationError("likelihood update with self");
  f_[index(peer)] += 1.0;
  const double total = sum();
  for (double& v : f_) v /= total;
}

LikelihoodVector init_vector(NodeId owner, std::size_t n_nodes) {
  if (n_nodes < 2) throw ConfigError("likelihood vector needs at least 2 nodes");
  LikelihoodVector v;
  v.owner_ = owner;
  v.f_.assign(n_nodes, 1.0 / static_cast<double>(n_nodes - 1));
  v.f_[index(owner)] = 0.0;
  return v;
}

void exchange_vectors(SnapshotTable& table, const LikelihoodVector& theirs, double now) {
  auto [it, inserted] = table.try_emplace(theirs.owner(), VectorSnapshot{theirs, now});
  if (!inserted && it->second.taken_at <= now) it->second = {theirs, now};
}

std::vector<double> path_costs(const LikelihoodVector& own, const SnapshotTable& snapshots) {
  const std::size_t n = own.node_count();
  const std::size_t src = index(own.owner());
  // out[i] is the vector giving node i's out-edges, if it has any.
  std::vector<const LikelihoodVector*> out(n, nullptr);
  out[src] = &own;
  for (const auto& [owner, snap] : snapshots) {
    if (index(owner) != src && index(owner) < n) out[index(owner)] = &snap.vector;
  }

  std::vector<double> dist(n, kUnreachable);
  std::vector<bool> settled(n, false);
  dist[src] = 0.0;
  // Only nodes with out-edges can be intermediate hops, so only they need settling.
  while (true) {
    std::size_t u = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (out[i] != nullptr && !settled[i] && dist[i] < kUnreachable && (u == n || dist[i] < dist[u])) u = i;
    }
    if (u == n) break;
    settled[u] = true;
    const auto f = out[u]->values();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == u) continue;
      const double candidate = dist[u] + (1.0 - f[j]);
      if (candidate < dist[j]) dist[j] = candidate;
    }
  }
  return dist;
}

double path_cost(const LikelihoodVector& own, const SnapshotTable& snapshots, NodeId destination) {
  return path_costs(own, snapshots)[index(destination)];
}

std::vector<MessageId> rank_buffer(std::span<const routing::AlertMessage> messages, int threshold_hops,
                                   const std::function<double(NodeId)>& cost_to) {
  struct Key {
    bool tail;
    int hops;
    double cost;
    MessageId id;
  };
  std::vector<Key> keys;
  keys.reserve(messages.size());
  for (const auto& m : messages) {
    const bool tail = m.hop_count >= threshold_hops;
    keys.push_back({tail, tail ? 0 : m.hop_count, tail ? cost_to(m.destination) : 0.0, m.id});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& l, const Key& r) {
    if (l.tail != r.tail) return !l.tail;
    if (l.hops != r.hops) return l.hops < r.hops;
    if (l.cost != r.cost) return l.cost < r.cost;
    return l.id < r.id;
  });
  std::vector<MessageId> ids;
  ids.reserve(keys.size());
  for (const auto& k : keys) ids.push_back(k.id);
  return ids;
}

void AckSet::add(MessageId id, double expires_at) {
  auto [it, inserted] = acks_.try_emplace(id, expires_at);
  if (!inserted) it->second = std::max(it->second, expires_at);
  earliest_ = std::min(earliest_, it->second);
}

void AckSet::merge(const AckSet& other) {
  // Both maps are id-ordered, so hinted insertion keeps this linear.
  auto hint = acks_.begin();
  for (const auto& [id, exp] : other.acks_) {
    hint = acks_.try_emplace(hint, id, exp);
    if (hint->second < exp) hint->second = exp;
    earliest_ = std::min(earliest_, hint->second);
  }
}

void AckSet::prune(double now) {
  if (!(now > earliest_)) return;
  std::erase_if(acks_, [now](const auto& kv) { return now > kv.second; });
  earliest_ = kUnreachable;
  for (const auto& [id, exp] : acks_) earliest_ = std::min(earliest_, exp);
}

MaxPropRouter::MaxPropRouter(NodeId self, std::size_t n_nodes, std::uint64_t buffer_capacity,
                             routing::RoutingLimits limits, int threshold_hops)
    : Router(self, buffer_capacity, limits), vector_(init_vector(self, n_nodes)), threshold_hops_(threshold_hops) {}

void MaxPropRouter::on_up(NodeId peer, double) {
  vector_.meet(peer);
  costs_dirty_ = true;
}

void MaxPropRouter::exchange(const Router& peer, double now) {
  const auto* other = dynamic_cast<const MaxPropRouter*>(&peer);
  if (other == nullptr) throw SimulationError("MaxProp peer runs a different router");
  exchange_vectors(snapshots_, other->vector_, now);
  costs_dirty_ = true;
  const std::size_t before = acks_.size();
  acks_.merge(other->acks_);
  if (acks_.size() != before) {
    bump();
    purge_acked();
  }
}

void MaxPropRouter::on_down(NodeId) {}

void MaxPropRouter::purge_acked() {
  std::vector<MessageId> doomed;
  for (const auto& m : buffer().entries()) {
    if (acks_.contains(m.id)) doomed.push_back(m.id);
  }
  for (auto id : doomed) drop(id);
}

double MaxPropRouter::cost_to(NodeId destination) {
  if (costs_dirty_) {
    costs_ = path_costs(vector_, snapshots_);
    costs_dirty_ = false;
  }
  return costs_[index(destination)];
}

std::vector<MessageId> MaxPropRouter::ranked() {
  return rank_buffer(buffer().entries(), threshold_hops_, [this](NodeId d) { return cost_to(d); });
}

std::vector<MessageId> MaxPropRouter::select_for_transfer(const Router& peer, double now) {
  std::vector<MessageId> direct;
  std::vector<routing::AlertMessage> rest;
  for (const auto& m : buffer().entries()) {
    if (!forwardable(m, now) || !peer.wants(m.id) || offered(peer.self(), m.id)) continue;
    if (m.destination == peer.self()) {
      direct.push_back(m.id);
    } else {
      rest.push_back(m);
    }
  }
  if (!rest.empty()) {
    const auto order = rank_buffer(rest, threshold_hops_, [this](NodeId d) { return cost_to(d); });
    direct.insert(direct.end(), order.begin(), order.end());
  }
  return direct;
}

std::vector<MessageId> MaxPropRouter::on_buffer_full(const routing::AlertMessage& incoming) {
  std::vector<routing::AlertMessage> all(buffer().entries().begin(), buffer().entries().end());
  all.push_back(incoming);
  auto order = rank_buffer(all, threshold_hops_, [this](NodeId d) { return cost_to(d); });
  std::reverse(order.begin(), order.end());
  return order;
}

routing::Disposition MaxPropRouter::on_received(const routing::AlertMessage& message, NodeId from, double now) {
  const auto d = Router::on_received(message, from, now);
  if (d == routing::Disposition::deliver) acks_.add(message.id, message.expires_at());
  return d;
}

void MaxPropRouter::on_transfer_done(NodeId, const routing::AlertMessage& message, routing::Disposition at_peer,
                                     double) {
  if (at_peer != routing::Disposition::deliver) return;
  acks_.add(message.id, message.expires_at());
  bump();
  drop(message.id);
}

bool MaxPropRouter::wants(MessageId id) const { return Router::wants(id) && !acks_.contains(id); }

std::vector<routing::AlertMessage> MaxPropRouter::sweep(double now) {
  acks_.prune(now);
  return Router::sweep(now);
}

}  // namespace smdtn::maxprop
