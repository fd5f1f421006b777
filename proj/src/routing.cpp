#include "smdtn/routing.hpp"

#include <algorithm>

namespace smdtn::routing {

namespace {

auto lower(std::vector<AlertMessage>& v, MessageId id) {
  return std::lower_bound(v.begin(), v.end(), id, [](const AlertMessage& m, MessageId x) { return m.id < x; });
}

}  // namespace

const AlertMessage* Buffer::find(MessageId id) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                                   [](const AlertMessage& m, MessageId x) { return m.id < x; });
  return it != entries_.end() && it->id == id ? &*it : nullptr;
}

void Buffer::insert(const AlertMessage& message) {
  const auto it = lower(entries_, message.id);
  if (it != entries_.end() && it->id == message.id) {
    throw SimulationError("buffer already holds message " + std::to_string(index(message.id)));
  }
  if (message.size > free_bytes()) throw SimulationError("buffer overflow");
  entries_.insert(it, message);
  occupancy_ += message.size;
}

bool Buffer::remove(MessageId id) {
  const auto it = lower(entries_, id);
  if (it == entries_.end() || it->id != id) return false;
  occupancy_ -= it->size;
  entries_.erase(it);
  return true;
}

AdmitResult admit(Buffer& buffer, const AlertMessage& message, Router& router) {
  AdmitResult result;
  if (buffer.contains(message.id)) {
    result.outcome = AdmitResult::Outcome::already_have;
    return result;
  }
  if (message.size > buffer.capacity()) {
    throw OversizeError("message " + std::to_string(index(message.id)) + " of " +
                        std::to_string(message.size) + " bytes exceeds buffer capacity " +
                        std::to_string(buffer.capacity()));
  }
  if (message.size <= buffer.free_bytes()) {
    buffer.insert(message);
    return result;
  }
  const auto order = router.on_buffer_full(message);
  std::uint64_t freed = buffer.free_bytes();
  std::size_t take = 0;
  for (; take < order.size() && freed < message.size; ++take) {
    if (order[take] == message.id) break;
    if (const auto* m = buffer.find(order[take])) freed += m->size;
  }
  if (freed < message.size) {
    result.outcome = AdmitResult::Outcome::dropped;
    return result;
  }
  for (std::size_t i = 0; i < take; ++i) {
    if (buffer.remove(order[i])) result.victims.push_back(order[i]);
  }
  buffer.insert(message);
  return result;
}

std::vector<AlertMessage> sweep_expired(Buffer& buffer, double now, int hop_limit) {
  std::vector<AlertMessage> removed;
  for (const auto& m : buffer.entries()) {
    if (m.expired(now) || m.hop_count > hop_limit) removed.push_back(m);
  }
  for (const auto& m : removed) buffer.remove(m.id);
  return removed;
}

bool deliver_check(const AlertMessage& message, NodeId node) { return message.destination == node; }

Disposition Router::on_received(const AlertMessage& message, NodeId /*from*/, double /*now*/) {
  if (deliver_check(message, self_)) {
    delivered_.insert(message.id);
    bump();
    return Disposition::deliver;
  }
  if (!wants(message.id)) return Disposition::reject;
  const auto r = store(message);
  return r.outcome == AdmitResult::Outcome::stored ? Disposition::store : Disposition::reject;
}

void Router::on_transfer_done(NodeId, const AlertMessage&, Disposition, double) {}

void Router::connection_up(NodeId peer, double now) {
  offered_[peer].clear();
  on_up(peer, now);
}

void Router::connection_down(NodeId peer) {
  offered_.erase(peer);
  on_down(peer);
}

bool Router::offered(NodeId peer, MessageId id) const {
  const auto it = offered_.find(peer);
  return it != offered_.end() && it->second.contains(id);
}

bool Router::wants(MessageId id) const { return !buffer_.contains(id) && !delivered_.contains(id); }

std::vector<AlertMessage> Router::sweep(double now) {
  auto removed = sweep_expired(buffer_, now, limits_.hop_limit);
  if (!removed.empty()) bump();
  return removed;
}

AdmitResult Router::originate(const AlertMessage& message) { return store(message); }

AdmitResult Router::store(const AlertMessage& message) {
  auto r = admit(buffer_, message, *this);
  evictions_ += r.victims.size();
  if (r.outcome == AdmitResult::Outcome::stored) bump();
  return r;
}

bool Router::drop(MessageId id) {
  const bool removed = buffer_.remove(id);
  if (removed) bump();
  return removed;
}

}  // namespace smdtn::routing
