#include "smdtn/epidemic.hpp"

#include <algorithm>

namespace smdtn::epidemic {

namespace {

void order_for(std::vector<SummaryEntry>& entries, NodeId requester) {
  std::sort(entries.begin(), entries.end(), [requester](const SummaryEntry& l, const SummaryEntry& r) {
    const bool lt = l.destination == requester;
    const bool rt = r.destination == requester;
    if (lt != rt) return lt;
    if (l.created_at != r.created_at) return l.created_at < r.created_at;
    return l.id < r.id;
  });
}

}  // namespace

std::vector<SummaryEntry> summary_vector(const routing::Buffer& buffer, double now) {
  std::vector<SummaryEntry> out;
  out.reserve(buffer.size());
  for (const auto& m : buffer.entries()) {
    if (!m.expired(now)) out.push_back({m.id, m.destination, m.created_at});
  }
  return out;
}

std::vector<MessageId> request_missing(const std::set<MessageId>& mine, std::span<const SummaryEntry> theirs,
                                       NodeId requester) {
  std::vector<SummaryEntry> missing;
  for (const auto& e : theirs) {
    if (!mine.contains(e.id)) missing.push_back(e);
  }
  order_for(missing, requester);
  std::vector<MessageId> ids;
  ids.reserve(missing.size());
  for (const auto& e : missing) ids.push_back(e.id);
  return ids;
}

void EpidemicRouter::on_up(NodeId, double) {}

// The peer's summary is read live in select_for_transfer, which is equivalent
// to re-exchanging whenever either side stores a new message mid-contact.
void EpidemicRouter::exchange(const Router&, double) {}

void EpidemicRouter::on_down(NodeId) {}

std::vector<MessageId> EpidemicRouter::select_for_transfer(const Router& peer, double now) {
  std::vector<SummaryEntry> candidates;
  for (const auto& m : buffer().entries()) {
    if (!forwardable(m, now) || !peer.wants(m.id)) continue;
    if (offered(peer.self(), m.id)) continue;
    candidates.push_back({m.id, m.destination, m.created_at});
  }
  order_for(candidates, peer.self());
  std::vector<MessageId> ids;
  ids.reserve(candidates.size());
  for (const auto& e : candidates) ids.push_back(e.id);
  return ids;
}

std::vector<MessageId> EpidemicRouter::on_buffer_full(const routing::AlertMessage& incoming) {
  std::vector<std::pair<double, MessageId>> all;
  all.reserve(buffer().size() + 1);
  for (const auto& m : buffer().entries()) all.emplace_back(m.created_at, m.id);
  all.emplace_back(incoming.created_at, incoming.id);
  std::sort(all.begin(), all.end());
  std::vector<MessageId> order;
  order.reserve(all.size());
  for (const auto& [t, id] : all) order.push_back(id);
  return order;
}

std::set<MessageId> EpidemicRouter::advertised(double now) const {
  std::set<MessageId> ids(delivered().begin(), delivered().end());
  for (const auto& e : summary_vector(buffer(), now)) ids.insert(e.id);
  return ids;
}

}  // namespace smdtn::epidemic
