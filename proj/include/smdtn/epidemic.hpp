#pragma once

#include <map>
#include <set>
#include <span>
#include <vector>

#include "smdtn/routing.hpp"

namespace smdtn::epidemic {

/// What a node advertises about one buffered message during anti-entropy.
struct SummaryEntry {
  MessageId id{};
  NodeId destination{};
  double created_at = 0.0;
};

/// Non-expired buffered messages, ascending by id.
std::vector<SummaryEntry> summary_vector(const routing::Buffer& buffer, double now);

/// Entries of `theirs` absent from `mine`, ordered for `requester`: messages
/// addressed to the requester first, then oldest-created first.
std::vector<MessageId> request_missing(const std::set<MessageId>& mine, std::span<const SummaryEntry> theirs,
                                       NodeId requester);

/// Flooding router: on every contact, each side sends everything the other lacks.
class EpidemicRouter final : public routing::Router {
 public:
  using Router::Router;

  void on_up(NodeId peer, double now) override;
  void exchange(const Router& peer, double now) override;
  void on_down(NodeId peer) override;
  std::vector<MessageId> select_for_transfer(const Router& peer, double now) override;
  std::vector<MessageId> on_buffer_full(const routing::AlertMessage& incoming) override;

  /// Ids the node advertises: its summary vector plus ids already delivered to it.
  std::set<MessageId> advertised(double now) const;
};

}  // namespace smdtn::epidemic
