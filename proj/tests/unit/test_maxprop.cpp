#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "smdtn/maxprop.hpp"
#include "trace_driver.hpp"

using namespace smdtn;
using namespace smdtn::maxprop;

namespace {

const NodeId A = node_id(0), B = node_id(1), C = node_id(2);

routing::AlertMessage msg(std::uint32_t id, std::uint32_t src, std::uint32_t dst, int hops = 0,
                          std::uint64_t size = 1000) {
  routing::AlertMessage m;
  m.id = message_id(id);
  m.source = node_id(src);
  m.destination = node_id(dst);
  m.size = size;
  m.ttl = 10000.0;
  m.hop_count = hops;
  return m;
}

LikelihoodVector random_vector(NodeId owner, std::size_t n, std::mt19937_64& gen) {
  auto v = init_vector(owner, n);
  const int meets = static_cast<int>(gen() % 6);
  for (int i = 0; i < meets; ++i) {
    const auto peer = node_id(gen() % n);
    if (peer != owner) v.meet(peer);
  }
  return v;
}

// Minimum over every simple path src -> dst whose non-final nodes have a vector.
double brute_force_cost(std::size_t n, const std::vector<const LikelihoodVector*>& vec, std::size_t src,
                        std::size_t dst) {
  double best = kUnreachable;
  std::vector<bool> used(n, false);
  std::function<void(std::size_t, double)> walk = [&](std::size_t at, double cost) {
    if (at == dst) {
      best = std::min(best, cost);
      return;
    }
    if (vec[at] == nullptr) return;
    used[at] = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || j == at) continue;
      walk(j, cost + (1.0 - vec[at]->values()[j]));
    }
    used[at] = false;
  };
  walk(src, 0.0);
  return best;
}

std::vector<std::unique_ptr<routing::Router>> maxprop_nodes(std::size_t n, std::uint64_t capacity = 1'000'000'000) {
  std::vector<std::unique_ptr<routing::Router>> v;
  for (std::size_t i = 0; i < n; ++i) {
    v.push_back(std::make_unique<MaxPropRouter>(node_id(i), n, capacity, routing::RoutingLimits{}, 3));
  }
  return v;
}

}  // namespace

TEST_CASE("init_vector") {
  const auto v3 = init_vector(A, 3);
  CHECK(v3[A] == 0.0);
  CHECK(v3[B] == 0.5);
  CHECK(v3[C] == 0.5);
  const auto v121 = init_vector(A, 121);
  CHECK(v121[node_id(120)] == doctest::Approx(1.0 / 120.0).epsilon(1e-15));
  CHECK(init_vector(A, 2)[B] == 1.0);
  CHECK_THROWS_AS(init_vector(A, 1), ConfigError);
}

TEST_CASE("meet: incremental averaging") {
  auto v = init_vector(A, 3);
  v.meet(B);
  CHECK(std::abs(v[B] - 0.75) < 1e-9);
  CHECK(std::abs(v[C] - 0.25) < 1e-9);
  v.meet(B);
  CHECK(std::abs(v[B] - 0.875) < 1e-9);
  CHECK(std::abs(v[C] - 0.125) < 1e-9);
  CHECK_THROWS(v.meet(A));
}

TEST_CASE("meet: random sequences keep a probability vector") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + gen() % 20;
    const auto owner = node_id(gen() % n);
    auto v = init_vector(owner, n);
    for (int k = 0; k < 50; ++k) {
      const auto peer = node_id(gen() % n);
      if (peer == owner) continue;
      v.meet(peer);
      REQUIRE(std::abs(v.sum() - 1.0) < 1e-9);
      REQUIRE(v[owner] == 0.0);
      for (double f : v.values()) REQUIRE(f >= 0.0);
    }
  }
}

TEST_CASE("meet is order sensitive") {
  auto ab = init_vector(A, 3);
  ab.meet(B);
  ab.meet(C);
  auto ba = init_vector(A, 3);
  ba.meet(C);
  ba.meet(B);
  CHECK(ab[B] != ba[B]);
  CHECK(std::abs(ab.sum() - ba.sum()) < 1e-12);
}

TEST_CASE("exchange_vectors keeps the newest snapshot") {
  SnapshotTable t;
  auto vb = init_vector(B, 3);
  exchange_vectors(t, vb, 5.0);
  REQUIRE(t.contains(B));
  vb.meet(C);
  exchange_vectors(t, vb, 3.0);  // older: ignored
  CHECK(t.at(B).vector[C] == 0.5);
  exchange_vectors(t, vb, 7.0);
  CHECK(t.at(B).vector[C] == 0.75);
  CHECK(t.at(B).taken_at == 7.0);
}

TEST_CASE("path_cost examples") {
  auto a = init_vector(A, 3);
  a.meet(B);  // {B: 0.75, C: 0.25}
  auto b = init_vector(B, 3);  // {A: 0.5, C: 0.5}
  SnapshotTable t;
  exchange_vectors(t, b, 1.0);
  CHECK(std::abs(path_cost(a, t, C) - 0.75) < 1e-12);
  CHECK(path_cost(a, t, A) == 0.0);

  const auto lone = init_vector(A, 121);
  CHECK(path_cost(lone, {}, node_id(77)) == doctest::Approx(1.0 - 1.0 / 120.0).epsilon(1e-15));

  const auto two = init_vector(A, 2);
  CHECK(path_cost(two, {}, B) == 0.0);
}

TEST_CASE("path_cost equals brute-force enumeration on random small graphs") {
  std::mt19937_64 gen(2024);
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + gen() % 5;  // 2..6 nodes
    const auto src = static_cast<std::size_t>(gen() % n);
    const auto own = random_vector(node_id(src), n, gen);
    SnapshotTable snaps;
    std::vector<const LikelihoodVector*> vec(n, nullptr);
    vec[src] = &own;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == src || gen() % 3 == 0) continue;
      exchange_vectors(snaps, random_vector(node_id(i), n, gen), 0.0);
    }
    for (const auto& [owner, snap] : snaps) vec[index(owner)] = &snap.vector;
    const auto costs = path_costs(own, snaps);
    for (std::size_t dst = 0; dst < n; ++dst) {
      if (dst == src) {
        CHECK(costs[dst] == 0.0);
        continue;
      }
      CHECK(costs[dst] == brute_force_cost(n, vec, src, dst));
      ++compared;
    }
  }
  CHECK(compared > 2000);
}

TEST_CASE("rank_buffer") {
  const auto flat = [](NodeId) { return 0.5; };
  std::vector<routing::AlertMessage> ms{msg(1, 0, 5, 5), msg(2, 0, 5, 0), msg(3, 0, 5, 2)};
  auto order = rank_buffer(ms, 3, flat);
  CHECK(order == std::vector<MessageId>{message_id(2), message_id(3), message_id(1)});

  std::vector<routing::AlertMessage> tail{msg(1, 0, 5, 4), msg(2, 0, 6, 4)};
  order = rank_buffer(tail, 3, [](NodeId d) { return d == node_id(5) ? 0.9 : 0.3; });
  CHECK(order == std::vector<MessageId>{message_id(2), message_id(1)});

  std::vector<routing::AlertMessage> tie{msg(8, 0, 5, 1), msg(4, 0, 5, 1)};
  CHECK(rank_buffer(tie, 3, flat).front() == message_id(4));

  std::vector<routing::AlertMessage> unreachable{msg(1, 0, 5, 6), msg(2, 0, 6, 6)};
  order = rank_buffer(unreachable, 3, [](NodeId d) { return d == node_id(5) ? kUnreachable : 2.0; });
  CHECK(order.back() == message_id(1));
}

TEST_CASE("rank_buffer is a deterministic total order") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<routing::AlertMessage> ms;
    for (std::uint32_t i = 0; i < 30; ++i) ms.push_back(msg(i, 0, gen() % 4, static_cast<int>(gen() % 6)));
    const auto cost = [](NodeId d) { return static_cast<double>(index(d) % 2); };
    const auto ref = rank_buffer(ms, 3, cost);
    std::shuffle(ms.begin(), ms.end(), gen);
    CHECK(rank_buffer(ms, 3, cost) == ref);
  }
}

TEST_CASE("AckSet rules") {
  AckSet acks;
  acks.add(message_id(1), 100.0);
  acks.add(message_id(1), 50.0);
  CHECK(acks.entries().at(message_id(1)) == 100.0);
  AckSet other;
  other.add(message_id(2), 10.0);
  acks.merge(other);
  CHECK(acks.contains(message_id(2)));
  acks.prune(10.0);
  CHECK(acks.contains(message_id(2)));
  acks.prune(10.5);
  CHECK_FALSE(acks.contains(message_id(2)));
  CHECK(acks.size() == 1);
}

TEST_CASE("ack received on contact purges held copies") {
  MaxPropRouter a(A, 3, 1'000'000, {}, 3);
  MaxPropRouter c(C, 3, 1'000'000, {}, 3);
  a.originate(msg(1, 0, 2));
  c.on_received(msg(1, 0, 2, 1), B, 1.0);  // c is the destination
  CHECK(c.acks().contains(message_id(1)));
  a.connection_up(C, 2.0);
  a.exchange(c, 2.0);
  CHECK_FALSE(a.buffer().contains(message_id(1)));
  CHECK(a.acks().contains(message_id(1)));

  MaxPropRouter b(B, 3, 1'000'000, {}, 3);
  b.connection_up(A, 3.0);
  b.exchange(a, 3.0);  // ack for an id b never held
  CHECK(b.acks().contains(message_id(1)));
  CHECK(b.buffer().empty());
  CHECK_FALSE(b.wants(message_id(1)));
}

TEST_CASE("expired acks are pruned and not passed on") {
  MaxPropRouter a(A, 3, 1'000'000, {}, 3);
  MaxPropRouter b(B, 3, 1'000'000, {}, 3);
  auto m = msg(1, 2, 0);
  m.ttl = 10.0;
  a.on_received(m, C, 1.0);
  a.sweep(11.0);
  CHECK_FALSE(a.acks().contains(message_id(1)));
  b.exchange(a, 12.0);
  CHECK_FALSE(b.acks().contains(message_id(1)));
}

TEST_CASE("select_for_transfer sends messages for the peer first, then by rank") {
  MaxPropRouter a(A, 4, 1'000'000, {}, 3);
  MaxPropRouter b(B, 4, 1'000'000, {}, 3);
  a.originate(msg(1, 0, 3, 5));
  a.originate(msg(2, 0, 3, 0));
  a.originate(msg(3, 0, 1, 7));
  a.connection_up(B, 0.0);
  b.connection_up(A, 0.0);
  a.exchange(b, 0.0);
  const auto sel = a.select_for_transfer(b, 0.0);
  CHECK(sel == std::vector<MessageId>{message_id(3), message_id(2), message_id(1)});
  a.on_transfer_started(B, message_id(3));
  CHECK(a.select_for_transfer(b, 0.0).size() == 2);
}

TEST_CASE("MaxProp evicts from the back of the ranking") {
  MaxPropRouter a(A, 4, 3000, {}, 3);
  a.originate(msg(1, 0, 3, 0));
  a.originate(msg(2, 0, 3, 5));
  a.originate(msg(3, 0, 3, 1));
  const auto r = a.originate(msg(4, 0, 3, 0));
  REQUIRE(r.victims.size() == 1);
  CHECK(r.victims[0] == message_id(2));
}

TEST_CASE("scripted trace: delivery, ack spread and copy count never grows after the ack") {
  test::TraceDriver drv(maxprop_nodes(4), link::RadioProfile::wifi());
  drv.router(0).originate(msg(1, 0, 3));
  drv.contact(0, 1, 3.0);
  drv.contact(0, 2, 3.0);
  const auto copies = [&] {
    int n = 0;
    for (std::size_t i = 0; i < 4; ++i) n += drv.router(i).buffer().contains(message_id(1)) ? 1 : 0;
    return n;
  };
  CHECK(copies() == 3);
  drv.contact(1, 3, 3.0);  // delivery; sender drops its copy
  CHECK(drv.router(3).has_delivered(message_id(1)));
  int last = copies();
  CHECK(last == 2);
  const std::vector<std::pair<std::size_t, std::size_t>> later{{1, 2}, {0, 1}, {2, 3}, {0, 2}, {0, 3}};
  for (const auto& [x, y] : later) {
    drv.contact(x, y, 3.0);
    const int now = copies();
    CHECK(now <= last);
    last = now;
  }
  CHECK(last == 0);
  CHECK(drv.delivered() == 1);
}
