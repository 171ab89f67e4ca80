#include "infocast/errors.hpp"
#include "infocast/fountain/prng.hpp"
#include "infocast/protocol/buffer.hpp"
#include "infocast/protocol/protocol.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace infocast;
using namespace infocast::protocol;

namespace {

PacketFactory counter_factory(SourceId src, std::uint64_t &next) {
  return [src, &next] {
    EncodedPacket p;
    p.source_id = src;
    p.seed = next++;
    p.degree = 1;
    return p;
  };
}

std::size_t admit(CooperationBuffer &b, SourceId src, Rng &rng) {
  static std::uint64_t next = 0;
  return b.admit(src, counter_factory(src, next), rng);
}

mobility::Vehicle vehicle_at(mobility::VehicleId id, double x, mobility::Direction dir = mobility::Direction::forward) {
  mobility::Vehicle v;
  v.id = id;
  v.position = x;
  v.speed = 30;
  v.direction = dir;
  return v;
}

World one_source_world(std::size_t k, double rsu_position) {
  World w;
  w.segment_length = 400;
  w.domain = 10;
  w.payload_len = 4;
  Rsu r;
  r.id = 0;
  r.position = rsu_position;
  r.message = std::make_shared<const SourceMessage>(SourceMessage::random(0, k, 4, 1));
  r.dist = std::make_shared<const fountain::DegreeDistribution>(fountain::robust_soliton(k, 0.03, 0.5));
  w.rsus.push_back(std::move(r));
  return w;
}

} // namespace

TEST_CASE("scheme B quotas and window") {
  Rng rng(1);
  CooperationBuffer b(100, SchemeB{4});
  for (SourceId s = 0; s < 4; ++s)
    admit(b, s, rng);
  for (SourceId s = 0; s < 4; ++s)
    CHECK(b.count(s) == 25);
  admit(b, 4, rng);
  CHECK_FALSE(b.contains(0));
  CHECK(b.sources() == std::vector<SourceId>{1, 2, 3, 4});
  for (SourceId s = 1; s <= 4; ++s)
    CHECK(b.count(s) == 25);

  CooperationBuffer flush(100, SchemeB{1});
  admit(flush, 0, rng);
  CHECK(admit(flush, 1, rng) == 100);
  CHECK(flush.sources() == std::vector<SourceId>{1});

  CooperationBuffer wide(1500, SchemeB{50});
  for (SourceId s = 0; s < 60; ++s)
    admit(wide, s, rng);
  CHECK(wide.sources().size() == 50);
  for (auto s : wide.sources())
    CHECK(wide.count(s) == 30);
}

TEST_CASE("scheme B newest first admission into an empty buffer") {
  Rng rng(1);
  CooperationBuffer b(100, SchemeB{4});
  CHECK(admit(b, 7, rng) == 100);
  CHECK(admit(b, 8, rng) == 50);
  CHECK(b.count(7) == 50);
}

TEST_CASE("scheme A drops a fraction of every source") {
  Rng rng(3);
  CooperationBuffer b(100, SchemeA{0.2});
  CHECK(admit(b, 0, rng) == 100);
  CHECK(admit(b, 1, rng) == 20);
  CHECK(b.count(0) == 80);
  CHECK(b.total() == 100);

  CooperationBuffer half(50, SchemeA{0.2});
  admit(half, 0, rng);
  admit(half, 1, rng);
  CHECK(half.count(0) == 40);
  CHECK(half.count(1) == 10);

  CooperationBuffer all(100, SchemeA{1.0});
  admit(all, 0, rng);
  admit(all, 1, rng);
  CHECK(all.sources() == std::vector<SourceId>{1});
  CHECK(all.count(1) == 100);
}

TEST_CASE("capacity and window invariants under random operations") {
  for (int trial = 0; trial < 50; ++trial) {
    Rng rng(100 + trial);
    const std::size_t cap = 1 + rng() % 200;
    const bool a = trial % 2 == 0;
    const int window = 1 + static_cast<int>(rng() % 8);
    BufferScheme scheme = a ? BufferScheme{SchemeA{0.05 + (rng() % 90) / 100.0}} : BufferScheme{SchemeB{window}};
    CooperationBuffer b(cap, scheme);
    std::vector<SourceId> order;
    for (int op = 0; op < 200; ++op) {
      const auto src = static_cast<SourceId>(rng() % 12);
      if (rng() % 5 == 0) {
        b.purge(src);
      } else {
        admit(b, src, rng);
      }
      CHECK(b.total() <= cap);
      std::size_t sum = 0;
      for (const auto &e : b.entries()) {
        CHECK(!e.packets.empty());
        sum += e.packets.size();
      }
      CHECK(sum == b.total());
      if (!a)
        CHECK(b.entries().size() <= static_cast<std::size_t>(window));
    }
  }
}

TEST_CASE("uniform pick is proportional to holdings") {
  Rng rng(9);
  CooperationBuffer b(100, SchemeA{0.7});
  admit(b, 0, rng);
  admit(b, 1, rng); // 30 of source 0, 70 of source 1
  std::map<SourceId, int> hist;
  const int n = 100000;
  for (int i = 0; i < n; ++i)
    ++hist[b.pick_uniform(rng)->source_id];
  CHECK(hist[0] / double(n) == doctest::Approx(b.count(0) / 100.0).epsilon(0.03));
  CooperationBuffer empty(10, SchemeB{2});
  CHECK(empty.pick_uniform(rng) == nullptr);
}

TEST_CASE("roles and relevance") {
  Rsu rsu;
  rsu.position = 3000;
  CHECK(classify_role(vehicle_at(0, 1000), rsu, 4000, false) == Role::collector);
  CHECK(classify_role(vehicle_at(0, 3500), rsu, 4000, true) == Role::carrier);
  CHECK(classify_role(vehicle_at(0, 3500), rsu, 4000, false) == Role::inactive);
  CHECK(classify_role(vehicle_at(0, 9000), rsu, 4000, true) == Role::inactive);
  CHECK(classify_role(vehicle_at(0, 5000, mobility::Direction::backward), rsu, 4000, false) == Role::collector);
  CHECK(relevance(10, 3, 400) == 2800);
  CHECK(relevance(10, 10, 400) == 0);
  CHECK(relevance(10, 0, 400) == 4000);
  CHECK(segment_index(3850, 3000, 400) == 2);
  CHECK(segment_index(2150, 3000, 400) == 2);
}

TEST_CASE("channel: lone carrier delivers every slot, two carriers collide") {
  World w;
  w.channel.tx_prob = 1.0;
  std::uint64_t next = 0;
  VehicleNode carrier(vehicle_at(1, 0), 10, SchemeB{1}, 1);
  carrier.buffer.scheme_b_update(0, 1, counter_factory(0, next));
  VehicleNode collector(vehicle_at(2, 150), 10, SchemeB{1}, 1);
  w.vehicles = {carrier, collector};
  Rng rng(1);
  ChannelStats stats;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto d = channel_slot(w, s, rng, &stats);
    REQUIRE(d.size() == 1);
    CHECK(d[0].receiver == 1);
    CHECK(d[0].transmitter == 1);
  }
  CHECK(stats.deliveries == 50);

  VehicleNode second(vehicle_at(3, 300), 10, SchemeB{1}, 1);
  second.buffer.scheme_b_update(0, 1, counter_factory(0, next));
  w.vehicles.push_back(second);
  CHECK(channel_slot(w, 0, rng, &stats).empty());
  CHECK(stats.collisions == 1);
}

TEST_CASE("channel: RSU sub-slot reaches everyone in range") {
  World w = one_source_world(10, 1000);
  w.vehicles = {VehicleNode(vehicle_at(1, 850), 10, SchemeB{1}, 1), VehicleNode(vehicle_at(2, 1199), 10, SchemeB{1}, 1),
                VehicleNode(vehicle_at(3, 1500), 10, SchemeB{1}, 1)};
  Rng rng(1);
  const auto d = channel_slot(w, 0, rng);
  REQUIRE(d.size() == 2);
  for (const auto &x : d) {
    CHECK(x.from_rsu);
    CHECK(x.transmitter == rsu_node(0));
  }
  CHECK(d[0].packet == d[1].packet);
}

TEST_CASE("channel soundness on random layouts") {
  for (int trial = 0; trial < 30; ++trial) {
    Rng rng(500 + trial);
    World w;
    w.channel.tx_prob = 0.3;
    std::uint64_t next = 0;
    for (int i = 0; i < 40; ++i) {
      VehicleNode n(vehicle_at(i, static_cast<double>(rng() % 3000)), 5, SchemeB{1}, 1);
      if (rng() % 2)
        n.buffer.scheme_b_update(0, 1, counter_factory(0, next));
      w.vehicles.push_back(n);
    }
    std::vector<TraceRow> rows;
    TraceSink sink = [&](const TraceRow &r) { rows.push_back(r); };
    for (std::uint64_t s = 0; s < 20; ++s) {
      rows.clear();
      const auto deliveries = channel_slot(w, s, rng, nullptr, &sink);
      std::map<std::size_t, int> per_rx;
      std::set<NodeId> transmitters;
      for (const auto &r : rows)
        transmitters.insert(r.tx);
      for (const auto &d : deliveries) {
        CHECK(++per_rx[d.receiver] == 1);
        const auto &rx = w.vehicles[d.receiver].motion;
        const auto &tx = w.vehicles[static_cast<std::size_t>(d.transmitter)].motion;
        CHECK(std::abs(rx.position - tx.position) <= w.channel.comm_range);
        CHECK(d.transmitter != rx.id);
        CHECK(transmitters.count(rx.id) == 0);
      }
    }
  }
}

TEST_CASE("receive: decoding distance, carriers discard, duplicates, unknown source") {
  World w = one_source_world(1, 3000);
  w.vehicles.push_back(VehicleNode(vehicle_at(1, 600), 10, SchemeB{1}, 1));
  auto pkt = w.rsus[0].next_packet();
  const auto out = on_receive(w, 0, pkt);
  CHECK(out.newly_decoded);
  CHECK(*w.vehicles[0].links[0].decoded_at_distance == 2400);
  CHECK(w.vehicles[0].links[0].recovered == w.rsus[0].message);

  const auto again = on_receive(w, 0, pkt);
  CHECK(again.status == fountain::DecodeStatus::duplicate_ignored);
  CHECK(w.vehicles[0].links[0].distinct_received() == 1);

  // Past the RSU it becomes a carrier and ignores further packets.
  Rng rng(1);
  w.vehicles[0].motion.position = 3100;
  CHECK(on_become_carrier(w.vehicles[0], w.rsus[0], rng) == 10);
  const auto held = w.vehicles[0].buffer.total();
  const auto late = on_receive(w, 0, w.rsus[0].next_packet());
  CHECK_FALSE(late.accepted);
  CHECK(w.vehicles[0].buffer.total() == held);

  on_leave_domain(w.vehicles[0], 0);
  CHECK(w.vehicles[0].buffer.total() == 0);
  CHECK_FALSE(w.vehicles[0].links[0].decoded());

  EncodedPacket bogus = pkt;
  bogus.source_id = 5;
  CHECK_THROWS_AS(on_receive(w, 0, bogus), MalformedPacket);
}

TEST_CASE("carrier re-encodings are fresh and decodable") {
  World w = one_source_world(20, 3000);
  w.vehicles.push_back(VehicleNode(vehicle_at(1, 2900), 200, SchemeB{1}, 1));
  while (!w.vehicles[0].links[0].decoded())
    on_receive(w, 0, w.rsus[0].next_packet());
  Rng rng(2);
  on_become_carrier(w.vehicles[0], w.rsus[0], rng);
  fountain::Decoder d(0, w.rsus[0].dist, 4);
  std::set<std::uint64_t> seeds;
  for (const auto &p : w.vehicles[0].buffer.entries().front().packets) {
    seeds.insert(p.seed);
    d.push(p);
  }
  CHECK(seeds.size() == 200);
  REQUIRE(d.complete());
  CHECK(*d.message() == *w.rsus[0].message);
}
