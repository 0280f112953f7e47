#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "flchain/network/network.hpp"
#include "stats.hpp"

using namespace flchain;

namespace {

Network make_net(std::uint32_t miners, std::uint32_t clients, double tx_bits, double capacity, bool zero = false) {
    RngStream attach("client-attach", 0);
    NetworkParams p;
    p.sizes = SizeModel{tx_bits, 20e3};
    p.miner_link_bps = capacity;
    p.client_link_bps = capacity;
    p.zero_delays = zero;
    return Network(Topology::make(miners, clients, AttachmentPolicy::Random, attach), p, RngStream("propagation", 1),
                   RngStream("client-link", 1));
}

}  // namespace

TEST_CASE("transaction propagation mean is L_t / C") {
    CHECK(transaction_prop_mean(SizeModel{0.145e6, 20e3}, LinkSpec(1e6)) == doctest::Approx(0.145));
    CHECK(transaction_prop_mean(SizeModel{2.327e6, 20e3}, LinkSpec(100e6)) == doctest::Approx(0.02327));
    CHECK(transaction_prop_mean(SizeModel{12345.0, 20e3}, LinkSpec(12345.0)) == 1.0);
}

TEST_CASE("block propagation mean is (L_bh + payload L_t) / C") {
    CHECK(block_prop_mean(SizeModel{2.327e6, 0.02e6}, 1, LinkSpec(1e6)) == doctest::Approx(2.347));
    CHECK(block_prop_mean(SizeModel{2.327e6, 0.02e6}, 0, LinkSpec(1e6)) == doctest::Approx(0.02));
    CHECK(block_prop_mean(SizeModel{0.145e6, 0.02e6}, 1, LinkSpec(100e6)) == doctest::Approx(0.00165));
}

TEST_CASE("transaction length is 32 bits per parameter") {
    const auto s = SizeModel::for_model(170, 20e3);
    CHECK(s.tx_bits == 170 * 32.0);
    CHECK(s.header_bits == 20e3);
}

TEST_CASE("link capacity must be positive") {
    CHECK_THROWS_AS(LinkSpec(0.0), std::invalid_argument);
    CHECK_THROWS_AS(LinkSpec(-5.0), std::invalid_argument);
    CHECK_NOTHROW(LinkSpec(1.0));
}

TEST_CASE("broadcast fans out to every other miner") {
    Engine e;
    Network net = make_net(10, 5, 2.327e6, 1e6);
    const auto seqs = net.broadcast(NodeId::miner(0), Message::block(1, 1), SimTime(0), e);
    CHECK(seqs.size() == 9);
    std::set<std::uint32_t> targets;
    while (auto ev = e.pop()) {
        CHECK(ev->kind == EventKind::BlockDelivered);
        CHECK(ev->fire_at.seconds > 0.0);
        targets.insert(ev->target);
    }
    CHECK(targets.size() == 9);
    CHECK_FALSE(targets.contains(0));
}

TEST_CASE("broadcast from an unknown origin is rejected") {
    Engine e;
    Network net = make_net(3, 1, 1e3, 1e6);
    CHECK_THROWS_AS(net.broadcast(NodeId::miner(3), Message::tx(0), SimTime(0), e), std::invalid_argument);
    CHECK_THROWS_AS(net.broadcast(NodeId::client(0), Message::tx(0), SimTime(0), e), std::invalid_argument);
}

TEST_CASE("client upload reaches only the attached miner") {
    Network net = make_net(4, 6, 1e5, 1e6);
    for (std::uint32_t c = 0; c < 6; ++c) {
        Engine e;
        net.upload(c, c, SimTime(1), e);
        const auto ev = e.pop();
        CHECK(ev->kind == EventKind::TxDelivered);
        CHECK(ev->target == net.topology().attachment[c]);
        CHECK(ev->fire_at.seconds > 1.0);
        CHECK(e.empty());
    }
}

TEST_CASE("every client is attached to exactly one valid miner") {
    RngStream rng("client-attach", 7);
    const auto t = Topology::make(7, 100, AttachmentPolicy::Random, rng);
    CHECK(t.clients() == 100);
    std::size_t total = 0;
    for (std::uint32_t m = 0; m < 7; ++m) total += t.clients_of(m).size();
    CHECK(total == 100);
    const auto rr = Topology::make(3, 7, AttachmentPolicy::RoundRobin, rng);
    CHECK(rr.attachment == std::vector<std::uint32_t>{0, 1, 2, 0, 1, 2, 0});
}

TEST_CASE("mean block delivery delay matches the analytic mean") {
    Engine e;
    Network net = make_net(2, 1, 2.327e6, 1e6);
    std::vector<double> delays;
    for (int i = 0; i < 10000; ++i) net.broadcast(NodeId::miner(0), Message::block(i, 1), SimTime(0), e);
    while (auto ev = e.pop()) delays.push_back(ev->fire_at.seconds);
    CHECK(delays.size() == 10000);
    CHECK(std::abs(testing::mean(delays) / 2.347 - 1.0) < 0.03);
}

TEST_CASE("mean transaction delivery delay matches the analytic mean") {
    Engine e;
    Network net = make_net(11, 1, 0.145e6, 1e6);
    std::vector<double> delays;
    for (int i = 0; i < 1000; ++i) net.broadcast(NodeId::miner(3), Message::tx(i), SimTime(0), e);
    while (auto ev = e.pop()) delays.push_back(ev->fire_at.seconds);
    CHECK(std::abs(testing::mean(delays) / 0.145 - 1.0) < 0.03);
}

TEST_CASE("zero-delay mode delivers instantly") {
    Engine e;
    Network net = make_net(3, 2, 2.327e6, 1e6, true);
    net.broadcast(NodeId::miner(1), Message::block(0, 1), SimTime(4), e);
    net.upload(0, 0, SimTime(4), e);
    while (auto ev = e.pop()) CHECK(ev->fire_at.seconds == 4.0);
    CHECK(net.pull_delay() == 0.0);
}
