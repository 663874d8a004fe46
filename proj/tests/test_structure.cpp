#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "msic/structure.hpp"
#include "msic/sweep.hpp"

using namespace msic;

namespace {

std::string fixture(const std::string& name) {
    std::ifstream in(std::string(FIXTURES_DIR) + "/" + name);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Instance load(const std::string& name) { return parse_instance(fixture(name)); }

bool has_cycle(const std::vector<ZeroCycle>& cycles, const std::vector<int>& messages) {
    for (const auto& zc : cycles)
        if (zc.messages == messages) return true;
    return false;
}

} // namespace

TEST_CASE("zero cycles of instance A include the published ones") {
    auto inst = load("instance_a.txt");
    auto cycles = zero_cycles(inst);
    CHECK(has_cycle(cycles, {1, 2, 3}));
    CHECK(has_cycle(cycles, {1, 2, 5}));
    // the covering receivers ride along
    for (const auto& zc : cycles)
        if (zc.messages == std::vector<int>{1, 2, 3})
            CHECK(zc.receivers == std::vector<int>{1, 2, 3});
}

TEST_CASE("no side information means 0-acyclic") {
    Instance inst;
    inst.q = 2;
    inst.n = 3;
    inst.m = 3;
    inst.wants = {1, 2, 3};
    inst.side_info = {{}, {}, {}};
    inst.senders = {{1, 2, 3}};
    CHECK(zero_cycles(inst).empty());
}

TEST_CASE("message connectivity on instance A") {
    auto inst = load("instance_a.txt");
    auto u = build_message_graph(inst);
    CHECK(is_message_connected({1, 2, 3}, u));
    CHECK_FALSE(is_message_connected({1, 2, 5}, u)); // node 5 has no edge into {1,2}
    CHECK(is_message_connected({4}, u));
}

TEST_CASE("forms_mc_zero_cycle") {
    auto a = load("instance_a.txt");
    CHECK(forms_mc_zero_cycle(a, 1));

    Instance empty;
    empty.q = 2;
    empty.n = 2;
    empty.m = 2;
    empty.wants = {1, 2};
    empty.side_info = {{}, {}};
    empty.senders = {{1, 2}};
    CHECK_FALSE(forms_mc_zero_cycle(empty, 1));

    // coverage ignored: instance C's messages 1 and 3 form one via edge 1-3
    auto c = load("instance_c.txt");
    Instance flat = c;
    flat.coverage.reset();
    CHECK(forms_mc_zero_cycle(flat, 1));
}

TEST_CASE("no-connected-0-cycle predicate") {
    CHECK_FALSE(no_mc_zero_cycle(load("instance_a.txt")));
    CHECK_FALSE(no_mc_zero_cycle(load("instance_b.txt")));

    Instance cross;
    cross.q = 2;
    cross.n = 2;
    cross.m = 2;
    cross.wants = {1, 2};
    cross.side_info = {{2}, {1}};
    cross.senders = {{1}, {2}};
    CHECK(no_mc_zero_cycle(cross)); // 0-cycle exists but is message-disconnected
}

TEST_CASE("enumeration cap") {
    Instance inst;
    inst.q = 2;
    inst.n = 3;
    inst.m = 3;
    inst.wants = {1, 2, 3};
    inst.side_info = {{2}, {3}, {1}};
    inst.senders = {{1, 2, 3}};
    CHECK_THROWS_AS(zero_cycles(inst, 2), CapExceeded);
    CHECK_THROWS_AS(no_mc_zero_cycle(inst, 2), CapExceeded);
}

TEST_CASE("spanning tree code on instance B") {
    auto inst = load("instance_b.txt");
    auto gen = spanning_tree_code(inst, {1, 2, 3, 4});
    CHECK(gen.total_columns() == 3);
    CHECK(all_decodable(inst, gen));
    // every column is a pair sum inside one sender
    for (size_t j = 0; j < gen.cols.size(); ++j)
        for (const auto& col : gen.cols[j]) {
            int weight = 0;
            for (auto v : col) weight += v;
            CHECK(weight == 2);
        }
}

TEST_CASE("spanning tree code on instance A leaves the rest uncoded") {
    auto inst = load("instance_a.txt");
    auto gen = spanning_tree_code(inst, {1, 2, 3});
    CHECK(gen.total_columns() == 4); // two tree edges + x4, x5 uncoded
    CHECK(all_decodable(inst, gen));
}

TEST_CASE("spanning tree code rejects bad inputs") {
    auto inst = load("instance_a.txt");
    CHECK_THROWS_AS(spanning_tree_code(inst, {1, 2, 5}), ValidationError); // disconnected
    CHECK_THROWS_AS(spanning_tree_code(inst, {1}), ValidationError);       // not a 0-cycle
}

TEST_CASE("cross-message uncriticality examples") {
    auto a = load("instance_a.txt");
    // the cycle {3,4,5} joins message 5 with shared message 3
    CHECK_FALSE(cross_message_uncritical(a, 1, 5));

    Instance no_shared;
    no_shared.q = 2;
    no_shared.n = 2;
    no_shared.m = 2;
    no_shared.wants = {1, 2};
    no_shared.side_info = {{2}, {1}};
    no_shared.senders = {{1}, {2}};
    CHECK(cross_message_uncritical(no_shared, 1, 2)); // M_c empty: vacuously safe

    Instance empty_side;
    empty_side.q = 2;
    empty_side.n = 2;
    empty_side.m = 2;
    empty_side.wants = {1, 2};
    empty_side.side_info = {{}, {}};
    empty_side.senders = {{1}, {2}};
    CHECK(cross_message_uncritical(empty_side, 1, 2));

    // every sender holding 4 also holds 3: the precondition fails
    CHECK_THROWS_AS(cross_message_uncritical(a, 4, 3), ValidationError);
}

TEST_CASE("foreign side info uncriticality examples") {
    auto a = load("instance_a.txt");
    CHECK_FALSE(foreign_side_info_uncritical(a, 1)); // shared message 3 sits in a connected cycle

    // receiver whose unknown-shared set is empty
    Instance inst;
    inst.q = 2;
    inst.n = 3;
    inst.m = 3;
    inst.wants = {1, 2, 3};
    inst.side_info = {{3}, {}, {}};
    inst.senders = {{1, 3}, {2, 3}};
    CHECK(foreign_side_info_uncritical(inst, 1)); // M_1 and M_c = {3}, Y_1 = {2}: set empty

    CHECK_THROWS_AS(foreign_side_info_uncritical(a, 3), ValidationError); // f(3)=3 is shared
}

TEST_CASE("shared wanted uncriticality examples") {
    auto a = load("instance_a.txt");
    CHECK(shared_wanted_uncritical(a, 3, 1)); // the unknown-shared set is empty
    CHECK(shared_wanted_uncritical(a, 3, 2));
    CHECK_THROWS_AS(shared_wanted_uncritical(a, 1, 1), ValidationError); // f(1) not shared
    CHECK_THROWS_AS(shared_wanted_uncritical(a, 3, 7), ValidationError); // no such sender

    // constructed failure: the shared message forms a connected cycle
    Instance inst;
    inst.q = 2;
    inst.n = 3;
    inst.m = 3;
    inst.wants = {1, 2, 3};
    inst.side_info = {{}, {3}, {2}};
    inst.senders = {{1, 2, 3}, {1, 2, 3}};
    CHECK_FALSE(shared_wanted_uncritical(inst, 1, 1)); // 2 and 3 are shared, cycle {2,3} is connected
}

TEST_CASE("edge criticality oracle") {
    auto b = load("instance_b.txt");
    CHECK(is_edge_critical_oracle(b, 1, 2)); // optimum jumps 3 -> 4
    CHECK_THROWS_AS(is_edge_critical_oracle(b, 1, 3), ValidationError); // not an edge

    // an edge into an uncoded-equivalent corner is not critical
    Instance inst;
    inst.q = 2;
    inst.n = 2;
    inst.m = 2;
    inst.wants = {1, 2};
    inst.side_info = {{2}, {1}};
    inst.senders = {{1}, {2}};
    CHECK_FALSE(is_edge_critical_oracle(inst, 1, 2));
}

TEST_CASE("uncoded equivalence") {
    auto b = load("instance_b.txt");
    CHECK_FALSE(uncoded_equivalence(b, 1)); // deleting message 1 saves nothing extra

    Instance solo;
    solo.q = 2;
    solo.n = 1;
    solo.m = 1;
    solo.wants = {1};
    solo.side_info = {{}};
    solo.senders = {{1}};
    CHECK(uncoded_equivalence(solo, 1));
}

TEST_CASE("criticality report invariant on the fixtures") {
    for (const char* name : {"instance_a.txt", "instance_b.txt"}) {
        auto inst = load(name);
        for (const auto& e : criticality_report(inst)) {
            if (e.flagged_uncritical) CHECK_FALSE(e.oracle_critical);
        }
    }
}

TEST_CASE("phi is closed under union") {
    std::mt19937 rng(59);
    for (int t = 0; t < 40; ++t) {
        auto inst = random_instance(rng, 1 + static_cast<int>(rng() % 4));
        auto cycles = zero_cycles(inst);
        auto xmask = detail::side_masks(inst);
        for (size_t i = 0; i < cycles.size(); ++i)
            for (size_t j = i + 1; j < cycles.size(); ++j) {
                std::uint64_t u = detail::to_mask(cycles[i].messages) |
                                  detail::to_mask(cycles[j].messages);
                CHECK(detail::in_phi(inst, u, xmask));
            }
    }
}

TEST_CASE("minimal and maximum 0-cycles") {
    auto a = load("instance_a.txt");
    auto minimal = minimal_zero_cycles(a);
    auto all = zero_cycles(a);
    CHECK(minimal.size() < all.size());
    for (const auto& mzc : minimal) {
        std::uint64_t m = detail::to_mask(mzc.messages);
        for (const auto& zc : all) {
            std::uint64_t o = detail::to_mask(zc.messages);
            if (o != m) CHECK((o & m) != o); // no proper Phi subset
        }
    }
    // the maximum 0-cycle is the union of everything
    std::uint64_t u = 0;
    for (const auto& zc : all) u |= detail::to_mask(zc.messages);
    CHECK(detail::to_mask(max_zero_cycle(a)) == u);
}
