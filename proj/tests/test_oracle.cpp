#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "msic/oracle.hpp"
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

Generator identity_generator(const Instance& inst) {
    Generator gen;
    gen.n = inst.n;
    gen.q = inst.q;
    gen.cols.resize(inst.sender_count());
    for (int i = 1; i <= inst.n; ++i) {
        std::vector<std::uint8_t> col(inst.n, 0);
        col[i - 1] = 1;
        gen.cols[inst.holders(i).front() - 1].push_back(std::move(col));
    }
    return gen;
}

} // namespace

TEST_CASE("identity generator decodes everything without coverage") {
    for (const char* name : {"instance_a.txt", "instance_b.txt"}) {
        auto inst = load(name);
        CHECK(all_decodable(inst, identity_generator(inst)));
    }
}

TEST_CASE("published length-3 code for instance B verifies") {
    auto inst = load("instance_b.txt");
    auto gen = parse_generator(fixture("remark3.gen"), inst.n, inst.q, inst.sender_count());
    auto v = verify_decoding(inst, gen);
    CHECK(std::count(v.begin(), v.end(), true) == 4);
}

TEST_CASE("a single column of the length-3 code is not enough") {
    auto inst = load("instance_b.txt");
    Generator gen;
    gen.n = 4;
    gen.q = 2;
    gen.cols.resize(2);
    gen.cols[0].push_back({1, 0, 0, 1}); // x1+x4 only
    auto v = verify_decoding(inst, gen);
    CHECK_FALSE(v[1]); // x2 is untouched by the code and by X_2
    CHECK_FALSE(all_decodable(inst, gen));
}

TEST_CASE("support violations are rejected") {
    auto inst = load("instance_b.txt");
    Generator gen;
    gen.n = 4;
    gen.q = 2;
    gen.cols.resize(2);
    gen.cols[0].push_back({0, 1, 0, 0}); // sender 1 does not hold message 2
    CHECK_THROWS_AS(verify_decoding(inst, gen), ValidationError);
}

TEST_CASE("oracle on instance B returns 3") {
    auto res = oracle_multisender(load("instance_b.txt"));
    CHECK(res.n_opt == 3);
    CHECK(all_decodable(load("instance_b.txt"), res.witness));
}

TEST_CASE("no side information forces uncoded transmission") {
    Instance inst;
    inst.q = 2;
    inst.n = 3;
    inst.m = 3;
    inst.wants = {1, 2, 3};
    inst.side_info = {{}, {}, {}};
    inst.senders = {{1, 2}, {2, 3}};
    CHECK(oracle_multisender(inst).n_opt == 3);
}

TEST_CASE("cellular oracle on the reference instances") {
    auto c = oracle_cellular(load("instance_c.txt"));
    REQUIRE(c);
    CHECK(c->n_opt == 2);

    auto d = oracle_cellular(load("instance_d.txt"));
    REQUIRE(d);
    CHECK(d->n_opt == 3);
}

TEST_CASE("disjoint senders with no usable side information cost n") {
    Instance inst;
    inst.q = 2;
    inst.n = 2;
    inst.m = 2;
    inst.wants = {1, 2};
    inst.side_info = {{}, {}};
    inst.senders = {{1}, {2}};
    inst.coverage = CoverageProfile{{1}, {2}, {}};
    auto res = oracle_cellular(inst);
    REQUIRE(res);
    CHECK(res->n_opt == 2);
}

TEST_CASE("cellular infeasibility is reported, not solved around") {
    Instance inst;
    inst.q = 2;
    inst.n = 2;
    inst.m = 2;
    inst.wants = {1, 2};
    inst.side_info = {{2}, {}};
    inst.senders = {{2}, {1, 2}}; // receiver 1 hears sender 1 which lacks message 1
    inst.coverage = CoverageProfile{{1}, {2}, {}};
    CHECK(coverage_infeasible_receivers(inst) == std::vector<int>{1});
    CHECK_FALSE(oracle_cellular(inst).has_value());
}

TEST_CASE("caps are enforced") {
    Instance big;
    big.q = 2;
    big.n = 6;
    big.m = 1;
    big.wants = {1};
    big.side_info = {{}};
    big.senders = {{1, 2, 3, 4, 5, 6}};
    CHECK_THROWS_AS(oracle_multisender(big), CapExceeded);
    SearchBounds relaxed;
    relaxed.max_n = 6;
    CHECK(oracle_multisender(big, relaxed).n_opt == 1);
}

TEST_CASE("candidate pools have the full nonzero count per sender") {
    auto inst = load("instance_b.txt");
    CHECK(detail::candidate_pool(inst, 1, false).size() == 3);  // 2^2 - 1
    CHECK(detail::candidate_pool(inst, 2, false).size() == 7);  // 2^3 - 1
}

TEST_CASE("projective deduplication for odd fields keeps one column per line") {
    Instance inst;
    inst.q = 3;
    inst.n = 2;
    inst.m = 1;
    inst.wants = {1};
    inst.side_info = {{2}};
    inst.senders = {{1, 2}};
    auto full = detail::candidate_pool(inst, 1, false);
    auto dedup = detail::candidate_pool(inst, 1, true);
    CHECK(full.size() == 8);   // 3^2 - 1
    CHECK(dedup.size() == 4);  // (3^2 - 1) / 2
    SearchBounds b;
    b.max_q = 3;
    CHECK(oracle_multisender(inst, b).n_opt == 1); // x1 + c*x2 works
}

TEST_CASE("oracle is invariant under message relabeling and receiver order") {
    std::mt19937 rng(97);
    for (int t = 0; t < 30; ++t) {
        auto inst = random_instance(rng, 1 + static_cast<int>(rng() % 4));
        int base = oracle_multisender(inst).n_opt;

        std::vector<int> perm(inst.n);
        std::iota(perm.begin(), perm.end(), 1);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<int> order(inst.m);
        std::iota(order.begin(), order.end(), 1);
        std::shuffle(order.begin(), order.end(), rng);

        Instance rel;
        rel.q = inst.q;
        rel.n = inst.n;
        rel.m = inst.m;
        for (int k : order) {
            rel.wants.push_back(perm[inst.f(k) - 1]);
            std::vector<int> x;
            for (int s : inst.x(k)) x.push_back(perm[s - 1]);
            rel.side_info.push_back(detail::sorted_unique(std::move(x)));
        }
        for (const auto& ms : inst.senders) {
            std::vector<int> s;
            for (int v : ms) s.push_back(perm[v - 1]);
            rel.senders.push_back(detail::sorted_unique(std::move(s)));
        }
        CHECK(oracle_multisender(rel).n_opt == base);
    }
}

TEST_CASE("oracle never exceeds n") {
    std::mt19937 rng(131);
    for (int t = 0; t < 50; ++t) {
        auto inst = random_instance(rng, 1 + static_cast<int>(rng() % 4));
        CHECK(oracle_multisender(inst).n_opt <= inst.n);
    }
}
