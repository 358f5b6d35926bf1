#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "json.hpp"

#include "picaso/errors.hpp"
#include "picaso/machine.hpp"
#include "picaso/network.hpp"

using namespace picaso;

namespace {

std::vector<std::int64_t> random_signed(std::mt19937_64& rng, int count, int width) {
    std::uniform_int_distribution<std::int64_t> d(-(std::int64_t{1} << (width - 1)),
                                                  (std::int64_t{1} << (width - 1)) - 1);
    std::vector<std::int64_t> v(count);
    for (auto& e : v) e = d(rng);
    return v;
}

std::int64_t wrap(std::int64_t v, int width) {
    const auto mask = (std::uint64_t{1} << width) - 1;
    auto u = static_cast<std::uint64_t>(v) & mask;
    if (u >> (width - 1)) u |= ~mask;
    return static_cast<std::int64_t>(u);
}

}  // namespace

TEST_CASE("corner turning round trip") {
    std::mt19937_64 rng(1);
    PimArray arr(2, 3);
    for (int width : {1, 5, 8, 16, 33}) {
        const OperandLayout lay{100, width, true};
        const auto v = random_signed(rng, 16, width);
        arr.load_corner_turned({1, 2}, v, lay);
        CHECK(arr.read_values({1, 2}, lay) == v);
    }
    // Bit i of lane j lives in row base+i at bit position j.
    const std::vector<std::int64_t> ones(16, 1);
    arr.load_corner_turned({0, 0}, ones, {7, 4, false});
    CHECK(arr.block({0, 0}).rf[7] == 0xFFFF);
    CHECK(arr.block({0, 0}).rf[8] == 0);
}

TEST_CASE("load errors") {
    PimArray arr(1, 1);
    const std::vector<std::int64_t> big(16, 200);
    CHECK_THROWS_AS(arr.load_corner_turned({0, 0}, big, {0, 8, true}), ValueOverflow);
    const std::vector<std::int64_t> neg(16, -1);
    CHECK_THROWS_AS(arr.load_corner_turned({0, 0}, neg, {0, 8, false}), ValueOverflow);
    const std::vector<std::int64_t> ok(16, 1);
    CHECK_THROWS_AS(arr.load_corner_turned({0, 0}, ok, {1020, 8, true}), AddressOverflow);
    const std::vector<std::int64_t> short_v(15, 1);
    CHECK_THROWS(arr.load_corner_turned({0, 0}, short_v, {0, 8, true}));
    CHECK_THROWS(arr.block({1, 0}));
}

TEST_CASE("add and sub equal host arithmetic modulo 2^n") {
    std::mt19937_64 rng(2);
    for (int n : {2, 4, 8, 13, 16, 32}) {
        for (AluOp op : {AluOp::Add, AluOp::Sub}) {
            PimArray arr(1, 2);
            const auto a0 = random_signed(rng, 16, n), b0 = random_signed(rng, 16, n);
            const auto a1 = random_signed(rng, 16, n), b1 = random_signed(rng, 16, n);
            arr.load_corner_turned({0, 0}, a0, {0, n, true});
            arr.load_corner_turned({0, 0}, b0, {100, n, true});
            arr.load_corner_turned({0, 1}, a1, {0, n, true});
            arr.load_corner_turned({0, 1}, b1, {100, n, true});
            const auto p = prog_addsub(200, 0, 100, n, op);
            CHECK(arr.run(p) == 2 * n);
            const auto r0 = arr.read_values({0, 0}, {200, n, true});
            const auto r1 = arr.read_values({0, 1}, {200, n, true});
            for (int i = 0; i < 16; ++i) {
                CHECK(r0[i] == wrap(op == AluOp::Add ? a0[i] + b0[i] : a0[i] - b0[i], n));
                CHECK(r1[i] == wrap(op == AluOp::Add ? a1[i] + b1[i] : a1[i] - b1[i], n));
            }
        }
    }
}

TEST_CASE("in-place add with identical alignment") {
    PimArray arr(1, 1);
    std::vector<std::int64_t> a(16), b(16);
    for (int i = 0; i < 16; ++i) {
        a[i] = i - 8;
        b[i] = 3 * i - 20;
    }
    arr.load_corner_turned({0, 0}, a, {0, 8, true});
    arr.load_corner_turned({0, 0}, b, {50, 8, true});
    arr.run(prog_addsub(0, 0, 50, 8, AluOp::Add));
    const auto r = arr.read_values({0, 0}, {0, 8, true});
    for (int i = 0; i < 16; ++i) CHECK(r[i] == a[i] + b[i]);
}

TEST_CASE("exhaustive signed 6-bit Booth multiply") {
    PimArray arr(1, 4);  // 64 lanes
    const auto p = prog_mult_booth(20, 0, 8, 6);
    for (int x = -32; x < 32; ++x) {
        for (int c = 0; c < 4; ++c) {
            std::vector<std::int64_t> xs(16, x), ys(16);
            for (int i = 0; i < 16; ++i) ys[i] = 16 * c + i - 32;
            arr.load_corner_turned({0, c}, xs, {0, 6, true});
            arr.load_corner_turned({0, c}, ys, {8, 6, true});
        }
        arr.run(p);
        for (int c = 0; c < 4; ++c) {
            const auto r = arr.read_values({0, c}, {20, 12, true});
            for (int i = 0; i < 16; ++i) CHECK(r[i] == x * (16 * c + i - 32));
        }
    }
}

TEST_CASE("random Booth multiply across widths") {
    std::mt19937_64 rng(4);
    for (int n = 2; n <= 24; ++n) {
        PimArray arr(1, 1);
        const auto a = random_signed(rng, 16, n), b = random_signed(rng, 16, n);
        arr.load_corner_turned({0, 0}, a, {0, n, true});
        arr.load_corner_turned({0, 0}, b, {100, n, true});
        arr.run(schedule_for(PipelineConfig::full_pipe(), prog_mult_booth(200, 0, 100, n)));
        const auto r = arr.read_values({0, 0}, {200, 2 * n, true});
        for (int i = 0; i < 16; ++i) CHECK(r[i] == a[i] * b[i]);
    }
}

TEST_CASE("extreme Booth operands") {
    for (int n : {4, 8, 16}) {
        const std::int64_t lo = -(std::int64_t{1} << (n - 1));
        const std::int64_t hi = -lo - 1;
        const std::vector<std::int64_t> a{lo, lo, hi, hi, 0, -1, 1, lo, hi, -1, 0, 1, lo, hi, 2, -2};
        const std::vector<std::int64_t> b{lo, hi, lo, hi, lo, lo, lo, -1, -1, -1, 0, 1, 0, 0, -2, 2};
        PimArray arr(1, 1);
        arr.load_corner_turned({0, 0}, a, {0, n, true});
        arr.load_corner_turned({0, 0}, b, {100, n, true});
        arr.run(prog_mult_booth(200, 0, 100, n));
        const auto r = arr.read_values({0, 0}, {200, 2 * n, true});
        for (int i = 0; i < 16; ++i) CHECK(r[i] == a[i] * b[i]);
    }
}

TEST_CASE("accumulate-row sums every lane of the array row") {
    std::mt19937_64 rng(5);
    for (FoldPattern pat : {FoldPattern::Halving, FoldPattern::Pairing}) {
        for (int q : {16, 32, 64, 128, 256}) {
            for (int n : {4, 8, 16}) {
                PimArray arr(2, q / 16, PipelineConfig::full_pipe(), pat);
                std::int64_t want[2] = {0, 0};
                for (int r = 0; r < 2; ++r) {
                    for (int c = 0; c < q / 16; ++c) {
                        const auto v = random_signed(rng, 16, n);
                        for (auto e : v) want[r] += e;
                        arr.load_corner_turned({r, c}, v, {10, n, true});
                    }
                }
                const auto p = prog_accumulate_row(10, n, q);
                CHECK(arr.run(p) == p.declared_cycles());
                const OperandLayout sum{10, n + log2_exact(q), true};
                CHECK(arr.read_value({0, 0}, 0, sum) == want[0]);
                CHECK(arr.read_value({1, 0}, 0, sum) == want[1]);
            }
        }
    }
}

TEST_CASE("extreme accumulate operands do not overflow the widened result") {
    for (int q : {16, 128}) {
        for (std::int64_t v : {std::int64_t{-128}, std::int64_t{127}}) {
            PimArray arr(1, q / 16);
            const std::vector<std::int64_t> lanes(16, v);
            for (int c = 0; c < q / 16; ++c) arr.load_corner_turned({0, c}, lanes, {0, 8, true});
            arr.run(prog_accumulate_row(0, 8, q));
            CHECK(arr.read_value({0, 0}, 0, {0, 8 + log2_exact(q), true}) == v * q);
        }
    }
}

TEST_CASE("every pipeline gives the same results for builder programs") {
    std::mt19937_64 rng(6);
    const auto a = random_signed(rng, 32, 8), b = random_signed(rng, 32, 8);
    std::vector<std::string> dumps;
    for (auto kind : {PipelineKind::SingleCycle, PipelineKind::RfPipe, PipelineKind::OpPipe,
                      PipelineKind::FullPipe}) {
        const auto pipe = PipelineConfig::of(kind);
        PimArray arr(1, 2, pipe);
        for (int c = 0; c < 2; ++c) {
            arr.load_corner_turned({0, c}, std::vector<std::int64_t>(a.begin() + 16 * c, a.begin() + 16 * c + 16),
                                   {0, 8, true});
            arr.load_corner_turned({0, c}, std::vector<std::int64_t>(b.begin() + 16 * c, b.begin() + 16 * c + 16),
                                   {8, 8, true});
        }
        arr.run(schedule_for(pipe, prog_mult_booth(16, 0, 8, 8)));
        arr.run(schedule_for(pipe, prog_accumulate_row(16, 16, 32)));
        std::int64_t want = 0;
        for (int i = 0; i < 32; ++i) want += a[i] * b[i];
        CHECK(arr.read_value({0, 0}, 0, {16, 21, true}) == want);
        dumps.push_back(nlohmann::json::parse(arr.dump_state_json())["blocks"].dump());
    }
    for (const auto& d : dumps) CHECK(d == dumps.front());
}

TEST_CASE("hazard violation is detected before any state changes") {
    ControlWord w;
    w.wr = 5;
    ControlWord r;
    r.rd_a = 5;
    const Microprogram p({w, r}, {});

    PimArray full(1, 1, PipelineConfig::full_pipe());
    const auto before = full;
    try {
        full.run(p);
        FAIL("expected HazardViolation");
    } catch (const HazardViolation& e) {
        CHECK(e.cycle() == 1);
        CHECK(e.row() == 5);
    }
    CHECK(full == before);

    PimArray single(1, 1, PipelineConfig::single_cycle());
    CHECK(single.run(p) == 2);
    PimArray rf(1, 1, PipelineConfig::rf_pipe());
    CHECK_THROWS_AS(rf.run(p), HazardViolation);
    CHECK(rf.run(schedule_for(PipelineConfig::rf_pipe(), p)) == 3);
}

TEST_CASE("hazards are tracked across consecutive runs") {
    ControlWord w;
    w.wr = 7;
    ControlWord r;
    r.rd_b = 7;
    PimArray arr(1, 1, PipelineConfig::full_pipe());
    arr.run(Microprogram({w}, {}));
    CHECK_THROWS_AS(arr.run(Microprogram({r}, {})), HazardViolation);
    arr.run(Microprogram({nop_word(), nop_word(), nop_word()}, {}));
    CHECK_NOTHROW(arr.run(Microprogram({r}, {})));
}

TEST_CASE("port conflicts and bad rows are rejected") {
    ControlWord cw;
    cw.rd_a = 1;
    cw.rd_b = 2;
    cw.wr = 3;
    PimArray arr(1, 1);
    CHECK_THROWS_AS(arr.run(Microprogram({cw}, {})), PortConflict);
    ControlWord far;
    far.wr = 1024;
    CHECK_THROWS_AS(arr.run(Microprogram({far}, {})), AddressOverflow);
    CHECK(arr.cycle_counter() == 0);
}

TEST_CASE("network programs need a power-of-two row") {
    PimArray arr(1, 3);
    CHECK_THROWS_AS(arr.run(prog_accumulate_row(0, 8, 32)), std::invalid_argument);
}

TEST_CASE("cycle counter and state dump") {
    PimArray arr(2, 2);
    arr.run(prog_addsub(20, 0, 10, 4, AluOp::Add));
    arr.run(prog_mult_booth(40, 0, 10, 4));
    CHECK(arr.cycle_counter() == 8 + 40);

    const auto j = nlohmann::json::parse(arr.dump_state_json());
    CHECK(j["rows"] == 2);
    CHECK(j["cols"] == 2);
    CHECK(j["cycle"] == 48);
    CHECK(j["pipeline"] == "FULL_PIPE");
    REQUIRE(j["blocks"].size() == 4);
    CHECK(j["blocks"][0]["rf"].size() == 1024);
    CHECK(j["blocks"][3]["row"] == 1);
    CHECK(j["blocks"][3]["col"] == 1);
    CHECK(j["blocks"][0]["rf"][0].get<std::string>().size() == 4);
    CHECK(arr.dump_state_json() == arr.dump_state_json());
}
