#include "picaso/datapath.hpp"

#include <array>
#include <string>

#include "picaso/errors.hpp"

namespace picaso {

namespace {

constexpr std::array<std::string_view, 4> kAluOpNames{"ADD", "SUB", "CPX", "CPY"};
constexpr std::array<std::string_view, kOpMuxConfCount> kOpMuxNames{
    "A_OP_B", "A_FOLD_1", "A_FOLD_2", "A_FOLD_3", "A_FOLD_4", "A_OP_NET", "ZERO_OP_B"};

void check_row(Row row, const char* port) {
    if (row >= kRfDepth) {
        throw AddressOverflow(std::string("register-file row ") + std::to_string(row) +
                              " out of range on " + port);
    }
}

// Lanes [0, 16/2^k) receive lanes [16/2^k, 2*16/2^k).
LaneWord fold_halving(LaneWord a, int k) {
    const int span = kBlockWidth >> k;
    const LaneWord mask = static_cast<LaneWord>((1U << span) - 1U);
    return static_cast<LaneWord>((a >> span) & mask);
}

// Lane i (i a multiple of 2^k) receives lane i + 2^(k-1).
LaneWord fold_pairing(LaneWord a, int k) {
    const int stride = 1 << k;
    const int offset = stride >> 1;
    LaneWord y = 0;
    for (int lane = 0; lane + offset < kBlockWidth; lane += stride) {
        if ((a >> (lane + offset)) & 1U) {
            y = static_cast<LaneWord>(y | (1U << lane));
        }
    }
    return y;
}

}  // namespace

std::string_view to_string(AluOp op) { return kAluOpNames.at(static_cast<std::size_t>(op)); }

std::optional<AluOp> parse_alu_op(std::string_view text) {
    for (std::size_t i = 0; i < kAluOpNames.size(); ++i) {
        if (kAluOpNames[i] == text) return static_cast<AluOp>(i);
    }
    return std::nullopt;
}

std::string_view to_string(OpMuxConf conf) {
    return kOpMuxNames.at(static_cast<std::size_t>(conf));
}

std::optional<OpMuxConf> parse_opmux(std::string_view text) {
    for (std::size_t i = 0; i < kOpMuxNames.size(); ++i) {
        if (kOpMuxNames[i] == text) return static_cast<OpMuxConf>(i);
    }
    return std::nullopt;
}

AluOut alu_step(bool x, bool y, bool carry_in, AluOp op) {
    switch (op) {
        case AluOp::Add:
        case AluOp::Sub: {
            const bool yy = (op == AluOp::Sub) ? !y : y;
            const bool sum = x ^ yy ^ carry_in;
            const bool carry = (x && yy) || (carry_in && (x ^ yy));
            return {sum, carry};
        }
        case AluOp::Cpx:
            return {x, carry_in};
        case AluOp::Cpy:
            return {y, carry_in};
    }
    return {false, carry_in};
}

AluOp encode_op(EncoderConf conf, bool y_bit, bool x_bit) {
    if (!conf.is_booth()) {
        switch (conf.code()) {
            case 0b000: return AluOp::Add;
            case 0b001: return AluOp::Cpx;
            case 0b010: return AluOp::Cpy;
            default: return AluOp::Sub;
        }
    }
    // Booth radix-2 on (current bit, previous bit) = (Y, X).
    if (y_bit == x_bit) return AluOp::Cpx;
    return y_bit ? AluOp::Sub : AluOp::Add;
}

OperandPair opmux_select(OpMuxConf conf, LaneWord a, LaneWord b, bool net, FoldPattern pattern,
                         int net_lane) {
    auto fold = [&](int k) {
        return pattern == FoldPattern::Halving ? fold_halving(a, k) : fold_pairing(a, k);
    };
    switch (conf) {
        case OpMuxConf::AOpB: return {a, b};
        case OpMuxConf::AFold1: return {a, fold(1)};
        case OpMuxConf::AFold2: return {a, fold(2)};
        case OpMuxConf::AFold3: return {a, fold(3)};
        case OpMuxConf::AFold4: return {a, fold(4)};
        case OpMuxConf::AOpNet:
            return {a, static_cast<LaneWord>(net ? (1U << net_lane) : 0U)};
        case OpMuxConf::ZeroOpB: return {0, b};
    }
    return {a, b};
}

void PeBlockState::set_rf_bit(int row, int lane, bool v) {
    auto& word = rf.at(row);
    const auto bit = static_cast<LaneWord>(1U << lane);
    word = static_cast<LaneWord>(v ? (word | bit) : (word & ~bit));
}

void step_block(PeBlockState& s, const ControlWord& cw, bool net_in, FoldPattern pattern) {
    const int accesses = int(cw.rd_a.has_value()) + int(cw.rd_b.has_value()) + int(cw.wr.has_value());
    if (accesses > 2) {
        throw PortConflict("control word needs " + std::to_string(accesses) +
                           " register-file accesses; the dual-port file allows 2");
    }
    if (cw.rd_a) check_row(*cw.rd_a, "port A read");
    if (cw.rd_b) check_row(*cw.rd_b, "port B read");
    if (cw.wr) check_row(*cw.wr, "write");

    if (cw.net_level) {
        s.net_in = net_in;
        s.net_out = emitted_net_bit(s);
    }

    const auto [x, y] = opmux_select(cw.opmux, s.reg_a, s.reg_b, net_in, pattern);

    LaneWord sum = 0;
    LaneWord carry = 0;
    std::array<AluOp, kBlockWidth> encoded{};
    for (int lane = 0; lane < kBlockWidth; ++lane) {
        const bool xb = (x >> lane) & 1U;
        const bool yb = (y >> lane) & 1U;
        encoded[lane] = encode_op(cw.encoder, yb, xb);
        const AluOp op = cw.use_latched_op ? s.latched_op[lane] : encoded[lane];
        const bool cin = cw.carry_seed_en ? (op == AluOp::Sub) : ((s.carry >> lane) & 1U);
        const AluOut out = alu_step(xb, yb, cin, op);
        sum = static_cast<LaneWord>(sum | (LaneWord(out.sum) << lane));
        carry = static_cast<LaneWord>(carry | (LaneWord(out.carry) << lane));
    }

    // Port reads see the row contents from before this cycle's write.
    const LaneWord read_a = cw.rd_a ? s.rf[*cw.rd_a] : s.reg_a;
    const LaneWord read_b = cw.rd_b ? s.rf[*cw.rd_b] : s.reg_b;

    if (cw.op_latch_en) s.latched_op = encoded;
    if (cw.carry_en) s.carry = carry;
    if (cw.wr) s.rf[*cw.wr] = sum;
    s.reg_a = read_a;
    s.reg_b = read_b;
}

PeBlockState block_cycle(const PeBlockState& state, const ControlWord& cw, bool net_in,
                         FoldPattern pattern) {
    PeBlockState next = state;
    step_block(next, cw, net_in, pattern);
    return next;
}

}  // namespace picaso
