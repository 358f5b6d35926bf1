#pragma once

// Bit-level semantics of one PE-block: the full adder/subtractor, the op
// encoder, the operand multiplexer and the 1024x16 register file.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "picaso/control_word.hpp"

namespace picaso {

inline constexpr int kBlockWidth = 16;
inline constexpr int kRfDepth = 1024;

/// One 16-lane slice of a register-file row; bit i belongs to PE i.
using LaneWord = std::uint16_t;

enum class AluOp : std::uint8_t { Add, Sub, Cpx, Cpy };

std::string_view to_string(AluOp op);
std::optional<AluOp> parse_alu_op(std::string_view text);

struct AluOut {
    bool sum;
    bool carry;

    friend bool operator==(const AluOut&, const AluOut&) = default;
};

/// Single-bit FA/S. SUB adds the inverted Y operand; the caller seeds the
/// carry with 1 at the start of a word. CPX/CPY pass the carry through.
AluOut alu_step(bool x, bool y, bool carry_in, AluOp op);

/// Op-encoder: direct modes for codes 0-3, Booth recoding of (Y, X) for 4-7.
AluOp encode_op(EncoderConf conf, bool y_bit, bool x_bit);

struct OperandPair {
    LaneWord x;
    LaneWord y;

    friend bool operator==(const OperandPair&, const OperandPair&) = default;
};

/// Routes the register-file outputs A/B and the network bit onto the ALU
/// operands X/Y. `net_lane` is the lane wired to the block's network port.
OperandPair opmux_select(OpMuxConf conf, LaneWord a, LaneWord b, bool net,
                         FoldPattern pattern = FoldPattern::Halving, int net_lane = 0);

struct PeBlockState {
    std::array<LaneWord, kRfDepth> rf{};
    LaneWord reg_a = 0;  // register-file output latch, port A
    LaneWord reg_b = 0;  // register-file output latch, port B
    LaneWord carry = 0;
    std::array<AluOp, kBlockWidth> latched_op{};
    bool net_in = false;
    bool net_out = false;

    bool rf_bit(int row, int lane) const { return (rf.at(row) >> lane) & 1U; }
    void set_rf_bit(int row, int lane, bool v);

    friend bool operator==(const PeBlockState&, const PeBlockState&) = default;
};

/// Bit this block drives onto the network in the current cycle.
inline bool emitted_net_bit(const PeBlockState& s, int net_lane = 0) {
    return (s.reg_a >> net_lane) & 1U;
}

/// Advances one block by one clock. Reads observe the register file before
/// this cycle's write. Throws AddressOverflow or PortConflict.
PeBlockState block_cycle(const PeBlockState& state, const ControlWord& cw, bool net_in = false,
                         FoldPattern pattern = FoldPattern::Halving);

/// In-place variant used by the array stepper.
void step_block(PeBlockState& state, const ControlWord& cw, bool net_in = false,
                FoldPattern pattern = FoldPattern::Halving);

}  // namespace picaso
