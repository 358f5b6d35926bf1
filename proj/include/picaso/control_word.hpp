#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace picaso {

using Row = std::uint16_t;

/// 3-bit op-encoder configuration. Codes 0b1xx select Booth mode.
class EncoderConf {
public:
    constexpr EncoderConf() = default;
    constexpr explicit EncoderConf(std::uint8_t code) : code_(code & 0x7U) {}

    static constexpr EncoderConf add() { return EncoderConf{0b000}; }
    static constexpr EncoderConf copy_x() { return EncoderConf{0b001}; }
    static constexpr EncoderConf copy_y() { return EncoderConf{0b010}; }
    static constexpr EncoderConf sub() { return EncoderConf{0b011}; }
    static constexpr EncoderConf booth() { return EncoderConf{0b100}; }

    constexpr std::uint8_t code() const { return code_; }
    constexpr bool is_booth() const { return (code_ & 0b100U) != 0; }

    friend constexpr bool operator==(EncoderConf, EncoderConf) = default;

private:
    std::uint8_t code_ = 0;
};

enum class OpMuxConf : std::uint8_t { AOpB, AFold1, AFold2, AFold3, AFold4, AOpNet, ZeroOpB };

inline constexpr int kOpMuxConfCount = 7;

/// Fold geometry used by the A-FOLD-k configurations. Halving pairs lane i
/// with lane i + 16/2^k; Pairing pairs lane i with its 2^(k-1) neighbour.
enum class FoldPattern : std::uint8_t { Halving, Pairing };

std::string_view to_string(OpMuxConf conf);
std::optional<OpMuxConf> parse_opmux(std::string_view text);

/// Control state broadcast to every PE-block for one clock.
///
/// Reads latch the addressed rows into the port A/B registers at the end of
/// the cycle. The ALU always evaluates the registers presented through the
/// OpMux; its result only becomes visible through `wr` (sum), `carry_en`
/// (carry flip-flops) and `op_latch_en` (per-PE op latch).
struct ControlWord {
    std::optional<Row> rd_a;
    std::optional<Row> rd_b;
    std::optional<Row> wr;
    OpMuxConf opmux = OpMuxConf::AOpB;
    EncoderConf encoder = EncoderConf::add();
    bool use_latched_op = false;  // take the op from the per-PE latch, not the encoder
    bool op_latch_en = false;
    bool carry_seed_en = false;   // carry-in = (op == SUB) instead of the carry flip-flop
    bool carry_en = false;
    std::optional<int> net_level;
    std::string comment;

    bool is_nop() const {
        return !rd_a && !rd_b && !wr && !op_latch_en && !carry_en;
    }

    friend bool operator==(const ControlWord&, const ControlWord&) = default;
};

inline ControlWord nop_word(std::string comment = {}) {
    ControlWord cw;
    cw.comment = std::move(comment);
    return cw;
}

}  // namespace picaso
