#pragma once

// R x C grid of PE-blocks stepped in lock-step by a broadcast control word,
// with one reduction network per grid row.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "picaso/datapath.hpp"
#include "picaso/microprogram.hpp"

namespace picaso {

struct BlockCoord {
    int row = 0;
    int col = 0;
};

/// Where a word-parallel operand lives once corner-turned: bit i of the
/// value in wordline base + i, LSB first.
struct OperandLayout {
    Row base = 0;
    int width = 8;
    bool is_signed = true;
};

class PimArray {
public:
    PimArray(int rows, int cols, PipelineConfig pipe = PipelineConfig::full_pipe(),
             FoldPattern fold_pattern = FoldPattern::Halving);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const PipelineConfig& pipe() const { return pipe_; }
    FoldPattern fold_pattern() const { return fold_pattern_; }
    std::int64_t cycle_counter() const { return cycle_counter_; }

    const PeBlockState& block(BlockCoord at) const;
    PeBlockState& block(BlockCoord at);

    /// Stores 16 word-parallel values bit-serially into one block.
    /// Throws ValueOverflow or AddressOverflow.
    void load_corner_turned(BlockCoord at, std::span<const std::int64_t> values,
                            const OperandLayout& layout);

    std::int64_t read_value(BlockCoord at, int lane, const OperandLayout& layout) const;
    std::vector<std::int64_t> read_values(BlockCoord at, const OperandLayout& layout) const;

    /// Executes every control word SIMD-style and returns the cycles spent.
    /// The program is validated before the first cycle, so on HazardViolation,
    /// PortConflict or AddressOverflow the array is left untouched.
    std::int64_t run(const Microprogram& prog);

    /// JSON snapshot of the whole grid (register files as hex rows).
    std::string dump_state_json() const;

    friend bool operator==(const PimArray& a, const PimArray& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.cycle_counter_ == b.cycle_counter_ &&
               a.blocks_ == b.blocks_;
    }

private:
    std::size_t index(BlockCoord at) const;
    void validate(const Microprogram& prog) const;

    int rows_;
    int cols_;
    PipelineConfig pipe_;
    FoldPattern fold_pattern_;
    std::int64_t cycle_counter_ = 0;
    std::vector<PeBlockState> blocks_;
    HazardTracker hazards_;
};

}  // namespace picaso
