#include "picaso/machine.hpp"

#include <cstdio>
#include <stdexcept>

#include "json.hpp"

#include "picaso/errors.hpp"
#include "picaso/network.hpp"

namespace picaso {

namespace {

void check_layout(const OperandLayout& layout) {
    if (layout.width < 1 || layout.width > 64) {
        throw std::invalid_argument("operand width must be in [1, 64]");
    }
    if (static_cast<int>(layout.base) + layout.width > kRfDepth) {
        throw AddressOverflow("operand rows [" + std::to_string(layout.base) + ", " +
                              std::to_string(layout.base + layout.width) + ") exceed " +
                              std::to_string(kRfDepth) + " wordlines");
    }
}

bool fits(std::int64_t v, const OperandLayout& layout) {
    const int w = layout.width;
    if (layout.is_signed) {
        if (w >= 64) return true;
        const std::int64_t lo = -(std::int64_t{1} << (w - 1));
        const std::int64_t hi = (std::int64_t{1} << (w - 1)) - 1;
        return v >= lo && v <= hi;
    }
    if (v < 0) return false;
    return w >= 63 || v < (std::int64_t{1} << w);
}

std::string hex4(unsigned v) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%04x", v & 0xFFFFU);
    return buf;
}

}  // namespace

PimArray::PimArray(int rows, int cols, PipelineConfig pipe, FoldPattern fold_pattern)
    : rows_(rows), cols_(cols), pipe_(pipe), fold_pattern_(fold_pattern),
      hazards_(pipe.hazard_distance) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("array needs at least one block");
    blocks_.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
}

std::size_t PimArray::index(BlockCoord at) const {
    if (at.row < 0 || at.row >= rows_ || at.col < 0 || at.col >= cols_) {
        throw std::out_of_range("block (" + std::to_string(at.row) + ", " +
                                std::to_string(at.col) + ") outside the array");
    }
    return static_cast<std::size_t>(at.row) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(at.col);
}

const PeBlockState& PimArray::block(BlockCoord at) const { return blocks_[index(at)]; }

PeBlockState& PimArray::block(BlockCoord at) { return blocks_[index(at)]; }

void PimArray::load_corner_turned(BlockCoord at, std::span<const std::int64_t> values,
                                  const OperandLayout& layout) {
    check_layout(layout);
    if (values.size() != static_cast<std::size_t>(kBlockWidth)) {
        throw std::invalid_argument("a block takes exactly 16 values, got " +
                                    std::to_string(values.size()));
    }
    for (std::size_t lane = 0; lane < values.size(); ++lane) {
        if (!fits(values[lane], layout)) {
            throw ValueOverflow("value " + std::to_string(values[lane]) + " on lane " +
                                std::to_string(lane) + " does not fit " +
                                std::to_string(layout.width) + " bits");
        }
    }
    auto& blk = blocks_[index(at)];
    for (int bit = 0; bit < layout.width; ++bit) {
        LaneWord word = 0;
        for (int lane = 0; lane < kBlockWidth; ++lane) {
            const auto u = static_cast<std::uint64_t>(values[lane]);
            word = static_cast<LaneWord>(word | (((u >> bit) & 1U) << lane));
        }
        blk.rf[layout.base + bit] = word;
    }
}

std::int64_t PimArray::read_value(BlockCoord at, int lane, const OperandLayout& layout) const {
    check_layout(layout);
    if (lane < 0 || lane >= kBlockWidth) throw std::out_of_range("lane outside the block");
    const auto& blk = blocks_[index(at)];
    std::uint64_t u = 0;
    for (int bit = 0; bit < layout.width; ++bit) {
        u |= static_cast<std::uint64_t>((blk.rf[layout.base + bit] >> lane) & 1U) << bit;
    }
    if (layout.is_signed && layout.width < 64 && ((u >> (layout.width - 1)) & 1U)) {
        u |= ~std::uint64_t{0} << layout.width;
    }
    return static_cast<std::int64_t>(u);
}

std::vector<std::int64_t> PimArray::read_values(BlockCoord at, const OperandLayout& layout) const {
    std::vector<std::int64_t> out(kBlockWidth);
    for (int lane = 0; lane < kBlockWidth; ++lane) out[lane] = read_value(at, lane, layout);
    return out;
}

void PimArray::validate(const Microprogram& prog) const {
    HazardTracker tracker = hazards_;
    std::int64_t cycle = cycle_counter_;
    std::int64_t index_in_prog = 0;
    bool uses_network = false;
    for (const auto& cw : prog.words()) {
        const int accesses = int(cw.rd_a.has_value()) + int(cw.rd_b.has_value()) +
                             int(cw.wr.has_value());
        if (accesses > 2) {
            throw PortConflict("cycle " + std::to_string(index_in_prog) + ": " +
                               std::to_string(accesses) + " register-file accesses");
        }
        for (const auto& r : {cw.rd_a, cw.rd_b, cw.wr}) {
            if (r && *r >= kRfDepth) {
                throw AddressOverflow("cycle " + std::to_string(index_in_prog) + ": row " +
                                      std::to_string(*r) + " out of range");
            }
        }
        if (auto h = tracker.check(cw, cycle)) {
            throw HazardViolation(index_in_prog, h->row,
                                  "cycle " + std::to_string(index_in_prog) + ": row " +
                                      std::to_string(h->row) + " read within " +
                                      std::to_string(pipe_.hazard_distance) +
                                      " cycles of its write under " +
                                      std::string(to_string(pipe_.kind)));
        }
        tracker.record(cw, cycle);
        uses_network = uses_network || cw.net_level.has_value();
        ++cycle;
        ++index_in_prog;
    }
    if (uses_network && !is_power_of_two(cols_)) {
        throw std::invalid_argument("network accumulation needs a power-of-two column count");
    }
}

std::int64_t PimArray::run(const Microprogram& prog) {
    validate(prog);
    std::vector<bool> emitted(static_cast<std::size_t>(cols_));
    for (const auto& cw : prog.words()) {
        for (int r = 0; r < rows_; ++r) {
            PeBlockState* row_blocks = &blocks_[static_cast<std::size_t>(r) * cols_];
            if (cw.net_level) {
                for (int c = 0; c < cols_; ++c) emitted[c] = emitted_net_bit(row_blocks[c]);
                const auto delivered = net_cycle(emitted, *cw.net_level);
                for (int c = 0; c < cols_; ++c) {
                    step_block(row_blocks[c], cw, delivered[c], fold_pattern_);
                }
            } else {
                for (int c = 0; c < cols_; ++c) {
                    step_block(row_blocks[c], cw, false, fold_pattern_);
                }
            }
        }
        hazards_.record(cw, cycle_counter_);
        ++cycle_counter_;
    }
    return prog.declared_cycles();
}

std::string PimArray::dump_state_json() const {
    nlohmann::ordered_json j;
    j["rows"] = rows_;
    j["cols"] = cols_;
    j["pipeline"] = std::string(to_string(pipe_.kind));
    j["hazard_distance"] = pipe_.hazard_distance;
    j["cycle"] = cycle_counter_;
    auto blocks = nlohmann::ordered_json::array();
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            const auto& b = block({r, c});
            nlohmann::ordered_json jb;
            jb["row"] = r;
            jb["col"] = c;
            auto rf = nlohmann::ordered_json::array();
            for (auto word : b.rf) rf.push_back(hex4(word));
            jb["rf"] = std::move(rf);
            jb["reg_a"] = hex4(b.reg_a);
            jb["reg_b"] = hex4(b.reg_b);
            jb["carry"] = hex4(b.carry);
            auto ops = nlohmann::ordered_json::array();
            for (auto op : b.latched_op) ops.push_back(std::string(to_string(op)));
            jb["latched_op"] = std::move(ops);
            jb["net_in"] = b.net_in ? 1 : 0;
            jb["net_out"] = b.net_out ? 1 : 0;
            blocks.push_back(std::move(jb));
        }
    }
    j["blocks"] = std::move(blocks);
    return j.dump(1);
}

}  // namespace picaso
